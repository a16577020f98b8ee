#include "doctest.h"
#include "oracles.hpp"

#include "lrsep/detect.hpp"
#include "lrsep/prox.hpp"
#include "lrsep/solver.hpp"
#include "lrsep/synth.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

using namespace lrsep;

TEST_CASE("objective") {
  std::mt19937_64 gen(41);
  const Matrix d = oracle::random_matrix(gen, 6, 4);
  const TargetDictionary dict(oracle::random_matrix(gen, 4, 2, 0.1, 1.0));
  const Matrix zero_c = Matrix::Zero(2, 6);

  CHECK(objective(d, Matrix::Zero(6, 4), zero_c, dict, 0.7, 0.4) ==
        doctest::Approx(d.squaredNorm()).epsilon(1e-14));
  CHECK(objective(d, d, zero_c, dict, 0.7, 0.4) ==
        doctest::Approx(0.7 * oracle::nuclear_norm(d)).epsilon(1e-12));

  SUBCASE("closed-form instance evaluated offline") {
    // Same instance as tests/oracles/objective_oracle.py.
    Matrix dd(6, 4), l(6, 4), a(4, 2), c(2, 6);
    for (Index i = 0; i < 6; ++i)
      for (Index j = 0; j < 4; ++j) {
        dd(i, j) = std::sin(1.0 + 0.7 * i + 1.3 * j);
        l(i, j) = 0.3 * std::cos(0.2 + 1.1 * i - 0.4 * j);
      }
    for (Index r = 0; r < 4; ++r)
      for (Index k = 0; k < 2; ++k) a(r, k) = std::cos(0.5 + 0.9 * r + 2.1 * k);
    for (Index k = 0; k < 2; ++k)
      for (Index col = 0; col < 6; ++col)
        c(k, col) = std::sin(0.3 + 0.8 * k + 0.6 * col);
    CHECK(std::abs(objective(dd, l, c, TargetDictionary(a), 0.7, 0.4) -
                   27.3139661642993) <= 1e-10);
  }
}

TEST_CASE("coefficient subproblem") {
  std::mt19937_64 gen(42);

  SUBCASE("large lambda zeroes every column") {
    const Matrix a = oracle::random_matrix(gen, 8, 3);
    const Matrix y = oracle::random_matrix(gen, 8, 10);
    const double guard = 2.0 * (a.transpose() * y).colwise().norm().maxCoeff();
    SolverConfig cfg;
    const auto sol = solve_c_subproblem(y, TargetDictionary(a), guard, cfg,
                                        AdmmState::zeros(3, 10, cfg.rho0));
    CHECK(sol.coefficients.isZero(0.0));
    CHECK(oracle::group_lasso_kkt(a, y, sol.coefficients, guard) <= 1e-12);
  }

  // The ADMM stop is a squared-residual test, so accuracy is set by
  // inner_tol; the next two cases ask for more than the default delivers.
  SUBCASE("lambda = 0 is least squares") {
    const Matrix a = oracle::random_matrix(gen, 8, 3);
    const Matrix y = oracle::random_matrix(gen, 8, 10);
    SolverConfig cfg;
    cfg.inner_tol = 1e-14;
    const auto sol = solve_c_subproblem(y, TargetDictionary(a), 0.0, cfg,
                                        AdmmState::zeros(3, 10, cfg.rho0));
    // normal equations, solved without any factorisation the solver uses
    const Matrix ata = a.transpose() * a;
    const Matrix ls = ata.inverse() * (a.transpose() * y);
    CHECK((sol.coefficients - ls).norm() <= 1e-6 * ls.norm());
    CHECK(sol.converged);
  }

  SUBCASE("optimality conditions at lambda = 0.1") {
    const Matrix a = oracle::random_matrix(gen, 8, 3);
    const Matrix y = oracle::random_matrix(gen, 8, 10);
    SolverConfig cfg;
    cfg.inner_tol = 1e-10;
    const auto sol = solve_c_subproblem(y, TargetDictionary(a), 0.1, cfg,
                                        AdmmState::zeros(3, 10, cfg.rho0));
    CHECK(sol.converged);
    CHECK(oracle::group_lasso_kkt(a, y, sol.coefficients, 0.1) <= 1e-4);
  }

  SUBCASE("returned coefficients are the shrunk split variable") {
    const Matrix a = oracle::random_matrix(gen, 6, 4);
    const Matrix y = 0.3 * oracle::random_matrix(gen, 6, 30);
    SolverConfig cfg;
    const auto sol = solve_c_subproblem(y, TargetDictionary(a), 1.0, cfg,
                                        AdmmState::zeros(4, 30, cfg.rho0));
    CHECK(sol.coefficients == sol.state.f);
    Index zeros = 0;
    for (Index j = 0; j < 30; ++j) {
      const bool z = sol.coefficients.col(j).isZero(0.0);
      zeros += z;
      // a column is either exactly zero or clearly nonzero
      if (!z) CHECK(sol.coefficients.col(j).norm() > 1e-12);
    }
    CHECK(zeros > 0);
    CHECK(zeros < 30);
  }

  SUBCASE("shape mismatches are rejected") {
    SolverConfig cfg;
    const TargetDictionary dict(oracle::random_matrix(gen, 5, 2));
    CHECK_THROWS(solve_c_subproblem(Matrix::Zero(4, 3), dict, 0.1, cfg,
                                    AdmmState::zeros(2, 3, cfg.rho0)));
    CHECK_THROWS(solve_c_subproblem(Matrix::Zero(5, 3), dict, -0.1, cfg,
                                    AdmmState::zeros(2, 3, cfg.rho0)));
  }
}

TEST_CASE("solver configuration") {
  CHECK(SolverConfig::background_recovery().tau == 0.8);
  CHECK(SolverConfig::background_recovery().lambda == 0.133);
  CHECK(SolverConfig::sparse_detection().tau == 0.05);
  CHECK(SolverConfig::sparse_detection().lambda == 0.02);
  CHECK_NOTHROW(SolverConfig{}.validate());

  auto bad = [](auto edit) {
    SolverConfig c;
    edit(c);
    return c;
  };
  CHECK_THROWS(bad([](SolverConfig& c) { c.tau = 0.0; }).validate());
  CHECK_THROWS(bad([](SolverConfig& c) { c.lambda = -1.0; }).validate());
  CHECK_THROWS(bad([](SolverConfig& c) { c.epsilon = 0.0; }).validate());
  CHECK_THROWS(bad([](SolverConfig& c) { c.rho0 = 0.0; }).validate());
  CHECK_THROWS(bad([](SolverConfig& c) { c.rho_growth = 1.0; }).validate());
  CHECK_THROWS(bad([](SolverConfig& c) { c.max_outer = 0; }).validate());
}

TEST_CASE("separate on a zero cube") {
  const TargetDictionary dict(Matrix::Ones(5, 1));
  const auto res = separate(Matrix::Zero(12, 5), dict, SolverConfig{});
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(res.background.isZero(0.0));
  CHECK(res.coefficients.isZero(0.0));
  CHECK(res.sparse.isZero(0.0));
}

TEST_CASE("separate with no energy in the target subspace") {
  // Rows of D live in a 2-D subspace orthogonal to the dictionary, so the
  // residual D - L never correlates with it and C stays exactly zero.
  std::mt19937_64 gen(43);
  const Index p = 8, e = 30;
  const Matrix a = oracle::random_matrix(gen, p, 2);
  Matrix basis(p, 4);
  basis << a, oracle::random_matrix(gen, p, 2);
  const Matrix q = Eigen::HouseholderQR<Matrix>(basis).householderQ();
  const Matrix d = oracle::random_matrix(gen, e, 2) * q.middleCols(2, 2).transpose();

  SolverConfig cfg;
  cfg.tau = 0.5;
  cfg.lambda = 5.0;
  const auto res = separate(d, TargetDictionary(a), cfg);
  CHECK(res.converged);
  CHECK(res.coefficients.isZero(0.0));
  CHECK((res.background - oracle::svt(d, cfg.tau / 2.0)).cwiseAbs().maxCoeff() <=
        1e-10);
}

namespace {

Scene small_scene(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.height = 20;
  spec.width = 20;
  spec.bands = 12;
  spec.rank = 3;
  spec.sigma = 0.01;
  spec.seed = seed;
  spec.alpha = 0.8;
  spec.target = generate_target_spectrum(12, seed);
  spec.blocks = {{6, 5, 2, 2}, {12, 13, 2, 2}};
  return make_scene(spec);
}

}  // namespace

TEST_CASE("separate recovers the implanted support") {
  const Scene scene = small_scene(1);
  const TargetDictionary dict(scene.target);
  // At tau = 0.05 the alternation creeps (each step moves S by ~1e-4 of
  // ||D||), so this run usually ends at max_outer; the support is already
  // right long before that.
  const auto res = separate(scene.cube.pixels(), dict,
                            SolverConfig::sparse_detection());

  const Vector norms = res.coefficients.colwise().norm().transpose();
  const double cut = 1e-3 * norms.maxCoeff();
  for (Index c = 0; c < 20; ++c)
    for (Index r = 0; r < 20; ++r)
      CHECK((norms(pixel_index(r, c, 20)) > cut) == scene.truth.mask(r, c));

  // the score map is nonzero exactly on the nonzero columns of C
  const DetectionMap map = strategy_two_scores(res.sparse, 20, 20);
  for (Index i = 0; i < 400; ++i)
    CHECK((map.scores.reshaped()(i) != 0.0) ==
          !res.coefficients.col(i).isZero(0.0));
}

TEST_CASE("separate trace properties") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Scene scene = small_scene(seed);
    const TargetDictionary dict(scene.target);
    for (const SolverConfig& cfg :
         {SolverConfig::sparse_detection(), SolverConfig::background_recovery()}) {
      const auto res = separate(scene.cube.pixels(), dict, cfg);
      REQUIRE(!res.trace.empty());
      for (std::size_t k = 1; k < res.trace.size(); ++k)
        CHECK(res.trace[k].objective <=
              res.trace[k - 1].objective + 10.0 * cfg.inner_tol);

      // traced objective equals a fresh evaluation at the final iterate
      CHECK(res.trace.back().objective ==
            doctest::Approx(objective(scene.cube.pixels(), res.background,
                                      res.coefficients, dict, cfg.tau,
                                      cfg.lambda))
                .epsilon(1e-10));
      CHECK((res.residual + res.background + res.sparse - scene.cube.pixels())
                .cwiseAbs()
                .maxCoeff() <= 1e-12);
      if (res.converged) {
        CHECK(res.trace.back().background_change <= cfg.epsilon);
        CHECK(res.trace.back().sparse_change <= cfg.epsilon);
      }
    }
  }
}

TEST_CASE("separate is deterministic") {
  const Scene scene = small_scene(2);
  const TargetDictionary dict(scene.target);
  const auto a = separate(scene.cube.pixels(), dict, SolverConfig{});
  const auto b = separate(scene.cube.pixels(), dict, SolverConfig{});
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(std::memcmp(&a.trace[k].objective, &b.trace[k].objective,
                      sizeof(double)) == 0);
    CHECK(a.trace[k].inner_iterations == b.trace[k].inner_iterations);
  }
  CHECK(a.background == b.background);
  CHECK(a.coefficients == b.coefficients);
}

TEST_CASE("warm-started ADMM reaches the same separation") {
  const Scene scene = small_scene(3);
  const TargetDictionary dict(scene.target);
  for (const SolverConfig& cold :
       {SolverConfig::sparse_detection(), SolverConfig::background_recovery()}) {
    SolverConfig warm = cold;
    warm.warm_start = true;
    const auto a = separate(scene.cube.pixels(), dict, cold);
    const auto b = separate(scene.cube.pixels(), dict, warm);
    CHECK(a.converged == b.converged);
    CHECK(a.iterations == b.iterations);
    CHECK(b.trace.back().objective ==
          doctest::Approx(a.trace.back().objective).epsilon(1e-6));
    int inner_a = 0, inner_b = 0;
    for (const auto& t : a.trace) inner_a += t.inner_iterations;
    for (const auto& t : b.trace) inner_b += t.inner_iterations;
    CHECK(inner_b <= inner_a);
  }
}

TEST_CASE("separate argument checks") {
  const TargetDictionary dict(Matrix::Ones(4, 1));
  CHECK_THROWS(separate(Matrix::Ones(3, 5), dict, SolverConfig{}));
  Matrix nan = Matrix::Ones(3, 4);
  nan(1, 1) = std::nan("");
  CHECK_THROWS(separate(nan, dict, SolverConfig{}));
}

TEST_CASE("trace CSV") {
  std::vector<TraceEntry> trace{{1, 2.5, 1.0, 0.5, 0.1, 0.2, 7}};
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() ==
        "iter,objective,nuclear_norm,l21_norm,dL_rel,dS_rel,inner_iters\n"
        "1,2.5,1,0.5,0.10000000000000001,0.20000000000000001,7\n");
}
