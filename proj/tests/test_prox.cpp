#include "doctest.h"
#include "oracles.hpp"

#include "lrsep/prox.hpp"

#include <Eigen/SVD>

using namespace lrsep;

namespace {

Index numeric_rank(const Matrix& m) {
  if (m.isZero(0.0)) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  Index r = 0;
  while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
  return r;
}

}  // namespace

TEST_CASE("svt closed forms") {
  const Matrix m = Vector{{5.0, 1.0}}.asDiagonal();
  const Matrix l = svt(m, 2.0);
  CHECK((l - Matrix(Vector{{3.0, 0.0}}.asDiagonal())).cwiseAbs().maxCoeff() <=
        1e-12);

  std::mt19937_64 gen(31);
  const Matrix r = oracle::random_matrix(gen, 5, 4);
  CHECK(svt(r, 0.0) == r);

  double nuc = -1.0;
  CHECK(svt(r, 1e6, &nuc).isZero(0.0));
  CHECK(nuc == 0.0);
  CHECK_THROWS(svt(r, -1.0));
}

TEST_CASE("svt solves its optimisation problem") {
  // min ||L - M||^2 + 2 t ||L||_*  at t = 0.7
  std::mt19937_64 gen(32);
  const double t = 0.7;
  const Matrix m = oracle::random_matrix(gen, 10, 8);
  double nuc = 0.0;
  const Matrix l = svt(m, t, &nuc);
  CHECK(nuc == doctest::Approx(oracle::nuclear_norm(l)).epsilon(1e-10));

  // Optimality: M - L = t (U1 V1^T + W) with U1^T W = 0, W V1 = 0, ||W|| <= 1.
  Eigen::JacobiSVD<Matrix> svd(l, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index k = numeric_rank(l);
  REQUIRE(k > 0);
  const Matrix u1 = svd.matrixU().leftCols(k), v1 = svd.matrixV().leftCols(k);
  const Matrix w = (m - l) / t - u1 * v1.transpose();
  CHECK((u1.transpose() * w).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((w * v1).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(Eigen::JacobiSVD<Matrix>(w).singularValues()(0) <= 1.0 + 1e-8);

  auto f = [&](const Matrix& x) {
    return (x - m).squaredNorm() + 2.0 * t * oracle::nuclear_norm(x);
  };
  const double best = f(l);
  for (int i = 0; i < 1000; ++i) {
    const Matrix d = oracle::random_matrix(gen, 10, 8);
    CHECK(f(l + 1e-3 * d / d.norm()) >= best);
  }
}

TEST_CASE("svt agrees with the eigendecomposition oracle") {
  std::mt19937_64 gen(33);
  std::uniform_int_distribution<Index> dim(1, 20);
  std::uniform_real_distribution<double> thr(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix m = oracle::random_matrix(gen, dim(gen), dim(gen));
    const double t = thr(gen);
    CHECK((svt(m, t) - oracle::svt(m, t)).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("svt rank does not grow with the threshold") {
  std::mt19937_64 gen(34);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix m = oracle::random_matrix(gen, 9, 7);
    Index prev = numeric_rank(m);
    for (double t : {0.1, 0.4, 0.8, 1.5, 3.0}) {
      const Index r = numeric_rank(svt(m, t));
      CHECK(r <= prev);
      prev = r;
    }
  }
}

TEST_CASE("group shrink closed forms") {
  Matrix v(2, 3);
  v << 3.0, 0.1, 1.0,
       4.0, 0.2, -2.0;
  const Matrix s = group_shrink_columns(v, 2.5);
  CHECK(s(0, 0) == doctest::Approx(1.5));
  CHECK(s(1, 0) == doctest::Approx(2.0));
  CHECK(s.col(1).isZero(0.0));  // norm < kappa
  CHECK(s.col(2).isZero(0.0));  // norm = sqrt(5) < 2.5
  CHECK(group_shrink_columns(v, 0.0) == v);
  CHECK(group_shrink_columns(v, 5.0).col(0).isZero(0.0));  // norm == kappa
  CHECK_THROWS(group_shrink_columns(v, -0.1));
}

TEST_CASE("group shrink agrees with a line-search oracle") {
  std::mt19937_64 gen(35);
  std::uniform_int_distribution<Index> dim(1, 20);
  std::uniform_real_distribution<double> kap(0.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix v = oracle::random_matrix(gen, dim(gen), dim(gen));
    const double k = kap(gen);
    const Matrix got = group_shrink_columns(v, k);
    for (Index j = 0; j < v.cols(); ++j)
      CHECK((got.col(j) - oracle::shrink_column(v.col(j), k))
                .cwiseAbs()
                .maxCoeff() <= 1e-8);
  }
}

TEST_CASE("group shrink is non-expansive") {
  std::mt19937_64 gen(36);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix a = oracle::random_matrix(gen, 6, 5);
    const Matrix b = a + 0.5 * oracle::random_matrix(gen, 6, 5);
    const double k = 0.2 * (trial % 10);
    CHECK((group_shrink_columns(a, k) - group_shrink_columns(b, k)).norm() <=
          (a - b).norm() + 1e-12);
  }
}

TEST_CASE("norms") {
  Matrix m(2, 2);
  m << 3.0, 0.0, 4.0, 1.0;
  CHECK(l21_norm(m) == doctest::Approx(6.0));
  CHECK(nuclear_norm(Matrix(Vector{{2.0, 3.0}}.asDiagonal())) ==
        doctest::Approx(5.0));
}
