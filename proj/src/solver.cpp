#include "lrsep/solver.hpp"

#include "lrsep/prox.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace lrsep {

void SolverConfig::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(tau)) throw std::invalid_argument("tau must be > 0");
  if (!positive(lambda)) throw std::invalid_argument("lambda must be > 0");
  if (!positive(epsilon)) throw std::invalid_argument("epsilon must be > 0");
  if (!positive(rho0)) throw std::invalid_argument("rho0 must be > 0");
  if (!positive(inner_tol)) throw std::invalid_argument("inner_tol must be > 0");
  if (!(std::isfinite(rho_growth) && rho_growth > 1.0))
    throw std::invalid_argument("rho_growth must be > 1");
  if (max_outer < 1 || max_inner < 1)
    throw std::invalid_argument("iteration caps must be >= 1");
}

SolverConfig SolverConfig::background_recovery() {
  SolverConfig c;
  c.tau = 0.8;
  c.lambda = 0.133;
  return c;
}

SolverConfig SolverConfig::sparse_detection() {
  SolverConfig c;
  c.tau = 0.05;
  c.lambda = 0.02;
  return c;
}

AdmmState AdmmState::zeros(Index atoms, Index pixels, double rho) {
  return {Matrix::Zero(atoms, pixels), Matrix::Zero(atoms, pixels),
          Matrix::Zero(atoms, pixels), rho};
}

CoefficientSolution solve_c_subproblem(const Eigen::Ref<const Matrix>& y,
                                       const TargetDictionary& dict,
                                       double lambda,
                                       const SolverConfig& config,
                                       AdmmState warm) {
  const Matrix& at = dict.atoms();
  if (y.rows() != at.rows())
    throw std::invalid_argument("coefficient subproblem: band mismatch");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  const Index nt = at.cols();
  const Index e = y.cols();
  if (warm.c.rows() != nt || warm.c.cols() != e || warm.f.rows() != nt ||
      warm.f.cols() != e || warm.z.rows() != nt || warm.z.cols() != e ||
      !(warm.rho > 0.0))
    throw std::invalid_argument("coefficient subproblem: bad ADMM state");

  const Matrix gram2 = 2.0 * at.transpose() * at;
  const Matrix rhs0 = 2.0 * at.transpose() * y;
  const Matrix identity = Matrix::Identity(nt, nt);

  CoefficientSolution out;
  out.state = std::move(warm);
  auto& s = out.state;
  for (int it = 1; it <= config.max_inner; ++it) {
    const double rho = s.rho;
    // (2 At^T At + rho I) C = 2 At^T Y + rho F - Z
    Eigen::LLT<Matrix> llt(gram2 + rho * identity);
    s.c = llt.solve(rhs0 + rho * s.f - s.z);
    s.f = group_shrink_columns(s.c + s.z / rho, lambda / rho);
    s.z += rho * (s.c - s.f);
    s.rho = rho * config.rho_growth;
    out.iterations = it;

    // After the F-step, Z lies in the subdifferential of lambda ||F||_{2,1},
    // so 2 At^T (At F - Y) + Z is the exact stationarity residual of F.
    const double primal = (s.c - s.f).squaredNorm();
    if (primal <= config.inner_tol &&
        (gram2 * s.f - rhs0 + s.z).squaredNorm() <= config.inner_tol) {
      out.converged = true;
      break;
    }
  }
  out.coefficients = s.f;
  return out;
}

double objective(const Eigen::Ref<const Matrix>& data,
                 const Eigen::Ref<const Matrix>& background,
                 const Eigen::Ref<const Matrix>& coefficients,
                 const TargetDictionary& dict, double tau, double lambda) {
  if (background.rows() != data.rows() || background.cols() != data.cols() ||
      dict.bands() != data.cols() || coefficients.rows() != dict.size() ||
      coefficients.cols() != data.rows())
    throw std::invalid_argument("objective: shape mismatch");
  const Matrix fit =
      data - background - (dict.atoms() * coefficients).transpose();
  return tau * nuclear_norm(background) + lambda * l21_norm(coefficients) +
         fit.squaredNorm();
}

SeparationResult separate(const Eigen::Ref<const Matrix>& data,
                          const TargetDictionary& dict,
                          const SolverConfig& config) {
  config.validate();
  if (dict.bands() != data.cols())
    throw std::invalid_argument(
        "separate: cube has " + std::to_string(data.cols()) +
        " bands, dictionary has " + std::to_string(dict.bands()));
  if (!data.allFinite())
    throw std::invalid_argument("separate: non-finite data");

  const Index e = data.rows();
  const Index p = data.cols();
  const Index nt = dict.size();

  SeparationResult res;
  res.background = Matrix::Zero(e, p);
  res.coefficients = Matrix::Zero(nt, e);
  res.sparse = Matrix::Zero(e, p);

  const double data_norm = data.norm();
  if (data_norm == 0.0) {
    res.residual = Matrix::Zero(e, p);
    res.trace.push_back({1, 0.0, 0.0, 0.0, 0.0, 0.0, 0});
    res.iterations = 1;
    res.converged = true;
    return res;
  }

  AdmmState state = AdmmState::zeros(nt, e, config.rho0);
  for (int k = 1; k <= config.max_outer; ++k) {
    double nuclear = 0.0;
    Matrix background = svt(data - res.sparse, config.tau / 2.0, &nuclear);

    // A warm start keeps C, F and the (unscaled) dual Z but restarts the
    // penalty: a rho carried over keeps growing until ADMM stalls.
    if (config.warm_start)
      state.rho = config.rho0;
    else
      state = AdmmState::zeros(nt, e, config.rho0);
    auto sol = solve_c_subproblem((data - background).transpose(), dict,
                                  config.lambda, config, std::move(state));
    state = std::move(sol.state);
    Matrix sparse = (dict.atoms() * sol.coefficients).transpose();

    TraceEntry t;
    t.iteration = k;
    t.background_change = (background - res.background).norm() / data_norm;
    t.sparse_change = (sparse - res.sparse).norm() / data_norm;
    t.nuclear_norm = nuclear;
    t.l21_norm = l21_norm(sol.coefficients);
    t.objective = config.tau * nuclear + config.lambda * t.l21_norm +
                  (data - background - sparse).squaredNorm();
    t.inner_iterations = sol.iterations;
    res.trace.push_back(t);

    res.background = std::move(background);
    res.coefficients = std::move(sol.coefficients);
    res.sparse = std::move(sparse);
    res.iterations = k;
    if (t.background_change <= config.epsilon &&
        t.sparse_change <= config.epsilon) {
      res.converged = true;
      break;
    }
  }
  res.residual = data - res.background - res.sparse;
  return res;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "iter,objective,nuclear_norm,l21_norm,dL_rel,dS_rel,inner_iters\n";
  const auto old = out.precision(17);
  for (const auto& t : trace)
    out << t.iteration << ',' << t.objective << ',' << t.nuclear_norm << ','
        << t.l21_norm << ',' << t.background_change << ','
        << t.sparse_change << ',' << t.inner_iterations << '\n';
  out.precision(old);
}

}  // namespace lrsep
