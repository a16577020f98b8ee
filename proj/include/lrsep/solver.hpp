#pragma once

#include "lrsep/cube.hpp"
#include "lrsep/dictionary.hpp"

#include <iosfwd>
#include <vector>

namespace lrsep {

/// Weights and stopping rules for the low-rank / dictionary-sparse split.
struct SolverConfig {
  double tau = 0.8;          // nuclear-norm weight
  double lambda = 0.133;     // l2,1 weight
  double epsilon = 1e-4;     // outer relative-change tolerance
  double rho0 = 1e-4;        // initial ADMM penalty
  double rho_growth = 1.1;   // penalty multiplier per ADMM iteration
  double inner_tol = 1e-6;   // squared-Frobenius ADMM residual tolerance
  int max_outer = 200;
  int max_inner = 500;
  bool warm_start = false;   // carry C, F, Z across outer iterations

  /// Throws std::invalid_argument if any weight or tolerance is out of range.
  void validate() const;

  /// tau = 0.8, lambda = 0.133: high tau:lambda so whole targets leave L.
  static SolverConfig background_recovery();
  /// tau = 0.05, lambda = 0.02: tau:lambda = 5:2 for a clean sparse support.
  static SolverConfig sparse_detection();
};

/// Scaled-ADMM state for the coefficient subproblem (all Nt x e).
struct AdmmState {
  Matrix c;
  Matrix f;
  Matrix z;
  double rho = 0.0;

  static AdmmState zeros(Index atoms, Index pixels, double rho);
};

struct CoefficientSolution {
  Matrix coefficients;  // final F: columns are exactly zero or not
  AdmmState state;
  int iterations = 0;
  bool converged = false;
};

/// Solves  min_C ||Y - At C||_F^2 + lambda ||C||_{2,1}  for Y (p x e) by
/// scaled ADMM on the split C = F, with rho multiplied by rho_growth after
/// every iteration. `lambda` may be zero (plain least squares).
CoefficientSolution solve_c_subproblem(const Eigen::Ref<const Matrix>& y,
                                       const TargetDictionary& dict,
                                       double lambda,
                                       const SolverConfig& config,
                                       AdmmState warm);

/// tau ||L||_* + lambda ||C||_{2,1} + ||D - L - (At C)^T||_F^2
double objective(const Eigen::Ref<const Matrix>& data,
                 const Eigen::Ref<const Matrix>& background,
                 const Eigen::Ref<const Matrix>& coefficients,
                 const TargetDictionary& dict, double tau, double lambda);

struct TraceEntry {
  int iteration = 0;
  double objective = 0.0;
  double nuclear_norm = 0.0;
  double l21_norm = 0.0;
  double background_change = 0.0;  // ||L_k - L_{k-1}||_F / ||D||_F
  double sparse_change = 0.0;      // ||S_k - S_{k-1}||_F / ||D||_F
  int inner_iterations = 0;
};

struct SeparationResult {
  Matrix background;    // L, e x p
  Matrix coefficients;  // C, Nt x e
  Matrix sparse;        // S = (At C)^T, e x p
  Matrix residual;      // N = D - L - S
  std::vector<TraceEntry> trace;
  int iterations = 0;
  bool converged = false;
};

/// Alternating minimisation from L = C = 0: an SVT step for L followed by an
/// ADMM group-lasso step for C, until both relative changes are <= epsilon.
SeparationResult separate(const Eigen::Ref<const Matrix>& data,
                          const TargetDictionary& dict,
                          const SolverConfig& config);

/// CSV: iter,objective,nuclear_norm,l21_norm,dL_rel,dS_rel,inner_iters
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace lrsep
