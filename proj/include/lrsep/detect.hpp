#pragma once

#include "lrsep/cube.hpp"
#include "lrsep/dictionary.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace lrsep {

/// Per-pixel detection scores (h x w); larger means more target-like.
struct DetectionMap {
  Matrix scores;

  Index height() const { return scores.rows(); }
  Index width() const { return scores.cols(); }
};

/// Score of each pixel is the 2-norm of its row of the sparse target matrix.
DetectionMap strategy_two_scores(const Eigen::Ref<const Matrix>& sparse,
                                 Index height, Index width);

struct OmpResult {
  Vector coefficients;        // n-vector, nonzero only on `support`
  std::vector<Index> support; // in selection order
  double residual_norm = 0.0;
  bool rank_deficient = false;  // a least-squares solve fell back to min-norm
};

/// Orthogonal matching pursuit with at most `sparsity` atoms. Atoms are
/// correlated as given (no renormalisation); ties go to the lowest index.
/// Stops early once the residual is orthogonal to every unused atom.
OmpResult omp(const Eigen::Ref<const Vector>& signal,
              const Eigen::Ref<const Matrix>& dict, Index sparsity);

struct SrbbhParams {
  int window = 5;
  Index background_sparsity = 4;  // atoms allowed under H0
  Index union_sparsity = 6;       // atoms allowed under H1
};

/// Binary-hypothesis residual test: ||x - Ab a||  minus  ||x - [Ab At] b||,
/// each fit by OMP. Sparsity levels are capped at the available atom count;
/// with no background atoms the H0 residual is ||x||.
double srbbh_score(const Eigen::Ref<const Vector>& pixel,
                   const Eigen::Ref<const Matrix>& background_atoms,
                   const TargetDictionary& targets, Index background_sparsity,
                   Index union_sparsity);

/// Scores every pixel of `original` against a background dictionary taken
/// from the same window of `background` (centre excluded). Passing the
/// original cube as `background` gives the plain local-window baseline.
/// `threads` > 1 splits the image by columns; results do not depend on it.
DetectionMap strategy_one_detect(const HsiCube& original,
                                 const HsiCube& background,
                                 const TargetDictionary& targets,
                                 const SrbbhParams& params,
                                 unsigned threads = 1);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // (0,0) ... (1,1)
  double auc = 0.0;
};

/// Thresholds at every distinct score; equal scores move together, so ties
/// contribute a diagonal segment. Trapezoidal AUC. Throws if truth has no
/// positives or no negatives, or scores are non-finite.
RocCurve roc(std::span<const double> scores, std::span<const bool> truth);
RocCurve roc(const DetectionMap& map, const Mask& truth);

/// CSV with header "fpr,tpr" and a final "# auc=<value>" line.
void write_roc_csv(std::ostream& out, const RocCurve& curve);

}  // namespace lrsep
