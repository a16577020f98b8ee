#include "lrsep/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace lrsep {

DetectionMap strategy_two_scores(const Eigen::Ref<const Matrix>& sparse,
                                 Index height, Index width) {
  if (height < 1 || width < 1 || sparse.rows() != height * width)
    throw std::invalid_argument("strategy two: sparse matrix has " +
                                std::to_string(sparse.rows()) +
                                " rows, expected height*width");
  const Vector norms = sparse.rowwise().norm();
  return {norms.reshaped(height, width)};
}

OmpResult omp(const Eigen::Ref<const Vector>& signal,
              const Eigen::Ref<const Matrix>& dict, Index sparsity) {
  const Index n = dict.cols();
  if (dict.rows() != signal.size())
    throw std::invalid_argument("omp: signal and dictionary lengths differ");
  if (sparsity < 1 || sparsity > n)
    throw std::invalid_argument("omp: sparsity must be in [1, atoms]");

  OmpResult out;
  out.coefficients = Vector::Zero(n);
  Vector residual = signal;
  Vector coef;
  std::vector<bool> used(static_cast<std::size_t>(n), false);

  for (Index k = 0; k < sparsity; ++k) {
    const Vector corr = dict.transpose() * residual;
    Index best = -1;
    double best_abs = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double a = std::abs(corr(j));
      if (a > best_abs) {
        best_abs = a;
        best = j;
      }
    }
    if (best < 0) break;
    used[best] = true;
    out.support.push_back(best);

    const Matrix sub = dict(Eigen::all, out.support);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
    if (cod.rank() < static_cast<Index>(out.support.size()))
      out.rank_deficient = true;
    coef = cod.solve(signal);
    residual = signal - sub * coef;
  }
  for (std::size_t i = 0; i < out.support.size(); ++i)
    out.coefficients(out.support[i]) = coef(static_cast<Index>(i));
  out.residual_norm = residual.norm();
  return out;
}

double srbbh_score(const Eigen::Ref<const Vector>& pixel,
                   const Eigen::Ref<const Matrix>& background_atoms,
                   const TargetDictionary& targets, Index background_sparsity,
                   Index union_sparsity) {
  if (targets.bands() != pixel.size() ||
      (background_atoms.cols() > 0 && background_atoms.rows() != pixel.size()))
    throw std::invalid_argument("srbbh: band count mismatch");
  if (background_sparsity < 1 || union_sparsity < 1)
    throw std::invalid_argument("srbbh: sparsity levels must be >= 1");

  const Index nb = background_atoms.cols();
  const double r0 =
      nb == 0 ? pixel.norm()
              : omp(pixel, background_atoms, std::min(background_sparsity, nb))
                    .residual_norm;

  Matrix joint(pixel.size(), nb + targets.size());
  if (nb > 0) joint.leftCols(nb) = background_atoms;
  joint.rightCols(targets.size()) = targets.atoms();
  const double r1 =
      omp(pixel, joint, std::min(union_sparsity, joint.cols())).residual_norm;
  return r0 - r1;
}

DetectionMap strategy_one_detect(const HsiCube& original,
                                 const HsiCube& background,
                                 const TargetDictionary& targets,
                                 const SrbbhParams& params, unsigned threads) {
  if (original.height() != background.height() ||
      original.width() != background.width() ||
      original.bands() != background.bands())
    throw std::invalid_argument("strategy one: cube shapes differ");
  if (targets.bands() != original.bands())
    throw std::invalid_argument("strategy one: dictionary band mismatch");
  // Validates the window once up front.
  build_background_dictionary(background, {0, 0}, params.window);

  const Index h = original.height();
  const Index w = original.width();
  DetectionMap map{Matrix::Zero(h, w)};
  auto score_columns = [&](Index c0, Index c1) {
    for (Index c = c0; c < c1; ++c)
      for (Index r = 0; r < h; ++r) {
        const auto ab = build_background_dictionary(background, {r, c},
                                                    params.window);
        map.scores(r, c) =
            srbbh_score(original.spectrum(r, c), ab.atoms, targets,
                        params.background_sparsity, params.union_sparsity);
      }
  };

  const Index workers =
      std::clamp<Index>(static_cast<Index>(threads), 1, w);
  if (workers == 1) {
    score_columns(0, w);
    return map;
  }
  std::vector<std::jthread> pool;
  const Index chunk = (w + workers - 1) / workers;
  for (Index c0 = 0; c0 < w; c0 += chunk)
    pool.emplace_back(score_columns, c0, std::min(w, c0 + chunk));
  pool.clear();
  return map;
}

RocCurve roc(std::span<const double> scores, std::span<const bool> truth) {
  if (scores.size() != truth.size())
    throw std::invalid_argument("roc: scores and truth differ in length");
  const auto positives =
      static_cast<std::size_t>(std::count(truth.begin(), truth.end(), true));
  const std::size_t negatives = truth.size() - positives;
  if (positives == 0 || negatives == 0)
    throw std::invalid_argument(
        "roc: truth mask needs at least one positive and one negative");
  for (double s : scores)
    if (!std::isfinite(s)) throw std::invalid_argument("roc: non-finite score");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == threshold; ++i)
      truth[order[i]] ? ++tp : ++fp;
    const RocPoint next{static_cast<double>(fp) / negatives,
                        static_cast<double>(tp) / positives};
    const RocPoint& prev = curve.points.back();
    curve.auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) / 2.0;
    curve.points.push_back(next);
  }
  return curve;
}

RocCurve roc(const DetectionMap& map, const Mask& truth) {
  if (truth.rows() != map.height() || truth.cols() != map.width())
    throw std::invalid_argument("roc: truth mask shape differs from map");
  // Both are column-major, so element i refers to the same pixel.
  return roc(std::span<const double>(map.scores.data(), map.scores.size()),
             std::span<const bool>(truth.data(), truth.size()));
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  const auto old = out.precision(17);
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) out << p.fpr << ',' << p.tpr << '\n';
  out << "# auc=" << curve.auc << '\n';
  out.precision(old);
}

}  // namespace lrsep
