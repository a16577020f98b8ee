#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace lrsep {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Sum of singular values.
template <typename Derived>
typename Derived::Scalar nuclear_norm(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<DenseMatrix<typename Derived::Scalar>> svd(m);
  return svd.singularValues().sum();
}

/// Sum of column 2-norms.
template <typename Derived>
typename Derived::Scalar l21_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.colwise().norm().sum();
}

/// Singular value soft-thresholding: U * max(S - threshold, 0) * V^T.
///
/// With threshold = tau / 2 this is the minimiser of
///   ||L - M||_F^2 + tau * ||L||_*
/// (no 1/2 on the data term, hence the halved threshold).
///
/// If `nuclear` is non-null it receives the nuclear norm of the result.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> svt(
    const Eigen::MatrixBase<Derived>& m, typename Derived::Scalar threshold,
    typename Derived::Scalar* nuclear = nullptr) {
  using Scalar = typename Derived::Scalar;
  if (!m.allFinite()) throw std::invalid_argument("svt: non-finite input");
  if (threshold < 0) throw std::invalid_argument("svt: negative threshold");
  if (nuclear) *nuclear = 0;
  if (m.size() == 0) return m;
  if (threshold == 0) {
    if (nuclear) *nuclear = nuclear_norm(m);
    return m;
  }

  Eigen::BDCSVD<DenseMatrix<Scalar>> svd(m, Eigen::ComputeThinU |
                                                Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > threshold) ++rank;
  if (rank == 0) return DenseMatrix<Scalar>::Zero(m.rows(), m.cols());

  const auto shrunk = (s.head(rank).array() - threshold).matrix().eval();
  if (nuclear) *nuclear = shrunk.sum();
  return svd.matrixU().leftCols(rank) * shrunk.asDiagonal() *
         svd.matrixV().leftCols(rank).transpose();
}

/// Column-wise group soft-thresholding, the prox of kappa * ||.||_{2,1}:
/// v_j -> max(0, 1 - kappa / ||v_j||) v_j. Columns at or under the
/// threshold become exact zeros.
template <typename Derived>
DenseMatrix<typename Derived::Scalar> group_shrink_columns(
    const Eigen::MatrixBase<Derived>& v, typename Derived::Scalar kappa) {
  using Scalar = typename Derived::Scalar;
  if (!v.allFinite())
    throw std::invalid_argument("group_shrink_columns: non-finite input");
  if (kappa < 0)
    throw std::invalid_argument("group_shrink_columns: negative kappa");
  DenseMatrix<Scalar> out(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    const Scalar norm = v.col(j).norm();
    if (norm <= kappa)
      out.col(j).setZero();
    else
      out.col(j) = (Scalar(1) - kappa / norm) * v.col(j);
  }
  return out;
}

}  // namespace lrsep
