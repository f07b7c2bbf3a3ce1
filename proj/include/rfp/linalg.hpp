// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rfp/errors.hpp"
#include "rfp/propagation_operator.hpp"

namespace rfp {

/// Dense n x k node-feature block, one channel per column, row-major so a
/// node's channels are contiguous for sparse row gathers.
template <typename Scalar>
using Block = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureBlock = Block<double>;

/// Largest matrix size for which dense reference computations run.
inline constexpr Index kOracleCap = 2048;

/// Columns with norm at or below this are treated as zero.
inline constexpr double kZeroColumnNorm = 1e-300;

/// Relative Householder pivot magnitude below which a column is dependent.
inline constexpr double kRankThreshold = 1e-10;

/// Returns S * x, one pass over the nonzeros of S with a fixed per-row
/// summation order.
FeatureBlock spmm(const PropagationOperator& op, const FeatureBlock& x);

/// Dense copy of the operator; throws OracleCapError above `cap`.
Eigen::MatrixXd dense_mirror(const PropagationOperator& op, Index cap = kOracleCap);

/// Scales every column to unit l2 norm.
template <typename Derived>
Block<typename Derived::Scalar> normalize_l2(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  Block<Scalar> out = x;
  for (Index c = 0; c < out.cols(); ++c) {
    const Scalar norm = out.col(c).norm();
    if (!(norm > Scalar(kZeroColumnNorm))) throw DegenerateColumnError(static_cast<std::size_t>(c));
    out.col(c) /= norm;
  }
  return out;
}

/// What normalize_qr does when a Householder pivot falls below the rank
/// threshold.
enum class RankDeficiency {
  Fail,      // throw RankCollapseError naming the dependent column
  Complete,  // keep the Householder Q columns; span(result) contains span(x)
};

/// Orthonormal basis of span(x) from a Householder QR, with the signs fixed
/// so that the diagonal of R is non-negative.
template <typename Derived>
Block<typename Derived::Scalar> normalize_qr(const Eigen::MatrixBase<Derived>& x,
                                             RankDeficiency policy = RankDeficiency::Fail) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = x.rows(), k = x.cols();
  if (k > n) throw RankCollapseError(static_cast<std::size_t>(n));

  Eigen::HouseholderQR<Dense> qr(x.eval());
  const Scalar threshold = Scalar(kRankThreshold) * x.norm();
  const auto& packed = qr.matrixQR();
  for (Index j = 0; j < k && policy == RankDeficiency::Fail; ++j) {
    if (!(std::abs(packed(j, j)) > threshold)) throw RankCollapseError(static_cast<std::size_t>(j));
  }
  Dense q = qr.householderQ() * Dense::Identity(n, k);
  for (Index j = 0; j < k; ++j) {
    if (packed(j, j) < Scalar(0)) q.col(j) = -q.col(j);
  }
  return q;
}

/// Top-k eigenpairs of a dense symmetric matrix, sorted by descending |λ|
/// (ties by descending signed value). The first component of each vector
/// with magnitude above 1e-12 is positive.
template <typename Scalar>
struct EigenPairs {
  Eigen::VectorX<Scalar> values;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

namespace detail {

// One symmetric Schur rotation zeroing a(p,q), applied to a and accumulated
// into v.
template <typename Scalar>
void jacobi_rotate(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a,
                   Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& v, Index p, Index q) {
  const Scalar apq = a(p, q);
  const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
  const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                   (std::abs(theta) + std::sqrt(Scalar(1) + theta * theta));
  const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
  const Scalar s = t * c;

  const Index n = a.rows();
  for (Index r = 0; r < n; ++r) {
    const Scalar arp = a(r, p), arq = a(r, q);
    a(r, p) = c * arp - s * arq;
    a(r, q) = s * arp + c * arq;
  }
  for (Index r = 0; r < n; ++r) {
    const Scalar apr = a(p, r), aqr = a(q, r);
    a(p, r) = c * apr - s * aqr;
    a(q, r) = s * apr + c * aqr;
  }
  a(p, q) = Scalar(0);
  a(q, p) = Scalar(0);
  for (Index r = 0; r < n; ++r) {
    const Scalar vrp = v(r, p), vrq = v(r, q);
    v(r, p) = c * vrp - s * vrq;
    v(r, q) = s * vrp + c * vrq;
  }
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for dense symmetric matrices.
///
/// Computes the full spectrum and returns the k dominant pairs. Throws
/// AsymmetryError when |m - m^T| exceeds 1e-10 anywhere and OracleCapError
/// above `cap`.
template <typename Derived>
EigenPairs<typename Derived::Scalar> dense_sym_eigen(const Eigen::MatrixBase<Derived>& matrix,
                                                     Index k, Index cap = kOracleCap) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = matrix.rows();
  if (matrix.cols() != n) throw DimensionError("eigensolver input must be square");
  if (n > cap) throw OracleCapError("matrix size " + std::to_string(n) + " exceeds oracle cap " +
                                    std::to_string(cap));
  if (k < 0 || k > n) throw DimensionError("requested eigenpair count out of range");
  Dense a = matrix;
  if (n > 0 && (a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10)) {
    throw AsymmetryError("eigensolver input is not symmetric");
  }
  a = Scalar(0.5) * (a + a.transpose()).eval();
  Dense v = Dense::Identity(n, n);

  const Scalar scale = a.norm();
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int sweep = 0; sweep < 100 && scale > Scalar(0); ++sweep) {
    Scalar off = 0;
    for (Index q = 1; q < n; ++q)
      for (Index p = 0; p < q; ++p) off += a(p, q) * a(p, q);
    if (std::sqrt(Scalar(2) * off) <= eps * scale) break;
    for (Index q = 1; q < n; ++q) {
      for (Index p = 0; p < q; ++p) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Skip entries already negligible relative to both diagonal entries.
        if (std::abs(apq) <= eps * Scalar(1e-3) * (std::abs(a(p, p)) + std::abs(a(q, q))) &&
            sweep > 3) {
          a(p, q) = a(q, p) = Scalar(0);
          continue;
        }
        detail::jacobi_rotate(a, v, p, q);
      }
    }
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const Eigen::VectorX<Scalar> diag = a.diagonal();
  std::sort(order.begin(), order.end(), [&](Index i, Index j) {
    return std::abs(diag[i]) > std::abs(diag[j]);
  });
  // Magnitude ties are ordered by descending signed value.
  const Scalar tie = Scalar(1e-12) * std::max(Scalar(1), diag.cwiseAbs().maxCoeff());
  for (std::size_t lo = 0; lo < order.size();) {
    std::size_t hi = lo + 1;
    while (hi < order.size() &&
           std::abs(std::abs(diag[order[lo]]) - std::abs(diag[order[hi]])) <= tie) {
      ++hi;
    }
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(lo),
                     order.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](Index i, Index j) { return diag[i] > diag[j]; });
    lo = hi;
  }

  EigenPairs<Scalar> out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Index i = 0; i < k; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values[i] = diag[src];
    auto col = out.vectors.col(i);
    col = v.col(src);
    col.normalize();
    for (Index r = 0; r < n; ++r) {
      if (std::abs(col[r]) > Scalar(1e-12)) {
        if (col[r] < Scalar(0)) col = -col;
        break;
      }
    }
  }
  return out;
}

/// Principal angles between span(u) and span(v), both with orthonormal
/// columns, ascending in [0, pi/2].
///
/// Angles whose cosine exceeds 1/sqrt(2) are recovered from the sines
/// (singular values of v - u u^T v); acos alone cannot resolve angles below
/// about 1e-8.
template <typename DerivedU, typename DerivedV>
Eigen::VectorX<typename DerivedU::Scalar> principal_angles(const Eigen::MatrixBase<DerivedU>& u,
                                                           const Eigen::MatrixBase<DerivedV>& v,
                                                           double orthonormal_tol = 1e-8) {
  using Scalar = typename DerivedU::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (u.rows() != v.rows() || u.cols() != v.cols()) throw DimensionError("principal_angles: shape mismatch");
  const Index k = u.cols();
  const Dense ident = Dense::Identity(k, k);
  if ((u.transpose() * u - ident).cwiseAbs().maxCoeff() > orthonormal_tol ||
      (v.transpose() * v - ident).cwiseAbs().maxCoeff() > orthonormal_tol) {
    throw DomainError("principal_angles: inputs must have orthonormal columns");
  }
  const Dense cross = u.transpose() * v;
  Eigen::VectorX<Scalar> cosines = Eigen::JacobiSVD<Dense>(cross).singularValues();  // descending
  const Dense residual = v - u * cross;
  Eigen::VectorX<Scalar> sines = Eigen::JacobiSVD<Dense>(residual).singularValues();
  std::sort(sines.begin(), sines.end());

  Eigen::VectorX<Scalar> angles(k);
  for (Index i = 0; i < k; ++i) {
    const Scalar c = std::clamp(cosines[i], Scalar(0), Scalar(1));
    if (c * c >= Scalar(0.5)) {
      angles[i] = std::asin(std::clamp(sines[i], Scalar(0), Scalar(1)));
    } else {
      angles[i] = std::acos(c);
    }
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace rfp
