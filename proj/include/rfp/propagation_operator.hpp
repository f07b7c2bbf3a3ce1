// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rfp/graph.hpp"

namespace rfp {

enum class OperatorKind {
  SymNormAdjacency,  // D̃^{-1/2} (A + I) D̃^{-1/2}
  SymNormLaplacian,  // I - SymNormAdjacency
  RawAdjacency,      // A, no self-loops
  Explicit,          // user-supplied symmetric matrix (synthetic spectra, tests)
};

std::string_view to_string(OperatorKind kind);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;

/// A symmetric sparse n x n matrix applied to feature blocks by spmm.
/// Immutable after construction.
class PropagationOperator {
 public:
  PropagationOperator(OperatorKind kind, SparseRowMatrix matrix);

  OperatorKind kind() const noexcept { return kind_; }
  Index size() const noexcept { return matrix_.rows(); }
  Index nonzeros() const noexcept { return matrix_.nonZeros(); }
  const SparseRowMatrix& matrix() const noexcept { return matrix_; }

  /// Wraps an explicit symmetric matrix. Throws AsymmetryError unless it is
  /// exactly symmetric.
  static PropagationOperator from_dense(const Eigen::MatrixXd& dense);
  static PropagationOperator diagonal(const Eigen::VectorXd& values);

 private:
  OperatorKind kind_;
  SparseRowMatrix matrix_;
};

PropagationOperator sym_norm_adjacency(const Graph& g);
PropagationOperator sym_norm_laplacian(const Graph& g);
PropagationOperator raw_adjacency(const Graph& g);

}  // namespace rfp
