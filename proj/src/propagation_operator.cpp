// SPDX-License-Identifier: Apache-2.0
#include "rfp/propagation_operator.hpp"

#include <cmath>
#include <utility>
#include <vector>

#include "rfp/errors.hpp"

namespace rfp {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::SymNormAdjacency: return "adj-norm";
    case OperatorKind::SymNormLaplacian: return "lap-norm";
    case OperatorKind::RawAdjacency: return "adj-raw";
    case OperatorKind::Explicit: return "explicit";
  }
  return "unknown";
}

PropagationOperator::PropagationOperator(OperatorKind kind, SparseRowMatrix matrix)
    : kind_(kind), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("propagation operator must be square");
  matrix_.makeCompressed();
}

PropagationOperator PropagationOperator::from_dense(const Eigen::MatrixXd& dense) {
  if (dense.rows() != dense.cols()) throw DimensionError("operator matrix must be square");
  if (dense != dense.transpose()) throw AsymmetryError("explicit operator is not symmetric");
  return PropagationOperator(OperatorKind::Explicit, dense.sparseView(0.0, 0.0));
}

PropagationOperator PropagationOperator::diagonal(const Eigen::VectorXd& values) {
  const Index n = values.size();
  SparseRowMatrix m(n, n);
  m.reserve(Eigen::VectorX<Index>::Ones(n));
  for (Index i = 0; i < n; ++i) m.insert(i, i) = values[i];
  return PropagationOperator(OperatorKind::Explicit, std::move(m));
}

namespace {

// CSR of A + I (diagonal merged in sorted position) with the given entry
// function evaluated per (row, col).
template <typename EntryFn>
SparseRowMatrix with_self_loops(const Graph& g, EntryFn entry) {
  const Index n = g.num_nodes();
  SparseRowMatrix m(n, n);
  Eigen::VectorX<Index> per_row(n);
  for (Index v = 0; v < n; ++v) per_row[v] = g.degree(v) + 1;
  m.reserve(per_row);
  for (Index u = 0; u < n; ++u) {
    bool diag_done = false;
    for (Index v : g.neighbors(u)) {
      if (!diag_done && v > u) {
        m.insert(u, u) = entry(u, u);
        diag_done = true;
      }
      m.insert(u, v) = entry(u, v);
    }
    if (!diag_done) m.insert(u, u) = entry(u, u);
  }
  return m;
}

}  // namespace

PropagationOperator sym_norm_adjacency(const Graph& g) {
  const auto deg = degrees(g);
  auto entry = [&deg](Index u, Index v) {
    const double du = static_cast<double>(deg[u] + 1);
    const double dv = static_cast<double>(deg[v] + 1);
    return 1.0 / std::sqrt(du * dv);
  };
  return PropagationOperator(OperatorKind::SymNormAdjacency, with_self_loops(g, entry));
}

PropagationOperator sym_norm_laplacian(const Graph& g) {
  const auto deg = degrees(g);
  auto entry = [&deg](Index u, Index v) {
    const double du = static_cast<double>(deg[u] + 1);
    const double dv = static_cast<double>(deg[v] + 1);
    const double adj = 1.0 / std::sqrt(du * dv);
    return u == v ? 1.0 - adj : -adj;
  };
  return PropagationOperator(OperatorKind::SymNormLaplacian, with_self_loops(g, entry));
}

PropagationOperator raw_adjacency(const Graph& g) {
  const Index n = g.num_nodes();
  SparseRowMatrix m(n, n);
  Eigen::VectorX<Index> per_row(n);
  for (Index v = 0; v < n; ++v) per_row[v] = g.degree(v);
  m.reserve(per_row);
  for (Index u = 0; u < n; ++u) {
    for (Index v : g.neighbors(u)) m.insert(u, v) = 1.0;
  }
  return PropagationOperator(OperatorKind::RawAdjacency, std::move(m));
}

}  // namespace rfp
