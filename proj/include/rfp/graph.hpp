// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace rfp {

using Index = Eigen::Index;

/// Immutable, unweighted, undirected graph in compressed sparse row form.
///
/// Every edge is stored in both orientations, rows are sorted ascending,
/// and self-loops and duplicates are never stored. Self-loops only appear
/// later, when a propagation operator that needs them is built.
class Graph {
 public:
  Graph() = default;

  Index num_nodes() const noexcept { return static_cast<Index>(row_offsets_.size()) - 1; }
  Index num_edges() const noexcept { return static_cast<Index>(col_indices_.size()) / 2; }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }

  std::span<const Index> neighbors(Index v) const noexcept {
    return std::span<const Index>(col_indices_).subspan(
        static_cast<std::size_t>(row_offsets_[v]),
        static_cast<std::size_t>(row_offsets_[v + 1] - row_offsets_[v]));
  }

  Index degree(Index v) const noexcept { return row_offsets_[v + 1] - row_offsets_[v]; }

  bool has_edge(Index u, Index v) const;

  friend Graph build_graph(Index n, std::span<const std::pair<Index, Index>> edges);

 private:
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
};

/// Builds a graph on nodes 0..n-1. Duplicate edges and both orientations
/// collapse to a single undirected edge. Throws BoundsError for ids outside
/// [0, n) and ValidationError for self-loops.
Graph build_graph(Index n, std::span<const std::pair<Index, Index>> edges);

/// Reads a whitespace separated "u v" edge list. Lines starting with '#' and
/// blank lines are skipped; an optional first data line "n <N>" pins the node
/// count, otherwise it is 1 + the largest id seen.
Graph load_edge_list(std::istream& in);

Eigen::VectorX<Index> degrees(const Graph& g);

/// Uniformly-ish random simple d-regular graph (stub pairing with local
/// rejection, restarted up to `max_restarts` times). Throws ValidationError
/// when n*d is odd, d >= n, or no simple pairing is found.
Graph random_regular_graph(Index n, Index d, std::uint64_t seed, int max_restarts = 100);

}  // namespace rfp
