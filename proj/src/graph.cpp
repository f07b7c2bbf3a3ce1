// SPDX-License-Identifier: Apache-2.0
#include "rfp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <string>
#include <string_view>

#include "rfp/errors.hpp"

namespace rfp {

bool Graph::has_edge(Index u, Index v) const {
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

Graph build_graph(Index n, std::span<const std::pair<Index, Index>> edges) {
  if (n < 0) throw BoundsError("negative node count");
  std::vector<std::pair<Index, Index>> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw BoundsError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") outside node range [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw ValidationError("self-loop on node " + std::to_string(u));
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  Graph g;
  g.row_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  g.col_indices_.reserve(arcs.size());
  for (const auto& [u, v] : arcs) {
    ++g.row_offsets_[static_cast<std::size_t>(u) + 1];
    g.col_indices_.push_back(v);
  }
  for (std::size_t i = 1; i < g.row_offsets_.size(); ++i) g.row_offsets_[i] += g.row_offsets_[i - 1];
  return g;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Splits on blanks; returns false if there are not exactly two tokens.
bool two_tokens(std::string_view s, std::string_view& a, std::string_view& b) {
  const auto sep = s.find_first_of(" \t");
  if (sep == std::string_view::npos) return false;
  a = s.substr(0, sep);
  b = trim(s.substr(sep));
  return !b.empty() && b.find_first_of(" \t") == std::string_view::npos;
}

bool parse_index(std::string_view tok, Index& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end && out >= 0;
}

}  // namespace

Graph load_edge_list(std::istream& in) {
  std::vector<std::pair<Index, Index>> edges;
  Index declared_n = -1;
  Index max_id = -1;
  bool seen_data = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    std::string_view a, b;
    if (!two_tokens(text, a, b)) throw ParseError(line_no, "expected two integers");
    if (!seen_data && a == "n") {
      if (!parse_index(b, declared_n)) throw ParseError(line_no, "bad node count header");
      seen_data = true;
      continue;
    }
    seen_data = true;
    Index u = 0, v = 0;
    if (!parse_index(a, u) || !parse_index(b, v)) {
      throw ParseError(line_no, "expected two non-negative integers");
    }
    if (declared_n >= 0 && (u >= declared_n || v >= declared_n)) {
      throw BoundsError("line " + std::to_string(line_no) + ": node id exceeds declared n=" +
                        std::to_string(declared_n));
    }
    if (u == v) {
      throw ValidationError("line " + std::to_string(line_no) + ": self-loop on node " +
                            std::to_string(u));
    }
    max_id = std::max({max_id, u, v});
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw IoError("failed reading edge list");
  const Index n = declared_n >= 0 ? declared_n : max_id + 1;
  return build_graph(n, edges);
}

Eigen::VectorX<Index> degrees(const Graph& g) {
  Eigen::VectorX<Index> deg(g.num_nodes());
  for (Index v = 0; v < g.num_nodes(); ++v) deg[v] = g.degree(v);
  return deg;
}

Graph random_regular_graph(Index n, Index d, std::uint64_t seed, int max_restarts) {
  if (n <= 0 || d < 0 || d >= n || (n * d) % 2 != 0) {
    throw ValidationError("no simple " + std::to_string(d) + "-regular graph on " +
                          std::to_string(n) + " nodes");
  }
  std::mt19937_64 gen(seed);
  std::vector<Index> stubs;
  std::vector<std::pair<Index, Index>> edges;
  std::vector<std::vector<Index>> adj;

  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    stubs.clear();
    for (Index v = 0; v < n; ++v) stubs.insert(stubs.end(), static_cast<std::size_t>(d), v);
    edges.clear();
    adj.assign(static_cast<std::size_t>(n), {});
    auto adjacent = [&](Index u, Index v) {
      const auto& row = adj[static_cast<std::size_t>(u)];
      return std::find(row.begin(), row.end(), v) != row.end();
    };

    bool stuck = false;
    while (!stubs.empty() && !stuck) {
      // Draw random stub pairs; if none of a bounded number of draws is
      // admissible, scan exhaustively before giving up on this attempt.
      bool paired = false;
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      for (int tries = 0; tries < 64 && !paired; ++tries) {
        std::size_t i = pick(gen), j = pick(gen);
        if (i == j) continue;
        const Index u = stubs[i], v = stubs[j];
        if (u == v || adjacent(u, v)) continue;
        if (i < j) std::swap(i, j);
        stubs[i] = stubs.back();
        stubs.pop_back();
        stubs[j] = stubs.back();
        stubs.pop_back();
        adj[static_cast<std::size_t>(u)].push_back(v);
        adj[static_cast<std::size_t>(v)].push_back(u);
        edges.emplace_back(u, v);
        paired = true;
      }
      if (paired) continue;
      stuck = true;
      for (std::size_t i = 0; i < stubs.size() && stuck; ++i) {
        for (std::size_t j = i + 1; j < stubs.size(); ++j) {
          if (stubs[i] != stubs[j] && !adjacent(stubs[i], stubs[j])) {
            stuck = false;
            break;
          }
        }
      }
    }
    if (!stuck) return build_graph(n, edges);
  }
  throw ValidationError("random regular graph generation exceeded restart cap");
}

}  // namespace rfp
