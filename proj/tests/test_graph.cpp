// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <sstream>

#include "rfp/errors.hpp"
#include "rfp/graph.hpp"
#include "support/test_graphs.hpp"

using namespace rfp;

namespace {

Graph parse(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

void check_csr_invariants(const Graph& g) {
  const auto offsets = g.row_offsets();
  REQUIRE(offsets.size() == static_cast<std::size_t>(g.num_nodes()) + 1);
  CHECK(offsets.back() == 2 * g.num_edges());
  for (Index u = 0; u < g.num_nodes(); ++u) {
    const auto row = g.neighbors(u);
    for (std::size_t i = 0; i < row.size(); ++i) {
      CHECK(row[i] != u);
      if (i > 0) CHECK(row[i - 1] < row[i]);
      CHECK(g.has_edge(row[i], u));
    }
  }
}

}  // namespace

TEST_CASE("load_edge_list reads a path") {
  const Graph g = parse("0 1\n1 2\n");
  CHECK(g.num_nodes() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 1));
  CHECK_FALSE(g.has_edge(0, 2));
}

TEST_CASE("load_edge_list collapses duplicates and orientations") {
  const Graph g = parse("0 1\n1 0\n0 1\n");
  CHECK(g.num_nodes() == 2);
  CHECK(g.num_edges() == 1);
}

TEST_CASE("load_edge_list skips comments and blank lines, honours the n header") {
  const Graph g = parse("# a comment\n\nn 5\n0 1\n  \n# another\n3 4\n");
  CHECK(g.num_nodes() == 5);
  CHECK(g.num_edges() == 2);
  CHECK(g.degree(2) == 0);
}

TEST_CASE("load_edge_list errors") {
  CHECK_THROWS_AS(parse("0 0\n"), ValidationError);
  CHECK_THROWS_AS(parse("n 3\n0 3\n"), BoundsError);
  try {
    parse("0 1\n1 two\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse("0 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse("7\n"), ParseError);
  CHECK_THROWS_AS(parse("-1 2\n"), ParseError);
}

TEST_CASE("build_graph examples") {
  const Graph k3 = testing::complete_graph(3);
  for (Index v = 0; v < 3; ++v) CHECK(k3.degree(v) == 2);

  const Graph c4 = build_graph(4, testing::EdgeList{{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  CHECK(c4.num_edges() == 4);
  CHECK(c4.has_edge(3, 0));
  CHECK_FALSE(c4.has_edge(0, 2));

  const Graph empty = build_graph(2, {});
  CHECK(empty.num_nodes() == 2);
  CHECK(empty.num_edges() == 0);

  CHECK_THROWS_AS(build_graph(3, testing::EdgeList{{0, 3}}), BoundsError);
  CHECK_THROWS_AS(build_graph(3, testing::EdgeList{{1, 1}}), ValidationError);
}

TEST_CASE("degrees") {
  CHECK(degrees(testing::complete_graph(3)) == Eigen::VectorX<Index>::Constant(3, 2));
  Eigen::VectorX<Index> path(3);
  path << 1, 2, 1;
  CHECK(degrees(testing::path_graph(3)) == path);
  CHECK(degrees(build_graph(2, {})) == Eigen::VectorX<Index>::Zero(2));
}

TEST_CASE("CSR invariants hold on random edge soups") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 40)(gen);
    std::uniform_int_distribution<Index> node(0, n - 1);
    testing::EdgeList edges;
    std::set<std::pair<Index, Index>> distinct;
    for (int i = 0; i < 3 * n; ++i) {
      const Index u = node(gen), v = node(gen);
      if (u == v) continue;
      edges.emplace_back(u, v);
      distinct.emplace(std::min(u, v), std::max(u, v));
    }
    const Graph g = build_graph(n, edges);
    CHECK(g.num_edges() == static_cast<Index>(distinct.size()));
    check_csr_invariants(g);
  }
}

TEST_CASE("random_regular_graph is simple and regular") {
  for (Index d : {3, 4, 8}) {
    const Graph g = random_regular_graph(200, d, 5);
    CHECK(g.num_edges() == 100 * d);
    for (Index v = 0; v < g.num_nodes(); ++v) CHECK(g.degree(v) == d);
    check_csr_invariants(g);
  }
  CHECK(random_regular_graph(50, 4, 9).row_offsets().size() == 51);
  CHECK_THROWS_AS(random_regular_graph(5, 3, 0), ValidationError);
  CHECK_THROWS_AS(random_regular_graph(4, 4, 0), ValidationError);
}
