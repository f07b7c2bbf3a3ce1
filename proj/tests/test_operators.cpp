// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "rfp/linalg.hpp"
#include "rfp/propagation_operator.hpp"
#include "support/test_graphs.hpp"

using namespace rfp;

TEST_CASE("sym_norm_adjacency examples") {
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  const auto edge = sym_norm_adjacency(testing::single_edge());
  CHECK(edge.kind() == OperatorKind::SymNormAdjacency);
  CHECK(dense_mirror(edge) == expected);

  const Eigen::MatrixXd k3 = dense_mirror(sym_norm_adjacency(testing::complete_graph(3)));
  CHECK((k3.array() - 1.0 / 3.0).abs().maxCoeff() <= 1e-16);

  CHECK(dense_mirror(sym_norm_adjacency(build_graph(1, {}))) == Eigen::MatrixXd::Ones(1, 1));
}

TEST_CASE("sym_norm_laplacian examples") {
  Eigen::MatrixXd expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  CHECK(dense_mirror(sym_norm_laplacian(testing::single_edge())) == expected);

  const Eigen::MatrixXd k3 = dense_mirror(sym_norm_laplacian(testing::complete_graph(3)));
  const Eigen::MatrixXd ref = Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0);
  CHECK((k3 - ref).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k3).eigenvalues();
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0));
  CHECK(ev[2] == doctest::Approx(1.0));

  CHECK(dense_mirror(sym_norm_laplacian(build_graph(1, {}))) == Eigen::MatrixXd::Zero(1, 1));
}

TEST_CASE("raw_adjacency examples") {
  const Eigen::MatrixXd k3 = dense_mirror(raw_adjacency(testing::complete_graph(3)));
  CHECK(k3 == Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3));

  const Eigen::MatrixXd c4 = dense_mirror(raw_adjacency(testing::cycle_graph(4)));
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) {
      const Index off = (j - i + 4) % 4;
      CHECK(c4(i, j) == ((off == 1 || off == 3) ? 1.0 : 0.0));
    }

  const auto empty = raw_adjacency(build_graph(3, {}));
  CHECK(empty.nonzeros() == 0);
  CHECK(dense_mirror(empty) == Eigen::MatrixXd::Zero(3, 3));
}

TEST_CASE("operator invariants on random graphs") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 120)(gen);
    const double p = std::uniform_real_distribution<double>(0.0, 0.2)(gen);
    const Graph g = testing::erdos_renyi(n, p, gen);
    const Eigen::MatrixXd adj = dense_mirror(sym_norm_adjacency(g));
    const Eigen::MatrixXd lap = dense_mirror(sym_norm_laplacian(g));

    // Exact symmetry and exact complement.
    CHECK(adj == adj.transpose());
    CHECK(lap + adj == Eigen::MatrixXd::Identity(n, n));

    // Independent dense construction.
    CHECK((adj - testing::dense_sym_norm_adjacency(g)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(dense_mirror(raw_adjacency(g)) == testing::dense_adjacency(g));

    // D̃^{1/2} 1 is a fixed point of Â.
    FeatureBlock x(n, 1);
    for (Index v = 0; v < n; ++v) x(v, 0) = std::sqrt(static_cast<double>(g.degree(v) + 1));
    CHECK((spmm(sym_norm_adjacency(g), x) - x).cwiseAbs().maxCoeff() <= 1e-12 * x.cwiseAbs().maxCoeff());

    // Spectra inside [-1, 1] and [0, 2].
    const Eigen::VectorXd ea = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(adj).eigenvalues();
    CHECK(ea.minCoeff() >= -1.0 - 1e-12);
    CHECK(ea.maxCoeff() <= 1.0 + 1e-12);
    const Eigen::VectorXd el = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(lap).eigenvalues();
    CHECK(el.minCoeff() >= -1e-12);
    CHECK(el.maxCoeff() <= 2.0 + 1e-12);
  }
}

TEST_CASE("explicit operators") {
  Eigen::VectorXd d(3);
  d << 1.0, 0.5, -0.25;
  const auto op = PropagationOperator::diagonal(d);
  CHECK(op.kind() == OperatorKind::Explicit);
  CHECK(dense_mirror(op) == Eigen::MatrixXd(d.asDiagonal()));

  Eigen::MatrixXd asym(2, 2);
  asym << 1, 2, 3, 4;
  CHECK_THROWS_AS(PropagationOperator::from_dense(asym), AsymmetryError);
  CHECK_THROWS_AS(dense_mirror(op, 2), OracleCapError);
}
