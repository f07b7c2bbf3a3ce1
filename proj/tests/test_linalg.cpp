// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <numbers>
#include <random>

#include "rfp/linalg.hpp"
#include "support/test_graphs.hpp"

using namespace rfp;

namespace {

FeatureBlock gaussian_block(Index n, Index k, std::mt19937_64& gen) {
  std::normal_distribution<double> normal;
  FeatureBlock x(n, k);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = normal(gen);
  return x;
}

FeatureBlock column(std::initializer_list<double> values) {
  FeatureBlock x(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) x(i++, 0) = v;
  return x;
}

double orthonormality_error(const Eigen::MatrixXd& q) {
  return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("spmm examples") {
  CHECK(spmm(sym_norm_adjacency(build_graph(1, {})), column({3.0})) == column({3.0}));
  CHECK(spmm(sym_norm_adjacency(testing::single_edge()), column({1.0, -1.0})) == column({0.0, 0.0}));
  CHECK(spmm(raw_adjacency(testing::complete_graph(3)), column({1, 1, 1})) == column({2, 2, 2}));
  CHECK_THROWS_AS(spmm(raw_adjacency(testing::complete_graph(3)), column({1, 1})), DimensionError);
}

TEST_CASE("spmm matches the dense mirror on random graphs") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 200)(gen);
    const Graph g = testing::erdos_renyi(n, 0.05, gen);
    const FeatureBlock x = gaussian_block(n, 3, gen);
    for (const auto& op : {sym_norm_adjacency(g), sym_norm_laplacian(g), raw_adjacency(g)}) {
      const FeatureBlock dense = dense_mirror(op) * x;
      CHECK((spmm(op, x) - dense).cwiseAbs().maxCoeff() <= 1e-12 * x.cwiseAbs().maxCoeff());
    }
  }
}

TEST_CASE("normalize_l2 examples") {
  const FeatureBlock out = normalize_l2(column({3.0, 4.0}));
  CHECK(out(0, 0) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(out(1, 0) == doctest::Approx(0.8).epsilon(1e-15));

  const FeatureBlock unit = column({0.6, 0.8});
  CHECK((normalize_l2(unit) - unit).cwiseAbs().maxCoeff() <= 1e-15);

  FeatureBlock two(2, 2);
  two << 1.0, 0.0, 1.0, 0.0;
  try {
    normalize_l2(two);
    FAIL("expected a degenerate column");
  } catch (const DegenerateColumnError& e) {
    CHECK(e.column() == 1);
  }
}

TEST_CASE("normalize_qr examples") {
  FeatureBlock x(3, 2);
  x << 2, 0, 0, 3, 0, 0;
  FeatureBlock expected(3, 2);
  expected << 1, 0, 0, 1, 0, 0;
  CHECK((normalize_qr(x) - expected).cwiseAbs().maxCoeff() <= 1e-15);

  std::mt19937_64 gen(4);
  const FeatureBlock q = normalize_qr(gaussian_block(7, 3, gen));
  CHECK((normalize_qr(q) - q).cwiseAbs().maxCoeff() <= 1e-12);

  FeatureBlock rank1(2, 2);
  rank1 << 1, 2, 1, 2;
  try {
    normalize_qr(rank1);
    FAIL("expected rank collapse");
  } catch (const RankCollapseError& e) {
    CHECK(e.column() == 1);
  }
}

TEST_CASE("normalize_qr completes the basis when asked") {
  FeatureBlock rank1(3, 2);
  rank1 << 1, 2, 1, 2, 1, 2;
  const FeatureBlock q = normalize_qr(rank1, RankDeficiency::Complete);
  CHECK(orthonormality_error(q) <= 1e-12);
  // The input still lies in the span of the output.
  CHECK((rank1 - q * (q.transpose() * rank1)).norm() <= 1e-12 * rank1.norm());
}

TEST_CASE("normalize_qr properties on random full-rank blocks") {
  std::mt19937_64 gen(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 100)(gen);
    const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(16, n))(gen);
    const FeatureBlock x = gaussian_block(n, k, gen);
    const FeatureBlock q = normalize_qr(x);
    CHECK(orthonormality_error(q) <= 1e-10);
    CHECK((x - q * (q.transpose() * x)).norm() <= 1e-8 * x.norm());
    // Non-negative R diagonal: R = Q^T x is upper triangular with R_jj >= 0.
    const Eigen::MatrixXd r = q.transpose() * x;
    for (Index j = 0; j < k; ++j) CHECK(r(j, j) >= 0.0);
    CHECK((normalize_qr(q) - q).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("dense_sym_eigen examples") {
  const Eigen::Vector3d d(3, 1, 2);
  const auto diag = dense_sym_eigen(Eigen::MatrixXd(d.asDiagonal()), 3);
  CHECK(diag.values == Eigen::Vector3d(3, 2, 1));
  Eigen::Matrix3d perm;
  perm << 1, 0, 0, 0, 0, 1, 0, 1, 0;
  CHECK((diag.vectors - perm).cwiseAbs().maxCoeff() <= 1e-15);

  const auto k3 = dense_sym_eigen(Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0), 1);
  CHECK(k3.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((k3.vectors.col(0) - Eigen::Vector3d::Constant(1.0 / std::sqrt(3.0))).cwiseAbs().maxCoeff() <= 1e-14);

  // C4 spectrum is (2, -2, 0, 0): characteristic polynomial x^2 (x^2 - 4).
  const auto c4 = dense_sym_eigen(dense_mirror(raw_adjacency(testing::cycle_graph(4))), 4);
  CHECK(c4.values[0] == doctest::Approx(2.0));
  CHECK(c4.values[1] == doctest::Approx(-2.0));
  CHECK(std::abs(c4.values[2]) <= 1e-12);
  CHECK(std::abs(c4.values[3]) <= 1e-12);
}

TEST_CASE("dense_sym_eigen errors") {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(3, 3);
  asym(0, 1) = 1e-6;
  CHECK_THROWS_AS(dense_sym_eigen(asym, 1), AsymmetryError);
  CHECK_THROWS_AS(dense_sym_eigen(Eigen::MatrixXd::Identity(5, 5), 1, 4), OracleCapError);
}

TEST_CASE("dense_sym_eigen agrees with an independent solver") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(1, 60)(gen);
    Eigen::MatrixXd m = Eigen::MatrixXd(gaussian_block(n, n, gen));
    m = (m + m.transpose()).eval();
    const auto pairs = dense_sym_eigen(m, n);

    CHECK(orthonormality_error(pairs.vectors) <= 1e-10);
    const Eigen::MatrixXd recon = pairs.vectors * pairs.values.asDiagonal() * pairs.vectors.transpose();
    CHECK((m - recon).norm() <= 1e-8 * m.norm());
    for (Index i = 0; i < n; ++i) {
      const double lambda = pairs.values[i];
      CHECK((m * pairs.vectors.col(i) - lambda * pairs.vectors.col(i)).norm() <=
            1e-8 * std::max(1.0, std::abs(lambda)));
      if (i > 0) CHECK(std::abs(pairs.values[i - 1]) >= std::abs(lambda));
      for (Index r = 0; r < n; ++r) {
        if (std::abs(pairs.vectors(r, i)) > 1e-12) {
          CHECK(pairs.vectors(r, i) > 0.0);
          break;
        }
      }
    }

    Eigen::VectorXd reference = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues();
    Eigen::VectorXd ours = pairs.values;
    std::sort(reference.begin(), reference.end());
    std::sort(ours.begin(), ours.end());
    CHECK((reference - ours).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, m.norm()));
  }
}

TEST_CASE("principal_angles examples") {
  std::mt19937_64 gen(2);
  const Eigen::MatrixXd u = testing::random_orthonormal(10, 3, gen);
  CHECK(principal_angles(u, u).maxCoeff() <= 1e-7);
  CHECK(principal_angles(u, (-u).eval()).maxCoeff() <= 1e-7);

  const Eigen::Vector2d e0(1, 0), e1(0, 1);
  CHECK(principal_angles(e0, e1)[0] == doctest::Approx(std::numbers::pi / 2));

  CHECK_THROWS_AS(principal_angles(Eigen::Vector2d(1, 1), e1), DomainError);
}

TEST_CASE("principal_angles properties") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(2, 30)(gen);
    const Index k = std::uniform_int_distribution<Index>(1, n)(gen);
    const Eigen::MatrixXd u = testing::random_orthonormal(n, k, gen);
    const Eigen::MatrixXd v = testing::random_orthonormal(n, k, gen);
    const Eigen::VectorXd a = principal_angles(u, v);
    const Eigen::VectorXd b = principal_angles(v, u);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.maxCoeff() <= std::numbers::pi / 2);
    for (Index i = 1; i < k; ++i) CHECK(a[i - 1] <= a[i]);
  }

  // Small known angle in the plane: resolved well below the acos floor.
  const double theta = 3e-9;
  const Eigen::Vector2d u(1, 0), v(std::cos(theta), std::sin(theta));
  CHECK(principal_angles(u, v)[0] == doctest::Approx(theta).epsilon(1e-6));
}

TEST_CASE("dense_mirror examples") {
  CHECK(dense_mirror(sym_norm_adjacency(testing::single_edge())) == Eigen::MatrixXd::Constant(2, 2, 0.5));
  CHECK(dense_mirror(raw_adjacency(build_graph(4, {}))) == Eigen::MatrixXd::Zero(4, 4));
  const Eigen::MatrixXd lap = dense_mirror(sym_norm_laplacian(testing::complete_graph(3)));
  CHECK((lap - (Eigen::MatrixXd::Identity(3, 3) - Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0)))
            .cwiseAbs()
            .maxCoeff() <= 1e-15);
}
