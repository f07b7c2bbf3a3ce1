// SPDX-License-Identifier: Apache-2.0
#include "rfp/trace_counting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "rfp/engine.hpp"

namespace rfp {

namespace {

// Runs body(i) for i in [0, count) on up to `workers` threads. Each index
// writes only its own output slot, so results do not depend on scheduling.
template <typename Body>
void parallel_for(Index count, unsigned workers, Body body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || count < 2) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index i = next++; i < count; i = next++) body(i);
    });
  }
}

RfpConfig probe_config(Index samples, std::uint64_t seed, Index steps) {
  RfpConfig cfg;
  cfg.k = 1;
  cfg.steps = steps;
  cfg.norm_every = 1;
  cfg.normalization = Normalization::None;
  cfg.distribution = Distribution::Rademacher;
  cfg.seed = seed;
  cfg.trajectories = samples;
  return cfg;
}

double sum_in_order(const std::vector<double>& values) {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

Eigen::MatrixXd dense_adjacency(const Graph& g, Index oracle_cap) {
  return dense_mirror(raw_adjacency(g), oracle_cap);
}

std::int64_t to_exact_integer(double raw, const char* what) {
  const double rounded = std::round(raw);
  if (std::abs(rounded - raw) > 1e-6) {
    throw InternalConsistencyError(std::string(what) + ": non-integer intermediate " +
                                   std::to_string(raw));
  }
  return static_cast<std::int64_t>(rounded);
}

Eigen::VectorXd full_spectrum(const PropagationOperator& op, Index oracle_cap) {
  return dense_sym_eigen(dense_mirror(op, oracle_cap), op.size(), oracle_cap).values;
}

struct PowerSpectrum {
  double abs_sum = 0.0;
  double trace = 0.0;
  Index rank = 0;
};

PowerSpectrum power_spectrum(const Eigen::VectorXd& lambda, Index power) {
  PowerSpectrum s;
  for (double l : lambda) {
    const double lp = std::pow(l, static_cast<double>(power));
    s.abs_sum += std::abs(lp);
    s.trace += lp;
    if (std::abs(lp) > 1e-8) ++s.rank;
  }
  return s;
}

}  // namespace

FeatureBlock rademacher_probe(Index n, std::uint64_t seed, Index i) {
  return sample_init(probe_config(i + 1, seed, 1), n, i);
}

TraceEstimate hutchinson_trace(const PropagationOperator& op, Index power, Index samples,
                               std::uint64_t seed, unsigned workers) {
  if (power < 1) throw DomainError("hutchinson_trace: power must be at least 1");
  if (samples < 1) throw DomainError("hutchinson_trace: need at least one sample");
  const RfpConfig cfg = probe_config(samples, seed, power);
  cfg.validate_for(op.size());

  TraceEstimate est;
  est.samples = samples;
  est.power = power;
  est.operator_kind = op.kind();
  est.per_sample.assign(static_cast<std::size_t>(samples), 0.0);
  parallel_for(samples, workers, [&](Index i) {
    const FeatureBlock z = sample_init(cfg, op.size(), i);
    FeatureBlock x = z;
    for (Index p = 0; p < power; ++p) x = spmm(op, x);
    est.per_sample[static_cast<std::size_t>(i)] = z.col(0).dot(x.col(0));
  });
  est.value = sum_in_order(est.per_sample) / static_cast<double>(samples);
  return est;
}

CountResult triangle_estimate(const Graph& g, Index samples, std::uint64_t seed,
                              unsigned workers) {
  if (samples < 1) throw DomainError("triangle_estimate: need at least one sample");
  const PropagationOperator adjacency = raw_adjacency(g);
  const RfpConfig cfg = probe_config(samples, seed, 2);
  cfg.validate_for(adjacency.size());

  std::vector<double> raw(static_cast<std::size_t>(samples), 0.0);
  parallel_for(samples, workers, [&](Index b) {
    const Trajectory t = run_trajectory(adjacency, cfg, b);
    raw[static_cast<std::size_t>(b)] = t.steps[1].col(0).dot(t.steps[2].col(0));
  });

  CountResult result;
  result.m_used = samples;
  // Same accumulation as hutchinson_trace(A, 3, M, seed); the sums are exact
  // integers, so estimate == H_M(A^3) / 6 holds bitwise.
  result.estimate = (sum_in_order(raw) / static_cast<double>(samples)) / 6.0;
  result.per_sample.reserve(raw.size());
  for (double r : raw) result.per_sample.push_back(r / 6.0);
  return result;
}

std::int64_t triangle_enumerate(const Graph& g) {
  std::int64_t count = 0;
  for (Index u = 0; u < g.num_nodes(); ++u) {
    const auto nu = g.neighbors(u);
    for (Index v : nu) {
      if (v <= u) continue;
      const auto nv = g.neighbors(v);
      // Common neighbors w > v of u and v.
      auto a = std::upper_bound(nu.begin(), nu.end(), v);
      auto b = std::upper_bound(nv.begin(), nv.end(), v);
      while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++count;
          ++a;
          ++b;
        }
      }
    }
  }
  return count;
}

std::int64_t triangle_exact(const Graph& g, Index oracle_cap) {
  const std::int64_t enumerated = triangle_enumerate(g);
  if (g.num_nodes() > oracle_cap) return enumerated;
  const Eigen::MatrixXd a = dense_adjacency(g, oracle_cap);
  const Eigen::MatrixXd a2 = a * a;
  const double trace3 = a2.cwiseProduct(a).sum();
  const std::int64_t from_trace = to_exact_integer(trace3 / 6.0, "triangle_exact");
  if (from_trace != enumerated) {
    throw InternalConsistencyError("triangle_exact: trace(A^3)/6 = " + std::to_string(from_trace) +
                                   " but enumeration found " + std::to_string(enumerated));
  }
  return enumerated;
}

std::int64_t quadrangle_exact(const Graph& g, Index oracle_cap) {
  const Eigen::MatrixXd a = dense_adjacency(g, oracle_cap);
  const Eigen::MatrixXd a2 = a * a;
  const double trace4 = a2.squaredNorm();
  const double trace2 = a2.trace();
  double deg_sq = 0.0;
  for (Index v = 0; v < g.num_nodes(); ++v) {
    const auto d = static_cast<double>(g.degree(v));
    deg_sq += d * d;
  }
  return to_exact_integer((trace4 + trace2 - 2.0 * deg_sq) / 8.0, "quadrangle_exact");
}

std::int64_t closed_walks(const Graph& g, Index length, Index oracle_cap) {
  if (length < 1) throw DomainError("closed_walks: length must be at least 1");
  const Index n = g.num_nodes();
  if (n > oracle_cap) {
    throw OracleCapError("closed_walks: graph size " + std::to_string(n) + " exceeds oracle cap");
  }
  Index max_deg = 0;
  for (Index v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  const long double bound = static_cast<long double>(n) *
                            std::pow(static_cast<long double>(max_deg), static_cast<long double>(length));
  if (bound > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 2)) {
    throw IntegerOverflowError("closed_walks: trace(A^" + std::to_string(length) +
                               ") may exceed the 64-bit integer range");
  }
  using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
  IntMatrix a = IntMatrix::Zero(n, n);
  for (Index u = 0; u < n; ++u)
    for (Index v : g.neighbors(u)) a(u, v) = 1;
  if (length == 1) return 0;
  IntMatrix power = a;
  for (Index p = 2; p < length; ++p) power = (power * a).eval();
  // trace(A^{P-1} A) without forming the last product.
  return power.cwiseProduct(a.transpose()).sum();
}

Index required_samples(double epsilon, double delta, double rho, Index rank) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(rho >= 1.0 - 1e-12) || !std::isfinite(rho)) throw DomainError("rho must be at least 1");
  if (rank < 1) throw DomainError("rank must be at least 1");
  rho = std::max(rho, 1.0);
  const double bound = 6.0 / (epsilon * epsilon) * rho * rho *
                       std::log(2.0 * static_cast<double>(rank) / delta);
  return static_cast<Index>(std::ceil(bound));
}

double spectral_rho(const PropagationOperator& op, Index power, Index oracle_cap) {
  if (power < 1) throw DomainError("spectral_rho: power must be at least 1");
  const PowerSpectrum s = power_spectrum(full_spectrum(op, oracle_cap), power);
  if (!(std::abs(s.trace) > 1e-10)) {
    throw UndefinedRhoError("spectral_rho: trace of S^" + std::to_string(power) + " is zero");
  }
  return s.abs_sum / s.trace;
}

Index spectral_rank(const PropagationOperator& op, Index power, Index oracle_cap) {
  return power_spectrum(full_spectrum(op, oracle_cap), power).rank;
}

CountResult count_with_guarantee(const Graph& g, double epsilon, double delta, std::uint64_t seed,
                                 Index fallback_samples, unsigned workers, Index oracle_cap) {
  if (g.num_nodes() > oracle_cap) {
    throw OracleCapError("guaranteed counting needs the dense spectrum; graph exceeds oracle cap");
  }
  // Validate the accuracy pair before any work.
  required_samples(epsilon, delta, 1.0, 1);
  const std::int64_t exact = triangle_exact(g, oracle_cap);
  CountResult result;
  if (exact == 0) {
    result = triangle_estimate(g, fallback_samples, seed, workers);
    result.warning = "graph has no triangles; relative (epsilon, delta) guarantee does not apply";
  } else {
    const PropagationOperator adjacency = raw_adjacency(g);
    const PowerSpectrum s = power_spectrum(full_spectrum(adjacency, oracle_cap), 3);
    const double rho = s.abs_sum / s.trace;
    const Index rank = s.rank;
    const Index m = required_samples(epsilon, delta, rho, rank);
    result = triangle_estimate(g, m, seed, workers);
    result.m_required = m;
    result.rho = rho;
    result.rank = rank;
  }
  result.exact = exact;
  result.epsilon = epsilon;
  result.delta = delta;
  return result;
}

}  // namespace rfp
