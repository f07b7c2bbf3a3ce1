// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rfp/graph.hpp"
#include "rfp/linalg.hpp"
#include "rfp/propagation_operator.hpp"

namespace rfp {

/// Randomized estimate of trace(S^P).
struct TraceEstimate {
  double value = 0.0;  // mean of per_sample
  Index samples = 0;
  std::vector<double> per_sample;
  Index power = 0;
  OperatorKind operator_kind = OperatorKind::RawAdjacency;
  std::optional<double> exact;
};

struct CountResult {
  double estimate = 0.0;
  std::vector<double> per_sample;  // T_i, one per probe
  std::optional<std::int64_t> exact;
  std::optional<double> epsilon;
  std::optional<double> delta;
  Index m_used = 0;
  std::optional<Index> m_required;
  std::optional<double> rho;
  std::optional<Index> rank;
  std::optional<std::string> warning;
};

/// Rademacher probe i of a counting run; identical to the initial block of
/// trajectory i in an RFP run with the same seed, k = 1 and Rademacher init.
FeatureBlock rademacher_probe(Index n, std::uint64_t seed, Index i);

/// Hutchinson estimate (1/M) Σ z_i^T S^P z_i. Each probe costs P sparse
/// products; S^P is never formed.
TraceEstimate hutchinson_trace(const PropagationOperator& op, Index power, Index samples,
                               std::uint64_t seed, unsigned workers = 1);

/// Monte Carlo triangle count (1/M) Σ (A r_i)^T A (A r_i) / 6, evaluated as
/// dot(a^(1), a^(2)) of unnormalized propagation trajectories over A.
CountResult triangle_estimate(const Graph& g, Index samples, std::uint64_t seed,
                              unsigned workers = 1);

/// Triangle count by sorted-neighbor intersection.
std::int64_t triangle_enumerate(const Graph& g);

/// Exact triangle count. Under the oracle cap trace(A^3)/6 is also computed
/// and must agree with enumeration (InternalConsistencyError otherwise).
std::int64_t triangle_exact(const Graph& g, Index oracle_cap = kOracleCap);

/// Exact 4-cycle count (trace(A^4) + trace(A^2) - 2 Σ deg^2) / 8.
std::int64_t quadrangle_exact(const Graph& g, Index oracle_cap = kOracleCap);

/// trace(A^P) in exact 64-bit integer arithmetic. Throws IntegerOverflowError
/// when n * maxdeg^P could exceed the int64 range.
std::int64_t closed_walks(const Graph& g, Index length, Index oracle_cap = kOracleCap);

/// Smallest M with M >= 6 ε^-2 ρ^2 ln(2 rank / δ).
Index required_samples(double epsilon, double delta, double rho, Index rank);

/// Σ|λ_i^P| / Σ λ_i^P over the dense spectrum of S.
double spectral_rho(const PropagationOperator& op, Index power, Index oracle_cap = kOracleCap);

/// Numerical rank of S^P: eigenvalues with |λ|^P above 1e-8.
Index spectral_rank(const PropagationOperator& op, Index power, Index oracle_cap = kOracleCap);

/// Triangle estimate with the sample count needed for an (ε, δ) relative
/// guarantee. When the graph has no triangles the guarantee does not apply:
/// a warning is attached and `fallback_samples` probes are used.
CountResult count_with_guarantee(const Graph& g, double epsilon, double delta, std::uint64_t seed,
                                 Index fallback_samples = 1000, unsigned workers = 1,
                                 Index oracle_cap = kOracleCap);

}  // namespace rfp
