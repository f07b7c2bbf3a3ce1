// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rfp/linalg.hpp"
#include "rfp/propagation_operator.hpp"

namespace rfp {

enum class Normalization { L2, QR, None };
enum class Distribution { StandardNormal, Rademacher };

std::string_view to_string(Normalization n);
std::string_view to_string(Distribution d);

/// Parameters of a random feature propagation run.
struct RfpConfig {
  Index k = 1;            // channels per trajectory
  Index steps = 1;        // propagation steps P
  Index norm_every = 1;   // normalization frequency w
  Normalization normalization = Normalization::QR;
  Distribution distribution = Distribution::StandardNormal;
  std::uint64_t seed = 0;
  Index trajectories = 1;  // B
  /// QR steps on rank-deficient operators either fail or keep the completed
  /// Householder basis.
  RankDeficiency rank_deficiency = RankDeficiency::Complete;

  /// Throws ConfigError on k < 1, P < 1, w < 1 or B < 1.
  void validate() const;
  /// validate() plus the run-time constraints against an n-node operator.
  void validate_for(Index n) const;
};

/// Propagation history r, a^(1), ..., a^(P) of one random start.
struct Trajectory {
  std::vector<FeatureBlock> steps;
  RfpConfig config;
  Index index = 0;

  Index rows() const { return steps.empty() ? 0 : steps.front().rows(); }
  Index width() const { return static_cast<Index>(steps.size()) * config.k; }

  /// Channel-wise concatenation r ⊕ a^(1) ⊕ ... ⊕ a^(P), n x k(P+1).
  FeatureBlock concat() const;

  /// Whether normalization was applied at step p.
  bool normalized_at(Index p) const {
    return p >= 1 && config.normalization != Normalization::None && p % config.norm_every == 0;
  }
};

/// B trajectories, ordered by trajectory index.
struct TrajectorySet {
  std::vector<Trajectory> trajectories;
  RfpConfig config;
};

/// Initial n x k block for trajectory b. Entries depend only on
/// (cfg.seed, b, cfg.distribution); the stream is filled row-major.
FeatureBlock sample_init(const RfpConfig& cfg, Index n, Index b);

/// One propagate-normalize step: S a_prev, normalized when p % w == 0.
FeatureBlock rfp_step(const PropagationOperator& op, const FeatureBlock& a_prev, Index p,
                      const RfpConfig& cfg);

Trajectory run_trajectory(const PropagationOperator& op, const RfpConfig& cfg, Index b);

/// Runs all B trajectories on up to `workers` threads (0 = hardware
/// concurrency). The result is bitwise identical for any worker count.
TrajectorySet run_trajectory_set(const PropagationOperator& op, const RfpConfig& cfg,
                                 unsigned workers = 0);

/// [f_in | t_1 | ... | t_B], width c_in + B k (P+1).
FeatureBlock assemble_features(const std::optional<FeatureBlock>& f_in, const TrajectorySet& t);

}  // namespace rfp
