// SPDX-License-Identifier: Apache-2.0
#include "rfp/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "rfp/rng.hpp"

namespace rfp {

std::string_view to_string(Normalization n) {
  switch (n) {
    case Normalization::L2: return "l2";
    case Normalization::QR: return "qr";
    case Normalization::None: return "none";
  }
  return "unknown";
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::StandardNormal: return "normal";
    case Distribution::Rademacher: return "rademacher";
  }
  return "unknown";
}

void RfpConfig::validate() const {
  if (k < 1) throw ConfigError("k must be at least 1");
  if (steps < 1) throw ConfigError("number of propagation steps must be at least 1");
  if (norm_every < 1) throw ConfigError("normalization frequency must be at least 1");
  if (trajectories < 1) throw ConfigError("number of trajectories must be at least 1");
}

void RfpConfig::validate_for(Index n) const {
  validate();
  if (n < 1) throw ConfigError("operator has no nodes");
  if (normalization == Normalization::QR && k > n) {
    throw ConfigError("k=" + std::to_string(k) + " exceeds node count " + std::to_string(n) +
                      " under QR normalization");
  }
}

FeatureBlock Trajectory::concat() const {
  const Index k = config.k;
  FeatureBlock out(rows(), width());
  for (std::size_t p = 0; p < steps.size(); ++p) {
    out.middleCols(static_cast<Index>(p) * k, k) = steps[p];
  }
  return out;
}

FeatureBlock sample_init(const RfpConfig& cfg, Index n, Index b) {
  cfg.validate_for(n);
  if (b < 0 || b >= cfg.trajectories) throw ConfigError("trajectory index out of range");
  KeyedStream stream(cfg.seed, static_cast<std::uint64_t>(b));
  FeatureBlock r(n, cfg.k);
  double* data = r.data();
  const Index count = r.size();
  if (cfg.distribution == Distribution::Rademacher) {
    for (Index i = 0; i < count; ++i) data[i] = stream.rademacher();
  } else {
    for (Index i = 0; i < count; ++i) data[i] = stream.normal();
  }
  return r;
}

FeatureBlock rfp_step(const PropagationOperator& op, const FeatureBlock& a_prev, Index p,
                      const RfpConfig& cfg) {
  FeatureBlock propagated = spmm(op, a_prev);
  if (p % cfg.norm_every != 0) return propagated;
  switch (cfg.normalization) {
    case Normalization::L2: return normalize_l2(propagated);
    case Normalization::QR: return normalize_qr(propagated, cfg.rank_deficiency);
    case Normalization::None: break;
  }
  return propagated;
}

Trajectory run_trajectory(const PropagationOperator& op, const RfpConfig& cfg, Index b) {
  Trajectory t;
  t.config = cfg;
  t.index = b;
  t.steps.reserve(static_cast<std::size_t>(cfg.steps) + 1);
  t.steps.push_back(sample_init(cfg, op.size(), b));
  for (Index p = 1; p <= cfg.steps; ++p) {
    FeatureBlock next = rfp_step(op, t.steps.back(), p, cfg);
    if (!next.allFinite()) throw NumericOverflowError(static_cast<std::size_t>(p));
    t.steps.push_back(std::move(next));
  }
  return t;
}

TrajectorySet run_trajectory_set(const PropagationOperator& op, const RfpConfig& cfg,
                                 unsigned workers) {
  cfg.validate_for(op.size());
  const auto count = static_cast<std::size_t>(cfg.trajectories);
  TrajectorySet set;
  set.config = cfg;
  set.trajectories.resize(count);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t b = 0; b < count; ++b) {
      set.trajectories[b] = run_trajectory(op, cfg, static_cast<Index>(b));
    }
    return set;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t b = next++; b < count; b = next++) {
          try {
            set.trajectories[b] = run_trajectory(op, cfg, static_cast<Index>(b));
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return set;
}

FeatureBlock assemble_features(const std::optional<FeatureBlock>& f_in, const TrajectorySet& t) {
  Index n = 0;
  if (!t.trajectories.empty()) {
    n = t.trajectories.front().rows();
  } else if (f_in) {
    n = f_in->rows();
  }
  const Index c_in = f_in ? f_in->cols() : 0;
  if (f_in && f_in->rows() != n) {
    throw DimensionError("input features have " + std::to_string(f_in->rows()) +
                         " rows but trajectories have " + std::to_string(n));
  }
  Index width = c_in;
  for (const auto& traj : t.trajectories) {
    if (traj.rows() != n) throw DimensionError("trajectories disagree on row count");
    width += traj.width();
  }
  FeatureBlock out(n, width);
  if (f_in) out.leftCols(c_in) = *f_in;
  Index col = c_in;
  for (const auto& traj : t.trajectories) {
    out.middleCols(col, traj.width()) = traj.concat();
    col += traj.width();
  }
  return out;
}

}  // namespace rfp
