// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "rfp/engine.hpp"
#include "rfp/linalg.hpp"

namespace rfp {

/// Adjacent |λ| ratios among the top k+1 above this mark a degenerate spectrum.
inline constexpr double kDegeneracyRatio = 1.0 - 1e-8;

inline constexpr double kDefaultAngleTolerance = 1e-6;

struct StepDiagnostics {
  Index step = 0;
  std::optional<double> max_principal_angle;  // absent above the oracle cap
  double eigen_residual = 0.0;                // ||S a - a diag(a^T S a)||_F
  Eigen::VectorXd per_column_cosines;         // |cos| to matched oracle vectors
};

/// Convergence of a trajectory's normalized steps toward the dominant
/// eigenvectors of its operator.
struct ConvergenceReport {
  std::vector<StepDiagnostics> per_step;
  std::optional<EigenPairs<double>> oracle;  // top min(k+1, n) pairs
  std::optional<double> oracle_gap;          // |λ_{k+1}| / |λ_k|, absent when k = n
  bool degenerate = false;
  std::optional<Index> converged_at;
  double tolerance = kDefaultAngleTolerance;
};

/// Compares every normalized step of `t` against the dense oracle. Above the
/// oracle cap only residuals are reported. Throws UnsupportedDiagnosticError
/// for unnormalized trajectories and for l2 trajectories with k > 1.
ConvergenceReport convergence_report(const PropagationOperator& op, const Trajectory& t,
                                     double tolerance = kDefaultAngleTolerance,
                                     Index oracle_cap = kOracleCap);

struct RateFit {
  double contraction = 0.0;  // e^slope of log(max angle) vs p
  Index steps_used = 0;
  bool unreliable = false;   // fitted on a degenerate spectrum
};

/// Least-squares fit of log(max principal angle) against the step index over
/// steps with angle in (1e-12, 0.5). Needs at least 5 such steps.
RateFit rate_fit(const ConvergenceReport& report);

/// Flips each column of `a` to positive correlation with the matched oracle
/// column.
FeatureBlock sign_align(const FeatureBlock& a, const EigenPairs<double>& oracle);

}  // namespace rfp
