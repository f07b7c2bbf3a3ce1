// SPDX-License-Identifier: Apache-2.0
#include "rfp/diagnostics.hpp"

#include <cmath>

namespace rfp {

ConvergenceReport convergence_report(const PropagationOperator& op, const Trajectory& t,
                                     double tolerance, Index oracle_cap) {
  const RfpConfig& cfg = t.config;
  if (cfg.normalization == Normalization::None) {
    throw UnsupportedDiagnosticError("trajectory was produced without normalization");
  }
  if (cfg.normalization == Normalization::L2 && cfg.k > 1) {
    throw UnsupportedDiagnosticError("l2-normalized trajectories are only comparable for k = 1");
  }
  if (t.rows() != op.size()) throw DimensionError("trajectory and operator sizes differ");

  const Index n = op.size();
  const Index k = cfg.k;
  ConvergenceReport report;
  report.tolerance = tolerance;

  if (n <= oracle_cap) {
    report.oracle = dense_sym_eigen(dense_mirror(op, oracle_cap), std::min(k + 1, n), oracle_cap);
    const Eigen::VectorXd mags = report.oracle->values.cwiseAbs();
    for (Index i = 0; i + 1 < mags.size(); ++i) {
      const bool tied = mags[i] == 0.0 || mags[i + 1] / mags[i] > kDegeneracyRatio;
      report.degenerate = report.degenerate || tied;
    }
    if (k < n) report.oracle_gap = mags[k - 1] > 0.0 ? mags[k] / mags[k - 1] : 1.0;
  }

  for (Index p = 1; p < static_cast<Index>(t.steps.size()); ++p) {
    if (!t.normalized_at(p)) continue;
    const FeatureBlock& a = t.steps[static_cast<std::size_t>(p)];
    StepDiagnostics row;
    row.step = p;

    const FeatureBlock sa = spmm(op, a);
    const Eigen::VectorXd rayleigh = (a.transpose() * sa).diagonal();
    row.eigen_residual = (sa - a * rayleigh.asDiagonal()).norm();

    if (report.oracle) {
      const auto top = report.oracle->vectors.leftCols(k);
      const double angle = principal_angles(a, top).maxCoeff();
      row.max_principal_angle = angle;
      row.per_column_cosines = (a.transpose() * top).diagonal().cwiseAbs();
      if (!report.converged_at && angle < tolerance) report.converged_at = p;
    }
    report.per_step.push_back(std::move(row));
  }
  return report;
}

RateFit rate_fit(const ConvergenceReport& report) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  Index used = 0;
  for (const auto& row : report.per_step) {
    if (!row.max_principal_angle) continue;
    const double angle = *row.max_principal_angle;
    if (!(angle > 1e-12 && angle < 0.5)) continue;
    const double x = static_cast<double>(row.step);
    const double y = std::log(angle);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 5) {
    throw InsufficientStepsError("rate fit needs at least 5 steps with angle in (1e-12, 0.5), got " +
                                 std::to_string(used));
  }
  const double m = static_cast<double>(used);
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return RateFit{std::exp(slope), used, report.degenerate};
}

FeatureBlock sign_align(const FeatureBlock& a, const EigenPairs<double>& oracle) {
  if (a.rows() != oracle.vectors.rows() || a.cols() > oracle.vectors.cols()) {
    throw DimensionError("sign_align: shape mismatch");
  }
  FeatureBlock out = a;
  for (Index c = 0; c < out.cols(); ++c) {
    if (out.col(c).dot(oracle.vectors.col(c)) < 0.0) out.col(c) = -out.col(c);
  }
  return out;
}

}  // namespace rfp
