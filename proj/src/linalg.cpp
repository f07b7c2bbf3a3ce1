// SPDX-License-Identifier: Apache-2.0
#include "rfp/linalg.hpp"

#include <string>

namespace rfp {

FeatureBlock spmm(const PropagationOperator& op, const FeatureBlock& x) {
  const auto& s = op.matrix();
  if (x.rows() != s.cols()) {
    throw DimensionError("spmm: operator is " + std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()) + " but block has " + std::to_string(x.rows()) +
                         " rows");
  }
  FeatureBlock out = FeatureBlock::Zero(s.rows(), x.cols());
  const Index* offsets = s.outerIndexPtr();
  const Index* cols = s.innerIndexPtr();
  const double* vals = s.valuePtr();
  for (Index u = 0; u < s.rows(); ++u) {
    auto row = out.row(u);
    for (Index e = offsets[u]; e < offsets[u + 1]; ++e) row.noalias() += vals[e] * x.row(cols[e]);
  }
  return out;
}

Eigen::MatrixXd dense_mirror(const PropagationOperator& op, Index cap) {
  if (op.size() > cap) {
    throw OracleCapError("operator size " + std::to_string(op.size()) + " exceeds oracle cap " +
                         std::to_string(cap));
  }
  return Eigen::MatrixXd(op.matrix());
}

}  // namespace rfp
