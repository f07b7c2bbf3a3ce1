// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "rfp/graph.hpp"

namespace rfp::cli {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Process exit codes. Scripts depend on these values.
enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kNumeric = 4,
  kNotConverged = 5,
  kOracleCapExceeded = 6,
};

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRow {
  Index nodes = 0;
  Index edges = 0;
  Index degree = 0;
  double seconds = 0.0;            // best of the repeats, all steps
  double seconds_per_step_edge = 0.0;
};

/// Times `steps` chained sparse products of the normalized adjacency of a
/// random d-regular graph against an n x k block; best of `repeats`.
BenchRow bench_propagation(Index n, Index d, Index k, Index steps, int repeats, std::uint64_t seed);

}  // namespace rfp::cli
