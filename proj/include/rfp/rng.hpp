// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>

namespace rfp {

/// Counter-based stream keyed by (seed, stream id).
///
/// The i-th draw is a pure function of (seed, stream, i): the SplitMix64
/// finalizer applied to key + (i + 1) * golden-gamma. Streams with different
/// ids are independent and can be generated in any order or in parallel.
class KeyedStream {
 public:
  using result_type = std::uint64_t;

  KeyedStream(std::uint64_t seed, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on (0, 1), never exactly 0.
  double uniform_open() noexcept;
  /// Standard normal via Box-Muller; both outputs of a pair are used.
  double normal() noexcept;
  /// Uniform on {-1, +1}.
  double rademacher() noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace rfp
