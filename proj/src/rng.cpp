// SPDX-License-Identifier: Apache-2.0
#include "rfp/rng.hpp"

#include <cmath>
#include <numbers>

namespace rfp {

namespace {
constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(splitmix64(seed) ^ (stream * kGamma + 0x632BE59BD9B4E019ULL))) {}

KeyedStream::result_type KeyedStream::operator()() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * kGamma);
}

double KeyedStream::uniform_open() noexcept {
  // 53 random bits, shifted by half an ulp so the result lies in (0, 1).
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double KeyedStream::normal() noexcept {
  // std::normal_distribution is implementation-defined; exported features
  // must match bit for bit across standard libraries.
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  const double angle = 2.0 * std::numbers::pi * uniform_open();
  cached_normal_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

double KeyedStream::rademacher() noexcept { return ((*this)() >> 63) != 0 ? 1.0 : -1.0; }

}  // namespace rfp
