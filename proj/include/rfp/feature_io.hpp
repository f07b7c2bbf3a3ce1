// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rfp/linalg.hpp"

namespace rfp::io {

/// RFPF layout: "RFPF", u32 version, u64 n, u64 d, then n*d row-major f64,
/// all little-endian.
inline constexpr char kRfpfMagic[4] = {'R', 'F', 'P', 'F'};
inline constexpr std::uint32_t kRfpfVersion = 1;
inline constexpr std::size_t kRfpfHeaderSize = 24;

std::vector<unsigned char> encode_rfpf(const FeatureBlock& x);
FeatureBlock decode_rfpf(std::span<const unsigned char> bytes);

/// CSV with header "node,c0,c1,..." and shortest round-trip decimals.
std::string encode_csv(const FeatureBlock& x);
FeatureBlock decode_csv(std::string_view text);

std::vector<unsigned char> read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::span<const unsigned char> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

/// Reads a feature file, choosing RFPF or CSV by the leading magic bytes.
FeatureBlock read_features(const std::filesystem::path& path);

/// 64-bit FNV-1a, used as the content hash of graph files in manifests.
std::uint64_t fnv1a64(std::span<const unsigned char> bytes);

/// Flat key=value file; keys are kept sorted.
using Manifest = std::map<std::string, std::string>;

std::string encode_manifest(const Manifest& m);
Manifest decode_manifest(std::string_view text);

}  // namespace rfp::io
