// SPDX-License-Identifier: Apache-2.0
#include "rfp/feature_io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <system_error>

#include "rfp/errors.hpp"

namespace rfp::io {

namespace {

template <typename T>
void put_le(std::vector<unsigned char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<unsigned char>(value >> (8 * i)));
}

template <typename T>
T get_le(std::span<const unsigned char> bytes, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[offset + i]) << (8 * i);
  return value;
}

std::string_view next_line(std::string_view& text) {
  const auto end = text.find('\n');
  std::string_view line = text.substr(0, end);
  text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

}  // namespace

std::vector<unsigned char> encode_rfpf(const FeatureBlock& x) {
  std::vector<unsigned char> out;
  out.reserve(kRfpfHeaderSize + 8 * static_cast<std::size_t>(x.size()));
  out.insert(out.end(), std::begin(kRfpfMagic), std::end(kRfpfMagic));
  put_le<std::uint32_t>(out, kRfpfVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(x.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(x.cols()));
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(x(r, c)));
  return out;
}

FeatureBlock decode_rfpf(std::span<const unsigned char> bytes) {
  if (bytes.size() < kRfpfHeaderSize || std::memcmp(bytes.data(), kRfpfMagic, 4) != 0) {
    throw ParseError(0, "not an RFPF file");
  }
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kRfpfVersion) throw ParseError(0, "unsupported RFPF version " + std::to_string(version));
  const auto n = get_le<std::uint64_t>(bytes, 8);
  const auto d = get_le<std::uint64_t>(bytes, 16);
  if (d != 0 && n > (bytes.size() - kRfpfHeaderSize) / 8 / d) throw ParseError(0, "RFPF payload truncated");
  if (bytes.size() != kRfpfHeaderSize + 8 * n * d) throw ParseError(0, "RFPF length does not match header");
  FeatureBlock x(static_cast<Index>(n), static_cast<Index>(d));
  std::size_t offset = kRfpfHeaderSize;
  for (Index r = 0; r < x.rows(); ++r) {
    for (Index c = 0; c < x.cols(); ++c, offset += 8) {
      x(r, c) = std::bit_cast<double>(get_le<std::uint64_t>(bytes, offset));
    }
  }
  return x;
}

std::string encode_csv(const FeatureBlock& x) {
  std::string out = "node";
  for (Index c = 0; c < x.cols(); ++c) out += ",c" + std::to_string(c);
  out += '\n';
  char buf[64];
  for (Index r = 0; r < x.rows(); ++r) {
    out += std::to_string(r);
    for (Index c = 0; c < x.cols(); ++c) {
      const auto res = std::to_chars(buf, buf + sizeof buf, x(r, c));
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

FeatureBlock decode_csv(std::string_view text) {
  const auto header = split_commas(next_line(text));
  if (header.empty() || header.front() != "node") throw ParseError(1, "CSV header must start with 'node'");
  const Index d = static_cast<Index>(header.size()) - 1;
  std::vector<double> values;
  Index n = 0;
  std::size_t line_no = 1;
  while (!text.empty()) {
    ++line_no;
    const auto line = next_line(text);
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    if (static_cast<Index>(fields.size()) != d + 1) throw ParseError(line_no, "wrong number of fields");
    Index node = -1;
    auto [p, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), node);
    if (ec != std::errc{} || node != n) throw ParseError(line_no, "rows must list nodes 0, 1, 2, ... in order");
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0;
      auto [q, ec2] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      if (ec2 != std::errc{} || q != fields[i].data() + fields[i].size()) {
        throw ParseError(line_no, "bad number '" + std::string(fields[i]) + "'");
      }
      values.push_back(v);
    }
    ++n;
  }
  FeatureBlock x(n, d);
  std::copy(values.begin(), values.end(), x.data());
  return x;
}

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("failed reading " + path.string());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const unsigned char> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw IoError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

FeatureBlock read_features(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kRfpfMagic, 4) == 0) return decode_rfpf(bytes);
  return decode_csv(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string encode_manifest(const Manifest& m) {
  std::string out;
  for (const auto& [key, value] : m) out += key + "=" + value + "\n";
  return out;
}

Manifest decode_manifest(std::string_view text) {
  Manifest m;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto line = next_line(text);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    m[std::string(line.substr(0, eq))] = std::string(line.substr(eq + 1));
  }
  return m;
}

}  // namespace rfp::io
