/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coldchain {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Raised on malformed hex text or wrong-length byte strings.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lowercase hex, no prefix.
std::string toHex(ByteView data);

/// Lowercase hex with a 0x prefix.
std::string toPrefixedHex(ByteView data);

/// Accepts an optional 0x prefix; lowercase and uppercase digits alike.
Bytes fromHex(std::string_view text);

/// Strict variant used for persisted data: requires 0x and lowercase digits.
Bytes fromCanonicalHex(std::string_view text);

inline Bytes toBytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

template <std::size_t N>
class FixedBytes {
 public:
  static constexpr std::size_t kSize = N;

  constexpr FixedBytes() = default;
  explicit constexpr FixedBytes(const std::array<std::uint8_t, N> &raw)
      : bytes_(raw) {}

  static FixedBytes fromSpan(ByteView data) {
    if (data.size() != N) {
      throw ParseError("expected " + std::to_string(N) + " bytes, got "
                       + std::to_string(data.size()));
    }
    FixedBytes out;
    std::copy(data.begin(), data.end(), out.bytes_.begin());
    return out;
  }

  static FixedBytes fromHex(std::string_view text) {
    return fromSpan(coldchain::fromHex(text));
  }

  static FixedBytes fromCanonicalHex(std::string_view text) {
    return fromSpan(coldchain::fromCanonicalHex(text));
  }

  std::string hex() const { return toPrefixedHex(bytes_); }

  ByteView view() const { return bytes_; }
  const std::array<std::uint8_t, N> &raw() const { return bytes_; }
  std::uint8_t *data() { return bytes_.data(); }

  bool isZero() const {
    return std::all_of(bytes_.begin(), bytes_.end(),
                       [](std::uint8_t b) { return b == 0; });
  }

  auto operator<=>(const FixedBytes &) const = default;

 private:
  std::array<std::uint8_t, N> bytes_{};
};

/// 20-byte account or contract identifier.
using Address = FixedBytes<20>;
/// 32-byte Keccak digest.
using Hash32 = FixedBytes<32>;

}  // namespace coldchain
