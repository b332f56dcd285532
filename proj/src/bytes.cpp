/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/bytes.hpp"

namespace coldchain {

namespace {

constexpr char kDigits[] = "0123456789abcdef";

int nibble(char c, bool lowercase_only) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (!lowercase_only && c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

Bytes decode(std::string_view text, bool lowercase_only) {
  if (text.size() % 2 != 0) {
    throw ParseError("odd-length hex string");
  }
  Bytes out;
  out.reserve(text.size() / 2);
  for (std::size_t i = 0; i < text.size(); i += 2) {
    int hi = nibble(text[i], lowercase_only);
    int lo = nibble(text[i + 1], lowercase_only);
    if (hi < 0 || lo < 0) {
      throw ParseError("invalid hex digit in '" + std::string(text) + "'");
    }
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace

std::string toHex(ByteView data) {
  std::string out;
  out.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

std::string toPrefixedHex(ByteView data) {
  return "0x" + toHex(data);
}

Bytes fromHex(std::string_view text) {
  if (text.starts_with("0x") || text.starts_with("0X")) {
    text.remove_prefix(2);
  }
  return decode(text, false);
}

Bytes fromCanonicalHex(std::string_view text) {
  if (!text.starts_with("0x")) {
    throw ParseError("missing 0x prefix");
  }
  text.remove_prefix(2);
  return decode(text, true);
}

}  // namespace coldchain
