/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/codec.hpp"

namespace coldchain {

namespace {

void putU32(Bytes &out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void putU64(Bytes &out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

}  // namespace

Writer &Writer::bytes(ByteView data) {
  putU32(out_, static_cast<std::uint32_t>(data.size()));
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

Writer &Writer::str(std::string_view s) {
  return bytes(ByteView(reinterpret_cast<const std::uint8_t *>(s.data()),
                        s.size()));
}

Writer &Writer::u64(std::uint64_t v) {
  putU32(out_, 8);
  putU64(out_, v);
  return *this;
}

Writer &Writer::i64(std::int64_t v) {
  return u64(static_cast<std::uint64_t>(v));
}

Writer &Writer::boolean(bool v) {
  putU32(out_, 1);
  out_.push_back(v ? 1 : 0);
  return *this;
}

ByteView Reader::bytes() {
  if (data_.size() - pos_ < 4) {
    throw ParseError("truncated length prefix");
  }
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    len = (len << 8) | data_[pos_ + i];
  }
  pos_ += 4;
  if (data_.size() - pos_ < len) {
    throw ParseError("truncated field");
  }
  ByteView field = data_.subspan(pos_, len);
  pos_ += len;
  return field;
}

std::string Reader::str() {
  ByteView b = bytes();
  return std::string(b.begin(), b.end());
}

std::uint64_t Reader::u64() {
  ByteView b = bytes();
  if (b.size() != 8) {
    throw ParseError("integer field must be 8 bytes");
  }
  std::uint64_t v = 0;
  for (std::uint8_t byte : b) {
    v = (v << 8) | byte;
  }
  return v;
}

std::int64_t Reader::i64() {
  return static_cast<std::int64_t>(u64());
}

bool Reader::boolean() {
  ByteView b = bytes();
  if (b.size() != 1 || b[0] > 1) {
    throw ParseError("malformed boolean field");
  }
  return b[0] == 1;
}

void Reader::expectEnd() const {
  if (!done()) {
    throw ParseError("trailing bytes after last field");
  }
}

}  // namespace coldchain
