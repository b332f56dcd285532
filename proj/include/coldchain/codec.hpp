/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "coldchain/bytes.hpp"

namespace coldchain {

/**
 * Canonical field encoding shared by transactions, contract arguments,
 * call results, and state digests.
 *
 * Every field is written as a 4-byte big-endian length followed by the
 * field bytes. Integers are 8-byte big-endian (two's complement for signed
 * values), so the length prefix of an integer field is always 8.
 */
class Writer {
 public:
  Writer &bytes(ByteView data);
  Writer &str(std::string_view s);
  Writer &u64(std::uint64_t v);
  Writer &i64(std::int64_t v);
  Writer &boolean(bool v);

  template <std::size_t N>
  Writer &fixed(const FixedBytes<N> &v) {
    return bytes(v.view());
  }

  const Bytes &data() const & { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  ByteView bytes();
  std::string str();
  std::uint64_t u64();
  std::int64_t i64();
  bool boolean();

  template <std::size_t N>
  FixedBytes<N> fixed() {
    return FixedBytes<N>::fromSpan(bytes());
  }

  bool done() const { return pos_ == data_.size(); }

  /// Throws unless every byte was consumed.
  void expectEnd() const;

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

}  // namespace coldchain
