/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "coldchain/bytes.hpp"

namespace coldchain {

/**
 * Incremental Keccak-256 (original Keccak padding 0x01, not the FIPS-202
 * SHA3 domain byte 0x06). This is the variant Ethereum calls keccak256.
 */
class Keccak256 {
 public:
  static constexpr std::size_t kRate = 136;

  Keccak256 &update(ByteView data);
  Keccak256 &update(std::string_view text);
  Hash32 finalize();

 private:
  void absorbBlock();

  std::array<std::uint64_t, 25> state_{};
  std::array<std::uint8_t, kRate> buffer_{};
  std::size_t buffered_ = 0;
};

Hash32 keccak256(ByteView data);
Hash32 keccak256(std::string_view text);

/// keccak256(a || b), the two-leaf commitment used for beneficiary roots.
Hash32 keccak256Concat(const Hash32 &a, const Hash32 &b);

}  // namespace coldchain
