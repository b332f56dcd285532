/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/keccak.hpp"

#include <bit>

namespace coldchain {

namespace {

constexpr std::array<std::uint64_t, 24> kRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL,
    0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL,
    0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL,
    0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL,
    0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// Rotation offsets and lane permutation for the combined rho/pi step,
// walking the pi cycle starting from lane 1.
constexpr std::array<int, 24> kRho = {1,  3,  6,  10, 15, 21, 28, 36,
                                      45, 55, 2,  14, 27, 41, 56, 8,
                                      25, 43, 62, 18, 39, 61, 20, 44};
constexpr std::array<int, 24> kPi = {10, 7,  11, 17, 18, 3,  5,  16,
                                     8,  21, 24, 4,  15, 23, 19, 13,
                                     12, 2,  20, 14, 22, 9,  6,  1};

void keccakF1600(std::array<std::uint64_t, 25> &a) {
  for (std::uint64_t rc : kRoundConstants) {
    // theta
    std::array<std::uint64_t, 5> c{};
    for (int x = 0; x < 5; ++x) {
      c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    }
    for (int x = 0; x < 5; ++x) {
      std::uint64_t d = c[(x + 4) % 5] ^ std::rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) {
        a[y + x] ^= d;
      }
    }
    // rho + pi
    std::uint64_t carry = a[1];
    for (int i = 0; i < 24; ++i) {
      int j = kPi[i];
      std::uint64_t tmp = a[j];
      a[j] = std::rotl(carry, kRho[i]);
      carry = tmp;
    }
    // chi
    for (int y = 0; y < 25; y += 5) {
      std::array<std::uint64_t, 5> row{};
      for (int x = 0; x < 5; ++x) row[x] = a[y + x];
      for (int x = 0; x < 5; ++x) {
        a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
      }
    }
    // iota
    a[0] ^= rc;
  }
}

}  // namespace

void Keccak256::absorbBlock() {
  for (std::size_t lane = 0; lane < kRate / 8; ++lane) {
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b) {
      v = (v << 8) | buffer_[lane * 8 + b];
    }
    state_[lane] ^= v;
  }
  keccakF1600(state_);
  buffered_ = 0;
}

Keccak256 &Keccak256::update(ByteView data) {
  for (std::uint8_t byte : data) {
    buffer_[buffered_++] = byte;
    if (buffered_ == kRate) {
      absorbBlock();
    }
  }
  return *this;
}

Keccak256 &Keccak256::update(std::string_view text) {
  return update(ByteView(reinterpret_cast<const std::uint8_t *>(text.data()),
                         text.size()));
}

Hash32 Keccak256::finalize() {
  std::fill(buffer_.begin() + static_cast<std::ptrdiff_t>(buffered_),
            buffer_.end(), 0);
  buffer_[buffered_] ^= 0x01;
  buffer_[kRate - 1] ^= 0x80;
  absorbBlock();

  std::array<std::uint8_t, 32> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
  }
  state_ = {};
  return Hash32(out);
}

Hash32 keccak256(ByteView data) {
  return Keccak256().update(data).finalize();
}

Hash32 keccak256(std::string_view text) {
  return Keccak256().update(text).finalize();
}

Hash32 keccak256Concat(const Hash32 &a, const Hash32 &b) {
  return Keccak256().update(a.view()).update(b.view()).finalize();
}

}  // namespace coldchain
