/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <filesystem>
#include <string_view>

#include "coldchain/bytes.hpp"

namespace coldchain {

using PublicKey = FixedBytes<32>;
using Signature = FixedBytes<64>;
using Seed = FixedBytes<32>;

/// Last 20 bytes of keccak256(public key). Throws ParseError on a key that
/// is not a valid Ed25519 point.
Address deriveAddress(const PublicKey &key);

/// Ed25519 signing identity. The address is a pure function of the public
/// key.
class Keypair {
 public:
  /// Fresh key from the system CSPRNG.
  static Keypair generate();
  /// Deterministic key; used for scenario actors and reproducible tests.
  static Keypair fromSeed(const Seed &seed);
  /// Seed = keccak256(label).
  static Keypair fromLabel(std::string_view label);

  static Keypair load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;

  Signature sign(ByteView message) const;

  const Seed &seed() const { return seed_; }
  const PublicKey &publicKey() const { return public_; }
  const Address &address() const { return address_; }

 private:
  Keypair() = default;

  Seed seed_;
  std::array<std::uint8_t, 64> secret_{};
  PublicKey public_;
  Address address_;
};

bool verifySignature(const PublicKey &key, ByteView message,
                     const Signature &sig);

/// Fills `out` from the system CSPRNG.
void randomBytes(std::span<std::uint8_t> out);

}  // namespace coldchain
