/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>

#include "coldchain/bytes.hpp"
#include "coldchain/config.hpp"
#include "coldchain/keys.hpp"
#include "json.hpp"

namespace coldchain {

/// Contract field of a deployment transaction.
inline const Address kDeploySentinel{};

/**
 * An actor-signed invocation of one contract operation.
 *
 * The signature covers (from, contract, op, args, nonce). The hash
 * additionally binds gas, the public key, and the signature itself, so any
 * edit to a persisted transaction changes its hash.
 */
struct SignedTransaction {
  Address from;
  Address contract;
  std::string op;
  Bytes args;
  std::uint64_t nonce = 0;
  std::uint64_t gas = 0;
  PublicKey publicKey;
  Signature signature;
  Hash32 txHash;

  Bytes signingPayload() const;
  Hash32 computeHash() const;

  /// Public key hashes to `from` and the signature verifies.
  bool signatureValid() const;

  nlohmann::json toJson() const;
  /// Strict: lowercase 0x hex everywhere; throws ParseError otherwise.
  static SignedTransaction fromJson(const nlohmann::json &j);

  bool operator==(const SignedTransaction &) const = default;
};

/// Throws UnknownOperation when `op` has no gas entry in the schedule.
SignedTransaction signTransaction(const Keypair &kp, const Address &contract,
                                  const std::string &op, const Bytes &args,
                                  std::uint64_t nonce,
                                  const GasSchedule &schedule);

/// Contract address created by `deployer`'s deployment at `nonce`.
Address contractAddressFor(const Address &deployer, std::uint64_t nonce);

}  // namespace coldchain
