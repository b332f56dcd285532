/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/transaction.hpp"

#include "coldchain/codec.hpp"
#include "coldchain/contract.hpp"
#include "coldchain/keccak.hpp"

namespace coldchain {

Bytes SignedTransaction::signingPayload() const {
  Writer w;
  w.fixed(from).fixed(contract).str(op).bytes(args).u64(nonce);
  return std::move(w).take();
}

Hash32 SignedTransaction::computeHash() const {
  Writer w;
  w.fixed(from).fixed(contract).str(op).bytes(args).u64(nonce).u64(gas)
      .fixed(publicKey).fixed(signature);
  return keccak256(w.data());
}

bool SignedTransaction::signatureValid() const {
  try {
    if (deriveAddress(publicKey) != from) return false;
  } catch (const ParseError &) {
    return false;
  }
  return verifySignature(publicKey, signingPayload(), signature);
}

nlohmann::json SignedTransaction::toJson() const {
  return {{"from", from.hex()},
          {"contract", contract.hex()},
          {"op", op},
          {"args", toPrefixedHex(args)},
          {"nonce", nonce},
          {"gas", gas},
          {"publicKey", publicKey.hex()},
          {"signature", signature.hex()},
          {"txHash", txHash.hex()}};
}

SignedTransaction SignedTransaction::fromJson(const nlohmann::json &j) {
  SignedTransaction tx;
  tx.from = Address::fromCanonicalHex(j.at("from").get<std::string>());
  tx.contract = Address::fromCanonicalHex(j.at("contract").get<std::string>());
  tx.op = j.at("op").get<std::string>();
  tx.args = fromCanonicalHex(j.at("args").get<std::string>());
  tx.nonce = j.at("nonce").get<std::uint64_t>();
  tx.gas = j.at("gas").get<std::uint64_t>();
  tx.publicKey =
      PublicKey::fromCanonicalHex(j.at("publicKey").get<std::string>());
  tx.signature =
      Signature::fromCanonicalHex(j.at("signature").get<std::string>());
  tx.txHash = Hash32::fromCanonicalHex(j.at("txHash").get<std::string>());
  return tx;
}

SignedTransaction signTransaction(const Keypair &kp, const Address &contract,
                                  const std::string &op, const Bytes &args,
                                  std::uint64_t nonce,
                                  const GasSchedule &schedule) {
  auto gas = schedule.costOf(op);
  if (!gas) {
    throw UnknownOperation(op);
  }
  SignedTransaction tx;
  tx.from = kp.address();
  tx.contract = contract;
  tx.op = op;
  tx.args = args;
  tx.nonce = nonce;
  tx.gas = *gas;
  tx.publicKey = kp.publicKey();
  tx.signature = kp.sign(tx.signingPayload());
  tx.txHash = tx.computeHash();
  return tx;
}

Address contractAddressFor(const Address &deployer, std::uint64_t nonce) {
  Writer w;
  w.fixed(deployer).u64(nonce);
  Hash32 digest = keccak256(w.data());
  return Address::fromSpan(digest.view().subspan(12));
}

}  // namespace coldchain
