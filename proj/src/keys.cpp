/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/keys.hpp"

#include <sodium.h>

#include <fstream>
#include "json.hpp"

#include "coldchain/keccak.hpp"

namespace coldchain {

namespace {

void ensureSodium() {
  static const int rc = sodium_init();
  if (rc < 0) {
    throw std::runtime_error("libsodium initialisation failed");
  }
}

}  // namespace

Address deriveAddress(const PublicKey &key) {
  ensureSodium();
  if (crypto_core_ed25519_is_valid_point(key.view().data()) != 1) {
    throw ParseError("malformed public key");
  }
  Hash32 digest = keccak256(key.view());
  return Address::fromSpan(digest.view().subspan(12));
}

Keypair Keypair::generate() {
  Seed seed;
  randomBytes(std::span<std::uint8_t>(seed.data(), Seed::kSize));
  return fromSeed(seed);
}

Keypair Keypair::fromSeed(const Seed &seed) {
  ensureSodium();
  Keypair kp;
  kp.seed_ = seed;
  std::array<std::uint8_t, 32> pk{};
  crypto_sign_seed_keypair(pk.data(), kp.secret_.data(), seed.view().data());
  kp.public_ = PublicKey(pk);
  kp.address_ = deriveAddress(kp.public_);
  return kp;
}

Keypair Keypair::fromLabel(std::string_view label) {
  return fromSeed(Seed(keccak256(label).raw()));
}

Keypair Keypair::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read key file " + path.string());
  }
  nlohmann::json j = nlohmann::json::parse(in);
  Keypair kp = fromSeed(Seed::fromHex(j.at("seed").get<std::string>()));
  if (j.contains("address")
      && Address::fromHex(j.at("address").get<std::string>())
             != kp.address()) {
    throw std::runtime_error("key file address does not match its seed: "
                             + path.string());
  }
  return kp;
}

void Keypair::save(const std::filesystem::path &path) const {
  nlohmann::json j = {{"seed", seed_.hex()},
                      {"publicKey", public_.hex()},
                      {"address", address_.hex()}};
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write key file " + path.string());
  }
  out << j.dump(2) << '\n';
}

Signature Keypair::sign(ByteView message) const {
  std::array<std::uint8_t, 64> sig{};
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(),
                       secret_.data());
  return Signature(sig);
}

bool verifySignature(const PublicKey &key, ByteView message,
                     const Signature &sig) {
  ensureSodium();
  return crypto_sign_verify_detached(sig.view().data(), message.data(),
                                     message.size(), key.view().data())
         == 0;
}

void randomBytes(std::span<std::uint8_t> out) {
  ensureSodium();
  randombytes_buf(out.data(), out.size());
}

}  // namespace coldchain
