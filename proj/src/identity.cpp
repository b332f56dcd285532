/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/identity.hpp"

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>

#include "coldchain/keccak.hpp"
#include "coldchain/keys.hpp"

namespace coldchain::identity {

Bytes generateSecret() {
  Bytes secret(kSecretBytes);
  randomBytes(secret);
  return secret;
}

Hash32 hashText(std::string_view text) {
  return keccak256(text);
}

Hash32 beneficiaryRoot(const Hash32 &hashPI, const Hash32 &hashSK) {
  return keccak256Concat(hashPI, hashSK);
}

Hash32 beneficiaryRoot(ByteView hashPI, ByteView hashSK) {
  if (hashPI.size() != Hash32::kSize || hashSK.size() != Hash32::kSize) {
    throw std::invalid_argument("beneficiary root inputs must be 32 bytes");
  }
  return beneficiaryRoot(Hash32::fromSpan(hashPI), Hash32::fromSpan(hashSK));
}

BeneficiaryCredentials BeneficiaryCredentials::fromText(std::string pi,
                                                        std::string_view sk) {
  return fromBytes(std::move(pi), toBytes(sk));
}

BeneficiaryCredentials BeneficiaryCredentials::fromBytes(std::string pi,
                                                         Bytes sk) {
  BeneficiaryCredentials c;
  c.hashPI = hashText(pi);
  c.hashSK = keccak256(sk);
  c.root = beneficiaryRoot(c.hashPI, c.hashSK);
  c.pi = std::move(pi);
  c.sk = std::move(sk);
  return c;
}

namespace {

using Fields = std::map<std::string, std::string, std::less<>>;

Fields parseLines(std::string_view text,
                  std::initializer_list<std::string_view> known,
                  const UnknownKeyHandler &onUnknown) {
  Fields fields;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw QrDecodeError(std::string(line), "line has no KEY:VALUE separator");
    }
    std::string key(line.substr(0, colon));
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      if (onUnknown) {
        onUnknown(key);
      } else {
        std::clog << "warning: ignoring unknown QR key '" << key << "'\n";
      }
      continue;
    }
    if (!fields.emplace(key, line.substr(colon + 1)).second) {
      throw QrDecodeError(key, "duplicate key");
    }
  }
  for (std::string_view key : known) {
    if (!fields.contains(key)) {
      throw QrDecodeError(std::string(key), "missing");
    }
  }
  return fields;
}

template <typename Fixed>
Fixed hexField(const Fields &fields, std::string_view key) {
  const std::string &value = fields.find(key)->second;
  if (!value.starts_with("0x")) {
    throw QrDecodeError(std::string(key), "expected 0x-prefixed hex");
  }
  try {
    return Fixed::fromHex(value);
  } catch (const ParseError &e) {
    throw QrDecodeError(std::string(key), e.what());
  }
}

void checkSingleLine(std::string_view value, std::string_view key) {
  if (value.find('\n') != std::string_view::npos) {
    throw std::invalid_argument(std::string(key) + " must not contain LF");
  }
}

}  // namespace

std::string encodeBeneficiaryQr(const BeneficiaryQrPayload &payload) {
  checkSingleLine(payload.pi, "PI");
  return "PI:" + payload.pi + "\nHASH_SECRET:" + payload.hashSecret.hex()
         + "\nCONTRACT:" + payload.contract.hex()
         + "\nTX_HASH:" + payload.txHash.hex() + "\n";
}

BeneficiaryQrPayload decodeBeneficiaryQr(std::string_view text,
                                         const UnknownKeyHandler &onUnknown) {
  Fields f = parseLines(text, {"PI", "HASH_SECRET", "CONTRACT", "TX_HASH"},
                        onUnknown);
  BeneficiaryQrPayload p;
  p.pi = f.find("PI")->second;
  if (p.pi.empty()) {
    throw QrDecodeError("PI", "empty");
  }
  p.hashSecret = hexField<Hash32>(f, "HASH_SECRET");
  p.contract = hexField<Address>(f, "CONTRACT");
  p.txHash = hexField<Hash32>(f, "TX_HASH");
  return p;
}

std::string encodeVaccineQr(const VaccineQrPayload &payload) {
  return "V_ID:" + payload.lotId.hex() + "\nCONTRACT:"
         + payload.contract.hex() + "\n";
}

VaccineQrPayload decodeVaccineQr(std::string_view text,
                                 const UnknownKeyHandler &onUnknown) {
  Fields f = parseLines(text, {"V_ID", "CONTRACT"}, onUnknown);
  return {hexField<Hash32>(f, "V_ID"), hexField<Address>(f, "CONTRACT")};
}

}  // namespace coldchain::identity
