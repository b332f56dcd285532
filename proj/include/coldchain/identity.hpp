/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "coldchain/bytes.hpp"

namespace coldchain::identity {

inline constexpr std::size_t kSecretBytes = 32;

/// Thrown by the QR decoders; `field` names the offending key.
class QrDecodeError : public std::runtime_error {
 public:
  QrDecodeError(std::string field, const std::string &why)
      : std::runtime_error(field + ": " + why), field(std::move(field)) {}
  std::string field;
};

/// Fresh secret from the system CSPRNG.
Bytes generateSecret();

/// keccak256 over the UTF-8 bytes, no terminator.
Hash32 hashText(std::string_view text);

/// Two-leaf commitment keccak256(hashPI || hashSK).
Hash32 beneficiaryRoot(const Hash32 &hashPI, const Hash32 &hashSK);

/// Byte-level variant; throws std::invalid_argument unless both inputs are
/// exactly 32 bytes.
Hash32 beneficiaryRoot(ByteView hashPI, ByteView hashSK);

/// Off-chain credentials. Only hashPI, hashSK and root ever leave the
/// holder's device.
struct BeneficiaryCredentials {
  std::string pi;
  Bytes sk;
  Hash32 hashPI;
  Hash32 hashSK;
  Hash32 root;

  /// Secret given as text (hashed as UTF-8).
  static BeneficiaryCredentials fromText(std::string pi, std::string_view sk);
  /// Secret given as raw bytes.
  static BeneficiaryCredentials fromBytes(std::string pi, Bytes sk);
};

struct BeneficiaryQrPayload {
  std::string pi;
  Hash32 hashSecret;
  Address contract;
  Hash32 txHash;

  bool operator==(const BeneficiaryQrPayload &) const = default;
};

struct VaccineQrPayload {
  Hash32 lotId;
  Address contract;

  bool operator==(const VaccineQrPayload &) const = default;
};

/// Receives the names of unrecognised keys during decoding.
using UnknownKeyHandler = std::function<void(std::string_view key)>;

/// "PI:..\nHASH_SECRET:0x..\nCONTRACT:0x..\nTX_HASH:0x..\n"
std::string encodeBeneficiaryQr(const BeneficiaryQrPayload &payload);
BeneficiaryQrPayload decodeBeneficiaryQr(std::string_view text,
                                         const UnknownKeyHandler &onUnknown = {});

/// "V_ID:0x..\nCONTRACT:0x..\n"
std::string encodeVaccineQr(const VaccineQrPayload &payload);
VaccineQrPayload decodeVaccineQr(std::string_view text,
                                 const UnknownKeyHandler &onUnknown = {});

}  // namespace coldchain::identity
