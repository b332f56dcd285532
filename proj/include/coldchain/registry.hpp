/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "coldchain/block.hpp"
#include "coldchain/bytes.hpp"
#include "coldchain/contract.hpp"

namespace coldchain {

namespace revert {
inline constexpr std::string_view kUnauthorized = "unauthorized";
inline constexpr std::string_view kDuplicateCommitment = "duplicate-commitment";
inline constexpr std::string_view kInvalidRule = "invalid-rule";
inline constexpr std::string_view kUnknownRule = "unknown-rule";
inline constexpr std::string_view kRuleNotBound = "rule-not-bound";
inline constexpr std::string_view kDuplicateLot = "duplicate-lot";
inline constexpr std::string_view kInvalidSamples = "invalid-samples";
inline constexpr std::string_view kUnknownLot = "unknown-lot";
inline constexpr std::string_view kFreezerNotBound = "freezer-not-bound";
inline constexpr std::string_view kLotExhausted = "lot-exhausted";
inline constexpr std::string_view kAlreadyAdministered = "already-administered";
inline constexpr std::string_view kNotAdministered = "not-administered";
inline constexpr std::string_view kDescriptionTooLong = "description-too-long";
inline constexpr std::string_view kBadArguments = "bad-arguments";
inline constexpr std::string_view kUnknownContract = "unknown-contract";
}  // namespace revert

/// Thrown by a contract operation; the ledger turns it into a reverted
/// receipt. Operations throw before their first write.
class Revert : public std::runtime_error {
 public:
  explicit Revert(std::string_view reason)
      : std::runtime_error(std::string(reason)) {}
  std::string reason() const { return what(); }
};

enum class RoleModifier {
  kOnlyIssuer,
  kOnlyMedicalManagers,
  kOnlyFreezer,
  kOnlyBeneficiary,
};

enum class SignerRole : std::uint8_t { kDoctor = 0, kBeneficiary = 1 };

inline constexpr std::size_t kMaxSideEffectBytes = 1024;

struct RegistryState {
  using FreezerLot = std::pair<Address, Hash32>;
  using SignatureKey = std::tuple<Hash32, Hash32, SignerRole>;
  using LotPatient = std::pair<Hash32, Hash32>;

  Address vaccineIssuer;
  std::set<Address> doctors;
  std::set<Address> medicalUnitAdmins;
  std::set<Address> beneficiaries;
  std::map<Hash32, Address> registeredRequests;
  std::map<std::string, SafeHandlingRule> rules;
  /// Present means bound.
  std::set<FreezerLot> freezerLots;
  std::map<FreezerLot, std::int64_t> freezerRegistrationTime;
  std::map<Address, std::set<std::string>> freezerRules;
  /// Remaining samples per lot.
  std::map<Hash32, std::uint64_t> vaccineLots;
  std::map<Hash32, std::vector<MonitoredRecord>> monitoredVaccines;
  std::map<SignatureKey, Address> administrationSignatures;
  std::map<Hash32, Hash32> administratedVaccines;
  std::map<LotPatient, std::string> sideEffects;

  Bytes canonicalEncoding() const;
  Hash32 digest() const;

  bool operator==(const RegistryState &) const = default;
};

/**
 * The vaccine registry contract. Deterministic: the outcome of every
 * operation depends only on the state, the verified sender, and the block
 * time.
 */
class VaccineRegistry {
 public:
  explicit VaccineRegistry(const Address &issuer);

  /// Applies one mutating operation. Returns the emitted events, or throws
  /// Revert with the state untouched. DeployArgs is rejected here; the
  /// ledger handles deployment by constructing a new registry.
  std::vector<Event> execute(const ContractCall &call, const Address &sender,
                             std::int64_t now);

  /// Read-only entry point used by ledger calls.
  Bytes query(const ContractQuery &query) const;

  bool checkBeneficiaryIdentity(const Hash32 &hashPI, const Hash32 &hashSecret,
                                const Address &beneficiary) const;
  std::vector<MonitoredRecord> checkVaccineLotHistory(const Hash32 &lot) const;

  bool passes(RoleModifier modifier, const Address &sender) const;

  const RegistryState &state() const { return state_; }
  Hash32 digest() const { return state_.digest(); }

 private:
  void require(RoleModifier modifier, const Address &sender) const;

  std::vector<Event> apply(const RegisterDoctorArgs &a, const Address &sender,
                           std::int64_t now);
  std::vector<Event> apply(const RegisterMedicalUnitAdminArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const RegisterBeneficiaryArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const RegisterTrackingRuleArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const RegisterFreezerAndRulesArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const RegisterVaccineLotArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const UpdateVaccineFreezerArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const MonitorArgs &a, const Address &sender,
                           std::int64_t now);
  std::vector<Event> apply(const SignAdministeredVaccineArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const RegisterSideEffectArgs &a,
                           const Address &sender, std::int64_t now);
  std::vector<Event> apply(const DeployArgs &a, const Address &sender,
                           std::int64_t now);

  RegistryState state_;
};

}  // namespace coldchain
