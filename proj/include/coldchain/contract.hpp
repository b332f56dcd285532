/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

// Operation names and argument encodings of the vaccine registry contract.
// Names and field order are part of the transaction hash and must not
// change.

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "coldchain/bytes.hpp"
#include "coldchain/codec.hpp"

namespace coldchain {

namespace ops {
inline constexpr std::string_view kDeploy = "deploy";
inline constexpr std::string_view kRegisterDoctor = "registerDoctor";
inline constexpr std::string_view kRegisterMedicalUnitAdmin =
    "registerMedicalUnitAdmin";
inline constexpr std::string_view kRegisterBeneficiary = "registerBeneficiary";
inline constexpr std::string_view kRegisterTrackingRule =
    "registerTrackingRule";
inline constexpr std::string_view kRegisterFreezerAndRules =
    "registerFreezerAndRules";
inline constexpr std::string_view kRegisterVaccineLot = "registerVaccineLot";
inline constexpr std::string_view kUpdateVaccineFreezer =
    "updateVaccineFreezer";
inline constexpr std::string_view kMonitor = "monitor";
inline constexpr std::string_view kSignAdministeredVaccine =
    "signAdministeredVaccine";
inline constexpr std::string_view kRegisterSideEffect = "registerSideEffect";

inline constexpr std::string_view kCheckBeneficiaryIdentity =
    "checkBeneficiaryIdentity";
inline constexpr std::string_view kCheckVaccineLotHistory =
    "checkVaccineLotHistory";

inline constexpr std::array<std::string_view, 11> kMutating = {
    kDeploy,
    kRegisterDoctor,
    kRegisterMedicalUnitAdmin,
    kRegisterBeneficiary,
    kRegisterTrackingRule,
    kRegisterFreezerAndRules,
    kRegisterVaccineLot,
    kUpdateVaccineFreezer,
    kMonitor,
    kSignAdministeredVaccine,
    kRegisterSideEffect,
};

inline constexpr std::array<std::string_view, 2> kQueries = {
    kCheckBeneficiaryIdentity,
    kCheckVaccineLotHistory,
};
}  // namespace ops

/// Raised when an op name is not part of the contract interface.
class UnknownOperation : public std::invalid_argument {
 public:
  explicit UnknownOperation(std::string_view op)
      : std::invalid_argument("unknown operation '" + std::string(op) + "'") {}
};

/// Named (min, max, timeDelta) bound a monitored value must respect.
struct SafeHandlingRule {
  std::string name;
  std::int64_t minValue = 0;
  std::int64_t maxValue = 0;
  /// Seconds a lot may stay with one freezer under this rule.
  std::uint64_t timeDelta = 0;

  /// Strict bounds on the value, inclusive bound on elapsed time.
  bool admits(std::int64_t value, std::int64_t elapsed) const {
    return minValue < value && value < maxValue && elapsed >= 0
           && static_cast<std::uint64_t>(elapsed) <= timeDelta;
  }

  bool operator==(const SafeHandlingRule &) const = default;
};

struct MonitoredRecord {
  Address freezer;
  std::string rule;
  std::int64_t value = 0;
  std::int64_t timestamp = 0;
  bool valid = false;

  bool operator==(const MonitoredRecord &) const = default;
};

struct DeployArgs {
  static constexpr std::string_view kOp = ops::kDeploy;
  void encode(Writer &) const {}
  static DeployArgs decode(Reader &) { return {}; }
};

struct RegisterDoctorArgs {
  static constexpr std::string_view kOp = ops::kRegisterDoctor;
  Address doctor;
  void encode(Writer &w) const { w.fixed(doctor); }
  static RegisterDoctorArgs decode(Reader &r) { return {r.fixed<20>()}; }
};

struct RegisterMedicalUnitAdminArgs {
  static constexpr std::string_view kOp = ops::kRegisterMedicalUnitAdmin;
  Address admin;
  void encode(Writer &w) const { w.fixed(admin); }
  static RegisterMedicalUnitAdminArgs decode(Reader &r) {
    return {r.fixed<20>()};
  }
};

struct RegisterBeneficiaryArgs {
  static constexpr std::string_view kOp = ops::kRegisterBeneficiary;
  Hash32 beneficiaryHash;
  void encode(Writer &w) const { w.fixed(beneficiaryHash); }
  static RegisterBeneficiaryArgs decode(Reader &r) { return {r.fixed<32>()}; }
};

struct RegisterTrackingRuleArgs {
  static constexpr std::string_view kOp = ops::kRegisterTrackingRule;
  SafeHandlingRule rule;
  void encode(Writer &w) const {
    w.str(rule.name).i64(rule.minValue).i64(rule.maxValue).u64(rule.timeDelta);
  }
  static RegisterTrackingRuleArgs decode(Reader &r) {
    RegisterTrackingRuleArgs a;
    a.rule.name = r.str();
    a.rule.minValue = r.i64();
    a.rule.maxValue = r.i64();
    a.rule.timeDelta = r.u64();
    return a;
  }
};

struct RegisterFreezerAndRulesArgs {
  static constexpr std::string_view kOp = ops::kRegisterFreezerAndRules;
  Address freezer;
  std::string rule;
  void encode(Writer &w) const { w.fixed(freezer).str(rule); }
  static RegisterFreezerAndRulesArgs decode(Reader &r) {
    RegisterFreezerAndRulesArgs a;
    a.freezer = r.fixed<20>();
    a.rule = r.str();
    return a;
  }
};

struct RegisterVaccineLotArgs {
  static constexpr std::string_view kOp = ops::kRegisterVaccineLot;
  Hash32 lotId;
  std::uint64_t samples = 0;
  void encode(Writer &w) const { w.fixed(lotId).u64(samples); }
  static RegisterVaccineLotArgs decode(Reader &r) {
    RegisterVaccineLotArgs a;
    a.lotId = r.fixed<32>();
    a.samples = r.u64();
    return a;
  }
};

struct UpdateVaccineFreezerArgs {
  static constexpr std::string_view kOp = ops::kUpdateVaccineFreezer;
  Hash32 lotId;
  Address oldFreezer;
  Address newFreezer;
  void encode(Writer &w) const {
    w.fixed(lotId).fixed(oldFreezer).fixed(newFreezer);
  }
  static UpdateVaccineFreezerArgs decode(Reader &r) {
    UpdateVaccineFreezerArgs a;
    a.lotId = r.fixed<32>();
    a.oldFreezer = r.fixed<20>();
    a.newFreezer = r.fixed<20>();
    return a;
  }
};

struct MonitorArgs {
  static constexpr std::string_view kOp = ops::kMonitor;
  Hash32 lotId;
  std::string rule;
  std::int64_t value = 0;
  void encode(Writer &w) const { w.fixed(lotId).str(rule).i64(value); }
  static MonitorArgs decode(Reader &r) {
    MonitorArgs a;
    a.lotId = r.fixed<32>();
    a.rule = r.str();
    a.value = r.i64();
    return a;
  }
};

struct SignAdministeredVaccineArgs {
  static constexpr std::string_view kOp = ops::kSignAdministeredVaccine;
  Hash32 lotId;
  Hash32 hashPI;
  void encode(Writer &w) const { w.fixed(lotId).fixed(hashPI); }
  static SignAdministeredVaccineArgs decode(Reader &r) {
    SignAdministeredVaccineArgs a;
    a.lotId = r.fixed<32>();
    a.hashPI = r.fixed<32>();
    return a;
  }
};

struct RegisterSideEffectArgs {
  static constexpr std::string_view kOp = ops::kRegisterSideEffect;
  Hash32 hashPI;
  Hash32 hashSecret;
  Hash32 lotId;
  std::string description;
  void encode(Writer &w) const {
    w.fixed(hashPI).fixed(hashSecret).fixed(lotId).str(description);
  }
  static RegisterSideEffectArgs decode(Reader &r) {
    RegisterSideEffectArgs a;
    a.hashPI = r.fixed<32>();
    a.hashSecret = r.fixed<32>();
    a.lotId = r.fixed<32>();
    a.description = r.str();
    return a;
  }
};

using ContractCall =
    std::variant<DeployArgs, RegisterDoctorArgs, RegisterMedicalUnitAdminArgs,
                 RegisterBeneficiaryArgs, RegisterTrackingRuleArgs,
                 RegisterFreezerAndRulesArgs, RegisterVaccineLotArgs,
                 UpdateVaccineFreezerArgs, MonitorArgs,
                 SignAdministeredVaccineArgs, RegisterSideEffectArgs>;

struct CheckBeneficiaryIdentityQuery {
  static constexpr std::string_view kOp = ops::kCheckBeneficiaryIdentity;
  Hash32 hashPI;
  Hash32 hashSecret;
  Address beneficiary;
  void encode(Writer &w) const {
    w.fixed(hashPI).fixed(hashSecret).fixed(beneficiary);
  }
  static CheckBeneficiaryIdentityQuery decode(Reader &r) {
    CheckBeneficiaryIdentityQuery q;
    q.hashPI = r.fixed<32>();
    q.hashSecret = r.fixed<32>();
    q.beneficiary = r.fixed<20>();
    return q;
  }
};

struct CheckVaccineLotHistoryQuery {
  static constexpr std::string_view kOp = ops::kCheckVaccineLotHistory;
  Hash32 lotId;
  void encode(Writer &w) const { w.fixed(lotId); }
  static CheckVaccineLotHistoryQuery decode(Reader &r) {
    return {r.fixed<32>()};
  }
};

using ContractQuery =
    std::variant<CheckBeneficiaryIdentityQuery, CheckVaccineLotHistoryQuery>;

std::string_view opName(const ContractCall &call);
std::string_view opName(const ContractQuery &query);

Bytes encodeArgs(const ContractCall &call);
Bytes encodeArgs(const ContractQuery &query);

/// Throws UnknownOperation for names outside the interface and ParseError
/// for argument bytes that do not match the op's field layout.
ContractCall decodeCall(std::string_view op, ByteView args);
ContractQuery decodeQuery(std::string_view op, ByteView args);

bool isMutatingOp(std::string_view op);
bool isQueryOp(std::string_view op);

Bytes encodeBoolResult(bool v);
bool decodeBoolResult(ByteView data);

Bytes encodeHistory(const std::vector<MonitoredRecord> &records);
std::vector<MonitoredRecord> decodeHistory(ByteView data);

}  // namespace coldchain
