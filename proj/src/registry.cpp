/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/registry.hpp"

#include "coldchain/codec.hpp"
#include "coldchain/keccak.hpp"

namespace coldchain {

Bytes RegistryState::canonicalEncoding() const {
  Writer w;
  w.fixed(vaccineIssuer);
  for (const auto *set : {&doctors, &medicalUnitAdmins, &beneficiaries}) {
    w.u64(set->size());
    for (const auto &a : *set) w.fixed(a);
  }
  w.u64(registeredRequests.size());
  for (const auto &[root, addr] : registeredRequests) {
    w.fixed(root).fixed(addr);
  }
  w.u64(rules.size());
  for (const auto &[name, rule] : rules) {
    w.str(name).i64(rule.minValue).i64(rule.maxValue).u64(rule.timeDelta);
  }
  w.u64(freezerLots.size());
  for (const auto &[freezer, lot] : freezerLots) {
    w.fixed(freezer).fixed(lot);
  }
  w.u64(freezerRegistrationTime.size());
  for (const auto &[key, t] : freezerRegistrationTime) {
    w.fixed(key.first).fixed(key.second).i64(t);
  }
  w.u64(freezerRules.size());
  for (const auto &[freezer, names] : freezerRules) {
    w.fixed(freezer).u64(names.size());
    for (const auto &n : names) w.str(n);
  }
  w.u64(vaccineLots.size());
  for (const auto &[lot, samples] : vaccineLots) {
    w.fixed(lot).u64(samples);
  }
  w.u64(monitoredVaccines.size());
  for (const auto &[lot, history] : monitoredVaccines) {
    w.fixed(lot).bytes(encodeHistory(history));
  }
  w.u64(administrationSignatures.size());
  for (const auto &[key, signer] : administrationSignatures) {
    const auto &[lot, hashPI, role] = key;
    w.fixed(lot).fixed(hashPI).u64(static_cast<std::uint64_t>(role))
        .fixed(signer);
  }
  w.u64(administratedVaccines.size());
  for (const auto &[hashPI, lot] : administratedVaccines) {
    w.fixed(hashPI).fixed(lot);
  }
  w.u64(sideEffects.size());
  for (const auto &[key, text] : sideEffects) {
    w.fixed(key.first).fixed(key.second).str(text);
  }
  return std::move(w).take();
}

Hash32 RegistryState::digest() const {
  return keccak256(canonicalEncoding());
}

VaccineRegistry::VaccineRegistry(const Address &issuer) {
  state_.vaccineIssuer = issuer;
}

bool VaccineRegistry::passes(RoleModifier modifier,
                             const Address &sender) const {
  switch (modifier) {
    case RoleModifier::kOnlyIssuer:
      return sender == state_.vaccineIssuer;
    case RoleModifier::kOnlyMedicalManagers:
      // The issuer signs freezer assignments in the reference deployment,
      // so it counts as a medical manager.
      return sender == state_.vaccineIssuer
             || state_.medicalUnitAdmins.contains(sender);
    case RoleModifier::kOnlyFreezer:
      return state_.freezerRules.contains(sender);
    case RoleModifier::kOnlyBeneficiary:
      return state_.beneficiaries.contains(sender);
  }
  return false;
}

void VaccineRegistry::require(RoleModifier modifier,
                              const Address &sender) const {
  if (!passes(modifier, sender)) {
    throw Revert(revert::kUnauthorized);
  }
}

std::vector<Event> VaccineRegistry::execute(const ContractCall &call,
                                            const Address &sender,
                                            std::int64_t now) {
  return std::visit(
      [&](const auto &args) { return apply(args, sender, now); }, call);
}

std::vector<Event> VaccineRegistry::apply(const DeployArgs &, const Address &,
                                          std::int64_t) {
  throw Revert(revert::kBadArguments);
}

std::vector<Event> VaccineRegistry::apply(const RegisterDoctorArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyIssuer, sender);
  state_.doctors.insert(a.doctor);
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterMedicalUnitAdminArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyIssuer, sender);
  state_.medicalUnitAdmins.insert(a.admin);
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterBeneficiaryArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  auto it = state_.registeredRequests.find(a.beneficiaryHash);
  if (it != state_.registeredRequests.end() && it->second != sender) {
    throw Revert(revert::kDuplicateCommitment);
  }
  state_.beneficiaries.insert(sender);
  state_.registeredRequests[a.beneficiaryHash] = sender;
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterTrackingRuleArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyIssuer, sender);
  const auto &rule = a.rule;
  if (rule.name.empty() || rule.minValue >= rule.maxValue
      || rule.timeDelta == 0) {
    throw Revert(revert::kInvalidRule);
  }
  state_.rules[rule.name] = rule;
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterFreezerAndRulesArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyMedicalManagers, sender);
  if (!state_.rules.contains(a.rule)) {
    throw Revert(revert::kUnknownRule);
  }
  state_.freezerRules[a.freezer].insert(a.rule);
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterVaccineLotArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyIssuer, sender);
  if (state_.vaccineLots.contains(a.lotId)) {
    throw Revert(revert::kDuplicateLot);
  }
  if (a.samples == 0) {
    throw Revert(revert::kInvalidSamples);
  }
  state_.vaccineLots[a.lotId] = a.samples;
  return {};
}

std::vector<Event> VaccineRegistry::apply(const UpdateVaccineFreezerArgs &a,
                                          const Address &sender,
                                          std::int64_t now) {
  require(RoleModifier::kOnlyMedicalManagers, sender);
  if (!state_.vaccineLots.contains(a.lotId)) {
    throw Revert(revert::kUnknownLot);
  }
  state_.freezerLots.erase({a.oldFreezer, a.lotId});
  state_.freezerLots.insert({a.newFreezer, a.lotId});
  state_.freezerRegistrationTime[{a.newFreezer, a.lotId}] = now;
  return {};
}

std::vector<Event> VaccineRegistry::apply(const MonitorArgs &a,
                                          const Address &sender,
                                          std::int64_t now) {
  require(RoleModifier::kOnlyFreezer, sender);
  if (!state_.vaccineLots.contains(a.lotId)) {
    throw Revert(revert::kUnknownLot);
  }
  if (!state_.freezerLots.contains({sender, a.lotId})) {
    throw Revert(revert::kFreezerNotBound);
  }
  auto rule_it = state_.rules.find(a.rule);
  if (rule_it == state_.rules.end()) {
    throw Revert(revert::kUnknownRule);
  }
  if (!state_.freezerRules.at(sender).contains(a.rule)) {
    throw Revert(revert::kRuleNotBound);
  }

  std::int64_t registered = state_.freezerRegistrationTime.at({sender, a.lotId});
  bool valid = rule_it->second.admits(a.value, now - registered);
  state_.monitoredVaccines[a.lotId].push_back(
      MonitoredRecord{sender, a.rule, a.value, now, valid});

  if (valid) return {};
  return {Event{"BrokenRule",
                {a.rule, a.lotId.hex(), std::to_string(a.value),
                 std::to_string(now)}}};
}

std::vector<Event> VaccineRegistry::apply(const SignAdministeredVaccineArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  SignerRole role;
  if (state_.doctors.contains(sender)) {
    role = SignerRole::kDoctor;
  } else if (state_.beneficiaries.contains(sender)) {
    role = SignerRole::kBeneficiary;
  } else {
    throw Revert(revert::kUnauthorized);
  }
  auto lot_it = state_.vaccineLots.find(a.lotId);
  if (lot_it == state_.vaccineLots.end()) {
    throw Revert(revert::kUnknownLot);
  }
  if (lot_it->second == 0) {
    throw Revert(revert::kLotExhausted);
  }
  if (state_.administratedVaccines.contains(a.hashPI)) {
    throw Revert(revert::kAlreadyAdministered);
  }

  state_.administrationSignatures[{a.lotId, a.hashPI, role}] = sender;
  bool doctor_signed = state_.administrationSignatures.contains(
      {a.lotId, a.hashPI, SignerRole::kDoctor});
  bool beneficiary_signed = state_.administrationSignatures.contains(
      {a.lotId, a.hashPI, SignerRole::kBeneficiary});
  if (doctor_signed && beneficiary_signed) {
    state_.administratedVaccines[a.hashPI] = a.lotId;
    lot_it->second -= 1;
  }
  return {};
}

std::vector<Event> VaccineRegistry::apply(const RegisterSideEffectArgs &a,
                                          const Address &sender,
                                          std::int64_t) {
  require(RoleModifier::kOnlyBeneficiary, sender);
  if (!checkBeneficiaryIdentity(a.hashPI, a.hashSecret, sender)) {
    throw Revert(revert::kUnauthorized);
  }
  auto it = state_.administratedVaccines.find(a.hashPI);
  if (it == state_.administratedVaccines.end() || it->second != a.lotId) {
    throw Revert(revert::kNotAdministered);
  }
  if (a.description.size() > kMaxSideEffectBytes) {
    throw Revert(revert::kDescriptionTooLong);
  }
  state_.sideEffects[{a.lotId, a.hashPI}] = a.description;
  return {};
}

bool VaccineRegistry::checkBeneficiaryIdentity(const Hash32 &hashPI,
                                               const Hash32 &hashSecret,
                                               const Address &beneficiary) const {
  auto it = state_.registeredRequests.find(keccak256Concat(hashPI, hashSecret));
  return it != state_.registeredRequests.end() && it->second == beneficiary;
}

std::vector<MonitoredRecord> VaccineRegistry::checkVaccineLotHistory(
    const Hash32 &lot) const {
  auto it = state_.monitoredVaccines.find(lot);
  if (it == state_.monitoredVaccines.end()) return {};
  return it->second;
}

Bytes VaccineRegistry::query(const ContractQuery &query) const {
  struct Visitor {
    const VaccineRegistry &self;
    Bytes operator()(const CheckBeneficiaryIdentityQuery &q) const {
      return encodeBoolResult(
          self.checkBeneficiaryIdentity(q.hashPI, q.hashSecret, q.beneficiary));
    }
    Bytes operator()(const CheckVaccineLotHistoryQuery &q) const {
      return encodeHistory(self.checkVaccineLotHistory(q.lotId));
    }
  };
  return std::visit(Visitor{*this}, query);
}

}  // namespace coldchain
