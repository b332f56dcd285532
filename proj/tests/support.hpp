/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "coldchain/contract.hpp"
#include "coldchain/identity.hpp"
#include "coldchain/keys.hpp"
#include "coldchain/ledger.hpp"

namespace coldchain::testing {

inline const Hash32 kLot = Hash32::fromHex(
    "0xd7adb300b4c0d0f79bbb9195e3f9513b49caf8d14383062b2032d5656b13c5b5");

inline SafeHandlingRule transportRule() {
  return {"transport-temperature", -80, -60, 864000};
}
inline SafeHandlingRule storageRule() {
  return {"medicalunit-storage-temperature", 2, 8, 432000};
}

/// Ledger with a deployed registry and a cast of deterministic actors.
struct Harness {
  Ledger ledger;
  Keypair issuer = Keypair::fromLabel("test:issuer");
  Keypair doctor = Keypair::fromLabel("test:doctor");
  Keypair admin = Keypair::fromLabel("test:admin");
  Keypair patient = Keypair::fromLabel("test:beneficiary");
  Keypair transport = Keypair::fromLabel("test:transport");
  Keypair storage = Keypair::fromLabel("test:storage");
  Keypair stranger = Keypair::fromLabel("test:stranger");
  identity::BeneficiaryCredentials creds =
      identity::BeneficiaryCredentials::fromText("20-10563145-8",
                                                 "my-super-secret");
  Address contract;

  explicit Harness(ChainConfig config = {}) : ledger(std::move(config)) {
    contract = contractAddressFor(issuer.address(), 0);
    Receipt r = run(issuer, DeployArgs{});
    if (!r.succeeded()) throw std::logic_error("deploy failed");
  }

  SignedTransaction sign(const Keypair &kp, const ContractCall &call) {
    const Address target =
        std::holds_alternative<DeployArgs>(call) ? kDeploySentinel : contract;
    return signTransaction(kp, target, std::string(opName(call)),
                           encodeArgs(call), ledger.nextNonce(kp.address()),
                           ledger.config().gas);
  }

  Receipt run(const Keypair &kp, const ContractCall &call) {
    SignedTransaction tx = sign(kp, call);
    SubmitResult r = ledger.submit(tx);
    if (!r.accepted) {
      throw std::logic_error("rejected: " + std::string(reasonName(r.reason)));
    }
    ledger.mineAll();
    return *ledger.receipt(tx.txHash);
  }

  VaccineRegistry registry() const { return *ledger.contract(contract); }

  /// Doctor, both rules, both freezers, beneficiary, lot, initial assignment.
  void setUpPipeline(std::uint64_t samples = 200) {
    run(issuer, RegisterDoctorArgs{doctor.address()});
    run(issuer, RegisterTrackingRuleArgs{transportRule()});
    run(issuer, RegisterTrackingRuleArgs{storageRule()});
    run(issuer, RegisterFreezerAndRulesArgs{transport.address(),
                                            transportRule().name});
    run(issuer, RegisterFreezerAndRulesArgs{storage.address(),
                                            storageRule().name});
    run(patient, RegisterBeneficiaryArgs{creds.root});
    run(issuer, RegisterVaccineLotArgs{kLot, samples});
    run(issuer, UpdateVaccineFreezerArgs{kLot, transport.address(),
                                         transport.address()});
  }
};

inline std::filesystem::path tempDir(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("coldchain-test-" + name + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coldchain::testing
