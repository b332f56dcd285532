/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/config.hpp"

#include <fstream>
#include <stdexcept>

#include "coldchain/contract.hpp"

namespace coldchain {

GasSchedule GasSchedule::defaults() {
  GasSchedule s;
  s.costs = {
      {std::string(ops::kDeploy), 2'327'309},
      {std::string(ops::kRegisterDoctor), 43'798},
      {std::string(ops::kRegisterMedicalUnitAdmin), 43'798},
      {std::string(ops::kRegisterBeneficiary), 84'808},
      {std::string(ops::kRegisterTrackingRule), 216'219},
      {std::string(ops::kRegisterFreezerAndRules), 46'581},
      {std::string(ops::kRegisterVaccineLot), 64'255},
      {std::string(ops::kUpdateVaccineFreezer), 68'106},
      {std::string(ops::kMonitor), 140'000},
      {std::string(ops::kSignAdministeredVaccine), 49'401},
      {std::string(ops::kRegisterSideEffect), 48'073},
  };
  return s;
}

std::optional<std::uint64_t> GasSchedule::costOf(const std::string &op) const {
  auto it = costs.find(op);
  if (it == costs.end()) return std::nullopt;
  return it->second;
}

void GasSchedule::validate() const {
  if (blockInterval <= 0) {
    throw std::invalid_argument("blockInterval must be positive");
  }
  for (std::string_view op : ops::kMutating) {
    auto it = costs.find(std::string(op));
    if (it == costs.end()) {
      throw std::invalid_argument("gas schedule has no entry for "
                                  + std::string(op));
    }
    if (it->second == 0) {
      throw std::invalid_argument("gas cost for " + std::string(op)
                                  + " must be positive");
    }
    if (it->second >= blockGasLimit) {
      throw std::invalid_argument("gas cost for " + std::string(op)
                                  + " does not fit below the block limit");
    }
  }
}

nlohmann::json ChainConfig::toJson() const {
  return {{"gasSchedule", gas.costs},
          {"blockGasLimit", gas.blockGasLimit},
          {"blockInterval", gas.blockInterval},
          {"genesisTime", genesisTime}};
}

ChainConfig ChainConfig::fromJson(const nlohmann::json &j) {
  ChainConfig cfg;
  if (j.contains("gasSchedule")) {
    for (const auto &[op, cost] : j.at("gasSchedule").items()) {
      cfg.gas.costs[op] = cost.get<std::uint64_t>();
    }
  }
  if (j.contains("blockGasLimit")) {
    cfg.gas.blockGasLimit = j.at("blockGasLimit").get<std::uint64_t>();
  }
  if (j.contains("blockInterval")) {
    cfg.gas.blockInterval = j.at("blockInterval").get<std::int64_t>();
  }
  if (j.contains("genesisTime")) {
    cfg.genesisTime = j.at("genesisTime").get<std::int64_t>();
  }
  cfg.gas.validate();
  return cfg;
}

ChainConfig ChainConfig::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config " + path.string());
  }
  return fromJson(nlohmann::json::parse(in));
}

void ChainConfig::save(const std::filesystem::path &path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write config " + path.string());
  }
  out << toJson().dump(2) << '\n';
}

}  // namespace coldchain
