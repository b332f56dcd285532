/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

namespace coldchain {

/**
 * Fixed per-operation gas costs plus the block limits they are measured
 * against.
 *
 * Defaults are one representative receipt per operation taken from the
 * reference testnet deployment; `monitor` uses the 140 000 figure the
 * throughput analysis is built on instead of either of the two observed
 * monitor receipts (160 278 and 129 212).
 */
struct GasSchedule {
  std::map<std::string, std::uint64_t> costs;
  std::uint64_t blockGasLimit = 12'000'000;
  std::int64_t blockInterval = 15;

  static GasSchedule defaults();

  /// Cost for `op`, or nullopt when the op has no entry.
  std::optional<std::uint64_t> costOf(const std::string &op) const;

  /// Throws std::invalid_argument when an op is missing, a cost is zero, or
  /// some cost does not fit in a block.
  void validate() const;
};

struct ChainConfig {
  GasSchedule gas = GasSchedule::defaults();
  /// Timestamp of block 0. 2020-12-08T11:20:00Z, the day of the reference
  /// testnet run.
  std::int64_t genesisTime = 1'607'426'400;

  std::int64_t blockTime(std::uint64_t number) const {
    return genesisTime
           + static_cast<std::int64_t>(number) * gas.blockInterval;
  }

  nlohmann::json toJson() const;
  /// Missing keys keep their defaults.
  static ChainConfig fromJson(const nlohmann::json &j);
  static ChainConfig load(const std::filesystem::path &path);
  void save(const std::filesystem::path &path) const;
};

}  // namespace coldchain
