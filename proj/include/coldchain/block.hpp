/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/bytes.hpp"
#include "coldchain/transaction.hpp"
#include "json.hpp"

namespace coldchain {

struct Block {
  std::uint64_t number = 0;
  Hash32 parentHash;
  std::int64_t timestamp = 0;
  std::vector<SignedTransaction> transactions;
  std::uint64_t gasUsed = 0;
  Hash32 blockHash;

  /// Hash over (number, parentHash, timestamp, ordered tx hashes).
  Hash32 computeHash() const;

  nlohmann::json toJson() const;
  static Block fromJson(const nlohmann::json &j);

  bool operator==(const Block &) const = default;
};

/// Contract log entry; lives only in receipts.
struct Event {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const Event &) const = default;
};

enum class TxStatus { kSuccess, kReverted };

struct Receipt {
  Hash32 txHash;
  std::uint64_t blockNumber = 0;
  std::uint64_t gasUsed = 0;
  TxStatus status = TxStatus::kSuccess;
  std::string revertReason;
  std::vector<Event> events;
  /// Set for successful deployments.
  Address contractAddress;

  bool succeeded() const { return status == TxStatus::kSuccess; }

  nlohmann::json toJson() const;
};

}  // namespace coldchain
