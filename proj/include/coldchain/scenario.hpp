/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coldchain/block.hpp"
#include "coldchain/config.hpp"
#include "coldchain/contract.hpp"
#include "coldchain/identity.hpp"
#include "coldchain/keys.hpp"
#include "coldchain/ledger.hpp"
#include "json.hpp"

namespace coldchain::sim {

/// Parse or reference error; the message names the offending element.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Actor {
  std::string name;
  std::string role;
  Keypair key;
  /// Beneficiaries only.
  std::optional<identity::BeneficiaryCredentials> credentials;
};

struct ScenarioLot {
  std::string name;
  Hash32 id;
  std::uint64_t samples = 0;
};

struct ScenarioFreezer {
  std::string actor;
  std::vector<std::string> rules;
};

/// Event kinds beyond the contract operations.
inline constexpr std::string_view kReadingEvent = "reading";
inline constexpr std::string_view kFlushEvent = "flushReadings";

struct TimelineEvent {
  std::int64_t t = 0;
  std::string op;
  nlohmann::json args;
};

/**
 * A replayable pipeline: declared actors, rules, freezers and lots, plus a
 * timeline of contract operations, read-only checks and sensor readings.
 * Every name used on the timeline resolves to a declaration.
 */
struct Scenario {
  std::string name;
  ChainConfig config;
  std::int64_t readingInterval = 3600;
  std::vector<Actor> actors;
  std::vector<SafeHandlingRule> rules;
  std::vector<ScenarioFreezer> freezers;
  std::vector<ScenarioLot> lots;
  std::vector<TimelineEvent> timeline;

  const Actor &actor(const std::string &name) const;
  const ScenarioLot &lot(const std::string &name) const;
  const SafeHandlingRule &rule(const std::string &name) const;
  std::optional<std::string> actorName(const Address &address) const;
};

Scenario parseScenario(const nlohmann::json &j);
Scenario loadScenario(const std::filesystem::path &path);

enum class EntryKind { kTransaction, kCall, kReading, kFlush };

struct ReportEntry {
  EntryKind kind = EntryKind::kTransaction;
  /// Timeline index; transactions generated by the edge aggregator carry the
  /// index of the event that triggered them.
  std::size_t eventIndex = 0;
  bool fromEdge = false;
  std::int64_t t = 0;
  std::string op;
  std::string sender;
  Hash32 txHash;
  std::optional<Receipt> receipt;
  std::optional<std::string> expectedRevert;
  nlohmann::json callResult;
  std::optional<nlohmann::json> expected;
  std::vector<Hash32> generated;
};

struct LotSummary {
  Hash32 id;
  std::uint64_t initialSamples = 0;
  std::optional<std::uint64_t> remainingSamples;
};

struct ReplayReport {
  std::string scenario;
  bool passed = true;
  std::string failure;
  std::vector<ReportEntry> entries;
  std::map<std::string, LotSummary> lots;
  std::map<std::string, std::vector<MonitoredRecord>> histories;
  std::uint64_t totalGas = 0;
  std::uint64_t blocks = 0;
  Address contract;
  Hash32 stateDigest;
  Hash32 tipHash;

  std::vector<const ReportEntry *> transactions() const;
  nlohmann::json toJson() const;
};

/// Replays on a fresh in-memory ledger built from the scenario's config.
ReplayReport runScenario(const Scenario &scenario);

/// Replays on a caller-supplied fresh ledger (e.g. one backed by a chain
/// file). Throws std::invalid_argument if the ledger already has blocks.
ReplayReport runScenario(const Scenario &scenario, Ledger &ledger);

/// Pretty JSON with a trailing newline; identical reports give identical
/// bytes.
void emitReport(const ReplayReport &report, const std::filesystem::path &path);

nlohmann::json recordToJson(const MonitoredRecord &record);

}  // namespace coldchain::sim
