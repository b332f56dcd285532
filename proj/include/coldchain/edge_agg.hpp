/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coldchain/bytes.hpp"
#include "coldchain/config.hpp"
#include "coldchain/keys.hpp"
#include "coldchain/transaction.hpp"

namespace coldchain::edge {

inline constexpr std::int64_t kDefaultIntervalSeconds = 3600;

struct SensorReading {
  Address freezer;
  Hash32 lotId;
  std::string rule;
  std::int64_t value = 0;
  std::int64_t readAt = 0;
};

struct StreamKey {
  Address freezer;
  Hash32 lotId;
  std::string rule;

  auto operator<=>(const StreamKey &) const = default;
  bool operator==(const StreamKey &) const = default;
};

struct IntervalBuffer {
  StreamKey key;
  std::int64_t intervalStart = 0;
  std::int64_t intervalLength = kDefaultIntervalSeconds;
  std::int64_t observedMin = 0;
  std::int64_t observedMax = 0;
  std::uint64_t count = 0;
  std::int64_t lastReadAt = 0;
};

class OutOfOrderReading : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingFreezerKey : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Supplies the next nonce for a freezer address (usually
/// Ledger::nextNonce).
using NonceSource = std::function<std::uint64_t(const Address &)>;

/**
 * Reduces each (freezer, lot, rule) stream to its per-interval minimum and
 * maximum and turns them into signed monitor transactions.
 *
 * Not internally synchronised: one owner per aggregator.
 */
class Aggregator {
 public:
  Aggregator(Address contract, GasSchedule schedule,
             std::int64_t intervalLength = kDefaultIntervalSeconds);

  void addFreezerKey(const Keypair &kp);

  /// Readings past the current interval first flush it; the resulting
  /// transactions are returned. Throws OutOfOrderReading for a reading
  /// older than the interval start or the stream's previous reading.
  std::vector<SignedTransaction> ingest(const SensorReading &reading,
                                        const NonceSource &nonces);

  /// Zero, one (min == max) or two (min then max) transactions. Throws
  /// MissingFreezerKey with the buffer left intact.
  std::vector<SignedTransaction> flush(const StreamKey &key,
                                       const NonceSource &nonces);

  /// Flushes every stream in key order.
  std::vector<SignedTransaction> flushAll(const NonceSource &nonces);

  const IntervalBuffer *buffer(const StreamKey &key) const;
  std::int64_t intervalLength() const { return interval_; }

 private:
  Address contract_;
  GasSchedule schedule_;
  std::int64_t interval_;
  std::map<Address, Keypair> keys_;
  std::map<StreamKey, IntervalBuffer> buffers_;
};

/// Parses "freezer,lotId,rule,value,readAt" lines; a leading header line
/// starting with "freezer" is skipped. Throws ParseError naming the line.
std::vector<SensorReading> parseReadingsCsv(std::istream &in);

}  // namespace coldchain::edge
