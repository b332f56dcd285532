/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <random>
#include <sstream>

#include "coldchain/edge_agg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace coldchain;
using namespace coldchain::edge;
using coldchain::testing::kLot;

namespace {

const Keypair kFreezer = Keypair::fromLabel("edge-freezer");
const Address kContract = Keypair::fromLabel("edge-contract").address();
const std::string kRule = "transport-temperature";

struct Counter {
  std::map<Address, std::uint64_t> next;
  NonceSource source() {
    return [this](const Address &a) { return next[a]; };
  }
  void consume(const std::vector<SignedTransaction> &txs) {
    for (const auto &tx : txs) next[tx.from] = tx.nonce + 1;
  }
};

Aggregator makeAggregator(std::int64_t interval = 3600) {
  Aggregator agg(kContract, GasSchedule::defaults(), interval);
  agg.addFreezerKey(kFreezer);
  return agg;
}

SensorReading reading(std::int64_t value, std::int64_t at) {
  return {kFreezer.address(), kLot, kRule, value, at};
}

std::vector<std::int64_t> values(const std::vector<SignedTransaction> &txs) {
  std::vector<std::int64_t> out;
  for (const auto &tx : txs) {
    out.push_back(std::get<MonitorArgs>(decodeCall(tx.op, tx.args)).value);
  }
  return out;
}

const StreamKey kKey{kFreezer.address(), kLot, kRule};

}  // namespace

TEST_CASE("running min, max and count") {
  Aggregator agg = makeAggregator();
  Counter n;
  for (auto [v, t] : {std::pair{-70, 0}, {-72, 10}, {-68, 20}}) {
    CHECK(agg.ingest(reading(v, t), n.source()).empty());
  }
  const IntervalBuffer *buf = agg.buffer(kKey);
  REQUIRE(buf != nullptr);
  CHECK(buf->observedMin == -72);
  CHECK(buf->observedMax == -68);
  CHECK(buf->count == 3);
}

TEST_CASE("single reading gives min equal to max") {
  Aggregator agg = makeAggregator();
  Counter n;
  agg.ingest(reading(-70, 5), n.source());
  CHECK(agg.buffer(kKey)->observedMin == -70);
  CHECK(agg.buffer(kKey)->observedMax == -70);
  auto txs = agg.flushAll(n.source());
  CHECK(values(txs) == std::vector<std::int64_t>{-70});
}

TEST_CASE("out-of-order readings are rejected") {
  Aggregator agg = makeAggregator();
  Counter n;
  agg.ingest(reading(-70, 100), n.source());
  CHECK_THROWS_AS(agg.ingest(reading(-70, 99), n.source()), OutOfOrderReading);
  agg.ingest(reading(-71, 200), n.source());
  CHECK_THROWS_AS(agg.ingest(reading(-70, 150), n.source()), OutOfOrderReading);
  CHECK(agg.buffer(kKey)->count == 2);
}

TEST_CASE("flush emits min then max as signed monitor transactions") {
  Aggregator agg = makeAggregator();
  Counter n;
  n.next[kFreezer.address()] = 4;
  agg.ingest(reading(-72, 0), n.source());
  agg.ingest(reading(-68, 1), n.source());
  auto txs = agg.flush(kKey, n.source());
  REQUIRE(txs.size() == 2);
  CHECK(values(txs) == std::vector<std::int64_t>{-72, -68});
  CHECK(txs[0].nonce == 4);
  CHECK(txs[1].nonce == 5);
  for (const auto &tx : txs) {
    CHECK(tx.op == "monitor");
    CHECK(tx.from == kFreezer.address());
    CHECK(tx.contract == kContract);
    CHECK(tx.gas == 140000);
    CHECK(tx.signatureValid());
    CHECK(tx.computeHash() == tx.txHash);
  }
  CHECK(agg.buffer(kKey)->count == 0);
  CHECK(agg.buffer(kKey)->intervalStart == 3600);
}

TEST_CASE("empty buffer flushes nothing") {
  Aggregator agg = makeAggregator();
  Counter n;
  CHECK(agg.flush(kKey, n.source()).empty());
  agg.ingest(reading(-70, 0), n.source());
  n.consume(agg.flush(kKey, n.source()));
  CHECK(agg.flush(kKey, n.source()).empty());
}

TEST_CASE("all-equal readings collapse to one transaction") {
  Aggregator agg = makeAggregator();
  Counter n;
  for (int t = 0; t < 5; ++t) agg.ingest(reading(-70, t), n.source());
  CHECK(agg.flushAll(n.source()).size() == 1);
}

TEST_CASE("crossing an interval boundary flushes first") {
  Aggregator agg = makeAggregator(100);
  Counter n;
  agg.ingest(reading(-70, 0), n.source());
  agg.ingest(reading(-75, 50), n.source());
  auto txs = agg.ingest(reading(-65, 100), n.source());
  CHECK(values(txs) == std::vector<std::int64_t>{-75, -70});
  CHECK(agg.buffer(kKey)->intervalStart == 100);
  CHECK(agg.buffer(kKey)->count == 1);

  n.consume(txs);
  txs = agg.ingest(reading(-66, 750), n.source());
  CHECK(values(txs) == std::vector<std::int64_t>{-65});
  CHECK(agg.buffer(kKey)->intervalStart == 700);
}

TEST_CASE("missing freezer key keeps the buffer") {
  Aggregator agg(kContract, GasSchedule::defaults());
  Counter n;
  agg.ingest(reading(-70, 0), n.source());
  CHECK_THROWS_AS(agg.flush(kKey, n.source()), MissingFreezerKey);
  CHECK(agg.buffer(kKey)->count == 1);
  agg.addFreezerKey(kFreezer);
  CHECK(agg.flush(kKey, n.source()).size() == 1);
}

TEST_CASE("flushAll issues consecutive nonces across streams of one freezer") {
  Aggregator agg = makeAggregator();
  Counter n;
  agg.ingest(reading(-70, 0), n.source());
  agg.ingest(reading(-72, 1), n.source());
  agg.ingest({kFreezer.address(), kLot, "other-rule", 3, 2}, n.source());
  agg.ingest({kFreezer.address(), kLot, "other-rule", 4, 3}, n.source());
  auto txs = agg.flushAll(n.source());
  REQUIRE(txs.size() == 4);
  for (std::size_t i = 0; i < txs.size(); ++i) CHECK(txs[i].nonce == i);
}

TEST_CASE("at most two transactions per stream per interval") {
  std::mt19937_64 rng(3);
  Aggregator agg = makeAggregator(60);
  Counter n;
  std::map<std::int64_t, int> per_interval;
  std::int64_t t = 0;
  for (int i = 0; i < 2000; ++i) {
    t += static_cast<std::int64_t>(rng() % 20);
    auto txs = agg.ingest(reading(static_cast<std::int64_t>(rng() % 30) - 85, t),
                          n.source());
    n.consume(txs);
    if (!txs.empty()) per_interval[t / 60] += static_cast<int>(txs.size());
  }
  for (const auto &[_, count] : per_interval) CHECK(count <= 2);
}

TEST_CASE("safety preservation: extremes dominate the bound checks") {
  std::mt19937_64 rng(11);
  const SafeHandlingRule rule{kRule, -80, -60, 864000};
  for (int trial = 0; trial < 500; ++trial) {
    Aggregator agg = makeAggregator();
    Counter n;
    const int len = 1 + static_cast<int>(rng() % 20);
    bool all_ok = true;
    for (int i = 0; i < len; ++i) {
      auto v = static_cast<std::int64_t>(rng() % 30) - 85;
      all_ok = all_ok && rule.admits(v, 0);
      agg.ingest(reading(v, i), n.source());
    }
    auto flushed = values(agg.flushAll(n.source()));
    bool flushed_ok = true;
    for (auto v : flushed) flushed_ok = flushed_ok && rule.admits(v, 0);
    CHECK(flushed_ok == all_ok);
  }
}

TEST_CASE("readings CSV parsing") {
  std::stringstream in;
  in << "freezer,lotId,rule,value,readAt\n"
     << kFreezer.address().hex() << ',' << kLot.hex() << ",transport-temperature,-70,100\r\n"
     << "\n"
     << kFreezer.address().hex() << ',' << kLot.hex() << ",transport-temperature,-72,160\n";
  auto rows = parseReadingsCsv(in);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].value == -70);
  CHECK(rows[1].readAt == 160);
  CHECK(rows[0].lotId == kLot);

  std::stringstream bad("0x00,0x00,r,1,2\n");
  CHECK_THROWS_AS(parseReadingsCsv(bad), ParseError);
  std::stringstream short_row(kFreezer.address().hex() + ",x\n");
  CHECK_THROWS_AS(parseReadingsCsv(short_row), ParseError);
}
