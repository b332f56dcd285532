/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/edge_agg.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "coldchain/contract.hpp"

namespace coldchain::edge {

Aggregator::Aggregator(Address contract, GasSchedule schedule,
                       std::int64_t intervalLength)
    : contract_(contract), schedule_(std::move(schedule)),
      interval_(intervalLength) {
  if (interval_ <= 0) {
    throw std::invalid_argument("interval length must be positive");
  }
}

void Aggregator::addFreezerKey(const Keypair &kp) {
  keys_.insert_or_assign(kp.address(), kp);
}

std::vector<SignedTransaction> Aggregator::ingest(const SensorReading &reading,
                                                  const NonceSource &nonces) {
  StreamKey key{reading.freezer, reading.lotId, reading.rule};
  auto it = buffers_.find(key);
  if (it == buffers_.end()) {
    IntervalBuffer fresh;
    fresh.key = key;
    fresh.intervalStart = reading.readAt;
    fresh.intervalLength = interval_;
    fresh.lastReadAt = reading.readAt;
    it = buffers_.emplace(key, fresh).first;
  }

  IntervalBuffer &buf = it->second;
  if (reading.readAt < buf.intervalStart
      || (buf.count > 0 && reading.readAt < buf.lastReadAt)) {
    throw OutOfOrderReading("reading at " + std::to_string(reading.readAt)
                            + " precedes stream position "
                            + std::to_string(std::max(buf.intervalStart,
                                                      buf.lastReadAt)));
  }

  std::vector<SignedTransaction> flushed;
  if (reading.readAt >= buf.intervalStart + buf.intervalLength) {
    flushed = flush(key, nonces);
    // flush advanced by one interval; skip any further empty intervals.
    std::int64_t gap = reading.readAt - buf.intervalStart;
    buf.intervalStart += (gap / buf.intervalLength) * buf.intervalLength;
  }

  if (buf.count == 0) {
    buf.observedMin = buf.observedMax = reading.value;
  } else {
    buf.observedMin = std::min(buf.observedMin, reading.value);
    buf.observedMax = std::max(buf.observedMax, reading.value);
  }
  ++buf.count;
  buf.lastReadAt = reading.readAt;
  return flushed;
}

std::vector<SignedTransaction> Aggregator::flush(const StreamKey &key,
                                                 const NonceSource &nonces) {
  auto it = buffers_.find(key);
  if (it == buffers_.end()) return {};
  IntervalBuffer &buf = it->second;

  std::vector<SignedTransaction> out;
  if (buf.count > 0) {
    auto kp = keys_.find(key.freezer);
    if (kp == keys_.end()) {
      throw MissingFreezerKey("no keypair for freezer " + key.freezer.hex());
    }
    std::vector<std::int64_t> values{buf.observedMin};
    if (buf.observedMax != buf.observedMin) {
      values.push_back(buf.observedMax);
    }
    std::uint64_t nonce = nonces(key.freezer);
    for (std::int64_t v : values) {
      MonitorArgs args{key.lotId, key.rule, v};
      out.push_back(signTransaction(kp->second, contract_,
                                    std::string(ops::kMonitor),
                                    encodeArgs(ContractCall{args}), nonce++,
                                    schedule_));
    }
  }
  buf.count = 0;
  buf.intervalStart += buf.intervalLength;
  return out;
}

std::vector<SignedTransaction> Aggregator::flushAll(const NonceSource &nonces) {
  std::vector<SignedTransaction> out;
  // Two transactions from one freezer need consecutive nonces even when
  // they come from different streams, so track what has been handed out.
  std::map<Address, std::uint64_t> issued;
  NonceSource tracking = [&](const Address &a) {
    auto it = issued.find(a);
    std::uint64_t base = it == issued.end() ? nonces(a) : it->second;
    return base;
  };
  for (auto &[key, buf] : buffers_) {
    auto txs = flush(key, tracking);
    if (!txs.empty()) {
      issued[key.freezer] = txs.back().nonce + 1;
    }
    out.insert(out.end(), txs.begin(), txs.end());
  }
  return out;
}

const IntervalBuffer *Aggregator::buffer(const StreamKey &key) const {
  auto it = buffers_.find(key);
  return it == buffers_.end() ? nullptr : &it->second;
}

namespace {

std::int64_t parseInt(std::string_view field, std::size_t line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("line " + std::to_string(line) + ": bad integer '"
                     + std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::vector<SensorReading> parseReadingsCsv(std::istream &in) {
  std::vector<SensorReading> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && line.starts_with("freezer")) continue;

    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) cols.push_back(col);
    if (cols.size() != 5) {
      throw ParseError("line " + std::to_string(lineno)
                       + ": expected 5 columns");
    }
    try {
      SensorReading r;
      r.freezer = Address::fromHex(cols[0]);
      r.lotId = Hash32::fromHex(cols[1]);
      r.rule = cols[2];
      r.value = parseInt(cols[3], lineno);
      r.readAt = parseInt(cols[4], lineno);
      out.push_back(std::move(r));
    } catch (const ParseError &e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace coldchain::edge
