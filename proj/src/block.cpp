/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/block.hpp"

#include "coldchain/codec.hpp"
#include "coldchain/keccak.hpp"

namespace coldchain {

Hash32 Block::computeHash() const {
  Writer w;
  w.u64(number).fixed(parentHash).i64(timestamp).u64(transactions.size());
  for (const auto &tx : transactions) {
    w.fixed(tx.txHash);
  }
  return keccak256(w.data());
}

nlohmann::json Block::toJson() const {
  nlohmann::json txs = nlohmann::json::array();
  for (const auto &tx : transactions) {
    txs.push_back(tx.toJson());
  }
  return {{"number", number},
          {"parentHash", parentHash.hex()},
          {"timestamp", timestamp},
          {"gasUsed", gasUsed},
          {"blockHash", blockHash.hex()},
          {"transactions", std::move(txs)}};
}

Block Block::fromJson(const nlohmann::json &j) {
  Block b;
  b.number = j.at("number").get<std::uint64_t>();
  b.parentHash = Hash32::fromCanonicalHex(j.at("parentHash").get<std::string>());
  b.timestamp = j.at("timestamp").get<std::int64_t>();
  b.gasUsed = j.at("gasUsed").get<std::uint64_t>();
  b.blockHash = Hash32::fromCanonicalHex(j.at("blockHash").get<std::string>());
  for (const auto &tx : j.at("transactions")) {
    b.transactions.push_back(SignedTransaction::fromJson(tx));
  }
  return b;
}

nlohmann::json Receipt::toJson() const {
  nlohmann::json events_json = nlohmann::json::array();
  for (const auto &e : events) {
    events_json.push_back({{"event", e.name}, {"args", e.args}});
  }
  nlohmann::json j = {{"txHash", txHash.hex()},
                      {"blockNumber", blockNumber},
                      {"gasUsed", gasUsed},
                      {"status", succeeded() ? "success" : "reverted"},
                      {"events", std::move(events_json)}};
  if (!succeeded()) {
    j["revertReason"] = revertReason;
  }
  if (!contractAddress.isZero()) {
    j["contractAddress"] = contractAddress.hex();
  }
  return j;
}

}  // namespace coldchain
