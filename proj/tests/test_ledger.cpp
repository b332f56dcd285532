/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <thread>

#include "doctest.h"
#include "support.hpp"

using namespace coldchain;
using coldchain::testing::Harness;
using coldchain::testing::kLot;

namespace {

SignedTransaction monitorTx(const Keypair &kp, const Address &contract,
                            std::uint64_t nonce, const GasSchedule &gas,
                            std::int64_t value = -70) {
  MonitorArgs args{kLot, "transport-temperature", value};
  return signTransaction(kp, contract, std::string(ops::kMonitor),
                         encodeArgs(ContractCall{args}), nonce, gas);
}

std::vector<std::string> readLines(const std::filesystem::path &p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void writeLines(const std::filesystem::path &p,
                const std::vector<std::string> &lines) {
  std::ofstream out(p, std::ios::trunc);
  for (const auto &l : lines) out << l << '\n';
}

}  // namespace

TEST_CASE("genesis block and clock law") {
  ChainConfig cfg;
  Ledger ledger(cfg);
  CHECK(ledger.height() == 0);
  CHECK(ledger.tip().timestamp == 1607426400);
  CHECK(ledger.tip().parentHash.isZero());
  CHECK(ledger.tip().blockHash == ledger.tip().computeHash());

  for (int i = 0; i < 10; ++i) ledger.mineBlock();
  for (std::uint64_t n = 0; n <= ledger.height(); ++n) {
    Block b = ledger.block(n);
    CHECK(b.timestamp == cfg.genesisTime + static_cast<std::int64_t>(n) * 15);
    if (n > 0) CHECK(b.parentHash == ledger.block(n - 1).blockHash);
  }
}

TEST_CASE("empty mempool mines an empty block") {
  Ledger ledger;
  Block b = ledger.mineBlock();
  CHECK(b.number == 1);
  CHECK(b.transactions.empty());
  CHECK(b.gasUsed == 0);
  CHECK(ledger.mineAll() == 0);
}

TEST_CASE("100 monitor transactions at 140000 gas pack 85 then 15") {
  Harness h;
  const auto &gas = h.ledger.config().gas;
  for (int i = 0; i < 100; ++i) {
    Keypair f = Keypair::fromLabel("packer-" + std::to_string(i));
    REQUIRE(h.ledger.submit(monitorTx(f, h.contract, 0, gas)).accepted);
  }
  Block first = h.ledger.mineBlock();
  Block second = h.ledger.mineBlock();
  CHECK(first.transactions.size() == 85);
  CHECK(first.gasUsed == 85 * 140000);
  CHECK(second.transactions.size() == 15);
  CHECK(h.ledger.pendingCount() == 0);
}

TEST_CASE("packing is strict FIFO") {
  Harness h;
  const auto &gas = h.ledger.config().gas;
  std::vector<Hash32> order;
  for (int i = 0; i < 90; ++i) {
    auto tx = monitorTx(Keypair::fromLabel("fifo-" + std::to_string(i)),
                        h.contract, 0, gas);
    order.push_back(tx.txHash);
    REQUIRE(h.ledger.submit(tx).accepted);
  }
  h.ledger.mineAll();
  std::vector<Hash32> mined;
  for (std::uint64_t n = h.ledger.height() - 1; n <= h.ledger.height(); ++n) {
    for (const auto &tx : h.ledger.block(n).transactions) mined.push_back(tx.txHash);
  }
  CHECK(mined == order);
}

TEST_CASE("receipt reports the configured gas") {
  Harness h;
  Receipt r = h.run(h.patient, RegisterBeneficiaryArgs{h.creds.root});
  CHECK(r.succeeded());
  CHECK(r.gasUsed == 84808);
  CHECK(h.ledger.receipt(r.txHash)->blockNumber == r.blockNumber);
}

TEST_CASE("deploy receipt carries the contract address") {
  Ledger ledger;
  Keypair issuer = Keypair::fromLabel("deployer");
  auto tx = signTransaction(issuer, kDeploySentinel, std::string(ops::kDeploy),
                            {}, 0, ledger.config().gas);
  REQUIRE(ledger.submit(tx).accepted);
  ledger.mineAll();
  Receipt r = *ledger.receipt(tx.txHash);
  CHECK(r.gasUsed == 2327309);
  CHECK(r.contractAddress == contractAddressFor(issuer.address(), 0));
  CHECK(ledger.contract(r.contractAddress)->state().vaccineIssuer ==
        issuer.address());
}

TEST_CASE("second deploy by another sender is an independent instance") {
  Harness h;
  Keypair other = Keypair::fromLabel("other-issuer");
  auto tx = signTransaction(other, kDeploySentinel, std::string(ops::kDeploy),
                            {}, 0, h.ledger.config().gas);
  REQUIRE(h.ledger.submit(tx).accepted);
  h.ledger.mineAll();
  Address second = h.ledger.receipt(tx.txHash)->contractAddress;
  CHECK(second != h.contract);
  CHECK(h.ledger.contracts().size() == 2);
  CHECK(h.ledger.contract(second)->state().vaccineIssuer == other.address());
}

TEST_CASE("reverted monitor is mined with its reason and consumes the nonce") {
  Harness h;
  auto tx = monitorTx(h.stranger, h.contract, 0, h.ledger.config().gas);
  REQUIRE(h.ledger.submit(tx).accepted);
  Block b = h.ledger.mineBlock();
  REQUIRE(b.transactions.size() == 1);
  Receipt r = *h.ledger.receipt(tx.txHash);
  CHECK_FALSE(r.succeeded());
  CHECK(r.revertReason == "unauthorized");
  CHECK(r.gasUsed == 140000);
  CHECK(h.ledger.nextNonce(h.stranger.address()) == 1);
}

TEST_CASE("submission rejects malformed transactions") {
  Harness h;
  const auto &gas = h.ledger.config().gas;
  const SignedTransaction good = monitorTx(h.transport, h.contract, 0, gas);

  SUBCASE("unknown op") {
    SignedTransaction tx = good;
    tx.op = "selfDestruct";
    CHECK(h.ledger.submit(tx).reason == RejectReason::kUnknownOp);
    tx.op = std::string(ops::kCheckVaccineLotHistory);
    CHECK(h.ledger.submit(tx).reason == RejectReason::kUnknownOp);
  }
  SUBCASE("gas above the block limit") {
    SignedTransaction tx = good;
    tx.gas = gas.blockGasLimit + 1;
    CHECK(h.ledger.submit(tx).reason == RejectReason::kOversized);
  }
  SUBCASE("gas differing from the schedule") {
    SignedTransaction tx = good;
    tx.gas = 139999;
    CHECK(h.ledger.submit(tx).reason == RejectReason::kGasMismatch);
  }
  SUBCASE("tampered args break the signature") {
    SignedTransaction tx = good;
    tx.args.back() ^= 1;
    CHECK(h.ledger.submit(tx).reason == RejectReason::kBadSignature);
  }
  SUBCASE("forged sender breaks the signature") {
    SignedTransaction tx = good;
    tx.from = h.issuer.address();
    CHECK(h.ledger.submit(tx).reason == RejectReason::kBadSignature);
  }
  SUBCASE("wrong tx hash") {
    SignedTransaction tx = good;
    tx.txHash.data()[0] ^= 1;
    CHECK(h.ledger.submit(tx).reason == RejectReason::kHashMismatch);
  }
  SUBCASE("nonce gap and replay") {
    CHECK(h.ledger.submit(monitorTx(h.transport, h.contract, 1, gas)).reason ==
          RejectReason::kBadNonce);
    CHECK(h.ledger.submit(good).accepted);
    CHECK(h.ledger.submit(good).reason == RejectReason::kBadNonce);
    h.ledger.mineAll();
    CHECK(h.ledger.tip().transactions.size() == 1);
    CHECK(h.ledger.submit(good).reason == RejectReason::kBadNonce);
  }
}

TEST_CASE("calls need a known contract and a query op") {
  Harness h;
  Bytes args = encodeArgs(ContractQuery{CheckVaccineLotHistoryQuery{kLot}});
  CHECK(decodeHistory(h.ledger.executeCall(h.doctor.address(), h.contract,
                                           std::string(ops::kCheckVaccineLotHistory),
                                           args))
            .empty());
  CHECK_THROWS_AS(h.ledger.executeCall(h.doctor.address(), Address{},
                                       std::string(ops::kCheckVaccineLotHistory),
                                       args),
                  CallError);
  CHECK_THROWS_AS(h.ledger.executeCall(h.doctor.address(), h.contract,
                                       std::string(ops::kMonitor), args),
                  CallError);
}

TEST_CASE("gas conservation and nonce monotonicity over a mixed stream") {
  Harness h;
  h.setUpPipeline();
  for (int i = 0; i < 30; ++i) {
    h.ledger.submit(h.sign(h.transport, MonitorArgs{kLot, "transport-temperature",
                                                    -75 + i}));
    h.ledger.submit(h.sign(h.stranger, MonitorArgs{kLot, "transport-temperature", 0}));
  }
  h.ledger.mineAll();
  std::map<Address, std::uint64_t> next;
  for (const auto &b : h.ledger.blocks()) {
    std::uint64_t sum = 0;
    for (const auto &tx : b.transactions) {
      sum += tx.gas;
      CHECK(tx.nonce == next[tx.from]);
      ++next[tx.from];
    }
    CHECK(b.gasUsed == sum);
    CHECK(b.gasUsed <= h.ledger.config().gas.blockGasLimit);
  }
  CHECK(h.ledger.verify().ok);
}

TEST_CASE("concurrent submission keeps per-sender nonces consistent") {
  Harness h;
  const auto &gas = h.ledger.config().gas;
  std::vector<std::thread> threads;
  std::atomic<int> accepted{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      Keypair kp = Keypair::fromLabel("thread-" + std::to_string(t));
      for (std::uint64_t n = 0; n < 20; ++n) {
        if (h.ledger.submit(monitorTx(kp, h.contract, n, gas)).accepted) ++accepted;
      }
    });
  }
  for (auto &t : threads) t.join();
  CHECK(accepted == 160);
  h.ledger.mineAll();
  CHECK(h.ledger.verify().ok);
}

TEST_CASE("chain file verification and replay") {
  auto dir = coldchain::testing::tempDir("ledger");
  const auto file = dir / "chain.jsonl";
  ChainConfig cfg;
  Hash32 digest;
  {
    Ledger ledger = Ledger::open(file, cfg);
    Keypair issuer = Keypair::fromLabel("file-issuer");
    Keypair freezer = Keypair::fromLabel("file-freezer");
    ledger.submit(signTransaction(issuer, kDeploySentinel,
                                  std::string(ops::kDeploy), {}, 0, cfg.gas));
    ledger.mineAll();
    Address contract = contractAddressFor(issuer.address(), 0);
    ledger.submit(monitorTx(freezer, contract, 0, cfg.gas, -70));
    ledger.submit(monitorTx(freezer, contract, 1, cfg.gas, -65));
    ledger.mineAll();
    ledger.mineBlock();
    digest = ledger.stateDigest();
  }

  SUBCASE("untouched chain verifies and replays to the same state") {
    CHECK(verifyChainFile(file, cfg).ok);
    Ledger reopened = Ledger::open(file, cfg);
    CHECK(reopened.height() == 3);
    CHECK(reopened.stateDigest() == digest);
    CHECK(reopened.nextNonce(Keypair::fromLabel("file-freezer").address()) == 2);
  }

  SUBCASE("byte flip inside a transaction's args") {
    auto lines = readLines(file);
    auto pos = lines[2].find("\"args\":\"0x");
    REQUIRE(pos != std::string::npos);
    char &c = lines[2][pos + 12];
    c = c == '0' ? '1' : '0';
    writeLines(file, lines);
    VerifyResult v = verifyChainFile(file, cfg);
    CHECK_FALSE(v.ok);
    CHECK(v.corruptBlock == 2);
    CHECK_THROWS_AS(Ledger::open(file, cfg), ChainCorrupt);
  }

  SUBCASE("two transactions reordered inside a block") {
    auto lines = readLines(file);
    auto j = nlohmann::json::parse(lines[2]);
    REQUIRE(j["transactions"].size() == 2);
    std::swap(j["transactions"][0], j["transactions"][1]);
    lines[2] = j.dump();
    writeLines(file, lines);
    VerifyResult v = verifyChainFile(file, cfg);
    CHECK_FALSE(v.ok);
    CHECK(v.corruptBlock == 2);
  }

  SUBCASE("uppercased hex is not canonical") {
    auto lines = readLines(file);
    auto pos = lines[1].find("\"blockHash\":\"0x");
    REQUIRE(pos != std::string::npos);
    for (std::size_t i = pos + 15; i < pos + 79; ++i) {
      lines[1][i] = static_cast<char>(std::toupper(lines[1][i]));
    }
    writeLines(file, lines);
    CHECK(verifyChainFile(file, cfg).corruptBlock == 1);
  }

  SUBCASE("different genesis parameters are refused") {
    ChainConfig other = cfg;
    other.genesisTime += 1;
    CHECK_FALSE(verifyChainFile(file, other).ok);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("same transaction stream gives byte-identical chain files") {
  auto dir = coldchain::testing::tempDir("determinism");
  auto build = [&](const std::filesystem::path &file) {
    ChainConfig cfg;
    Ledger ledger = Ledger::open(file, cfg);
    Keypair issuer = Keypair::fromLabel("det-issuer");
    ledger.submit(signTransaction(issuer, kDeploySentinel,
                                  std::string(ops::kDeploy), {}, 0, cfg.gas));
    Address contract = contractAddressFor(issuer.address(), 0);
    for (int i = 0; i < 120; ++i) {
      ledger.submit(monitorTx(Keypair::fromLabel("det-" + std::to_string(i % 7)),
                              contract, static_cast<std::uint64_t>(i / 7), cfg.gas,
                              -i));
    }
    ledger.mineAll();
    return ledger.stateDigest();
  };
  Hash32 a = build(dir / "a.jsonl");
  Hash32 b = build(dir / "b.jsonl");
  CHECK(a == b);
  CHECK(coldchain::testing::slurp(dir / "a.jsonl") ==
        coldchain::testing::slurp(dir / "b.jsonl"));
  std::filesystem::remove_all(dir);
}
