/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/ledger.hpp"

#include <sstream>

#include "coldchain/codec.hpp"
#include "coldchain/contract.hpp"
#include "coldchain/keccak.hpp"

namespace coldchain {

std::string_view reasonName(RejectReason reason) {
  switch (reason) {
    case RejectReason::kUnknownOp: return "unknown-op";
    case RejectReason::kOversized: return "oversized";
    case RejectReason::kGasMismatch: return "gas-mismatch";
    case RejectReason::kBadSignature: return "bad-signature";
    case RejectReason::kHashMismatch: return "hash-mismatch";
    case RejectReason::kBadNonce: return "bad-nonce";
  }
  return "unknown";
}

std::string serializeBlock(const Block &block) {
  return block.toJson().dump();
}

namespace {

Block makeGenesis(const ChainConfig &config) {
  Block genesis;
  genesis.number = 0;
  genesis.timestamp = config.blockTime(0);
  genesis.blockHash = genesis.computeHash();
  return genesis;
}

}  // namespace

VerifyResult verifyBlocks(const std::vector<Block> &blocks,
                          const ChainConfig &config) {
  if (blocks.empty()) {
    return VerifyResult::corrupt(0, "missing genesis block");
  }
  std::map<Address, std::uint64_t> nonces;
  Hash32 parent;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block &b = blocks[i];
    auto fail = [i](std::string why) {
      return VerifyResult::corrupt(i, std::move(why));
    };
    if (b.number != i) return fail("block number out of sequence");
    if (b.parentHash != parent) return fail("parent hash does not link");
    if (b.timestamp != config.blockTime(i)) return fail("timestamp off clock");

    std::uint64_t gas = 0;
    for (const auto &tx : b.transactions) {
      if (tx.computeHash() != tx.txHash) return fail("transaction hash mismatch");
      if (!tx.signatureValid()) return fail("transaction signature invalid");
      auto cost = config.gas.costOf(tx.op);
      if (!cost || !isMutatingOp(tx.op) || *cost != tx.gas) {
        return fail("transaction gas does not match schedule");
      }
      if (tx.nonce != nonces[tx.from]) return fail("nonce out of sequence");
      ++nonces[tx.from];
      gas += tx.gas;
    }
    if (gas != b.gasUsed) return fail("gasUsed is not the sum of tx gas");
    if (gas > config.gas.blockGasLimit) return fail("block exceeds gas limit");
    if (b.computeHash() != b.blockHash) return fail("block hash mismatch");
    parent = b.blockHash;
  }
  return VerifyResult::good();
}

VerifyResult verifyChainFile(const std::filesystem::path &path,
                             const ChainConfig &config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return VerifyResult::corrupt(0, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string content = ss.str();

  std::vector<Block> blocks;
  std::optional<VerifyResult> parse_failure;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    const std::size_t index = blocks.size();
    if (end == std::string::npos) {
      parse_failure = VerifyResult::corrupt(index, "unterminated record");
      break;
    }
    std::string line = content.substr(pos, end - pos);
    pos = end + 1;
    try {
      Block b = Block::fromJson(nlohmann::json::parse(line));
      if (serializeBlock(b) != line) {
        parse_failure = VerifyResult::corrupt(index, "non-canonical record");
        break;
      }
      blocks.push_back(std::move(b));
    } catch (const std::exception &e) {
      parse_failure =
          VerifyResult::corrupt(index, std::string("unparseable record: ")
                                           + e.what());
      break;
    }
  }

  if (blocks.empty() && !parse_failure) {
    return VerifyResult::corrupt(0, "missing genesis block");
  }
  if (!blocks.empty()) {
    VerifyResult structural = verifyBlocks(blocks, config);
    if (!structural.ok) return structural;
  }
  if (parse_failure) return *parse_failure;
  return VerifyResult::good();
}

Ledger::Ledger(ChainConfig config) : config_(std::move(config)) {
  config_.gas.validate();
  blocks_.push_back(makeGenesis(config_));
}

Ledger::Ledger(Ledger &&other) noexcept
    : config_(std::move(other.config_)),
      blocks_(std::move(other.blocks_)),
      contracts_(std::move(other.contracts_)),
      receipts_(std::move(other.receipts_)),
      mined_nonces_(std::move(other.mined_nonces_)),
      store_(std::move(other.store_)),
      mempool_(std::move(other.mempool_)),
      pending_nonces_(std::move(other.pending_nonces_)) {}

Ledger Ledger::open(const std::filesystem::path &chainFile,
                    ChainConfig config) {
  Ledger ledger(std::move(config));
  if (std::filesystem::exists(chainFile)) {
    VerifyResult check = verifyChainFile(chainFile, ledger.config_);
    if (!check.ok) {
      throw ChainCorrupt(check);
    }
    std::ifstream in(chainFile);
    std::string line;
    std::vector<Block> loaded;
    while (std::getline(in, line)) {
      loaded.push_back(Block::fromJson(nlohmann::json::parse(line)));
    }
    if (loaded.front() != ledger.blocks_.front()) {
      throw ChainCorrupt(VerifyResult::corrupt(
          0, "genesis does not match the configured genesis parameters"));
    }
    for (std::size_t i = 1; i < loaded.size(); ++i) {
      const Block &b = loaded[i];
      for (const auto &tx : b.transactions) {
        ledger.execute(tx, b.number, b.timestamp);
      }
      ledger.blocks_.push_back(b);
    }
    ledger.pending_nonces_ = ledger.mined_nonces_;
    ledger.store_ = std::make_unique<std::ofstream>(
        chainFile, std::ios::binary | std::ios::app);
  } else {
    ledger.store_ = std::make_unique<std::ofstream>(
        chainFile, std::ios::binary | std::ios::trunc);
    *ledger.store_ << serializeBlock(ledger.blocks_.front()) << '\n';
    ledger.store_->flush();
  }
  if (!*ledger.store_) {
    throw std::runtime_error("cannot write chain file " + chainFile.string());
  }
  return ledger;
}

std::optional<RejectReason> Ledger::validate(
    const SignedTransaction &tx) const {
  auto cost = config_.gas.costOf(tx.op);
  if (!cost || !isMutatingOp(tx.op)) return RejectReason::kUnknownOp;
  if (tx.gas > config_.gas.blockGasLimit) return RejectReason::kOversized;
  if (tx.gas != *cost) return RejectReason::kGasMismatch;
  if (!tx.signatureValid()) return RejectReason::kBadSignature;
  if (tx.computeHash() != tx.txHash) return RejectReason::kHashMismatch;
  return std::nullopt;
}

SubmitResult Ledger::submit(const SignedTransaction &tx) {
  if (auto reason = validate(tx)) {
    return SubmitResult::rejected(*reason);
  }
  std::lock_guard lock(mempool_mu_);
  std::uint64_t &expected = pending_nonces_[tx.from];
  if (tx.nonce != expected) {
    return SubmitResult::rejected(RejectReason::kBadNonce);
  }
  ++expected;
  mempool_.push_back(tx);
  return SubmitResult::ok();
}

Receipt Ledger::execute(const SignedTransaction &tx, std::uint64_t blockNumber,
                        std::int64_t now) {
  Receipt r;
  r.txHash = tx.txHash;
  r.blockNumber = blockNumber;
  r.gasUsed = tx.gas;
  ++mined_nonces_[tx.from];

  auto revert_with = [&r](std::string_view why) {
    r.status = TxStatus::kReverted;
    r.revertReason = std::string(why);
  };

  try {
    ContractCall call = decodeCall(tx.op, tx.args);
    if (std::holds_alternative<DeployArgs>(call)) {
      Address addr = contractAddressFor(tx.from, tx.nonce);
      contracts_.emplace(addr, VaccineRegistry(tx.from));
      r.contractAddress = addr;
    } else {
      auto it = contracts_.find(tx.contract);
      if (it == contracts_.end()) {
        revert_with(revert::kUnknownContract);
      } else {
        r.events = it->second.execute(call, tx.from, now);
      }
    }
  } catch (const Revert &e) {
    revert_with(e.reason());
  } catch (const ParseError &) {
    revert_with(revert::kBadArguments);
  }
  receipts_.emplace(r.txHash, r);
  return r;
}

void Ledger::appendBlock(Block block) {
  if (store_) {
    *store_ << serializeBlock(block) << '\n';
    store_->flush();
  }
  blocks_.push_back(std::move(block));
}

Block Ledger::mineBlock() {
  std::unique_lock state_lock(state_mu_);

  Block block;
  block.number = blocks_.back().number + 1;
  block.parentHash = blocks_.back().blockHash;
  block.timestamp = config_.blockTime(block.number);
  {
    std::lock_guard lock(mempool_mu_);
    while (!mempool_.empty()
           && block.gasUsed + mempool_.front().gas
                  <= config_.gas.blockGasLimit) {
      block.gasUsed += mempool_.front().gas;
      block.transactions.push_back(std::move(mempool_.front()));
      mempool_.pop_front();
    }
  }
  for (const auto &tx : block.transactions) {
    execute(tx, block.number, block.timestamp);
  }
  block.blockHash = block.computeHash();
  appendBlock(block);
  return block;
}

std::uint64_t Ledger::mineAll() {
  std::uint64_t mined = 0;
  while (pendingCount() > 0) {
    mineBlock();
    ++mined;
  }
  return mined;
}

Bytes Ledger::executeCall(const Address &, const Address &contract,
                          const std::string &op, ByteView args) const {
  std::shared_lock lock(state_mu_);
  auto it = contracts_.find(contract);
  if (it == contracts_.end()) {
    throw CallError("no contract at " + contract.hex());
  }
  try {
    return it->second.query(decodeQuery(op, args));
  } catch (const UnknownOperation &e) {
    throw CallError(e.what());
  } catch (const ParseError &e) {
    throw CallError(std::string("malformed call arguments: ") + e.what());
  }
}

std::optional<Receipt> Ledger::receipt(const Hash32 &txHash) const {
  std::shared_lock lock(state_mu_);
  auto it = receipts_.find(txHash);
  if (it == receipts_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Ledger::nextNonce(const Address &sender) const {
  std::lock_guard lock(mempool_mu_);
  auto it = pending_nonces_.find(sender);
  return it == pending_nonces_.end() ? 0 : it->second;
}

std::vector<SignedTransaction> Ledger::pending() const {
  std::lock_guard lock(mempool_mu_);
  return {mempool_.begin(), mempool_.end()};
}

std::size_t Ledger::pendingCount() const {
  std::lock_guard lock(mempool_mu_);
  return mempool_.size();
}

std::uint64_t Ledger::height() const {
  std::shared_lock lock(state_mu_);
  return blocks_.back().number;
}

Block Ledger::tip() const {
  std::shared_lock lock(state_mu_);
  return blocks_.back();
}

Block Ledger::block(std::uint64_t number) const {
  std::shared_lock lock(state_mu_);
  return blocks_.at(number);
}

std::vector<Block> Ledger::blocks() const {
  std::shared_lock lock(state_mu_);
  return blocks_;
}

std::int64_t Ledger::nextBlockTime() const {
  return config_.blockTime(height() + 1);
}

std::vector<Address> Ledger::contracts() const {
  std::shared_lock lock(state_mu_);
  std::vector<Address> out;
  for (const auto &[addr, _] : contracts_) out.push_back(addr);
  return out;
}

std::optional<VaccineRegistry> Ledger::contract(const Address &address) const {
  std::shared_lock lock(state_mu_);
  auto it = contracts_.find(address);
  if (it == contracts_.end()) return std::nullopt;
  return it->second;
}

Hash32 Ledger::stateDigest() const {
  std::shared_lock lock(state_mu_);
  Writer w;
  w.u64(contracts_.size());
  for (const auto &[addr, registry] : contracts_) {
    w.fixed(addr).fixed(registry.digest());
  }
  w.u64(mined_nonces_.size());
  for (const auto &[addr, nonce] : mined_nonces_) {
    w.fixed(addr).u64(nonce);
  }
  return keccak256(w.data());
}

VerifyResult Ledger::verify() const {
  std::shared_lock lock(state_mu_);
  return verifyBlocks(blocks_, config_);
}

}  // namespace coldchain
