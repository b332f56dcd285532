/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "coldchain/block.hpp"
#include "coldchain/config.hpp"
#include "coldchain/registry.hpp"
#include "coldchain/transaction.hpp"

namespace coldchain {

enum class RejectReason {
  kUnknownOp,
  kOversized,
  kGasMismatch,
  kBadSignature,
  kHashMismatch,
  kBadNonce,
};

std::string_view reasonName(RejectReason reason);

struct SubmitResult {
  bool accepted = false;
  RejectReason reason = RejectReason::kUnknownOp;

  static SubmitResult ok() { return {true, RejectReason::kUnknownOp}; }
  static SubmitResult rejected(RejectReason r) { return {false, r}; }
};

/// Failure of a read-only call (unknown contract, op, or malformed args).
class CallError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyResult {
  bool ok = true;
  std::uint64_t corruptBlock = 0;
  std::string detail;

  static VerifyResult good() { return {}; }
  static VerifyResult corrupt(std::uint64_t block, std::string why) {
    return {false, block, std::move(why)};
  }
};

class ChainCorrupt : public std::runtime_error {
 public:
  explicit ChainCorrupt(const VerifyResult &r)
      : std::runtime_error("chain corrupt at block "
                           + std::to_string(r.corruptBlock) + ": " + r.detail),
        result(r) {}
  VerifyResult result;
};

/// Structural check of an in-memory block sequence starting at genesis.
VerifyResult verifyBlocks(const std::vector<Block> &blocks,
                          const ChainConfig &config);

/// Checks a persisted chain file. Besides every hash, linkage, gas and
/// clock rule, each line must be the canonical serialization of the block
/// it decodes to.
VerifyResult verifyChainFile(const std::filesystem::path &path,
                             const ChainConfig &config);

/// Canonical one-line serialization used in chain files.
std::string serializeBlock(const Block &block);

/**
 * Single-chain, single-miner ledger with a simulated clock.
 *
 * Submission is thread-safe and serialized through one mempool lock.
 * Mining is exclusive; read-only calls share a lock with each other and
 * never interleave with mining.
 */
class Ledger {
 public:
  explicit Ledger(ChainConfig config = {});

  /// Opens (or creates) a chain file; an existing file is verified and
  /// replayed from genesis. New blocks are appended to the file.
  static Ledger open(const std::filesystem::path &chainFile,
                     ChainConfig config);

  Ledger(Ledger &&other) noexcept;
  Ledger &operator=(Ledger &&) = delete;

  SubmitResult submit(const SignedTransaction &tx);

  /// Packs the mempool FIFO until the next transaction would overflow the
  /// block gas limit, executes the packed transactions, and appends the
  /// block one interval after its parent.
  Block mineBlock();

  /// Mines until the mempool is empty; returns the number of blocks.
  std::uint64_t mineAll();

  Bytes executeCall(const Address &from, const Address &contract,
                    const std::string &op, ByteView args) const;

  std::optional<Receipt> receipt(const Hash32 &txHash) const;

  /// Next nonce `sender` must use, counting queued transactions.
  std::uint64_t nextNonce(const Address &sender) const;

  std::vector<SignedTransaction> pending() const;
  std::size_t pendingCount() const;

  std::uint64_t height() const;
  Block tip() const;
  Block block(std::uint64_t number) const;
  std::vector<Block> blocks() const;
  std::int64_t nextBlockTime() const;

  std::vector<Address> contracts() const;
  /// Copy of a deployed contract, or nullopt.
  std::optional<VaccineRegistry> contract(const Address &address) const;

  /// Digest over every contract's state and every sender's mined nonce.
  Hash32 stateDigest() const;

  VerifyResult verify() const;

  const ChainConfig &config() const { return config_; }

 private:
  Receipt execute(const SignedTransaction &tx, std::uint64_t blockNumber,
                  std::int64_t now);
  void appendBlock(Block block);
  std::optional<RejectReason> validate(const SignedTransaction &tx) const;

  ChainConfig config_;

  mutable std::shared_mutex state_mu_;
  std::vector<Block> blocks_;
  std::map<Address, VaccineRegistry> contracts_;
  std::map<Hash32, Receipt> receipts_;
  std::map<Address, std::uint64_t> mined_nonces_;
  std::unique_ptr<std::ofstream> store_;

  mutable std::mutex mempool_mu_;
  std::deque<SignedTransaction> mempool_;
  std::map<Address, std::uint64_t> pending_nonces_;
};

}  // namespace coldchain
