/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

// coldchain: command-line front end over a persisted chain directory.
//
// Layout of a chain directory:
//   config.json    genesis parameters (written on first use)
//   chain.jsonl    one canonical block per line, genesis first
//   mempool.jsonl  submitted but not yet mined transactions
//   contract       default contract address, set by `deploy`
//   .lock          advisory lock held for the duration of a command

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coldchain/contract.hpp"
#include "coldchain/edge_agg.hpp"
#include "coldchain/identity.hpp"
#include "coldchain/keys.hpp"
#include "coldchain/ledger.hpp"
#include "coldchain/scenario.hpp"
#include "coldchain/throughput.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace coldchain;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

/// Bad flag values and missing prerequisites; maps to exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reverts, rejections, corrupt chains, failed scenarios; maps to exit 1.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string chainDir;
  bool json = false;
  bool autoMine = false;
  std::string contract;
};

void print(const Options &opt, const json &out) {
  if (opt.json) {
    std::cout << out.dump() << '\n';
    return;
  }
  for (const auto &[k, v] : out.items()) {
    std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
              << '\n';
  }
}

std::string readFile(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeFileAtomic(const fs::path &path, const std::string &data) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << data;
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

template <typename T>
T parseHex(const std::string &text, const char *what) {
  try {
    return T::fromHex(text);
  } catch (const ParseError &e) {
    throw UsageError(std::string(what) + ": " + e.what());
  }
}

/// Open chain directory with its lock held, mempool restored.
class ChainDir {
 public:
  ChainDir(const Options &opt, std::optional<ChainConfig> initial = {})
      : dir_(opt.chainDir) {
    fs::create_directories(dir_);
    lock_fd_ = ::open((dir_ / ".lock").c_str(), O_RDWR | O_CREAT, 0644);
    if (lock_fd_ < 0 || ::flock(lock_fd_, LOCK_EX) != 0) {
      throw std::runtime_error("cannot lock " + dir_.string());
    }

    const fs::path config_path = dir_ / "config.json";
    ChainConfig config;
    if (fs::exists(config_path)) {
      config = ChainConfig::load(config_path);
      if (initial && initial->toJson() != config.toJson()) {
        throw UsageError("chain directory " + dir_.string()
                         + " was created with a different configuration");
      }
    } else {
      if (initial) config = *initial;
      config.save(config_path);
    }

    try {
      ledger_.emplace(Ledger::open(dir_ / "chain.jsonl", config));
    } catch (const ChainCorrupt &e) {
      throw DomainError(e.what());
    }

    const fs::path mempool = dir_ / "mempool.jsonl";
    if (fs::exists(mempool)) {
      std::istringstream in(readFile(mempool));
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto tx = SignedTransaction::fromJson(json::parse(line));
        SubmitResult r = ledger_->submit(tx);
        if (!r.accepted) {
          throw DomainError("mempool entry " + tx.txHash.hex() + " rejected: "
                            + std::string(reasonName(r.reason)));
        }
      }
    }

    if (!opt.contract.empty()) {
      contract_ = parseHex<Address>(opt.contract, "--contract");
    } else if (fs::exists(dir_ / "contract")) {
      std::string text = readFile(dir_ / "contract");
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.pop_back();
      }
      contract_ = Address::fromHex(text);
    }
  }

  ~ChainDir() {
    if (lock_fd_ >= 0) ::close(lock_fd_);
  }
  ChainDir(const ChainDir &) = delete;
  ChainDir &operator=(const ChainDir &) = delete;

  Ledger &ledger() { return *ledger_; }
  const fs::path &dir() const { return dir_; }

  const Address &contract() const {
    if (!contract_) {
      throw UsageError("no contract: run deploy first or pass --contract");
    }
    return *contract_;
  }
  void setDefaultContract(const Address &a) {
    contract_ = a;
    writeFileAtomic(dir_ / "contract", a.hex() + "\n");
  }

  /// Rewrites mempool.jsonl from the ledger's pending queue.
  void persistMempool() {
    std::string out;
    for (const auto &tx : ledger_->pending()) out += tx.toJson().dump() + "\n";
    writeFileAtomic(dir_ / "mempool.jsonl", out);
  }

 private:
  fs::path dir_;
  int lock_fd_ = -1;
  std::optional<Ledger> ledger_;
  std::optional<Address> contract_;
};

/// Signs, submits and optionally mines one call; returns the printed result.
json submitCall(const Options &opt, ChainDir &chain, const Keypair &key,
                const Address &target, const ContractCall &call) {
  Ledger &ledger = chain.ledger();
  const std::uint64_t nonce = ledger.nextNonce(key.address());
  SignedTransaction tx =
      signTransaction(key, target, std::string(opName(call)),
                      encodeArgs(call), nonce, ledger.config().gas);
  SubmitResult r = ledger.submit(tx);
  if (!r.accepted) {
    throw DomainError("transaction rejected: " + std::string(reasonName(r.reason)));
  }
  json out = {{"txHash", tx.txHash.hex()}, {"op", tx.op}, {"nonce", nonce}};
  if (opt.autoMine) {
    ledger.mineAll();
    Receipt receipt = *ledger.receipt(tx.txHash);
    out["status"] = receipt.succeeded() ? "success" : "reverted";
    out["blockNumber"] = receipt.blockNumber;
    out["gasUsed"] = receipt.gasUsed;
    if (!receipt.succeeded()) out["revertReason"] = receipt.revertReason;
  } else {
    out["status"] = "pending";
  }
  chain.persistMempool();
  return out;
}

int finish(const Options &opt, const json &out) {
  print(opt, out);
  return out.value("status", "") == "reverted" ? kExitDomain : kExitOk;
}

Keypair loadKey(const std::string &path) {
  if (path.empty()) throw UsageError("--key is required");
  try {
    return Keypair::load(path);
  } catch (const std::exception &e) {
    throw UsageError("cannot load key " + path + ": " + e.what());
  }
}

std::optional<Hash32> findTxSender(const Ledger &ledger, const Hash32 &txHash,
                                   Address *from) {
  auto receipt = ledger.receipt(txHash);
  if (!receipt) return std::nullopt;
  for (const auto &tx : ledger.block(receipt->blockNumber).transactions) {
    if (tx.txHash == txHash) {
      *from = tx.from;
      return txHash;
    }
  }
  return std::nullopt;
}

json credentialsJson(const identity::BeneficiaryCredentials &c) {
  return {{"pi", c.pi},
          {"secret", toPrefixedHex(c.sk)},
          {"hashPI", c.hashPI.hex()},
          {"hashSecret", c.hashSK.hex()},
          {"root", c.root.hex()}};
}

identity::BeneficiaryCredentials loadCredentials(const std::string &path) {
  if (path.empty()) throw UsageError("--credentials is required");
  try {
    json j = json::parse(readFile(path));
    return identity::BeneficiaryCredentials::fromBytes(
        j.at("pi").get<std::string>(),
        fromHex(j.at("secret").get<std::string>()));
  } catch (const UsageError &) {
    throw;
  } catch (const std::exception &e) {
    throw UsageError("bad credentials file " + path + ": " + e.what());
  }
}

json recordsJson(const std::vector<MonitoredRecord> &records) {
  json list = json::array();
  for (const auto &r : records) list.push_back(sim::recordToJson(r));
  return list;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Cold-chain vaccine registry on a simulated ledger"};
  app.require_subcommand(1);
  Options opt;
  const char *env_dir = std::getenv("COLDCHAIN_DIR");
  opt.chainDir = env_dir ? env_dir : "chain";
  app.add_option("--chain", opt.chainDir,
                 "Chain directory (default $COLDCHAIN_DIR or ./chain)");
  app.add_flag("--json", opt.json, "Machine-readable output");
  app.add_flag("--auto-mine", opt.autoMine, "Mine immediately after submitting");
  app.add_option("--contract", opt.contract,
                 "Registry address (default: last deployed)");

  std::string key_path;
  auto with_key = [&](CLI::App *cmd) {
    cmd->add_option("--key", key_path, "Signing keypair file")->required();
  };

  // Arguments shared by several subcommands.
  std::string out_path, label, address_arg, lot_arg, rule_arg, old_arg, new_arg;
  std::string pi_arg, secret_arg, credentials_arg, qr_arg, hash_secret_arg;
  std::string description_arg, tx_arg, csv_arg, scenario_arg;
  std::int64_t min_arg = 0, max_arg = 0, value_arg = 0, interval_arg = 3600;
  std::uint64_t time_delta_arg = 0, samples_arg = 0, blocks_arg = 0;
  std::uint64_t max_freezers = 0, step = 0, monitor_gas = 140000;
  bool simulate = false;

  auto *keygen = app.add_subcommand("keygen", "Create a keypair file");
  keygen->add_option("--out", out_path, "Output path")->required();
  keygen->add_option("--label", label, "Derive deterministically from a label");

  auto *deploy = app.add_subcommand("deploy", "Deploy a registry contract");
  with_key(deploy);

  auto *reg_doctor = app.add_subcommand("register-doctor", "Register a doctor");
  with_key(reg_doctor);
  reg_doctor->add_option("--doctor", address_arg, "Doctor address")->required();

  auto *reg_admin =
      app.add_subcommand("register-admin", "Register a medical unit admin");
  with_key(reg_admin);
  reg_admin->add_option("--admin", address_arg, "Admin address")->required();

  auto *subscribe = app.add_subcommand(
      "subscribe", "Create beneficiary credentials and register the commitment");
  with_key(subscribe);
  subscribe->add_option("--pi", pi_arg, "Personal identification number")
      ->required();
  subscribe->add_option("--secret", secret_arg,
                        "Secret text (default: 32 random bytes)");
  subscribe->add_option("--credentials", credentials_arg,
                        "Where to store the off-chain credentials")
      ->required();
  subscribe->add_option("--qr-out", out_path, "Also write the QR payload here");

  auto *reg_rule = app.add_subcommand("register-rule", "Register a tracking rule");
  with_key(reg_rule);
  reg_rule->add_option("--name", rule_arg)->required();
  reg_rule->add_option("--min", min_arg)->required();
  reg_rule->add_option("--max", max_arg)->required();
  reg_rule->add_option("--time-delta", time_delta_arg, "Seconds")->required();

  auto *reg_freezer =
      app.add_subcommand("register-freezer", "Bind a rule to a freezer");
  with_key(reg_freezer);
  reg_freezer->add_option("--freezer", address_arg)->required();
  reg_freezer->add_option("--rule", rule_arg)->required();

  auto *reg_lot = app.add_subcommand("register-lot", "Register a vaccine lot");
  with_key(reg_lot);
  reg_lot->add_option("--lot", lot_arg, "32-byte lot id")->required();
  reg_lot->add_option("--samples", samples_arg)->required();

  auto *assign =
      app.add_subcommand("assign-freezer", "Move a lot between freezers");
  with_key(assign);
  assign->add_option("--lot", lot_arg)->required();
  assign->add_option("--old", old_arg, "Current freezer")->required();
  assign->add_option("--new", new_arg, "New freezer")->required();

  auto *monitor = app.add_subcommand("monitor", "Submit one monitored value");
  with_key(monitor);
  monitor->add_option("--lot", lot_arg)->required();
  monitor->add_option("--rule", rule_arg)->required();
  monitor->add_option("--value", value_arg)->required()->allow_extra_args(false);

  std::vector<std::string> freezer_keys;
  auto *ingest = app.add_subcommand(
      "ingest-readings", "Aggregate a readings CSV into monitor transactions");
  ingest->add_option("--csv", csv_arg, "freezer,lotId,rule,value,readAt")
      ->required();
  ingest->add_option("--key", freezer_keys, "Freezer keypair file (repeatable)")
      ->required();
  ingest->add_option("--interval", interval_arg, "Interval length in seconds");

  auto *verify_patient = app.add_subcommand(
      "verify-patient", "Check a beneficiary commitment (read-only)");
  verify_patient->add_option("--qr", qr_arg, "Beneficiary QR payload file");
  verify_patient->add_option("--pi", pi_arg);
  verify_patient->add_option("--hash-secret", hash_secret_arg);
  verify_patient->add_option("--beneficiary", address_arg);

  auto *history = app.add_subcommand("history", "Lot monitoring history");
  history->add_option("--lot", lot_arg)->required();

  auto *sign = app.add_subcommand("administer-sign",
                                  "Sign a vaccine administration");
  with_key(sign);
  sign->add_option("--lot", lot_arg)->required();
  sign->add_option("--qr", qr_arg, "Beneficiary QR payload file");
  sign->add_option("--pi", pi_arg);

  auto *side_effect =
      app.add_subcommand("report-side-effect", "Report a side effect");
  with_key(side_effect);
  side_effect->add_option("--credentials", credentials_arg)->required();
  side_effect->add_option("--lot", lot_arg)->required();
  side_effect->add_option("--description", description_arg)->required();

  auto *mine = app.add_subcommand("mine", "Mine pending transactions");
  mine->add_option("--blocks", blocks_arg,
                   "Mine exactly this many blocks (default: until empty)");

  auto *receipt_cmd = app.add_subcommand("receipt", "Show a receipt");
  receipt_cmd->add_option("--tx", tx_arg)->required();

  auto *verify_chain =
      app.add_subcommand("verify-chain", "Check every hash and link");

  auto *run_scenario = app.add_subcommand(
      "run-scenario", "Replay a scenario into an empty chain directory");
  run_scenario->add_option("--scenario", scenario_arg)->required();
  run_scenario->add_option("--report", out_path, "Write the JSON report here");

  auto *throughput =
      app.add_subcommand("throughput", "Mining time per reporting interval");
  throughput->add_option("--max", max_freezers)->required();
  throughput->add_option("--step", step)->required();
  throughput->add_option("--monitor-gas", monitor_gas);
  throughput->add_option("--out", out_path, "CSV path (default stdout)");
  throughput->add_flag("--simulate", simulate,
                       "Also mine the last point and compare block counts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen) {
      Keypair kp = label.empty() ? Keypair::generate() : Keypair::fromLabel(label);
      kp.save(out_path);
      print(opt, {{"address", kp.address().hex()},
                  {"publicKey", kp.publicKey().hex()},
                  {"path", out_path}});
      return kExitOk;
    }

    if (*throughput) {
      if (max_freezers == 0 || step == 0) {
        throw UsageError("--max and --step must be positive");
      }
      GasSchedule gas = GasSchedule::defaults();
      if (monitor_gas == 0 || monitor_gas > gas.blockGasLimit) {
        throw UsageError("--monitor-gas must be in 1.." +
                         std::to_string(gas.blockGasLimit));
      }
      auto curve = sim::throughputCurve(max_freezers, step, monitor_gas, gas);
      if (out_path.empty()) {
        sim::writeCurveCsv(std::cout, curve);
      } else {
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write " + out_path);
        sim::writeCurveCsv(out, curve);
      }
      if (simulate && !curve.empty()) {
        const auto &last = curve.back();
        std::uint64_t mined =
            sim::simulateMonitorBlocks(last.txCount, monitor_gas, gas);
        std::cerr << "simulated " << last.txCount << " txs: " << mined
                  << " blocks (model " << last.blocksNeeded << ")\n";
        if (mined != last.blocksNeeded) return kExitDomain;
      }
      return kExitOk;
    }

    if (*run_scenario) {
      sim::Scenario s;
      try {
        s = sim::loadScenario(scenario_arg);
      } catch (const sim::ScenarioError &e) {
        throw UsageError(e.what());
      }
      ChainDir chain(opt, s.config);
      if (chain.ledger().height() != 0 || chain.ledger().pendingCount() != 0) {
        throw UsageError("run-scenario needs an empty chain directory");
      }
      sim::ReplayReport report = sim::runScenario(s, chain.ledger());
      chain.persistMempool();
      if (!report.contract.isZero()) chain.setDefaultContract(report.contract);
      if (!out_path.empty()) sim::emitReport(report, out_path);
      json out = {{"scenario", report.scenario},
                  {"status", report.passed ? "PASSED" : "FAILED"},
                  {"blocks", report.blocks},
                  {"transactions", report.transactions().size()},
                  {"totalGas", report.totalGas},
                  {"contract", report.contract.hex()}};
      if (!report.passed) out["failure"] = report.failure;
      print(opt, out);
      return report.passed ? kExitOk : kExitDomain;
    }

    if (*verify_chain) {
      const fs::path dir = opt.chainDir;
      if (!fs::exists(dir / "chain.jsonl")) {
        throw UsageError("no chain at " + dir.string());
      }
      ChainConfig config = fs::exists(dir / "config.json")
                               ? ChainConfig::load(dir / "config.json")
                               : ChainConfig{};
      VerifyResult v = verifyChainFile(dir / "chain.jsonl", config);
      json out = {{"ok", v.ok}};
      if (!v.ok) {
        out["corruptBlock"] = v.corruptBlock;
        out["detail"] = v.detail;
      }
      print(opt, out);
      return v.ok ? kExitOk : kExitDomain;
    }

    ChainDir chain(opt);
    Ledger &ledger = chain.ledger();

    if (*deploy) {
      Keypair kp = loadKey(key_path);
      Address predicted =
          contractAddressFor(kp.address(), ledger.nextNonce(kp.address()));
      json out = submitCall(opt, chain, kp, kDeploySentinel, DeployArgs{});
      chain.setDefaultContract(predicted);
      out["contract"] = predicted.hex();
      return finish(opt, out);
    }
    if (*reg_doctor) {
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    RegisterDoctorArgs{parseHex<Address>(
                                        address_arg, "--doctor")}));
    }
    if (*reg_admin) {
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    RegisterMedicalUnitAdminArgs{parseHex<Address>(
                                        address_arg, "--admin")}));
    }
    if (*subscribe) {
      Keypair kp = loadKey(key_path);
      auto creds = secret_arg.empty()
                       ? identity::BeneficiaryCredentials::fromBytes(
                             pi_arg, identity::generateSecret())
                       : identity::BeneficiaryCredentials::fromText(pi_arg,
                                                                    secret_arg);
      const Address contract = chain.contract();
      // Credentials go to the holder's file, never into the chain directory.
      writeFileAtomic(credentials_arg, credentialsJson(creds).dump(2) + "\n");
      json out = submitCall(opt, chain, kp, contract,
                            RegisterBeneficiaryArgs{creds.root});
      std::string qr = identity::encodeBeneficiaryQr(
          {creds.pi, creds.hashSK, contract, Hash32::fromHex(out["txHash"].get<std::string>())});
      if (!out_path.empty()) writeFileAtomic(out_path, qr);
      out["root"] = creds.root.hex();
      out["qr"] = qr;
      if (!opt.json) {
        print(opt, {{"txHash", out["txHash"]},
                    {"status", out["status"]},
                    {"root", out["root"]}});
        std::cout << "--- QR payload ---\n" << qr;
        return out["status"] == "reverted" ? kExitDomain : kExitOk;
      }
      return finish(opt, out);
    }
    if (*reg_rule) {
      SafeHandlingRule rule{rule_arg, min_arg, max_arg, time_delta_arg};
      return finish(opt, submitCall(opt, chain, loadKey(key_path),
                                    chain.contract(),
                                    RegisterTrackingRuleArgs{rule}));
    }
    if (*reg_freezer) {
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    RegisterFreezerAndRulesArgs{
                                        parseHex<Address>(address_arg, "--freezer"),
                                        rule_arg}));
    }
    if (*reg_lot) {
      Hash32 lot = parseHex<Hash32>(lot_arg, "--lot");
      json out = submitCall(opt, chain, loadKey(key_path), chain.contract(),
                            RegisterVaccineLotArgs{lot, samples_arg});
      out["qr"] = identity::encodeVaccineQr({lot, chain.contract()});
      return finish(opt, out);
    }
    if (*assign) {
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    UpdateVaccineFreezerArgs{
                                        parseHex<Hash32>(lot_arg, "--lot"),
                                        parseHex<Address>(old_arg, "--old"),
                                        parseHex<Address>(new_arg, "--new")}));
    }
    if (*monitor) {
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    MonitorArgs{parseHex<Hash32>(lot_arg, "--lot"),
                                                rule_arg, value_arg}));
    }
    if (*ingest) {
      std::ifstream in(csv_arg);
      if (!in) throw UsageError("cannot read " + csv_arg);
      std::vector<edge::SensorReading> readings;
      try {
        readings = edge::parseReadingsCsv(in);
      } catch (const ParseError &e) {
        throw UsageError(csv_arg + ": " + e.what());
      }
      if (interval_arg <= 0) throw UsageError("--interval must be positive");
      edge::Aggregator agg(chain.contract(), ledger.config().gas, interval_arg);
      for (const auto &path : freezer_keys) agg.addFreezerKey(loadKey(path));
      const edge::NonceSource nonces = [&ledger](const Address &a) {
        return ledger.nextNonce(a);
      };
      json hashes = json::array();
      auto submit_all = [&](const std::vector<SignedTransaction> &txs) {
        for (const auto &tx : txs) {
          SubmitResult r = ledger.submit(tx);
          if (!r.accepted) {
            throw DomainError("transaction rejected: "
                              + std::string(reasonName(r.reason)));
          }
          hashes.push_back(tx.txHash.hex());
        }
      };
      try {
        for (const auto &reading : readings) submit_all(agg.ingest(reading, nonces));
        submit_all(agg.flushAll(nonces));
      } catch (const edge::OutOfOrderReading &e) {
        throw UsageError(csv_arg + ": " + e.what());
      } catch (const edge::MissingFreezerKey &e) {
        throw UsageError(e.what());
      }
      int code = kExitOk;
      json out = {{"readings", readings.size()}, {"transactions", hashes}};
      if (opt.autoMine) {
        ledger.mineAll();
        std::size_t reverted = 0;
        for (const auto &h : hashes) {
          if (!ledger.receipt(Hash32::fromHex(h.get<std::string>()))->succeeded()) {
            ++reverted;
          }
        }
        out["reverted"] = reverted;
        if (reverted > 0) code = kExitDomain;
      }
      chain.persistMempool();
      print(opt, out);
      return code;
    }
    if (*verify_patient) {
      Hash32 hash_pi, hash_secret;
      Address beneficiary;
      if (!qr_arg.empty()) {
        identity::BeneficiaryQrPayload qr;
        try {
          qr = identity::decodeBeneficiaryQr(readFile(qr_arg));
        } catch (const identity::QrDecodeError &e) {
          throw UsageError(qr_arg + ": " + e.what());
        }
        hash_pi = identity::hashText(qr.pi);
        hash_secret = qr.hashSecret;
        if (!findTxSender(ledger, qr.txHash, &beneficiary)) {
          throw DomainError("registration " + qr.txHash.hex()
                            + " is not on the chain");
        }
      } else {
        if (pi_arg.empty() || hash_secret_arg.empty() || address_arg.empty()) {
          throw UsageError("pass --qr or all of --pi, --hash-secret, --beneficiary");
        }
        hash_pi = identity::hashText(pi_arg);
        hash_secret = parseHex<Hash32>(hash_secret_arg, "--hash-secret");
        beneficiary = parseHex<Address>(address_arg, "--beneficiary");
      }
      Bytes raw = ledger.executeCall(
          Address{}, chain.contract(), std::string(ops::kCheckBeneficiaryIdentity),
          encodeArgs(ContractQuery{
              CheckBeneficiaryIdentityQuery{hash_pi, hash_secret, beneficiary}}));
      print(opt, {{"beneficiary", beneficiary.hex()},
                  {"registered", decodeBoolResult(raw)}});
      return kExitOk;
    }
    if (*history) {
      Hash32 lot = parseHex<Hash32>(lot_arg, "--lot");
      Bytes raw = ledger.executeCall(
          Address{}, chain.contract(), std::string(ops::kCheckVaccineLotHistory),
          encodeArgs(ContractQuery{CheckVaccineLotHistoryQuery{lot}}));
      json records = recordsJson(decodeHistory(raw));
      if (opt.json) {
        std::cout << json{{"lot", lot.hex()}, {"records", records}}.dump() << '\n';
      } else {
        for (const auto &r : records) {
          std::cout << r["timestamp"] << ' ' << r["freezer"].get<std::string>()
                    << ' ' << r["rule"].get<std::string>() << ' ' << r["value"]
                    << ' ' << (r["valid"].get<bool>() ? "valid" : "BROKEN")
                    << '\n';
        }
      }
      return kExitOk;
    }
    if (*sign) {
      Hash32 hash_pi;
      if (!qr_arg.empty()) {
        try {
          hash_pi = identity::hashText(
              identity::decodeBeneficiaryQr(readFile(qr_arg)).pi);
        } catch (const identity::QrDecodeError &e) {
          throw UsageError(qr_arg + ": " + e.what());
        }
      } else if (!pi_arg.empty()) {
        hash_pi = identity::hashText(pi_arg);
      } else {
        throw UsageError("pass --qr or --pi");
      }
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    SignAdministeredVaccineArgs{
                                        parseHex<Hash32>(lot_arg, "--lot"),
                                        hash_pi}));
    }
    if (*side_effect) {
      auto creds = loadCredentials(credentials_arg);
      return finish(opt, submitCall(opt, chain, loadKey(key_path), chain.contract(),
                                    RegisterSideEffectArgs{
                                        creds.hashPI, creds.hashSK,
                                        parseHex<Hash32>(lot_arg, "--lot"),
                                        description_arg}));
    }
    if (*mine) {
      const std::uint64_t before = ledger.height();
      if (blocks_arg > 0) {
        for (std::uint64_t i = 0; i < blocks_arg; ++i) ledger.mineBlock();
      } else if (ledger.pendingCount() == 0) {
        ledger.mineBlock();
      } else {
        ledger.mineAll();
      }
      chain.persistMempool();
      Block tip = ledger.tip();
      print(opt, {{"mined", ledger.height() - before},
                  {"height", tip.number},
                  {"timestamp", tip.timestamp},
                  {"tipHash", tip.blockHash.hex()},
                  {"pending", ledger.pendingCount()}});
      return kExitOk;
    }
    if (*receipt_cmd) {
      auto r = ledger.receipt(parseHex<Hash32>(tx_arg, "--tx"));
      if (!r) {
        throw DomainError("no receipt for " + tx_arg);
      }
      if (opt.json) {
        std::cout << r->toJson().dump() << '\n';
      } else {
        std::cout << r->toJson().dump(2) << '\n';
      }
      return kExitOk;
    }
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const CallError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}
