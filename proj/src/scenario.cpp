/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "coldchain/edge_agg.hpp"
#include "coldchain/keccak.hpp"

namespace coldchain::sim {

namespace {

enum class ArgKind { kActor, kBeneficiary, kFreezer, kLot, kRule, kInt, kString };

struct ArgSpec {
  std::string_view key;
  ArgKind kind;
};

const std::map<std::string_view, std::vector<ArgSpec>> &argSpecs() {
  using enum ArgKind;
  static const std::map<std::string_view, std::vector<ArgSpec>> specs = {
      {ops::kDeploy, {{"sender", kActor}}},
      {ops::kRegisterDoctor, {{"sender", kActor}, {"doctor", kActor}}},
      {ops::kRegisterMedicalUnitAdmin, {{"sender", kActor}, {"admin", kActor}}},
      {ops::kRegisterBeneficiary, {{"sender", kBeneficiary}}},
      {ops::kRegisterTrackingRule, {{"sender", kActor}, {"rule", kRule}}},
      {ops::kRegisterFreezerAndRules,
       {{"sender", kActor}, {"freezer", kFreezer}, {"rule", kRule}}},
      {ops::kRegisterVaccineLot, {{"sender", kActor}, {"lot", kLot}}},
      {ops::kUpdateVaccineFreezer,
       {{"sender", kActor}, {"lot", kLot}, {"oldFreezer", kActor},
        {"newFreezer", kActor}}},
      {ops::kMonitor,
       {{"sender", kActor}, {"lot", kLot}, {"rule", kRule}, {"value", kInt}}},
      {ops::kSignAdministeredVaccine,
       {{"sender", kActor}, {"lot", kLot}, {"beneficiary", kBeneficiary}}},
      {ops::kRegisterSideEffect,
       {{"sender", kActor}, {"lot", kLot}, {"beneficiary", kBeneficiary},
        {"description", kString}}},
      {ops::kCheckBeneficiaryIdentity,
       {{"sender", kActor}, {"beneficiary", kBeneficiary}}},
      {ops::kCheckVaccineLotHistory, {{"sender", kActor}, {"lot", kLot}}},
      {kReadingEvent,
       {{"freezer", kFreezer}, {"lot", kLot}, {"rule", kRule}, {"value", kInt}}},
      {kFlushEvent, {}},
  };
  return specs;
}

template <typename T>
T field(const nlohmann::json &j, std::string_view key, const std::string &where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ScenarioError(where + ": missing '" + std::string(key) + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception &e) {
    throw ScenarioError(where + ": bad '" + std::string(key) + "': " + e.what());
  }
}

std::string str(const nlohmann::json &args, std::string_view key) {
  return args.at(key).get<std::string>();
}

}  // namespace

const Actor &Scenario::actor(const std::string &n) const {
  for (const auto &a : actors) {
    if (a.name == n) return a;
  }
  throw ScenarioError("undeclared actor '" + n + "'");
}

const ScenarioLot &Scenario::lot(const std::string &n) const {
  for (const auto &l : lots) {
    if (l.name == n) return l;
  }
  throw ScenarioError("undeclared lot '" + n + "'");
}

const SafeHandlingRule &Scenario::rule(const std::string &n) const {
  for (const auto &r : rules) {
    if (r.name == n) return r;
  }
  throw ScenarioError("undeclared rule '" + n + "'");
}

std::optional<std::string> Scenario::actorName(const Address &address) const {
  for (const auto &a : actors) {
    if (a.key.address() == address) return a.name;
  }
  return std::nullopt;
}

Scenario parseScenario(const nlohmann::json &j) {
  if (!j.is_object()) {
    throw ScenarioError("scenario must be a JSON object");
  }
  Scenario s;
  s.name = j.value("name", std::string{});
  try {
    if (j.contains("chain")) s.config = ChainConfig::fromJson(j.at("chain"));
  } catch (const std::exception &e) {
    throw ScenarioError(std::string("chain: ") + e.what());
  }
  s.readingInterval = j.value("readingInterval", std::int64_t{3600});

  const nlohmann::json empty = nlohmann::json::array();
  const auto &actors = j.contains("actors") ? j.at("actors") : empty;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    const auto &a = actors[i];
    std::string where = "actors[" + std::to_string(i) + "]";
    std::string name = field<std::string>(a, "name", where);
    where += " '" + name + "'";
    std::string role = a.value("role", std::string{});
    Keypair key = a.contains("seed")
                      ? Keypair::fromSeed(Seed::fromHex(field<std::string>(
                            a, "seed", where)))
                      : Keypair::fromLabel("actor:" + name);
    Actor actor{name, role, key, std::nullopt};
    if (role == "beneficiary") {
      actor.credentials = identity::BeneficiaryCredentials::fromText(
          field<std::string>(a, "pi", where),
          field<std::string>(a, "secret", where));
    }
    for (const auto &prev : s.actors) {
      if (prev.name == name) throw ScenarioError(where + ": duplicate name");
    }
    s.actors.push_back(std::move(actor));
  }

  const auto &rules = j.contains("rules") ? j.at("rules") : empty;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::string where = "rules[" + std::to_string(i) + "]";
    SafeHandlingRule r;
    r.name = field<std::string>(rules[i], "name", where);
    r.minValue = field<std::int64_t>(rules[i], "minValue", where);
    r.maxValue = field<std::int64_t>(rules[i], "maxValue", where);
    r.timeDelta = field<std::uint64_t>(rules[i], "timeDelta", where);
    s.rules.push_back(std::move(r));
  }

  const auto &lots = j.contains("lots") ? j.at("lots") : empty;
  for (std::size_t i = 0; i < lots.size(); ++i) {
    std::string where = "lots[" + std::to_string(i) + "]";
    ScenarioLot l;
    l.name = field<std::string>(lots[i], "name", where);
    try {
      l.id = Hash32::fromHex(field<std::string>(lots[i], "id", where));
    } catch (const ParseError &e) {
      throw ScenarioError(where + ": bad 'id': " + e.what());
    }
    l.samples = field<std::uint64_t>(lots[i], "samples", where);
    s.lots.push_back(std::move(l));
  }

  const auto &freezers = j.contains("freezers") ? j.at("freezers") : empty;
  for (std::size_t i = 0; i < freezers.size(); ++i) {
    std::string where = "freezers[" + std::to_string(i) + "]";
    ScenarioFreezer f;
    f.actor = field<std::string>(freezers[i], "actor", where);
    f.rules = freezers[i].value("rules", std::vector<std::string>{});
    try {
      s.actor(f.actor);
      for (const auto &r : f.rules) s.rule(r);
    } catch (const ScenarioError &e) {
      throw ScenarioError(where + ": " + e.what());
    }
    s.freezers.push_back(std::move(f));
  }

  const auto &timeline = j.contains("timeline") ? j.at("timeline") : empty;
  std::int64_t last_t = std::numeric_limits<std::int64_t>::min();
  bool deployed = false;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    const auto &e = timeline[i];
    std::string where = "timeline[" + std::to_string(i) + "]";
    TimelineEvent ev;
    ev.t = field<std::int64_t>(e, "t", where);
    ev.op = field<std::string>(e, "op", where);
    ev.args = e.value("args", nlohmann::json::object());
    where += " (" + ev.op + ")";
    if (ev.t < last_t) {
      throw ScenarioError(where + ": timestamp decreases");
    }
    last_t = ev.t;

    auto spec = argSpecs().find(ev.op);
    if (spec == argSpecs().end()) {
      throw ScenarioError(where + ": unknown op");
    }
    if (ev.op == ops::kDeploy) {
      deployed = true;
    } else if (!deployed) {
      throw ScenarioError(where + ": no contract deployed before this event");
    }
    for (const auto &[key, kind] : spec->second) {
      try {
        switch (kind) {
          case ArgKind::kActor:
            s.actor(field<std::string>(ev.args, key, where));
            break;
          case ArgKind::kBeneficiary: {
            const Actor &a = s.actor(field<std::string>(ev.args, key, where));
            if (!a.credentials) {
              throw ScenarioError("actor '" + a.name + "' is not a beneficiary");
            }
            break;
          }
          case ArgKind::kFreezer: {
            std::string n = field<std::string>(ev.args, key, where);
            bool declared = std::any_of(
                s.freezers.begin(), s.freezers.end(),
                [&](const ScenarioFreezer &f) { return f.actor == n; });
            if (!declared) {
              throw ScenarioError("undeclared freezer '" + n + "'");
            }
            break;
          }
          case ArgKind::kLot:
            s.lot(field<std::string>(ev.args, key, where));
            break;
          case ArgKind::kRule:
            s.rule(field<std::string>(ev.args, key, where));
            break;
          case ArgKind::kInt:
            field<std::int64_t>(ev.args, key, where);
            break;
          case ArgKind::kString:
            field<std::string>(ev.args, key, where);
            break;
        }
      } catch (const ScenarioError &err) {
        std::string msg = err.what();
        throw ScenarioError(msg.starts_with("timeline[") ? msg
                                                         : where + ": " + msg);
      }
    }
    s.timeline.push_back(std::move(ev));
  }
  return s;
}

Scenario loadScenario(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioError("cannot open scenario " + path.string());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
  return parseScenario(j);
}

nlohmann::json recordToJson(const MonitoredRecord &record) {
  return {{"freezer", record.freezer.hex()},
          {"rule", record.rule},
          {"value", record.value},
          {"timestamp", record.timestamp},
          {"valid", record.valid}};
}

namespace {

ContractCall buildCall(const Scenario &s, const TimelineEvent &ev) {
  const auto &a = ev.args;
  auto addr = [&](std::string_view key) {
    return s.actor(str(a, key)).key.address();
  };
  auto creds = [&](std::string_view key) -> const identity::BeneficiaryCredentials & {
    return *s.actor(str(a, key)).credentials;
  };
  const std::string &op = ev.op;
  if (op == ops::kDeploy) return DeployArgs{};
  if (op == ops::kRegisterDoctor) return RegisterDoctorArgs{addr("doctor")};
  if (op == ops::kRegisterMedicalUnitAdmin) {
    return RegisterMedicalUnitAdminArgs{addr("admin")};
  }
  if (op == ops::kRegisterBeneficiary) {
    return RegisterBeneficiaryArgs{creds("sender").root};
  }
  if (op == ops::kRegisterTrackingRule) {
    return RegisterTrackingRuleArgs{s.rule(str(a, "rule"))};
  }
  if (op == ops::kRegisterFreezerAndRules) {
    return RegisterFreezerAndRulesArgs{addr("freezer"), str(a, "rule")};
  }
  if (op == ops::kRegisterVaccineLot) {
    const ScenarioLot &lot = s.lot(str(a, "lot"));
    return RegisterVaccineLotArgs{lot.id, lot.samples};
  }
  if (op == ops::kUpdateVaccineFreezer) {
    return UpdateVaccineFreezerArgs{s.lot(str(a, "lot")).id,
                                    addr("oldFreezer"), addr("newFreezer")};
  }
  if (op == ops::kMonitor) {
    return MonitorArgs{s.lot(str(a, "lot")).id, str(a, "rule"),
                       a.at("value").get<std::int64_t>()};
  }
  if (op == ops::kSignAdministeredVaccine) {
    return SignAdministeredVaccineArgs{s.lot(str(a, "lot")).id,
                                       creds("beneficiary").hashPI};
  }
  if (op == ops::kRegisterSideEffect) {
    const auto &c = creds("beneficiary");
    Hash32 hash_secret =
        a.contains("secret") ? keccak256(str(a, "secret")) : c.hashSK;
    return RegisterSideEffectArgs{c.hashPI, hash_secret, s.lot(str(a, "lot")).id,
                                  str(a, "description")};
  }
  throw UnknownOperation(op);
}

ContractQuery buildQuery(const Scenario &s, const TimelineEvent &ev) {
  const auto &a = ev.args;
  if (ev.op == ops::kCheckBeneficiaryIdentity) {
    const Actor &b = s.actor(str(a, "beneficiary"));
    Hash32 hash_secret = a.contains("secret") ? keccak256(str(a, "secret"))
                                              : b.credentials->hashSK;
    return CheckBeneficiaryIdentityQuery{b.credentials->hashPI, hash_secret,
                                         b.key.address()};
  }
  return CheckVaccineLotHistoryQuery{s.lot(str(a, "lot")).id};
}

const char *kindName(EntryKind k) {
  switch (k) {
    case EntryKind::kTransaction: return "tx";
    case EntryKind::kCall: return "call";
    case EntryKind::kReading: return "reading";
    case EntryKind::kFlush: return "flush";
  }
  return "?";
}

}  // namespace

std::vector<const ReportEntry *> ReplayReport::transactions() const {
  std::vector<const ReportEntry *> out;
  for (const auto &e : entries) {
    if (e.kind == EntryKind::kTransaction) out.push_back(&e);
  }
  return out;
}

nlohmann::json ReplayReport::toJson() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (const auto &e : entries) {
    nlohmann::json j = {{"index", e.eventIndex},
                        {"t", e.t},
                        {"kind", kindName(e.kind)},
                        {"op", e.op}};
    if (!e.sender.empty()) j["sender"] = e.sender;
    switch (e.kind) {
      case EntryKind::kTransaction:
        j["origin"] = e.fromEdge ? "edge" : "timeline";
        j["txHash"] = e.txHash.hex();
        j["receipt"] = e.receipt ? e.receipt->toJson() : nlohmann::json();
        if (e.expectedRevert) j["expectedRevert"] = *e.expectedRevert;
        break;
      case EntryKind::kCall:
        j["result"] = e.callResult;
        if (e.expected) j["expected"] = *e.expected;
        break;
      case EntryKind::kReading:
      case EntryKind::kFlush: {
        nlohmann::json hashes = nlohmann::json::array();
        for (const auto &h : e.generated) hashes.push_back(h.hex());
        j["generated"] = std::move(hashes);
        break;
      }
    }
    entries_json.push_back(std::move(j));
  }

  nlohmann::json lots_json = nlohmann::json::object();
  for (const auto &[name, lot] : lots) {
    lots_json[name] = {{"id", lot.id.hex()},
                       {"initialSamples", lot.initialSamples},
                       {"remainingSamples",
                        lot.remainingSamples ? nlohmann::json(*lot.remainingSamples)
                                             : nlohmann::json()}};
  }
  nlohmann::json hist_json = nlohmann::json::object();
  for (const auto &[name, records] : histories) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto &r : records) list.push_back(recordToJson(r));
    hist_json[name] = std::move(list);
  }
  return {{"scenario", scenario},
          {"status", passed ? "PASSED" : "FAILED"},
          {"failure", failure},
          {"contract", contract.hex()},
          {"blocks", blocks},
          {"tipHash", tipHash.hex()},
          {"stateDigest", stateDigest.hex()},
          {"totalGas", totalGas},
          {"entries", std::move(entries_json)},
          {"lots", std::move(lots_json)},
          {"histories", std::move(hist_json)}};
}

ReplayReport runScenario(const Scenario &scenario) {
  Ledger ledger(scenario.config);
  return runScenario(scenario, ledger);
}

ReplayReport runScenario(const Scenario &s, Ledger &ledger) {
  if (ledger.height() != 0 || ledger.pendingCount() != 0) {
    throw std::invalid_argument("scenario replay needs a fresh ledger");
  }
  ReplayReport report;
  report.scenario = s.name;
  for (const auto &lot : s.lots) {
    report.lots[lot.name] = LotSummary{lot.id, lot.samples, std::nullopt};
  }

  // Receipts are only checked after the final mine, so keep the failure
  // with the lowest event index rather than the first one noticed.
  std::optional<std::size_t> failed_at;
  auto fail = [&](std::size_t index, std::string why) {
    if (!failed_at || index < *failed_at) {
      failed_at = index;
      report.passed = false;
      report.failure = std::move(why);
    }
  };
  auto describe = [](std::size_t i, const std::string &op) {
    return "timeline[" + std::to_string(i) + "] (" + op + ")";
  };

  const edge::NonceSource nonces = [&ledger](const Address &a) {
    return ledger.nextNonce(a);
  };
  std::optional<edge::Aggregator> aggregator;

  auto submit = [&](const SignedTransaction &tx, std::size_t index,
                    std::int64_t t, bool fromEdge,
                    std::optional<std::string> expectedRevert) {
    ReportEntry entry;
    entry.kind = EntryKind::kTransaction;
    entry.eventIndex = index;
    entry.fromEdge = fromEdge;
    entry.t = t;
    entry.op = tx.op;
    entry.sender = s.actorName(tx.from).value_or(tx.from.hex());
    entry.txHash = tx.txHash;
    entry.expectedRevert = std::move(expectedRevert);
    SubmitResult r = ledger.submit(tx);
    if (!r.accepted) {
      fail(index, describe(index, tx.op) + ": submission rejected ("
           + std::string(reasonName(r.reason)) + ")");
    }
    report.entries.push_back(std::move(entry));
  };

  for (std::size_t i = 0; i < s.timeline.size(); ++i) {
    const TimelineEvent &ev = s.timeline[i];
    while (ledger.nextBlockTime() < ev.t) {
      ledger.mineBlock();
    }

    if (isMutatingOp(ev.op)) {
      const Actor &sender = s.actor(str(ev.args, "sender"));
      std::uint64_t nonce = ledger.nextNonce(sender.key.address());
      ContractCall call = buildCall(s, ev);
      Address target = kDeploySentinel;
      if (std::holds_alternative<DeployArgs>(call)) {
        report.contract = contractAddressFor(sender.key.address(), nonce);
        aggregator.emplace(report.contract, s.config.gas, s.readingInterval);
        for (const auto &f : s.freezers) {
          aggregator->addFreezerKey(s.actor(f.actor).key);
        }
      } else {
        target = report.contract;
      }
      std::optional<std::string> expected_revert;
      if (ev.args.contains("expectRevert")) {
        expected_revert = ev.args.at("expectRevert").get<std::string>();
      }
      submit(signTransaction(sender.key, target, ev.op, encodeArgs(call), nonce,
                             s.config.gas),
             i, ev.t, false, std::move(expected_revert));
    } else if (isQueryOp(ev.op)) {
      while (ledger.pendingCount() > 0) ledger.mineBlock();
      ReportEntry entry;
      entry.kind = EntryKind::kCall;
      entry.eventIndex = i;
      entry.t = ev.t;
      entry.op = ev.op;
      entry.sender = str(ev.args, "sender");
      ContractQuery q = buildQuery(s, ev);
      Bytes raw = ledger.executeCall(s.actor(entry.sender).key.address(),
                                     report.contract, ev.op, encodeArgs(q));
      if (ev.op == ops::kCheckBeneficiaryIdentity) {
        bool ok = decodeBoolResult(raw);
        entry.callResult = ok;
        if (ev.args.contains("expect")) {
          entry.expected = ev.args.at("expect");
          if (ev.args.at("expect").get<bool>() != ok) {
            fail(i, describe(i, ev.op) + ": result differs from expectation");
          }
        }
      } else {
        auto history = decodeHistory(raw);
        entry.callResult = nlohmann::json::array();
        std::vector<bool> flags;
        for (const auto &r : history) {
          entry.callResult.push_back(recordToJson(r));
          flags.push_back(r.valid);
        }
        if (ev.args.contains("expectValid")) {
          entry.expected = ev.args.at("expectValid");
          if (ev.args.at("expectValid").get<std::vector<bool>>() != flags) {
            fail(i, describe(i, ev.op) + ": valid flags differ from expectation");
          }
        }
      }
      report.entries.push_back(std::move(entry));
    } else {
      ReportEntry entry;
      entry.eventIndex = i;
      entry.t = ev.t;
      entry.op = ev.op;
      std::vector<SignedTransaction> generated;
      try {
        if (ev.op == kReadingEvent) {
          entry.kind = EntryKind::kReading;
          entry.sender = str(ev.args, "freezer");
          edge::SensorReading reading{s.actor(entry.sender).key.address(),
                                      s.lot(str(ev.args, "lot")).id,
                                      str(ev.args, "rule"),
                                      ev.args.at("value").get<std::int64_t>(),
                                      ev.t};
          generated = aggregator->ingest(reading, nonces);
        } else {
          entry.kind = EntryKind::kFlush;
          generated = aggregator->flushAll(nonces);
        }
      } catch (const std::exception &e) {
        fail(i, describe(i, ev.op) + ": " + e.what());
      }
      for (const auto &tx : generated) entry.generated.push_back(tx.txHash);
      report.entries.push_back(std::move(entry));
      for (const auto &tx : generated) submit(tx, i, ev.t, true, std::nullopt);
    }
  }

  if (aggregator) {
    std::size_t index = s.timeline.empty() ? 0 : s.timeline.size() - 1;
    std::int64_t t = s.timeline.empty() ? 0 : s.timeline.back().t;
    for (const auto &tx : aggregator->flushAll(nonces)) {
      submit(tx, index, t, true, std::nullopt);
    }
  }
  ledger.mineAll();

  for (auto &entry : report.entries) {
    if (entry.kind != EntryKind::kTransaction) continue;
    entry.receipt = ledger.receipt(entry.txHash);
    if (!entry.receipt) continue;  // rejected at submission; already failed
    report.totalGas += entry.receipt->gasUsed;
    const std::string where = describe(entry.eventIndex, entry.op);
    if (entry.expectedRevert) {
      if (entry.receipt->succeeded()) {
        fail(entry.eventIndex, where + ": expected revert '" + *entry.expectedRevert
             + "' but succeeded");
      } else if (entry.receipt->revertReason != *entry.expectedRevert) {
        fail(entry.eventIndex, where + ": reverted with '" + entry.receipt->revertReason
             + "', expected '" + *entry.expectedRevert + "'");
      }
    } else if (!entry.receipt->succeeded()) {
      fail(entry.eventIndex, where + ": unexpected revert '" + entry.receipt->revertReason + "'");
    }
  }

  if (auto registry = ledger.contract(report.contract)) {
    for (const auto &lot : s.lots) {
      const auto &lots = registry->state().vaccineLots;
      if (auto it = lots.find(lot.id); it != lots.end()) {
        report.lots[lot.name].remainingSamples = it->second;
      }
      report.histories[lot.name] = registry->checkVaccineLotHistory(lot.id);
    }
  }
  report.blocks = ledger.height();
  report.tipHash = ledger.tip().blockHash;
  report.stateDigest = ledger.stateDigest();
  return report;
}

void emitReport(const ReplayReport &report, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write report " + path.string());
  }
  out << report.toJson().dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("failed writing report " + path.string());
  }
}

}  // namespace coldchain::sim
