/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "coldchain/throughput.hpp"

#include <stdexcept>
#include <string>

#include "coldchain/contract.hpp"
#include "coldchain/keys.hpp"
#include "coldchain/ledger.hpp"

namespace coldchain::sim {

std::uint64_t txPerBlock(std::uint64_t monitorGas, const GasSchedule &gas) {
  if (monitorGas == 0) {
    throw std::invalid_argument("monitor gas must be positive");
  }
  if (monitorGas > gas.blockGasLimit) {
    throw std::invalid_argument("monitor gas exceeds the block gas limit");
  }
  return gas.blockGasLimit / monitorGas;
}

ThroughputPoint throughputPoint(std::uint64_t freezers,
                                std::uint64_t monitorGas,
                                const GasSchedule &gas) {
  const std::uint64_t per_block = txPerBlock(monitorGas, gas);
  ThroughputPoint p;
  p.freezerCount = freezers;
  p.txCount = 2 * freezers;
  p.blocksNeeded = (p.txCount + per_block - 1) / per_block;
  p.miningSeconds = static_cast<std::int64_t>(p.blocksNeeded) * gas.blockInterval;
  return p;
}

std::vector<ThroughputPoint> throughputCurve(std::uint64_t maxFreezers,
                                             std::uint64_t step,
                                             std::uint64_t monitorGas,
                                             const GasSchedule &gas) {
  if (maxFreezers == 0 || step == 0) {
    throw std::invalid_argument("maxFreezers and step must be positive");
  }
  txPerBlock(monitorGas, gas);
  std::vector<ThroughputPoint> curve;
  for (std::uint64_t n = step; n <= maxFreezers; n += step) {
    curve.push_back(throughputPoint(n, monitorGas, gas));
  }
  return curve;
}

void writeCurveCsv(std::ostream &out,
                   const std::vector<ThroughputPoint> &curve) {
  out << "freezerCount,txCount,blocks,seconds\n";
  for (const auto &p : curve) {
    out << p.freezerCount << ',' << p.txCount << ',' << p.blocksNeeded << ','
        << p.miningSeconds << '\n';
  }
}

std::uint64_t simulateMonitorBlocks(std::uint64_t txCount,
                                    std::uint64_t monitorGas,
                                    const GasSchedule &gas) {
  txPerBlock(monitorGas, gas);
  ChainConfig config;
  config.gas = gas;
  config.gas.costs[std::string(ops::kMonitor)] = monitorGas;
  Ledger ledger(config);

  Keypair issuer = Keypair::fromLabel("throughput-issuer");
  ledger.submit(signTransaction(issuer, kDeploySentinel,
                                std::string(ops::kDeploy), {}, 0, config.gas));
  ledger.mineAll();
  const Address contract = ledger.contracts().front();

  // Freezers are deliberately unregistered: their monitor transactions
  // revert but still occupy block space, which is all that packing sees.
  const Hash32 lot;
  for (std::uint64_t i = 0; i < txCount; i += 2) {
    Keypair freezer = Keypair::fromLabel("throughput-freezer-"
                                         + std::to_string(i / 2));
    for (std::uint64_t k = 0; k < 2 && i + k < txCount; ++k) {
      MonitorArgs args{lot, "transport-temperature",
                       static_cast<std::int64_t>(k) - 70};
      auto tx = signTransaction(freezer, contract, std::string(ops::kMonitor),
                                encodeArgs(ContractCall{args}), k, config.gas);
      SubmitResult r = ledger.submit(tx);
      if (!r.accepted) {
        throw std::logic_error("synthetic monitor tx rejected: "
                               + std::string(reasonName(r.reason)));
      }
    }
  }
  return ledger.mineAll();
}

}  // namespace coldchain::sim
