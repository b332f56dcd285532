/**
 * Copyright The coldchain-registry Authors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "coldchain/config.hpp"

namespace coldchain::sim {

/// Mining cost of one reporting interval in which every freezer submits its
/// minimum and maximum reading.
struct ThroughputPoint {
  std::uint64_t freezerCount = 0;
  std::uint64_t txCount = 0;
  std::uint64_t blocksNeeded = 0;
  std::int64_t miningSeconds = 0;

  bool operator==(const ThroughputPoint &) const = default;
};

/// floor(blockGasLimit / monitorGas); throws std::invalid_argument when a
/// single monitor transaction cannot fit in a block.
std::uint64_t txPerBlock(std::uint64_t monitorGas, const GasSchedule &gas);

ThroughputPoint throughputPoint(std::uint64_t freezers, std::uint64_t monitorGas,
                                const GasSchedule &gas);

/// Points at step, 2*step, ..., up to maxFreezers (the block gas limit is
/// devoted entirely to monitor transactions).
std::vector<ThroughputPoint> throughputCurve(std::uint64_t maxFreezers,
                                             std::uint64_t step,
                                             std::uint64_t monitorGas,
                                             const GasSchedule &gas);

/// Header "freezerCount,txCount,blocks,seconds" then one row per point.
void writeCurveCsv(std::ostream &out, const std::vector<ThroughputPoint> &curve);

/// Mines `txCount` synthetic monitor transactions costing `monitorGas` on a
/// fresh ledger and returns the number of non-empty blocks produced.
std::uint64_t simulateMonitorBlocks(std::uint64_t txCount,
                                    std::uint64_t monitorGas,
                                    const GasSchedule &gas);

}  // namespace coldchain::sim
