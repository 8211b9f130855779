#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cdex/coding.hpp"
#include "cdex/model.hpp"

namespace cdex {

// Per-player completion estimates plus their max norm.
struct CompletionEstimate {
    std::vector<double> perPlayer;
    double maxNorm = 0.0;
};

// Realized per-stage decoding-delay increments for one transmission: player i
// accrues 1 exactly when it still wants packets, received the coded packet,
// and was not targeted by it. Entries are 0/1.
std::vector<int> stage_delay(int sender, const PacketCombination& kappa, const SideInformationState& s,
                             const ChannelRealization& omega);

// Same shape under the analytic channel modes: reception indicators are 1
// (deterministic) or 1 - p_{i,sender} (expected), so entries live in [0, 1].
std::vector<double> stage_delay_virtual(int sender, const PacketCombination& kappa,
                                        const SideInformationState& s, const ErasureModel& model,
                                        ChannelMode mode);

// Cumulative-delay update: with exactly one transmitter the supplied stage
// delay is added; any other transmitter count charges every wanting player one
// unit. Rejects a perStage argument that disagrees with the profile shape.
void accumulate_delay(GameLedger& ledger, std::uint64_t profileBits,
                      const std::optional<std::vector<int>>& perStage, std::uint64_t wantsMask);

// Single-player completion estimate max(0, (W0 + D - pbar) / (1 - pbar));
// the clamp covers players that never wanted anything. Rejects pbar >= 1.
double completion_estimate_one(double initialWants, double cumulativeDelay, double avgErasure);

// Vectorized form over the whole session. cumulativeDelay is real-valued so
// the expected channel mode can evaluate fractional virtual increments.
CompletionEstimate completion_estimate(const std::vector<int>& initialWants,
                                       const std::vector<double>& cumulativeDelay,
                                       const std::vector<double>& avgErasure);

// Base-station variant of the same estimate with the BS erasure in place of
// the player-average. Rejects q >= 1.
double pmp_completion_estimate(double initialWants, double cumulativeDelay, double q);

} // namespace cdex
