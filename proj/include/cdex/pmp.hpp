#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "cdex/coding.hpp"
#include "cdex/delay.hpp"
#include "cdex/model.hpp"
#include "cdex/rng.hpp"

namespace cdex {

// Baseline scheme where a base station holding the whole frame serves every
// player directly over independent downlink channels with per-player loss
// probability q_i. Used as the comparison curve for the cooperative scheme.
struct PmpSession {
    SideInformationState state;
    std::vector<double> q;
    std::vector<std::int64_t> delay;
    std::vector<int> initialWants; // wants counts frozen at session start
    int stage = 1;
};

PmpSession make_pmp_session(const SideInformationState& state, const std::vector<double>& q);

// Players whose estimate would exceed the current worst estimate after one
// more delay unit; prioritized by the combination selector.
std::uint64_t pmp_critical_set(const PmpSession& sess);

struct PmpStepOutcome {
    PacketCombination kappa;
    std::uint64_t targets = 0;
    std::uint64_t receivedMask = 0; // players whose slot was not erased
    std::vector<std::pair<int, int>> decodedBy; // (player, packet)
    std::vector<int> delayIncrement;
};

// One broadcast slot: pick the combination (exhaustive search up to
// exactCapBits frame bits, multi-start greedy beyond), sample each player's
// reception,
// decode targeted receivers, and charge a delay unit to wanting receivers the
// combination was useless to. Throws on a completed session.
PmpStepOutcome pmp_step(PmpSession& sess, Rng& rng, int exactCapBits = 20);

struct PmpEpisodeResult {
    int stages = 0;
    double meanEstimate = 0.0; // mean per-player completion estimate at the end
    bool censored = false;     // slot cap hit before completion
};

// Runs slots until every player is served, or until slotCap slots
// (default 100 * packets) have elapsed, in which case the result is censored.
PmpEpisodeResult run_pmp_episode(const SideInformationState& start, const std::vector<double>& q,
                                 Rng& rng, int slotCap = -1);

} // namespace cdex
