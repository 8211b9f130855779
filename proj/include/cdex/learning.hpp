#pragma once

#include <cstdint>
#include <vector>

#include "cdex/game.hpp"

namespace cdex {

// Common utility of a profile evaluated on the expected channel (success
// weights 1 - p_ki instead of sampled outcomes). Dispatches on the session's
// game mode.
double expected_utility(const Session& sess, std::uint64_t profile,
                        const std::vector<PacketCombination>& kappas);

// Sequential best-response dynamics over the stage game. Starting from the
// all-silent profile, players are visited in `order` (empty = ascending
// index); each picks the strictly better of {transmit, stay silent} given the
// current choices of everyone else, with ties resolved to silence. Players
// that are backed off or hold no useful combination are pinned to silence.
// Sweeps repeat until a full pass changes nothing; `singleSweep` stops after
// one pass. Throws if no fixed point is reached within 4*M sweeps.
std::uint64_t best_response_sweep(const Session& sess,
                                  const std::vector<int>& order = {},
                                  ChannelMode channel = ChannelMode::expected,
                                  bool singleSweep = false);

struct ResolveOptions {
    ChannelMode channel = ChannelMode::expected;
    bool liveness = true;    // break all-silent deadlocks (documented deviation)
    bool singleSweep = false;
    std::vector<int> order;  // empty = ascending player index
};

// Stage decision rule: run the sweep virtually (with an empty `order`, players
// are visited cheapest own-singleton first, which provably lands the pass in
// the optimal-equilibrium set), then (optionally) apply a liveness override
// when the fixed point is all-silent even though some eligible player's
// combination would deterministically serve a wanting player. The override
// picks the transmitter covering the most targets, breaking ties by slower
// expected service (higher 1/(1 - pbar_i)), then by lowest index.
std::uint64_t resolve_stage_action(const Session& sess, const ResolveOptions& opts = {});

} // namespace cdex
