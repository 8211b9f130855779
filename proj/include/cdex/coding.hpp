#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cdex/model.hpp"

namespace cdex {

// XOR combination: bit j set means packet j is folded into the coded packet.
// A valid combination only draws on packets the encoder holds; the all-zeros
// mask means "nothing to send".
using PacketCombination = BitVec;

// Bitmask of players for whom the combination contains exactly one wanted
// packet (bit i set = player i decodes instantly on reception).
std::uint64_t target_set(const PacketCombination& kappa, const SideInformationState& s);

// Inputs the selection kernel needs beyond the state: who encodes (the
// excluded target), what it holds, how candidate targets are ranked, and the
// per-target delivery success probability used for tie-breaking.
struct SelectorContext {
    int encoder = -1;                    // player index, or -1 for the base station
    BitVec has;                          // packets available to encode
    std::vector<double> orderWeight;     // greedy candidate ranking, higher first
    std::vector<double> deliverySuccess; // probability target j receives this sender
    std::uint64_t priority = 0;          // players ranked ahead of the rest
};

// Greedy selector: walk candidates (non-empty wants, not the encoder) ranked
// by (priority membership, orderWeight descending, index ascending) and give
// each its lowest-index feasible packet, where feasible means every earlier
// target still decodes and the candidate holds everything already chosen.
// Returns all-zeros when nothing is feasible. Deterministic.
PacketCombination select_greedy(const SelectorContext& ctx, const SideInformationState& s);

// Multi-start variant: reruns the greedy once per candidate promoted to the
// front of the ranking and keeps the combination scoring best under the
// exhaustive selector's objective (ties toward the smallest mask value).
// Deterministic, and never worse than a single greedy pass. Intended for
// encoders whose held set is too large for select_exact.
PacketCombination select_greedy_multistart(const SelectorContext& ctx, const SideInformationState& s);

// Exhaustive selector over all submasks of the held set, maximizing
// (|targets & priority|, |targets|, sum of deliverySuccess over targets)
// lexicographically; ties resolved toward the smallest mask value. Throws
// when the held set exceeds `capBits`.
PacketCombination select_exact(const SelectorContext& ctx, const SideInformationState& s, int capBits = 20);

// Player-facing wrappers: candidates are ranked by 1/(1 - pbar_j) and
// delivery success uses the direct link 1 - p_{j,i}.
PacketCombination select_combination_greedy(int i, const SideInformationState& s, const ErasureModel& model,
                                            std::uint64_t priority = 0);
PacketCombination select_combination_exact(int i, const SideInformationState& s, const ErasureModel& model,
                                           std::uint64_t priority = 0, int capBits = 20);

} // namespace cdex
