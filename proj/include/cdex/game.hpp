#pragma once

#include <cstdint>
#include <vector>

#include "cdex/coding.hpp"
#include "cdex/delay.hpp"
#include "cdex/model.hpp"

namespace cdex {

// Action profiles are 64-bit masks: bit i set = player i transmits its
// current combination, clear = silent. Player count comes from the session.

// Players whose completion estimate would rise above the current max norm if
// they picked up one more delay unit (and who still want packets). These are
// the players a transmission has to protect, and they get selection priority.
std::uint64_t compute_critical_set(const Session& sess);

// Every player's current combination under complete information: one
// deterministic selection per player with the critical set as priority, so
// all players (and the analysis) agree on everyone's kappa.
enum class SelectorKind { greedy, exact };
std::vector<PacketCombination> stage_kappas(const Session& sess, SelectorKind selector = SelectorKind::greedy,
                                            int exactCap = 20);

// Virtual consequence of playing `profile` on the current state: per-player
// delay increments, their l1 norm, and the resulting estimate max norm.
// Deterministic and expected modes need no sampled channel; realized mode
// reads the supplied reception matrix.
struct VirtualOutcome {
    std::vector<double> delta;
    double deltaL1 = 0.0;
    double maxEstimate = 0.0;
};
VirtualOutcome apply_profile(const Session& sess, std::uint64_t profile,
                             const std::vector<PacketCombination>& kappas, ChannelMode mode,
                             const ChannelRealization* omega = nullptr);

// Common (player-invariant) utilities. Game 1 is the negative estimate max
// norm; game 2 subtracts the transmitter count and the mean delay increment.
double utility_game1(const Session& sess, std::uint64_t profile,
                     const std::vector<PacketCombination>& kappas, ChannelMode mode,
                     const ChannelRealization* omega = nullptr);
double utility_game2(const Session& sess, std::uint64_t profile,
                     const std::vector<PacketCombination>& kappas, ChannelMode mode,
                     const ChannelRealization* omega = nullptr);

// Bitmask of players that transmitted into a collision (more than one
// transmitter); zero for lawful or silent stages.
std::uint64_t collision_indicator(std::uint64_t profile);

// Row sums of the collision window: how many of the last V stages each player
// collided in. A player may transmit only while its count is zero.
std::vector<int> backoff_vector(const GameLedger& ledger);

// Bitmask of players currently allowed to transmit. Game 1 runs without the
// punishment policy, so everyone is allowed there.
std::uint64_t allowed_transmitters(const Session& sess);

// One executed stage: reception matrix sampled, targeted receivers decode
// when exactly one player transmitted, delays charged, collision window
// shifted, stage counter bumped.
struct StageOutcome {
    std::uint64_t profile = 0;
    ChannelRealization realization;
    std::vector<std::pair<int, int>> decodedBy; // (player, packet)
    std::vector<int> delayIncrement;
    std::uint64_t collided = 0;
};
StageOutcome advance_stage(Session& sess, std::uint64_t profile, Rng& rng,
                           SelectorKind selector = SelectorKind::greedy);

} // namespace cdex
