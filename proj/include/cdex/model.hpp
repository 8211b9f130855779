#pragma once

#include <cstdint>
#include <vector>

#include "cdex/bits.hpp"
#include "cdex/rng.hpp"

namespace cdex {

// Which equilibrium/utility flavour a session runs under.
//   game1: pure completion-time objective, no transmission charge, no back-off.
//   game2: completion time plus transmitter count plus mean delay increment,
//          with the collision back-off policy enabled.
enum class GameMode { game1, game2 };

// How utilities see the channel when evaluating a candidate profile.
//   realized:      a sampled reception matrix (post-hoc accounting).
//   deterministic: every transmission is received (analysis convention).
//   expected:      reception indicators replaced by their success probabilities.
enum class ChannelMode { realized, deterministic, expected };

// Which side of the player-player erasure matrix is averaged into pbar.
enum class AvgDirection { incoming, outgoing };

// M x N binary wants matrix: entry (i, j) = 1 means packet j is still missing
// at player i. The Has set is the row complement.
struct SideInformationState {
    int players = 0;
    int packets = 0;
    std::vector<BitVec> wants; // one BitVec of length `packets` per player

    SideInformationState() = default;
    SideInformationState(int M, int N)
        : players(M), packets(N), wants(static_cast<std::size_t>(M), BitVec(static_cast<std::size_t>(N))) {}

    BitVec has_mask(int i) const { return wants[static_cast<std::size_t>(i)].complement(); }
    int wants_count(int i) const { return static_cast<int>(wants[static_cast<std::size_t>(i)].count()); }
};

// Erasure probabilities: player-player matrix p (row = receiver, column =
// sender, diagonal fixed at 0 so a transmitter hears its own slot) and the
// base-station vector q. pbar averages a player's row (incoming links) by
// default; a config switch flips it to the column average.
struct ErasureModel {
    int players = 0;
    std::vector<double> p; // row-major M x M, p[i*M + j] = erasure of j's packet at i
    std::vector<double> q; // length M
    AvgDirection avgDirection = AvgDirection::incoming;

    ErasureModel() = default;
    explicit ErasureModel(int M)
        : players(M), p(static_cast<std::size_t>(M) * static_cast<std::size_t>(M), 0.0),
          q(static_cast<std::size_t>(M), 0.0) {}

    double at(int receiver, int sender) const {
        return p[static_cast<std::size_t>(receiver) * static_cast<std::size_t>(players) + static_cast<std::size_t>(sender)];
    }
    void set(int receiver, int sender, double v) {
        p[static_cast<std::size_t>(receiver) * static_cast<std::size_t>(players) + static_cast<std::size_t>(sender)] = v;
    }

    // Average erasure seen by (incoming) or caused by (outgoing) player i,
    // including the zero self term, i.e. a plain row/column mean over M.
    std::vector<double> average_erasure() const;
};

// One slot's reception outcome: success(i, j) = 1 when a packet sent by j is
// received by i. The diagonal is always 1.
struct ChannelRealization {
    int players = 0;
    std::vector<std::uint8_t> success; // row-major M x M

    ChannelRealization() = default;
    explicit ChannelRealization(int M)
        : players(M), success(static_cast<std::size_t>(M) * static_cast<std::size_t>(M), 0) {}

    bool received(int receiver, int sender) const {
        return success[static_cast<std::size_t>(receiver) * static_cast<std::size_t>(players) + static_cast<std::size_t>(sender)] != 0;
    }
    void set(int receiver, int sender, bool v) {
        success[static_cast<std::size_t>(receiver) * static_cast<std::size_t>(players) + static_cast<std::size_t>(sender)] = v ? 1 : 0;
    }
};

// Running per-session bookkeeping: cumulative decoding delay, wants sizes
// frozen at the start of the recovery phase, the stage counter, and the
// collision history window feeding the back-off rule. Together with the wants
// matrix this is the sufficient statistic the engine consults; full traces are
// only for replay logs.
struct GameLedger {
    std::vector<std::int64_t> cumulativeDelay; // componentwise non-decreasing
    std::vector<int> initialWants;             // frozen at recovery start
    int stage = 1;                             // index of the upcoming stage, t >= 1
    int punishmentV = 2;
    // Collision indicators of stages t-V .. t-1, one bitmask per column,
    // zero-filled for non-positive stage indices. Empty when V = 0.
    std::vector<std::uint64_t> collisionWindow;
    // Previous-stage costs for trace output: the completion-time cost
    // ||C(t-1)||_inf and the previous full game-2 stage cost.
    double lastCostCompletion = 0.0;
    double lastCostGame2 = 0.0;

    GameLedger() = default;
    GameLedger(int M, int V)
        : cumulativeDelay(static_cast<std::size_t>(M), 0),
          initialWants(static_cast<std::size_t>(M), 0),
          punishmentV(V),
          collisionWindow(static_cast<std::size_t>(V), 0) {}
};

// A live CDE session in its recovery phase.
struct Session {
    SideInformationState state;
    ErasureModel model;
    GameLedger ledger;
    GameMode mode = GameMode::game2;

    int players() const { return state.players; }
    int packets() const { return state.packets; }
};

// Broadcast phase: the base station sends each packet until at least one
// player acknowledges it, so every column of the wants matrix keeps at least
// one zero. Throws when a packet exceeds `retransmitCap` attempts.
SideInformationState run_init_phase(int M, int N, const std::vector<double>& bsErasure, Rng& rng,
                                    int retransmitCap = 10000);

// Samples one reception matrix: entry (i, j) succeeds with probability
// 1 - p_ij, independently; the diagonal always succeeds.
ChannelRealization sample_channel(const ErasureModel& model, Rng& rng);

// True when every wants row is empty; the recovery phase length is the first
// stage index where this holds.
bool is_complete(const SideInformationState& s);

// Indicator of players with a non-empty wants row, as a bitmask (bit i set =
// player i still wants packets).
std::uint64_t wants_indicator(const SideInformationState& s);

// Convenience: builds a recovery-phase session around an initialized state.
Session make_session(SideInformationState state, ErasureModel model, GameMode mode, int punishmentV);

} // namespace cdex
