#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdex/game.hpp"

namespace cdex {

// Everything the per-stage analysis needs, computed once from a session
// snapshot under the deterministic channel convention (the delayed sets ignore
// erasure realizations; a config switch selects expected mode for
// experimentation, but the closed-form machinery is defined deterministically).
//
// Y values are exact stage-cost increments: y0 is the rise of the estimate max
// norm when every wanting player is delayed, yPerPlayer[j] the rise when
// transmitter j's combination goes out (its untargeted wanting players are
// delayed). Both are maxima of per-player "one more delay unit" estimates, so
// they agree with brute-force evaluation on every state, not just on states
// where all critical players sit at the max norm.
//
// The analytic NE sets assume no player is currently backed off (fresh
// snapshots have an empty collision window); mid-episode analysis under active
// back-off should use the brute-force oracle, which respects the action filter.
struct StageContext {
    int players = 0;
    std::uint64_t wantsMask = 0;   // players with non-empty wants
    std::uint64_t criticalSet = 0; // Q
    std::uint64_t helperSet = 0;   // Z = {j : y_j < y0}
    double costPrev = 0.0;         // ||C(t-1)||_inf, the cost increments sit on
    std::vector<double> pbar;
    std::vector<double> estimate;     // C(t-1) per player
    std::vector<double> estimatePlus; // estimate with one extra delay unit
    std::vector<PacketCombination> kappas;
    std::vector<std::uint64_t> targets; // per transmitter j
    std::vector<std::uint64_t> delayed; // D_j: wanting & untargeted (j always delays itself when wanting)
    double y0 = 0.0;
    bool y0Defined = false; // false when Q is empty (empty-max convention: 0)
    std::vector<double> yPerPlayer;
    // Deterministic-mode stage costs, shared by the closed forms and the PoA
    // ratios so comparisons against the oracle are float-aligned.
    double costSilentGame1 = 0.0;          // also the cost of every multi-transmitter profile
    std::vector<double> costSingletonGame1;
    double costSilentGame2 = 0.0;
    std::vector<double> costSingletonGame2;
};

StageContext make_stage_context(const Session& sess, SelectorKind selector = SelectorKind::greedy);

// Spec-facing slices of the context.
std::uint64_t critical_set(const Session& sess);
struct YValues {
    double y0 = 0.0;
    bool y0Defined = false;
    std::vector<double> perPlayer;
};
YValues y_values(const Session& sess, SelectorKind selector = SelectorKind::greedy);
std::uint64_t helper_set(const YValues& y);

// Closed-form NE sets (profiles as bitmasks, ascending). Capped at M <= 16
// because the all-profiles branches materialize 2^M entries.
std::vector<std::uint64_t> ne_set_game1(const Session& sess);
std::vector<std::uint64_t> ne_set_game2(const Session& sess);
std::vector<std::uint64_t> ne_set_game1(const StageContext& ctx);
std::vector<std::uint64_t> ne_set_game2(const StageContext& ctx);

// Price of anarchy: best-to-worst NE stage-cost ratio, in (0, 1].
double poa_game1(const StageContext& ctx);
struct PoaGame2 {
    double poa = 1.0;
    double lowerBound = 0.0;
};
PoaGame2 poa_game2(const StageContext& ctx);
double poa_game1(const Session& sess);
PoaGame2 poa_game2(const Session& sess);

// Exhaustive oracle: enumerates every profile consistent with the back-off
// filter, marks pure NE (no strictly improving unilateral deviation among
// allowed actions), and the Pareto-optimal NE (max common utility; with a
// common utility that is also the max-potential NE). Cap M <= 16.
struct BruteForceResult {
    std::vector<std::uint64_t> ne;
    std::vector<std::uint64_t> pone;
    double minNeCost = 0.0; // cost = -utility
    double maxNeCost = 0.0;
    double poaRatio = 1.0;  // minNeCost / maxNeCost
};
BruteForceResult brute_force_ne(const Session& sess, GameMode mode,
                                ChannelMode channel = ChannelMode::deterministic,
                                SelectorKind selector = SelectorKind::greedy);

// Bundled per-stage report for one game mode.
struct StageAnalysis {
    std::uint64_t criticalSet = 0;
    std::uint64_t helperSet = 0;
    double y0 = 0.0;
    bool y0Defined = false;
    std::vector<double> yPerPlayer;
    std::uint64_t neCount = 0;              // computed in closed form at any M
    std::vector<std::uint64_t> neProfiles;  // materialized only when M <= 16
    std::uint64_t poneProfile = 0;          // lowest-mask minimum-cost NE
    double poa = 1.0;
    double poaLowerBound = 1.0; // for game 1 the closed form is exact, bound = poa
    double costPrev = 0.0;
    int stage = 1;
};
StageAnalysis analyze_stage(const Session& sess, GameMode mode,
                            SelectorKind selector = SelectorKind::greedy);

// CSV row for the analysis export:
// t, |Q|, |Z|, Y0, min Y_j (over Z when non-empty, else Y0), PoA, PoA lower
// bound, |NE|, PONE profile bits.
std::string stage_analysis_csv_header();
std::string stage_analysis_csv_row(const StageAnalysis& a, int players);

} // namespace cdex
