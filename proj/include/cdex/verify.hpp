#pragma once

#include <cstdint>
#include <string>

#include "cdex/equilibrium.hpp"
#include "cdex/harness.hpp"
#include "cdex/learning.hpp"

namespace cdex {

// Two players, each holding exactly the packet the other one wants, with an
// asymmetric erasure matrix. The canonical hand-checked instance for the
// analysis numbers (increments, helper set, equilibria, anarchy ratios).
Session crossed_pair_session(GameMode mode = GameMode::game2);

// Three players where the third is finished and can serve both others with
// one coded packet: the state that separates the two game flavours (the
// pure-completion game admits multi-transmitter equilibria, the charged game
// only the helper singleton).
Session helper_trio_session(GameMode mode = GameMode::game2);

// Random mid-recovery stage state: partially cleared wants rows (some players
// already finished), every packet held by at least one player, at least one
// player still wanting, accumulated delays, frozen initial counts at least
// the live row sizes, and a generic asymmetric erasure model.
Session random_stage_session(int players, Rng& rng, GameMode mode = GameMode::game2);

// One pass over the random-state corpus (a fixed number of states per player
// count, players 2..6) comparing the closed-form analysis against exhaustive
// profile enumeration, plus the anarchy-bound properties and the stage
// decision rule's equilibrium membership.
struct CorpusReport {
    int statesPerPlayerCount = 0;
    int states = 0;  // total generated
    int qEmpty = 0;  // states with an empty critical set: reported separately

    // Equilibrium-set equality, both games, critical-set-bearing states only.
    int neIncluded = 0;
    int neMismatches = 0;
    int qEmptyNeMismatches = 0; // same comparison on the excluded slice

    // Anarchy-ratio equality against enumeration (same included slice).
    int poaChecks = 0;
    int poaMismatches = 0;
    double poaWorstError = 0.0;

    // Ratio/bound properties, every state.
    int boundChecks = 0;
    int boundViolations = 0;
    int dominanceChecks = 0;
    int dominanceViolations = 0;

    // Stage decision rule lands in the enumerated optimal-equilibrium set
    // (critical-set-bearing states only).
    int poneChecks = 0;
    int poneMisses = 0;

    // States where the pure-completion game has multi-transmitter equilibria
    // while the charged game has none (the looping-pathology exhibit).
    int multiNeStates = 0;

    std::string firstNeMismatch;
    std::string firstPoaMismatch;
    std::string firstBoundViolation;
    std::string firstDominanceViolation;
    std::string firstPoneMiss;
};

CorpusReport run_equilibrium_corpus(std::uint64_t masterSeed, int statesPerPlayerCount = 200);

// Deterministic CSV rendering of a corpus report (metric,value rows).
std::string corpus_report_csv(const CorpusReport& report);

// Exact-identity suite: on random states, utilities are deterministic across
// re-evaluation and the change of the common utility under any unilateral
// deviation equals the change of the potential (the utility itself),
// bit-for-bit, for every profile and both games.
struct PotentialReport {
    int states = 0;
    long long profileChecks = 0;
    int violations = 0;
    std::string firstViolation;
};

PotentialReport run_potential_suite(std::uint64_t masterSeed, int states = 100);

std::string potential_report_csv(const PotentialReport& report);

} // namespace cdex
