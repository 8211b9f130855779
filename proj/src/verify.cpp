#include "cdex/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cdex {

Session crossed_pair_session(GameMode mode) {
    SideInformationState s(2, 2);
    s.wants[0].set(1); // player 0 misses packet 1 (holds packet 0)
    s.wants[1].set(0); // player 1 misses packet 0 (holds packet 1)
    ErasureModel m(2);
    m.set(0, 1, 0.4); // player 0 hears player 1 through a worse link
    m.set(1, 0, 0.1);
    m.q = {0.2, 0.2};
    return make_session(s, m, mode, 2);
}

Session helper_trio_session(GameMode mode) {
    SideInformationState s(3, 2);
    s.wants[0].set(0);
    s.wants[1].set(1);
    // player 2 holds everything and wants nothing
    ErasureModel m(3);
    m.set(0, 1, 0.3);
    m.set(0, 2, 0.3);
    m.set(1, 0, 0.3);
    m.set(1, 2, 0.3);
    m.set(2, 0, 0.45);
    m.set(2, 1, 0.45);
    m.q = {0.2, 0.2, 0.2};
    return make_session(s, m, mode, 2);
}

Session random_stage_session(int players, Rng& rng, GameMode mode) {
    const int M = players;
    const int N = rng.range(4, 10);
    SideInformationState s;
    for (;;) {
        s = SideInformationState(M, N);
        for (int i = 0; i < M; ++i)
            for (int j = 0; j < N; ++j)
                if (rng.bernoulli(0.4)) s.wants[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
        for (int i = 0; i < M; ++i)
            if (rng.bernoulli(0.15)) s.wants[static_cast<std::size_t>(i)].clear();
        // every packet needs at least one holder
        for (int j = 0; j < N; ++j) {
            bool allWant = true;
            for (int i = 0; i < M; ++i)
                if (!s.wants[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(j))) {
                    allWant = false;
                    break;
                }
            if (allWant)
                s.wants[rng.below(static_cast<std::uint64_t>(M))].reset(static_cast<std::size_t>(j));
        }
        if (wants_indicator(s) != 0) break;
    }

    ErasureModel m(M);
    for (int i = 0; i < M; ++i) m.q[static_cast<std::size_t>(i)] = rng.uniform(0.1, 0.5);
    for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j)
            if (i != j) m.set(i, j, rng.uniform(0.02, 0.45));

    Session sess = make_session(s, m, mode, 2);
    for (int i = 0; i < M; ++i) {
        sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)] = rng.range(0, 5);
        sess.ledger.initialWants[static_cast<std::size_t>(i)] =
            s.wants_count(i) + rng.range(0, 3);
    }
    return sess;
}

namespace {

std::string describe_state(int stateId, const Session& sess) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "state %d (M=%d, N=%d)", stateId, sess.players(), sess.packets());
    return buf;
}

bool has_multi_transmitter(const std::vector<std::uint64_t>& profiles) {
    for (std::uint64_t p : profiles)
        if (__builtin_popcountll(p) >= 2) return true;
    return false;
}

} // namespace

CorpusReport run_equilibrium_corpus(std::uint64_t masterSeed, int statesPerPlayerCount) {
    CorpusReport r;
    r.statesPerPlayerCount = statesPerPlayerCount;
    Rng rng(hash_seed({masterSeed, 0x636f7270ULL}));

    int stateId = 0;
    for (int M = 2; M <= 6; ++M) {
        for (int k = 0; k < statesPerPlayerCount; ++k, ++stateId) {
            Session sess = random_stage_session(M, rng);
            StageContext ctx = make_stage_context(sess);
            BruteForceResult bf1 = brute_force_ne(sess, GameMode::game1);
            BruteForceResult bf2 = brute_force_ne(sess, GameMode::game2);
            std::vector<std::uint64_t> ne1 = ne_set_game1(ctx);
            std::vector<std::uint64_t> ne2 = ne_set_game2(ctx);
            bool neMatch = (ne1 == bf1.ne) && (ne2 == bf2.ne);
            r.states += 1;

            if (ctx.criticalSet == 0) {
                r.qEmpty += 1;
                if (!neMatch) {
                    r.qEmptyNeMismatches += 1;
                    if (r.firstNeMismatch.empty())
                        r.firstNeMismatch = "empty-critical-set " + describe_state(stateId, sess);
                }
            } else {
                r.neIncluded += 1;
                if (!neMatch) {
                    r.neMismatches += 1;
                    if (r.firstNeMismatch.empty()) r.firstNeMismatch = describe_state(stateId, sess);
                }

                double e1 = std::fabs(poa_game1(ctx) - bf1.poaRatio);
                double e2 = std::fabs(poa_game2(ctx).poa - bf2.poaRatio);
                double e = std::max(e1, e2);
                r.poaChecks += 1;
                if (e > r.poaWorstError) r.poaWorstError = e;
                if (e > 1e-9) {
                    r.poaMismatches += 1;
                    if (r.firstPoaMismatch.empty()) r.firstPoaMismatch = describe_state(stateId, sess);
                }

                ResolveOptions opts;
                opts.channel = ChannelMode::deterministic;
                opts.liveness = false;
                std::uint64_t chosen = resolve_stage_action(sess, opts);
                r.poneChecks += 1;
                bool inPone = false;
                for (std::uint64_t p : bf2.pone)
                    if (p == chosen) inPone = true;
                if (!inPone) {
                    r.poneMisses += 1;
                    if (r.firstPoneMiss.empty()) {
                        char extra[64];
                        std::snprintf(extra, sizeof(extra), "; chose 0x%llx",
                                      static_cast<unsigned long long>(chosen));
                        r.firstPoneMiss = describe_state(stateId, sess) + extra;
                    }
                }
            }

            PoaGame2 pg = poa_game2(ctx);
            double p1 = poa_game1(ctx);
            r.boundChecks += 1;
            if (!(pg.poa <= 1.0 && pg.poa >= pg.lowerBound)) {
                r.boundViolations += 1;
                if (r.firstBoundViolation.empty()) r.firstBoundViolation = describe_state(stateId, sess);
            }
            if (ctx.helperSet != 0) {
                r.dominanceChecks += 1;
                if (!(pg.poa > p1)) {
                    r.dominanceViolations += 1;
                    if (r.firstDominanceViolation.empty())
                        r.firstDominanceViolation = describe_state(stateId, sess);
                }
            }

            if (has_multi_transmitter(bf1.ne) && !has_multi_transmitter(bf2.ne)) r.multiNeStates += 1;
        }
    }
    return r;
}

std::string corpus_report_csv(const CorpusReport& r) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "states_per_player_count," << r.statesPerPlayerCount << "\n";
    out << "states," << r.states << "\n";
    out << "q_empty," << r.qEmpty << "\n";
    out << "ne_included," << r.neIncluded << "\n";
    out << "ne_mismatches," << r.neMismatches << "\n";
    out << "q_empty_ne_mismatches," << r.qEmptyNeMismatches << "\n";
    out << "poa_checks," << r.poaChecks << "\n";
    out << "poa_mismatches," << r.poaMismatches << "\n";
    out << "poa_worst_error," << format_double(r.poaWorstError) << "\n";
    out << "bound_checks," << r.boundChecks << "\n";
    out << "bound_violations," << r.boundViolations << "\n";
    out << "dominance_checks," << r.dominanceChecks << "\n";
    out << "dominance_violations," << r.dominanceViolations << "\n";
    out << "pone_checks," << r.poneChecks << "\n";
    out << "pone_misses," << r.poneMisses << "\n";
    out << "multi_ne_states," << r.multiNeStates << "\n";
    return out.str();
}

PotentialReport run_potential_suite(std::uint64_t masterSeed, int states) {
    PotentialReport r;
    Rng rng(hash_seed({masterSeed, 0x706f74ULL}));
    for (int sIdx = 0; sIdx < states; ++sIdx) {
        int M = 2 + (sIdx % 5);
        Session sess = random_stage_session(M, rng);
        std::vector<PacketCombination> kappas = stage_kappas(sess);
        const std::uint64_t limit = std::uint64_t{1} << M;
        r.states += 1;
        for (int game = 1; game <= 2; ++game) {
            std::vector<double> u(static_cast<std::size_t>(limit)), v(static_cast<std::size_t>(limit));
            for (std::uint64_t p = 0; p < limit; ++p) {
                u[static_cast<std::size_t>(p)] =
                    game == 1 ? utility_game1(sess, p, kappas, ChannelMode::deterministic)
                              : utility_game2(sess, p, kappas, ChannelMode::deterministic);
                v[static_cast<std::size_t>(p)] =
                    game == 1 ? utility_game1(sess, p, kappas, ChannelMode::deterministic)
                              : utility_game2(sess, p, kappas, ChannelMode::deterministic);
            }
            for (std::uint64_t p = 0; p < limit; ++p) {
                r.profileChecks += 1;
                bool bad = u[static_cast<std::size_t>(p)] != v[static_cast<std::size_t>(p)];
                for (int i = 0; i < M && !bad; ++i) {
                    std::uint64_t q = p ^ (std::uint64_t{1} << i);
                    double du = u[static_cast<std::size_t>(q)] - u[static_cast<std::size_t>(p)];
                    double dv = v[static_cast<std::size_t>(q)] - v[static_cast<std::size_t>(p)];
                    if (du != dv) bad = true;
                }
                if (bad) {
                    r.violations += 1;
                    if (r.firstViolation.empty()) {
                        char buf[96];
                        std::snprintf(buf, sizeof(buf), "state %d game %d profile 0x%llx", sIdx, game,
                                      static_cast<unsigned long long>(p));
                        r.firstViolation = buf;
                    }
                }
            }
        }
    }
    return r;
}

std::string potential_report_csv(const PotentialReport& r) {
    std::ostringstream out;
    out << "metric,value\n";
    out << "states," << r.states << "\n";
    out << "profile_checks," << r.profileChecks << "\n";
    out << "violations," << r.violations << "\n";
    return out.str();
}

} // namespace cdex
