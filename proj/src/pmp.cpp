#include "cdex/pmp.hpp"

#include <stdexcept>

namespace cdex {

PmpSession make_pmp_session(const SideInformationState& state, const std::vector<double>& q) {
    if (static_cast<int>(q.size()) != state.players)
        throw std::invalid_argument("make_pmp_session: q size must match player count");
    for (double qi : q)
        if (!(qi >= 0.0) || qi >= 1.0)
            throw std::invalid_argument("make_pmp_session: q entries must lie in [0, 1)");
    PmpSession sess;
    sess.state = state;
    sess.q = q;
    sess.delay.assign(static_cast<std::size_t>(state.players), 0);
    sess.initialWants.resize(static_cast<std::size_t>(state.players));
    for (int i = 0; i < state.players; ++i)
        sess.initialWants[static_cast<std::size_t>(i)] = state.wants_count(i);
    return sess;
}

std::uint64_t pmp_critical_set(const PmpSession& sess) {
    const int M = sess.state.players;
    double worst = 0.0;
    for (int i = 0; i < M; ++i) {
        double c = pmp_completion_estimate(static_cast<double>(sess.initialWants[static_cast<std::size_t>(i)]),
                                           static_cast<double>(sess.delay[static_cast<std::size_t>(i)]),
                                           sess.q[static_cast<std::size_t>(i)]);
        if (c > worst) worst = c;
    }
    std::uint64_t crit = 0;
    for (int i = 0; i < M; ++i) {
        if (sess.state.wants[static_cast<std::size_t>(i)].none()) continue;
        double cPlus = pmp_completion_estimate(
            static_cast<double>(sess.initialWants[static_cast<std::size_t>(i)]),
            static_cast<double>(sess.delay[static_cast<std::size_t>(i)]) + 1.0,
            sess.q[static_cast<std::size_t>(i)]);
        if (cPlus > worst) crit |= (std::uint64_t{1} << i);
    }
    return crit;
}

PmpStepOutcome pmp_step(PmpSession& sess, Rng& rng, int exactCapBits) {
    const int M = sess.state.players;
    const int N = sess.state.packets;
    if (is_complete(sess.state)) throw std::runtime_error("pmp_step: session already complete");

    SelectorContext ctx;
    ctx.encoder = -1; // base station, holds the whole frame
    ctx.has = BitVec(static_cast<std::size_t>(N));
    for (int p = 0; p < N; ++p) ctx.has.set(static_cast<std::size_t>(p));
    ctx.orderWeight.resize(static_cast<std::size_t>(M));
    ctx.deliverySuccess.resize(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        ctx.orderWeight[static_cast<std::size_t>(i)] = 1.0 / (1.0 - sess.q[static_cast<std::size_t>(i)]);
        ctx.deliverySuccess[static_cast<std::size_t>(i)] = 1.0 - sess.q[static_cast<std::size_t>(i)];
    }
    ctx.priority = pmp_critical_set(sess);

    PmpStepOutcome out;
    // The broadcaster is meant to be the strongest conventional sender we can
    // field: exhaustive selection while the frame is small enough, multi-start
    // greedy beyond that (a single pass measurably under-packs combinations
    // relative to what the receivers' side information admits).
    out.kappa = (N <= exactCapBits) ? select_exact(ctx, sess.state, exactCapBits)
                                    : select_greedy_multistart(ctx, sess.state);
    out.targets = target_set(out.kappa, sess.state);
    out.delayIncrement.assign(static_cast<std::size_t>(M), 0);

    for (int i = 0; i < M; ++i) {
        bool received = rng.bernoulli(1.0 - sess.q[static_cast<std::size_t>(i)]);
        if (!received) continue;
        out.receivedMask |= (std::uint64_t{1} << i);
        if ((out.targets >> i) & 1u) {
            std::size_t packet = sess.state.wants[static_cast<std::size_t>(i)].first_common(out.kappa);
            sess.state.wants[static_cast<std::size_t>(i)].reset(packet);
            out.decodedBy.emplace_back(i, static_cast<int>(packet));
        } else if (!sess.state.wants[static_cast<std::size_t>(i)].none()) {
            sess.delay[static_cast<std::size_t>(i)] += 1;
            out.delayIncrement[static_cast<std::size_t>(i)] = 1;
        }
    }
    sess.stage += 1;
    return out;
}

PmpEpisodeResult run_pmp_episode(const SideInformationState& start, const std::vector<double>& q,
                                 Rng& rng, int slotCap) {
    PmpSession sess = make_pmp_session(start, q);
    if (slotCap < 0) slotCap = 100 * start.packets;
    PmpEpisodeResult res;
    while (!is_complete(sess.state)) {
        if (res.stages >= slotCap) {
            res.censored = true;
            break;
        }
        pmp_step(sess, rng);
        res.stages += 1;
    }
    const int M = sess.state.players;
    double sum = 0.0;
    for (int i = 0; i < M; ++i)
        sum += pmp_completion_estimate(static_cast<double>(sess.initialWants[static_cast<std::size_t>(i)]),
                                       static_cast<double>(sess.delay[static_cast<std::size_t>(i)]),
                                       sess.q[static_cast<std::size_t>(i)]);
    res.meanEstimate = sum / static_cast<double>(M);
    return res;
}

} // namespace cdex
