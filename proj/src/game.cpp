#include "cdex/game.hpp"

#include <stdexcept>

namespace cdex {

namespace {

std::vector<double> delays_as_double(const std::vector<std::int64_t>& d) {
    return std::vector<double>(d.begin(), d.end());
}

} // namespace

std::uint64_t compute_critical_set(const Session& sess) {
    const int M = sess.players();
    std::vector<double> pbar = sess.model.average_erasure();
    std::uint64_t q = 0;
    CompletionEstimate est = completion_estimate(sess.ledger.initialWants,
                                                 delays_as_double(sess.ledger.cumulativeDelay), pbar);
    for (int i = 0; i < M; ++i) {
        if (!sess.state.wants[static_cast<std::size_t>(i)].any()) continue;
        double bumped = completion_estimate_one(
            static_cast<double>(sess.ledger.initialWants[static_cast<std::size_t>(i)]),
            static_cast<double>(sess.ledger.cumulativeDelay[static_cast<std::size_t>(i)]) + 1.0,
            pbar[static_cast<std::size_t>(i)]);
        if (bumped > est.maxNorm) q |= (std::uint64_t{1} << i);
    }
    return q;
}

std::vector<PacketCombination> stage_kappas(const Session& sess, SelectorKind selector, int exactCap) {
    const int M = sess.players();
    std::uint64_t priority = compute_critical_set(sess);
    std::vector<PacketCombination> kappas;
    kappas.reserve(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i) {
        kappas.push_back(selector == SelectorKind::greedy
                             ? select_combination_greedy(i, sess.state, sess.model, priority)
                             : select_combination_exact(i, sess.state, sess.model, priority, exactCap));
    }
    return kappas;
}

VirtualOutcome apply_profile(const Session& sess, std::uint64_t profile,
                             const std::vector<PacketCombination>& kappas, ChannelMode mode,
                             const ChannelRealization* omega) {
    const int M = sess.players();
    VirtualOutcome out;
    const int transmitters = __builtin_popcountll(profile);
    if (transmitters == 1) {
        int sender = __builtin_ctzll(profile);
        const PacketCombination& kappa = kappas[static_cast<std::size_t>(sender)];
        if (mode == ChannelMode::realized) {
            if (!omega)
                throw std::invalid_argument("apply_profile: realized mode needs a sampled channel");
            std::vector<int> d = stage_delay(sender, kappa, sess.state, *omega);
            out.delta.assign(d.begin(), d.end());
        } else {
            out.delta = stage_delay_virtual(sender, kappa, sess.state, sess.model, mode);
        }
    } else {
        // No decoding without exactly one transmitter: every wanting player
        // is charged, whatever the channel did.
        out.delta.assign(static_cast<std::size_t>(M), 0.0);
        for (int i = 0; i < M; ++i)
            if (sess.state.wants[static_cast<std::size_t>(i)].any()) out.delta[static_cast<std::size_t>(i)] = 1.0;
    }
    for (double x : out.delta) out.deltaL1 += x;

    std::vector<double> cum = delays_as_double(sess.ledger.cumulativeDelay);
    for (int i = 0; i < M; ++i) cum[static_cast<std::size_t>(i)] += out.delta[static_cast<std::size_t>(i)];
    CompletionEstimate est =
        completion_estimate(sess.ledger.initialWants, cum, sess.model.average_erasure());
    out.maxEstimate = est.maxNorm;
    return out;
}

double utility_game1(const Session& sess, std::uint64_t profile,
                     const std::vector<PacketCombination>& kappas, ChannelMode mode,
                     const ChannelRealization* omega) {
    return -apply_profile(sess, profile, kappas, mode, omega).maxEstimate;
}

double utility_game2(const Session& sess, std::uint64_t profile,
                     const std::vector<PacketCombination>& kappas, ChannelMode mode,
                     const ChannelRealization* omega) {
    VirtualOutcome out = apply_profile(sess, profile, kappas, mode, omega);
    return -out.maxEstimate - static_cast<double>(__builtin_popcountll(profile)) -
           out.deltaL1 / static_cast<double>(sess.players());
}

std::uint64_t collision_indicator(std::uint64_t profile) {
    return (__builtin_popcountll(profile) > 1) ? profile : 0;
}

std::vector<int> backoff_vector(const GameLedger& ledger) {
    std::vector<int> b(ledger.cumulativeDelay.size(), 0);
    for (std::uint64_t column : ledger.collisionWindow) {
        for (std::size_t i = 0; i < b.size(); ++i)
            if ((column >> i) & 1u) b[i] += 1;
    }
    return b;
}

std::uint64_t allowed_transmitters(const Session& sess) {
    const int M = sess.players();
    std::uint64_t all = (M == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << M) - 1);
    if (sess.mode == GameMode::game1) return all;
    std::uint64_t allowed = all;
    for (std::uint64_t column : sess.ledger.collisionWindow) allowed &= ~column;
    return allowed;
}

StageOutcome advance_stage(Session& sess, std::uint64_t profile, Rng& rng, SelectorKind selector) {
    if (is_complete(sess.state))
        throw std::logic_error("advance_stage: session already complete");
    const int M = sess.players();
    std::uint64_t valid = (M == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << M) - 1);
    if (profile & ~valid)
        throw std::invalid_argument("advance_stage: profile has bits beyond the player count");
    if (profile & ~allowed_transmitters(sess))
        throw std::invalid_argument("advance_stage: profile lets a backed-off player transmit");

    std::vector<PacketCombination> kappas = stage_kappas(sess, selector);
    std::uint64_t mw = wants_indicator(sess.state);

    StageOutcome out;
    out.profile = profile;
    out.realization = sample_channel(sess.model, rng);
    out.collided = collision_indicator(profile);
    out.delayIncrement.assign(static_cast<std::size_t>(M), 0);

    const int transmitters = __builtin_popcountll(profile);
    if (transmitters == 1) {
        int sender = __builtin_ctzll(profile);
        const PacketCombination& kappa = kappas[static_cast<std::size_t>(sender)];
        std::uint64_t targets = target_set(kappa, sess.state);
        out.delayIncrement = stage_delay(sender, kappa, sess.state, out.realization);
        accumulate_delay(sess.ledger, profile, out.delayIncrement, mw);
        for (int k = 0; k < M; ++k) {
            if (!((targets >> k) & 1u)) continue;
            if (!out.realization.received(k, sender)) continue;
            std::size_t packet = sess.state.wants[static_cast<std::size_t>(k)].first_common(kappa);
            sess.state.wants[static_cast<std::size_t>(k)].reset(packet);
            out.decodedBy.emplace_back(k, static_cast<int>(packet));
        }
    } else {
        accumulate_delay(sess.ledger, profile, std::nullopt, mw);
        for (int i = 0; i < M; ++i)
            if ((mw >> i) & 1u) out.delayIncrement[static_cast<std::size_t>(i)] = 1;
    }

    if (sess.ledger.punishmentV > 0) {
        sess.ledger.collisionWindow.erase(sess.ledger.collisionWindow.begin());
        sess.ledger.collisionWindow.push_back(out.collided);
    }
    sess.ledger.stage += 1;

    // Trace bookkeeping: completion-time cost after this stage, plus the full
    // game-2 stage cost (estimate norm + transmissions + mean delay increment).
    CompletionEstimate est = completion_estimate(sess.ledger.initialWants,
                                                 delays_as_double(sess.ledger.cumulativeDelay),
                                                 sess.model.average_erasure());
    double incrementL1 = 0.0;
    for (int d : out.delayIncrement) incrementL1 += d;
    sess.ledger.lastCostCompletion = est.maxNorm;
    sess.ledger.lastCostGame2 =
        est.maxNorm + static_cast<double>(transmitters) + incrementL1 / static_cast<double>(M);
    return out;
}

} // namespace cdex
