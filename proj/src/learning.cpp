#include "cdex/learning.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cdex {

double expected_utility(const Session& sess, std::uint64_t profile,
                        const std::vector<PacketCombination>& kappas) {
    return sess.mode == GameMode::game1
               ? utility_game1(sess, profile, kappas, ChannelMode::expected)
               : utility_game2(sess, profile, kappas, ChannelMode::expected);
}

namespace {

double profile_utility(const Session& sess, std::uint64_t profile,
                       const std::vector<PacketCombination>& kappas, ChannelMode channel) {
    return sess.mode == GameMode::game1 ? utility_game1(sess, profile, kappas, channel)
                                        : utility_game2(sess, profile, kappas, channel);
}

// Players that may transmit this stage: not backed off, and holding a
// combination that is actually encodable (non-zero).
std::uint64_t eligible_mask(const Session& sess, const std::vector<PacketCombination>& kappas) {
    std::uint64_t mask = allowed_transmitters(sess);
    for (int i = 0; i < sess.players(); ++i)
        if (kappas[static_cast<std::size_t>(i)].none()) mask &= ~(std::uint64_t{1} << i);
    return mask;
}

std::uint64_t sweep_fixed_point(const Session& sess, const std::vector<PacketCombination>& kappas,
                                const std::vector<int>& order, ChannelMode channel,
                                bool singleSweep) {
    const int M = sess.players();
    std::vector<int> visit = order;
    if (visit.empty()) {
        visit.resize(static_cast<std::size_t>(M));
        for (int i = 0; i < M; ++i) visit[static_cast<std::size_t>(i)] = i;
    }
    if (static_cast<int>(visit.size()) != M)
        throw std::invalid_argument("best_response_sweep: order must visit every player once");

    const std::uint64_t eligible = eligible_mask(sess, kappas);
    std::uint64_t profile = 0;
    const int sweepCap = 4 * M;
    for (int sweep = 0; sweep < sweepCap; ++sweep) {
        std::uint64_t before = profile;
        for (int i : visit) {
            if (i < 0 || i >= M) throw std::invalid_argument("best_response_sweep: order index out of range");
            std::uint64_t bit = std::uint64_t{1} << i;
            if (!(eligible & bit)) {
                profile &= ~bit;
                continue;
            }
            double uOff = profile_utility(sess, profile & ~bit, kappas, channel);
            double uOn = profile_utility(sess, profile | bit, kappas, channel);
            profile = (uOn > uOff) ? (profile | bit) : (profile & ~bit);
        }
        if (singleSweep || profile == before) return profile;
    }
    throw std::runtime_error("best_response_sweep: no fixed point within sweep cap");
}

} // namespace

// Visiting order used by the stage decision rule: ascending own-singleton
// cost (ties by index). The cheapest helper then moves first, and a plain
// best-response pass provably lands in the enumeration's optimal-equilibrium
// set: the first visitor transmits exactly when its singleton beats silence,
// every later visitor strictly prefers staying out of a pair, and all
// comparisons are the same doubles the exhaustive oracle ranks.
std::vector<int> cheapest_singleton_order(const Session& sess,
                                          const std::vector<PacketCombination>& kappas,
                                          ChannelMode channel) {
    const int M = sess.players();
    std::vector<double> cost(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i)
        cost[static_cast<std::size_t>(i)] = -profile_utility(sess, std::uint64_t{1} << i, kappas, channel);
    std::vector<int> order(static_cast<std::size_t>(M));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return cost[static_cast<std::size_t>(a)] < cost[static_cast<std::size_t>(b)];
    });
    return order;
}

std::uint64_t best_response_sweep(const Session& sess, const std::vector<int>& order,
                                  ChannelMode channel, bool singleSweep) {
    std::vector<PacketCombination> kappas = stage_kappas(sess);
    return sweep_fixed_point(sess, kappas, order, channel, singleSweep);
}

std::uint64_t resolve_stage_action(const Session& sess, const ResolveOptions& opts) {
    std::vector<PacketCombination> kappas = stage_kappas(sess);
    std::vector<int> order =
        opts.order.empty() ? cheapest_singleton_order(sess, kappas, opts.channel) : opts.order;
    std::uint64_t profile = sweep_fixed_point(sess, kappas, order, opts.channel, opts.singleSweep);
    if (profile != 0 || !opts.liveness) return profile;

    const std::uint64_t eligible = eligible_mask(sess, kappas);
    std::vector<double> pbar = sess.model.average_erasure();
    int best = -1;
    int bestTargets = 0;
    double bestWeight = 0.0;
    for (int i = 0; i < sess.players(); ++i) {
        if (!((eligible >> i) & 1u)) continue;
        int t = __builtin_popcountll(target_set(kappas[static_cast<std::size_t>(i)], sess.state));
        if (t == 0) continue;
        double w = 1.0 / (1.0 - pbar[static_cast<std::size_t>(i)]);
        if (t > bestTargets || (t == bestTargets && w > bestWeight)) {
            best = i;
            bestTargets = t;
            bestWeight = w;
        }
    }
    if (best < 0) return 0;
    return std::uint64_t{1} << best;
}

} // namespace cdex
