#include "cdex/coding.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cdex {

std::uint64_t target_set(const PacketCombination& kappa, const SideInformationState& s) {
    std::uint64_t targets = 0;
    for (int i = 0; i < s.players; ++i) {
        if (s.wants[static_cast<std::size_t>(i)].intersection_count(kappa) == 1)
            targets |= (std::uint64_t{1} << i);
    }
    return targets;
}

namespace {

// Candidate targets ranked the way the greedy walks them: priority members
// first, then higher 1/(1 - pbar), then lower index.
std::vector<int> candidate_order(const SelectorContext& ctx, const SideInformationState& s) {
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(s.players));
    for (int j = 0; j < s.players; ++j) {
        if (j == ctx.encoder) continue;
        if (!s.wants[static_cast<std::size_t>(j)].any()) continue;
        order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        bool pa = (ctx.priority >> a) & 1u, pb = (ctx.priority >> b) & 1u;
        if (pa != pb) return pa;
        double wa = ctx.orderWeight[static_cast<std::size_t>(a)];
        double wb = ctx.orderWeight[static_cast<std::size_t>(b)];
        if (wa != wb) return wa > wb;
        return a < b;
    });
    return order;
}

// One walk over `order`. With `holders` null each accepted candidate gets its
// lowest-index feasible packet; otherwise holders[p] is the player-mask
// holding packet p and the pick maximizes how many still-unvisited candidates
// hold it (a packet nobody else holds walls off the rest of the walk).
// One walk over `order`. With `holders` null each accepted candidate gets its
// lowest-index feasible packet; otherwise holders[p] is the player-mask
// holding packet p and the pick maximizes how many still-unvisited candidates
// hold it (a packet nobody else holds walls off the rest of the walk). A
// forced first packet (when feasible for order[0]) seeds the walk on a
// specific branch.
PacketCombination greedy_pass(const SelectorContext& ctx, const SideInformationState& s,
                              const std::vector<int>& order,
                              const std::vector<std::uint64_t>* holders = nullptr,
                              std::size_t forcedFirstPacket = static_cast<std::size_t>(-1)) {
    PacketCombination chosen(static_cast<std::size_t>(s.packets));
    BitVec heldByAllTargeted = BitVec(static_cast<std::size_t>(s.packets)).complement(); // all packets
    std::uint64_t remaining = 0;
    if (holders)
        for (int j : order) remaining |= (std::uint64_t{1} << j);
    bool first = true;
    for (int j : order) {
        if (holders) remaining &= ~(std::uint64_t{1} << j);
        const BitVec& wj = s.wants[static_cast<std::size_t>(j)];
        BitVec hj = wj.complement();
        // Every packet already in the combination must sit in j's Has set,
        // otherwise adding j would hand it two unknowns.
        if (!chosen.is_subset_of(hj)) { first = false; continue; }
        BitVec candidates = wj & ctx.has & heldByAllTargeted;
        std::size_t p = candidates.size();
        if (first && forcedFirstPacket < candidates.size() && candidates.test(forcedFirstPacket)) {
            p = forcedFirstPacket;
        } else if (!holders) {
            p = candidates.find_first();
        } else {
            int bestCnt = -1;
            candidates.for_each_set([&](std::size_t pp) {
                int cnt = __builtin_popcountll((*holders)[pp] & remaining);
                if (cnt > bestCnt) { // strict: ties keep the lowest packet index
                    bestCnt = cnt;
                    p = pp;
                }
            });
        }
        first = false;
        if (p == candidates.size()) continue;
        chosen.set(p);
        heldByAllTargeted &= hj;
    }
    return chosen;
}

// Objective shared by the exhaustive selector and the multi-start greedy:
// priority hits first, then raw target count, then expected deliveries.
struct ComboScore {
    std::size_t nPriority = 0;
    std::size_t nTargets = 0;
    double success = 0.0;

    bool better_than(const ComboScore& o) const {
        if (nPriority != o.nPriority) return nPriority > o.nPriority;
        if (nTargets != o.nTargets) return nTargets > o.nTargets;
        return success > o.success;
    }
};

ComboScore score_combination(const SelectorContext& ctx, const SideInformationState& s,
                             const PacketCombination& kappa) {
    std::uint64_t targets = target_set(kappa, s);
    if (ctx.encoder >= 0) targets &= ~(std::uint64_t{1} << ctx.encoder); // encoder never targets itself
    ComboScore sc;
    sc.nPriority = static_cast<std::size_t>(__builtin_popcountll(targets & ctx.priority));
    sc.nTargets = static_cast<std::size_t>(__builtin_popcountll(targets));
    for (int j = 0; j < s.players; ++j)
        if ((targets >> j) & 1u) sc.success += ctx.deliverySuccess[static_cast<std::size_t>(j)];
    return sc;
}

} // namespace

PacketCombination select_greedy(const SelectorContext& ctx, const SideInformationState& s) {
    return greedy_pass(ctx, s, candidate_order(ctx, s));
}

PacketCombination select_greedy_multistart(const SelectorContext& ctx, const SideInformationState& s) {
    std::vector<int> base = candidate_order(ctx, s);
    // The plain single pass stays in the running, so this never does worse
    // than select_greedy.
    PacketCombination best = greedy_pass(ctx, s, base);
    ComboScore bestScore = score_combination(ctx, s, best);
    // Player-mask per packet, for the lookahead pick inside each pass.
    std::vector<std::uint64_t> holders(static_cast<std::size_t>(s.packets), 0);
    for (int j = 0; j < s.players; ++j)
        for (int p = 0; p < s.packets; ++p)
            if (!s.wants[static_cast<std::size_t>(j)].test(static_cast<std::size_t>(p)))
                holders[static_cast<std::size_t>(p)] |= (std::uint64_t{1} << j);
    // One batch of passes per candidate promoted to the front of the ranking
    // (k = 0 keeps the plain ranking; the rest keep their relative order),
    // branching on every feasible first packet for the front candidate. A
    // single greedy pass commits early and can wall off later candidates;
    // re-seeding the walk from each (candidate, packet) branch explores many
    // maximal combinations at linear cost per pass, and the lookahead pick
    // keeps each walk from blocking itself.
    auto consider = [&](const PacketCombination& kappa) {
        ComboScore sc = score_combination(ctx, s, kappa);
        if (sc.better_than(bestScore) ||
            (!bestScore.better_than(sc) && kappa.value_less(best))) {
            best = kappa;
            bestScore = sc;
        }
    };
    std::vector<int> order(base.size());
    for (std::size_t k = 0; k < base.size(); ++k) {
        order = base;
        std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        BitVec firstChoices = s.wants[static_cast<std::size_t>(order[0])] & ctx.has;
        if (firstChoices.none()) {
            consider(greedy_pass(ctx, s, order, &holders));
            continue;
        }
        firstChoices.for_each_set([&](std::size_t p) {
            consider(greedy_pass(ctx, s, order, &holders, p));
        });
    }
    return best;
}

PacketCombination select_exact(const SelectorContext& ctx, const SideInformationState& s, int capBits) {
    std::vector<int> heldIdx;
    ctx.has.for_each_set([&](std::size_t p) { heldIdx.push_back(static_cast<int>(p)); });
    const int h = static_cast<int>(heldIdx.size());
    if (h > capBits)
        throw std::runtime_error("select_exact: held set of " + std::to_string(h) +
                                 " packets exceeds the exhaustive cap of " + std::to_string(capBits));

    PacketCombination best(static_cast<std::size_t>(s.packets));
    std::size_t bestPriority = 0, bestTargets = 0;
    double bestSuccess = 0.0;
    bool haveBest = false;

    const std::uint64_t limit = std::uint64_t{1} << h;
    for (std::uint64_t m = 0; m < limit; ++m) {
        PacketCombination kappa(static_cast<std::size_t>(s.packets));
        for (int b = 0; b < h; ++b)
            if ((m >> b) & 1u) kappa.set(static_cast<std::size_t>(heldIdx[static_cast<std::size_t>(b)]));
        std::uint64_t targets = target_set(kappa, s);
        targets &= ~(ctx.encoder >= 0 ? (std::uint64_t{1} << ctx.encoder) : 0); // encoder never targets itself
        std::size_t nPriority = static_cast<std::size_t>(__builtin_popcountll(targets & ctx.priority));
        std::size_t nTargets = static_cast<std::size_t>(__builtin_popcountll(targets));
        double success = 0.0;
        for (int j = 0; j < s.players; ++j)
            if ((targets >> j) & 1u) success += ctx.deliverySuccess[static_cast<std::size_t>(j)];
        // Ascending m enumerates masks in ascending binary value (the bit ->
        // packet-index mapping is order preserving), so strict improvement
        // keeps the smallest mask among ties.
        bool better = !haveBest || nPriority > bestPriority ||
                      (nPriority == bestPriority &&
                       (nTargets > bestTargets || (nTargets == bestTargets && success > bestSuccess)));
        if (better) {
            best = kappa;
            bestPriority = nPriority;
            bestTargets = nTargets;
            bestSuccess = success;
            haveBest = true;
        }
    }
    return best;
}

namespace {

SelectorContext player_context(int i, const SideInformationState& s, const ErasureModel& model,
                               std::uint64_t priority) {
    SelectorContext ctx;
    ctx.encoder = i;
    ctx.has = s.has_mask(i);
    ctx.priority = priority;
    std::vector<double> pbar = model.average_erasure();
    ctx.orderWeight.resize(static_cast<std::size_t>(s.players));
    ctx.deliverySuccess.resize(static_cast<std::size_t>(s.players));
    for (int j = 0; j < s.players; ++j) {
        ctx.orderWeight[static_cast<std::size_t>(j)] = 1.0 / (1.0 - pbar[static_cast<std::size_t>(j)]);
        ctx.deliverySuccess[static_cast<std::size_t>(j)] = 1.0 - model.at(j, i);
    }
    return ctx;
}

} // namespace

PacketCombination select_combination_greedy(int i, const SideInformationState& s, const ErasureModel& model,
                                            std::uint64_t priority) {
    return select_greedy(player_context(i, s, model, priority), s);
}

PacketCombination select_combination_exact(int i, const SideInformationState& s, const ErasureModel& model,
                                           std::uint64_t priority, int capBits) {
    return select_exact(player_context(i, s, model, priority), s, capBits);
}

} // namespace cdex
