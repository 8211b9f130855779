#include "cdex/delay.hpp"

#include <stdexcept>

namespace cdex {

std::vector<int> stage_delay(int sender, const PacketCombination& kappa, const SideInformationState& s,
                             const ChannelRealization& omega) {
    std::uint64_t targets = target_set(kappa, s);
    std::vector<int> d(static_cast<std::size_t>(s.players), 0);
    for (int i = 0; i < s.players; ++i) {
        bool wanting = s.wants[static_cast<std::size_t>(i)].any();
        bool targeted = (targets >> i) & 1u;
        if (wanting && !targeted && omega.received(i, sender)) d[static_cast<std::size_t>(i)] = 1;
    }
    return d;
}

std::vector<double> stage_delay_virtual(int sender, const PacketCombination& kappa,
                                        const SideInformationState& s, const ErasureModel& model,
                                        ChannelMode mode) {
    if (mode == ChannelMode::realized)
        throw std::invalid_argument("stage_delay_virtual: realized mode needs a sampled channel");
    std::uint64_t targets = target_set(kappa, s);
    std::vector<double> d(static_cast<std::size_t>(s.players), 0.0);
    for (int i = 0; i < s.players; ++i) {
        bool wanting = s.wants[static_cast<std::size_t>(i)].any();
        bool targeted = (targets >> i) & 1u;
        if (!wanting || targeted) continue;
        d[static_cast<std::size_t>(i)] =
            (mode == ChannelMode::deterministic) ? 1.0 : 1.0 - model.at(i, sender);
    }
    return d;
}

void accumulate_delay(GameLedger& ledger, std::uint64_t profileBits,
                      const std::optional<std::vector<int>>& perStage, std::uint64_t wantsMask) {
    const int transmitters = __builtin_popcountll(profileBits);
    const std::size_t M = ledger.cumulativeDelay.size();
    if (transmitters == 1) {
        if (!perStage)
            throw std::invalid_argument("accumulate_delay: single-transmitter stage needs its stage delay");
        if (perStage->size() != M)
            throw std::invalid_argument("accumulate_delay: stage delay length mismatch");
        for (std::size_t i = 0; i < M; ++i)
            ledger.cumulativeDelay[i] += (*perStage)[i];
    } else {
        if (perStage)
            throw std::invalid_argument("accumulate_delay: stage delay only applies to single-transmitter stages");
        for (std::size_t i = 0; i < M; ++i)
            if ((wantsMask >> i) & 1u) ledger.cumulativeDelay[i] += 1;
    }
}

double completion_estimate_one(double initialWants, double cumulativeDelay, double avgErasure) {
    if (!(avgErasure < 1.0))
        throw std::invalid_argument("completion_estimate: average erasure must be below 1");
    double c = (initialWants + cumulativeDelay - avgErasure) / (1.0 - avgErasure);
    return c > 0.0 ? c : 0.0;
}

CompletionEstimate completion_estimate(const std::vector<int>& initialWants,
                                       const std::vector<double>& cumulativeDelay,
                                       const std::vector<double>& avgErasure) {
    if (initialWants.size() != cumulativeDelay.size() || initialWants.size() != avgErasure.size())
        throw std::invalid_argument("completion_estimate: vector length mismatch");
    CompletionEstimate est;
    est.perPlayer.resize(initialWants.size());
    for (std::size_t i = 0; i < initialWants.size(); ++i) {
        est.perPlayer[i] = completion_estimate_one(static_cast<double>(initialWants[i]),
                                                   cumulativeDelay[i], avgErasure[i]);
        if (est.perPlayer[i] > est.maxNorm) est.maxNorm = est.perPlayer[i];
    }
    return est;
}

double pmp_completion_estimate(double initialWants, double cumulativeDelay, double q) {
    if (!(q < 1.0)) throw std::invalid_argument("pmp_completion_estimate: q must be below 1");
    double c = (initialWants + cumulativeDelay - q) / (1.0 - q);
    return c > 0.0 ? c : 0.0;
}

} // namespace cdex
