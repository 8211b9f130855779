#include "cdex/model.hpp"

#include <stdexcept>
#include <string>

namespace cdex {

std::vector<double> ErasureModel::average_erasure() const {
    std::vector<double> avg(static_cast<std::size_t>(players), 0.0);
    for (int i = 0; i < players; ++i) {
        double sum = 0.0;
        for (int j = 0; j < players; ++j)
            sum += (avgDirection == AvgDirection::incoming) ? at(i, j) : at(j, i);
        avg[static_cast<std::size_t>(i)] = sum / static_cast<double>(players);
    }
    return avg;
}

SideInformationState run_init_phase(int M, int N, const std::vector<double>& bsErasure, Rng& rng,
                                    int retransmitCap) {
    if (M < 1 || N < 0) throw std::invalid_argument("run_init_phase: need at least one player");
    if (static_cast<int>(bsErasure.size()) != M)
        throw std::invalid_argument("run_init_phase: bsErasure size must equal player count");
    for (double q : bsErasure)
        if (!(q >= 0.0 && q < 1.0))
            throw std::invalid_argument("run_init_phase: base-station erasures must lie in [0, 1)");

    SideInformationState s(M, N);
    std::vector<std::uint8_t> miss(static_cast<std::size_t>(M), 0);
    for (int j = 0; j < N; ++j) {
        int attempts = 0;
        bool held = false;
        while (!held) {
            if (++attempts > retransmitCap)
                throw std::runtime_error("run_init_phase: packet " + std::to_string(j) +
                                         " exceeded " + std::to_string(retransmitCap) +
                                         " broadcast attempts");
            held = false;
            for (int i = 0; i < M; ++i) {
                bool erased = rng.bernoulli(bsErasure[static_cast<std::size_t>(i)]);
                miss[static_cast<std::size_t>(i)] = erased ? 1 : 0;
                if (!erased) held = true;
            }
        }
        for (int i = 0; i < M; ++i)
            if (miss[static_cast<std::size_t>(i)]) s.wants[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(j));
    }
    return s;
}

ChannelRealization sample_channel(const ErasureModel& model, Rng& rng) {
    const int M = model.players;
    ChannelRealization w(M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j) {
            if (i == j) {
                w.set(i, j, true);
            } else {
                w.set(i, j, !rng.bernoulli(model.at(i, j)));
            }
        }
    }
    return w;
}

bool is_complete(const SideInformationState& s) {
    for (const auto& row : s.wants)
        if (row.any()) return false;
    return true;
}

std::uint64_t wants_indicator(const SideInformationState& s) {
    std::uint64_t mw = 0;
    for (int i = 0; i < s.players; ++i)
        if (s.wants[static_cast<std::size_t>(i)].any()) mw |= (std::uint64_t{1} << i);
    return mw;
}

Session make_session(SideInformationState state, ErasureModel model, GameMode mode, int punishmentV) {
    if (state.players != model.players)
        throw std::invalid_argument("make_session: state and erasure model disagree on player count");
    if (state.players > 64)
        throw std::invalid_argument("make_session: player sets are carried in 64-bit masks (M <= 64)");
    Session sess;
    sess.state = std::move(state);
    sess.model = std::move(model);
    sess.mode = mode;
    sess.ledger = GameLedger(sess.state.players, punishmentV);
    for (int i = 0; i < sess.state.players; ++i)
        sess.ledger.initialWants[static_cast<std::size_t>(i)] = sess.state.wants_count(i);
    return sess;
}

} // namespace cdex
