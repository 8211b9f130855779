#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cdex/model.hpp"

using namespace cdex;

namespace {

bool column_condition_holds(const SideInformationState& s) {
    for (int p = 0; p < s.packets; ++p) {
        bool held = false;
        for (int i = 0; i < s.players && !held; ++i)
            held = !s.wants[static_cast<std::size_t>(i)].test(static_cast<std::size_t>(p));
        if (!held) return false;
    }
    return true;
}

} // namespace

TEST_CASE("init phase with perfect downlinks hands everyone the whole frame") {
    Rng rng(1);
    SideInformationState s = run_init_phase(2, 3, {0.0, 0.0}, rng);
    CHECK(s.players == 2);
    CHECK(s.packets == 3);
    CHECK(is_complete(s));
    CHECK(wants_indicator(s) == 0);
}

TEST_CASE("init phase keeps broadcasting until one player holds each packet") {
    // Player 0 loses essentially everything, player 1 receives everything:
    // one perfect receiver satisfies the at-least-one-holder condition, so no
    // packet is rebroadcast for player 0's sake.
    Rng rng(1);
    SideInformationState s = run_init_phase(2, 2, {1.0 - 1e-12, 0.0}, rng);
    CHECK(s.wants_count(0) == 2);
    CHECK(s.wants_count(1) == 0);
    CHECK(column_condition_holds(s));
}

TEST_CASE("init phase row sums track the erasure rate") {
    Rng rng(42);
    SideInformationState s = run_init_phase(3, 30, {0.2, 0.2, 0.2}, rng);
    CHECK(column_condition_holds(s));
    double meanRow = (s.wants_count(0) + s.wants_count(1) + s.wants_count(2)) / 3.0;
    // Mean wants-row size is about N*q; allow three standard deviations of
    // the Bernoulli sum around it.
    double sigma = std::sqrt(3.0 * 30.0 * 0.2 * 0.8) / 3.0;
    CHECK(std::fabs(meanRow - 6.0) <= 3.0 * sigma);
}

TEST_CASE("init phase is reproducible per seed") {
    Rng a(7), b(7), c(8);
    SideInformationState sa = run_init_phase(4, 10, {0.3, 0.3, 0.3, 0.3}, a);
    SideInformationState sb = run_init_phase(4, 10, {0.3, 0.3, 0.3, 0.3}, b);
    SideInformationState sc = run_init_phase(4, 10, {0.3, 0.3, 0.3, 0.3}, c);
    for (int i = 0; i < 4; ++i) CHECK(sa.wants[static_cast<std::size_t>(i)] == sb.wants[static_cast<std::size_t>(i)]);
    bool anyDiff = false;
    for (int i = 0; i < 4; ++i)
        if (!(sa.wants[static_cast<std::size_t>(i)] == sc.wants[static_cast<std::size_t>(i)])) anyDiff = true;
    CHECK(anyDiff);
}

TEST_CASE("init phase rejects bad arguments and hopeless channels") {
    Rng rng(1);
    CHECK_THROWS_AS(run_init_phase(0, 3, {}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_init_phase(2, 3, {0.0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_init_phase(1, 1, {1.5}, rng), std::invalid_argument);
    // q so close to 1 that 10000 attempts cannot plausibly deliver the packet.
    CHECK_THROWS_AS(run_init_phase(1, 1, {1.0 - 1e-15}, rng), std::runtime_error);
}

TEST_CASE("init phase supports an empty frame") {
    Rng rng(1);
    SideInformationState s = run_init_phase(2, 0, {0.5, 0.5}, rng);
    CHECK(s.packets == 0);
    CHECK(is_complete(s));
}

TEST_CASE("has and wants rows partition the frame") {
    Rng rng(9);
    SideInformationState s = run_init_phase(5, 12, {0.4, 0.4, 0.4, 0.4, 0.4}, rng);
    for (int i = 0; i < s.players; ++i) {
        CHECK(static_cast<int>(s.has_mask(i).count()) + s.wants_count(i) == s.packets);
    }
    CHECK(column_condition_holds(s));
}

TEST_CASE("channel sampling: erasure-free model yields the all-ones matrix") {
    ErasureModel m(3);
    Rng rng(5);
    ChannelRealization w = sample_channel(m, rng);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(w.received(i, j));
}

TEST_CASE("channel sampling: a near-certain erasure drops the packet but never the self link") {
    ErasureModel m(2);
    m.set(0, 1, 1.0 - 1e-12);
    Rng rng(3);
    ChannelRealization w = sample_channel(m, rng);
    CHECK_FALSE(w.received(0, 1));
    CHECK(w.received(0, 0));
    CHECK(w.received(1, 1));
}

TEST_CASE("channel sampling matches the link success rate over many draws") {
    ErasureModel m(2);
    m.set(0, 1, 0.4);
    m.set(1, 0, 0.4);
    Rng rng(11);
    int hits = 0;
    const int draws = 100000;
    for (int k = 0; k < draws; ++k)
        if (sample_channel(m, rng).received(0, 1)) ++hits;
    double mean = static_cast<double>(hits) / draws;
    CHECK(std::fabs(mean - 0.6) <= 0.01);
}

TEST_CASE("channel sampling is reproducible per seed") {
    ErasureModel m(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) m.set(i, j, 0.5);
    Rng a(21), b(21);
    for (int k = 0; k < 50; ++k) {
        ChannelRealization wa = sample_channel(m, a);
        ChannelRealization wb = sample_channel(m, b);
        CHECK(wa.success == wb.success);
    }
}

TEST_CASE("completion detection") {
    SideInformationState s(2, 2);
    CHECK(is_complete(s));
    s.wants[0].set(1);
    CHECK_FALSE(is_complete(s));
    CHECK(wants_indicator(s) == 0b01);
}

TEST_CASE("average erasure includes the zero self term") {
    ErasureModel m(2);
    m.set(0, 1, 0.4);
    m.set(1, 0, 0.1);
    std::vector<double> pbar = m.average_erasure();
    CHECK(pbar[0] == doctest::Approx(0.2));
    CHECK(pbar[1] == doctest::Approx(0.05));
    m.avgDirection = AvgDirection::outgoing;
    std::vector<double> out = m.average_erasure();
    CHECK(out[0] == doctest::Approx(0.05)); // column 0: what player 0's packets suffer
    CHECK(out[1] == doctest::Approx(0.2));
}

TEST_CASE("session construction checks shape") {
    SideInformationState s(2, 2);
    ErasureModel m(3);
    CHECK_THROWS_AS(make_session(s, m, GameMode::game2, 2), std::invalid_argument);
}
