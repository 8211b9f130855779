#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdex/learning.hpp"
#include "cdex/verify.hpp"

using namespace cdex;

TEST_CASE("on the crossed pair every lone transmission loses to silence") {
    Session s = crossed_pair_session();
    CHECK(best_response_sweep(s) == 0);
    CHECK(best_response_sweep(s, {}, ChannelMode::deterministic) == 0);
    CHECK(best_response_sweep(s, {1, 0}) == 0);
}

TEST_CASE("the liveness override breaks the crossed pair's silent deadlock") {
    Session s = crossed_pair_session();
    ResolveOptions opts;
    CHECK(resolve_stage_action(s, opts) == 0b01); // slower-served player moves first

    opts.order = {1, 0};
    CHECK(resolve_stage_action(s, opts) == 0b01); // override ignores sweep order

    opts.order.clear();
    opts.liveness = false;
    CHECK(resolve_stage_action(s, opts) == 0);
}

TEST_CASE("the helper trio resolves to the finished player without any override") {
    Session s = helper_trio_session();
    CHECK(best_response_sweep(s) == 0b100);
    CHECK(best_response_sweep(s, {}, ChannelMode::deterministic) == 0b100);
    CHECK(best_response_sweep(s, {}, ChannelMode::expected, /*singleSweep=*/true) == 0b100);
    CHECK(resolve_stage_action(s) == 0b100);
}

TEST_CASE("backed-off players are pinned silent and skipped by the override") {
    Session s = crossed_pair_session();
    s.ledger.collisionWindow = {0b01, 0b00}; // player 0 collided last stage
    CHECK(best_response_sweep(s) == 0);
    CHECK(resolve_stage_action(s) == 0b10);

    s.ledger.collisionWindow = {0b11, 0b00}; // nobody may transmit
    CHECK(resolve_stage_action(s) == 0);
}

TEST_CASE("players with nothing useful to encode are pinned silent") {
    Session s = crossed_pair_session();
    s.state.wants[1].clear(); // player 0's packet now serves nobody
    std::uint64_t fp = best_response_sweep(s);
    CHECK(fp == 0b10); // the finished player serves the remaining one
}

TEST_CASE("sweep order must have one slot per player and stay in range") {
    Session s = crossed_pair_session();
    CHECK_THROWS_AS(best_response_sweep(s, std::vector<int>{0}), std::invalid_argument);
    CHECK_THROWS_AS(best_response_sweep(s, std::vector<int>{0, 5}), std::invalid_argument);
}

TEST_CASE("the sweep lands on an equilibrium of the filtered stage game") {
    Rng rng(777);
    for (int trial = 0; trial < 30; ++trial) {
        GameMode mode = (trial % 2 == 0) ? GameMode::game2 : GameMode::game1;
        Session s = random_stage_session(2 + static_cast<int>(rng.below(4)), rng, mode);
        auto kappas = stage_kappas(s);
        std::uint64_t allowed = allowed_transmitters(s);
        std::uint64_t fp = best_response_sweep(s);
        double uFixed = expected_utility(s, fp, kappas);
        for (int j = 0; j < s.players(); ++j) {
            std::uint64_t bit = std::uint64_t{1} << j;
            std::uint64_t dev = fp ^ bit;
            bool turningOn = (dev & bit) != 0;
            if (turningOn && (!(allowed & bit) || kappas[static_cast<std::size_t>(j)].none()))
                continue; // not a legal move for j
            CHECK(expected_utility(s, dev, kappas) <= uFixed);
        }
    }
}

TEST_CASE("sweeps are deterministic") {
    Rng rngA(4242);
    Rng rngB(4242);
    Session a = random_stage_session(5, rngA);
    Session b = random_stage_session(5, rngB);
    CHECK(best_response_sweep(a) == best_response_sweep(b));
    CHECK(resolve_stage_action(a) == resolve_stage_action(b));
}
