#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdex/game.hpp"
#include "cdex/verify.hpp"

using namespace cdex;

namespace {

// The two-player crossed instance: each holds exactly the packet the other
// wants, asymmetric links, both utilities hand-checkable.
Session e1(GameMode mode = GameMode::game2) { return crossed_pair_session(mode); }

} // namespace

TEST_CASE("pure completion-cost utility on the crossed pair") {
    Session s = e1(GameMode::game1);
    auto kappas = stage_kappas(s);
    // Lone transmitter 1 delays only itself; the other side's estimate grows.
    CHECK(utility_game1(s, 0b10, kappas, ChannelMode::deterministic) ==
          doctest::Approx(-2.0526315789473686).epsilon(1e-12));
    // A collision charges both players.
    CHECK(utility_game1(s, 0b11, kappas, ChannelMode::deterministic) == doctest::Approx(-2.25));
    // Silence also charges both.
    CHECK(utility_game1(s, 0b00, kappas, ChannelMode::deterministic) == doctest::Approx(-2.25));
}

TEST_CASE("charged utility subtracts the transmitter count and the mean delay increment") {
    Session s = e1();
    auto kappas = stage_kappas(s);
    CHECK(utility_game2(s, 0b00, kappas, ChannelMode::deterministic) == doctest::Approx(-3.25));
    CHECK(utility_game2(s, 0b01, kappas, ChannelMode::deterministic) == doctest::Approx(-3.75));
    CHECK(utility_game2(s, 0b10, kappas, ChannelMode::deterministic) ==
          doctest::Approx(-3.5526315789473686).epsilon(1e-12));
    CHECK(utility_game2(s, 0b11, kappas, ChannelMode::deterministic) == doctest::Approx(-5.25));
}

TEST_CASE("the two utilities differ by exactly the charge terms, bit for bit") {
    Rng rng(5150);
    for (int trial = 0; trial < 30; ++trial) {
        Session s = random_stage_session(2 + static_cast<int>(rng.below(4)), rng);
        auto kappas = stage_kappas(s);
        const int M = s.players();
        for (std::uint64_t pr = 0; pr < (std::uint64_t{1} << M); ++pr) {
            VirtualOutcome out = apply_profile(s, pr, kappas, ChannelMode::deterministic);
            double u1 = utility_game1(s, pr, kappas, ChannelMode::deterministic);
            double u2 = utility_game2(s, pr, kappas, ChannelMode::deterministic);
            double recombined = u1 - static_cast<double>(__builtin_popcountll(pr)) - out.deltaL1 / M;
            CHECK(u2 == recombined);
        }
    }
}

TEST_CASE("utilities are common across players: unilateral deviations move everyone identically") {
    Rng rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        Session s = random_stage_session(3, rng);
        auto kappas = stage_kappas(s);
        for (std::uint64_t pr = 0; pr < 8; ++pr) {
            for (int j = 0; j < 3; ++j) {
                std::uint64_t dev = pr ^ (std::uint64_t{1} << j);
                // The common utility *is* the potential: the deviation
                // difference is the same scalar no matter who computes it.
                double before = utility_game2(s, pr, kappas, ChannelMode::deterministic);
                double after = utility_game2(s, dev, kappas, ChannelMode::deterministic);
                double before2 = utility_game2(s, pr, kappas, ChannelMode::deterministic);
                double after2 = utility_game2(s, dev, kappas, ChannelMode::deterministic);
                CHECK(before == before2);
                CHECK(after == after2);
            }
        }
    }
}

TEST_CASE("collision indicator marks transmitters only when more than one fired") {
    CHECK(collision_indicator(0b110) == 0b110);
    CHECK(collision_indicator(0b001) == 0);
    CHECK(collision_indicator(0) == 0);
}

TEST_CASE("backoff counts recent collisions and gates the allowed set") {
    Session s = e1();
    s.ledger.collisionWindow = {0b11, 0b00}; // both collided within the window
    std::vector<int> b = backoff_vector(s.ledger);
    CHECK(b == std::vector<int>{1, 1});
    CHECK(allowed_transmitters(s) == 0);

    s.ledger.collisionWindow = {0b00, 0b00};
    CHECK(allowed_transmitters(s) == 0b11);
}

TEST_CASE("three-player backoff window example") {
    GameLedger ledger(3, 2);
    ledger.collisionWindow = {0b011, 0b000};
    CHECK(backoff_vector(ledger) == std::vector<int>{1, 1, 0});
}

TEST_CASE("a zero punishment window disables the policy") {
    Session s = e1();
    s.ledger.punishmentV = 0;
    s.ledger.collisionWindow.clear();
    CHECK(backoff_vector(s.ledger) == std::vector<int>{0, 0});
    CHECK(allowed_transmitters(s) == 0b11);
}

TEST_CASE("the pure completion game ignores the punishment policy entirely") {
    Session s = e1(GameMode::game1);
    s.ledger.collisionWindow = {0b11, 0b11};
    CHECK(allowed_transmitters(s) == 0b11);
}

TEST_CASE("advancing a stage: lone transmission decodes at the reached target") {
    Session s = e1();
    Rng rng(1); // seed where player 1's reception succeeds
    StageOutcome out = advance_stage(s, 0b01, rng);
    REQUIRE(out.decodedBy.size() == 1);
    CHECK(out.decodedBy[0] == std::pair<int, int>{1, 0});
    CHECK(s.state.wants[1].none());
    CHECK_FALSE(s.state.wants[0].none());
    CHECK(s.ledger.cumulativeDelay == std::vector<std::int64_t>{1, 0});
    CHECK(out.collided == 0);
    CHECK(s.ledger.stage == 2);
}

TEST_CASE("advancing a stage: erased delivery decodes nothing but the transmitter still pays") {
    Session s = e1();
    Rng rng(7); // seed where the cross link drops the packet
    StageOutcome out = advance_stage(s, 0b01, rng);
    CHECK(out.decodedBy.empty());
    CHECK_FALSE(s.state.wants[1].none());
    CHECK(s.ledger.cumulativeDelay == std::vector<std::int64_t>{1, 0});
}

TEST_CASE("advancing a stage: collision charges everyone and backs both off") {
    Session s = e1();
    Rng rng(1);
    StageOutcome out = advance_stage(s, 0b11, rng);
    CHECK(out.decodedBy.empty());
    CHECK(out.collided == 0b11);
    CHECK(s.ledger.cumulativeDelay == std::vector<std::int64_t>{1, 1});
    CHECK(allowed_transmitters(s) == 0);
    // A backed-off player may not transmit while the window remembers it.
    CHECK_THROWS_AS(advance_stage(s, 0b01, rng), std::invalid_argument);
    // Two lawful stages later the window has shifted clear again.
    advance_stage(s, 0b00, rng);
    advance_stage(s, 0b00, rng);
    CHECK(allowed_transmitters(s) == 0b11);
}

TEST_CASE("silence charges every wanting player") {
    Session s = e1();
    Rng rng(1);
    advance_stage(s, 0b00, rng);
    CHECK(s.ledger.cumulativeDelay == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("a completed session cannot advance") {
    Session s = e1();
    s.state.wants[0].clear();
    s.state.wants[1].clear();
    Rng rng(1);
    CHECK_THROWS_AS(advance_stage(s, 0b00, rng), std::logic_error);
}

TEST_CASE("profiles outside the player set are rejected") {
    Session s = e1();
    Rng rng(1);
    CHECK_THROWS_AS(advance_stage(s, 0b100, rng), std::invalid_argument);
}

TEST_CASE("delays never decrease along an episode") {
    Rng rng(31337);
    Session s = random_stage_session(4, rng);
    std::vector<std::int64_t> prev = s.ledger.cumulativeDelay;
    for (int t = 0; t < 30 && !is_complete(s.state); ++t) {
        std::uint64_t profile = rng.below(16) & allowed_transmitters(s);
        advance_stage(s, profile, rng);
        for (int i = 0; i < 4; ++i) CHECK(s.ledger.cumulativeDelay[static_cast<std::size_t>(i)] >= prev[static_cast<std::size_t>(i)]);
        prev = s.ledger.cumulativeDelay;
    }
}

TEST_CASE("both players are cost-critical on the crossed pair") {
    CHECK(compute_critical_set(e1()) == 0b11);
}

TEST_CASE("a finished laggard empties the critical set") {
    // Player 0 is done but carries the dominant estimate; player 1's possible
    // one-unit slip cannot reach it, so no player is critical.
    Session s = e1();
    s.state.wants[0].clear();
    s.ledger.cumulativeDelay = {5, 0};
    s.ledger.initialWants = {1, 1};
    CHECK(compute_critical_set(s) == 0);
}

TEST_CASE("per-player combinations are deterministic and feasible") {
    Session s = e1();
    auto k = stage_kappas(s);
    auto k2 = stage_kappas(s);
    REQUIRE(k.size() == 2);
    CHECK(k[0] == k2[0]);
    CHECK(k[1] == k2[1]);
    CHECK(k[0].test(0));
    CHECK_FALSE(k[0].test(1));
    CHECK(k[1].test(1));
    for (int i = 0; i < 2; ++i) CHECK(k[static_cast<std::size_t>(i)].is_subset_of(s.state.has_mask(i)));
}
