#include "doctest.h"

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cdex/coding.hpp"
#include "cdex/rng.hpp"

using namespace cdex;

namespace {

SideInformationState crossed_state() {
    SideInformationState s(2, 2);
    s.wants[0].set(1); // player 0 holds packet 0, misses packet 1
    s.wants[1].set(0); // player 1 holds packet 1, misses packet 0
    return s;
}

ErasureModel crossed_model() {
    ErasureModel m(2);
    m.set(0, 1, 0.4);
    m.set(1, 0, 0.1);
    return m;
}

PacketCombination mask_of(std::initializer_list<int> packets, int n) {
    PacketCombination k(static_cast<std::size_t>(n));
    for (int p : packets) k.set(static_cast<std::size_t>(p));
    return k;
}

// Every claimed target must see exactly one of its wanted packets in kappa.
bool targets_all_instantly_decodable(const PacketCombination& kappa, const SideInformationState& s,
                                     std::uint64_t targets) {
    for (int i = 0; i < s.players; ++i)
        if ((targets >> i) & 1u)
            if (s.wants[static_cast<std::size_t>(i)].intersection_count(kappa) != 1) return false;
    return true;
}

SideInformationState random_state(Rng& rng, int M, int N) {
    SideInformationState s(M, N);
    for (int i = 0; i < M; ++i)
        for (int p = 0; p < N; ++p)
            if (rng.bernoulli(0.45)) s.wants[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(p));
    return s;
}

ErasureModel random_model(Rng& rng, int M) {
    ErasureModel m(M);
    for (int i = 0; i < M; ++i) {
        for (int j = 0; j < M; ++j)
            if (i != j) m.set(i, j, rng.uniform(0.05, 0.45));
        m.q[static_cast<std::size_t>(i)] = rng.uniform(0.05, 0.45);
    }
    return m;
}

} // namespace

TEST_CASE("target set counts players with exactly one wanted packet in the combination") {
    SideInformationState s(3, 2);
    s.wants[0].set(1);              // one wanted packet in (1,1) -> targeted
    s.wants[1].set(0);
    s.wants[1].set(1);              // two wanted packets -> not decodable
    // player 2 wants nothing -> not innovative
    PacketCombination k = mask_of({0, 1}, 2);
    CHECK(target_set(k, s) == 0b001);
}

TEST_CASE("crossed pair: each player can only serve the other") {
    SideInformationState s = crossed_state();
    ErasureModel m = crossed_model();
    PacketCombination k0 = select_combination_greedy(0, s, m);
    CHECK(k0 == mask_of({0}, 2));
    CHECK(target_set(k0, s) == 0b10);
    PacketCombination k1 = select_combination_exact(1, s, m);
    CHECK(k1 == mask_of({1}, 2));
    CHECK(target_set(k1, s) == 0b01);
}

TEST_CASE("greedy packs one coded packet serving two players") {
    // Encoder holds both packets; each other player wants one and holds the
    // other, so XORing the two serves both at once.
    SideInformationState s(3, 2);
    s.wants[1].set(0);
    s.wants[2].set(1);
    ErasureModel m(3);
    PacketCombination greedy = select_combination_greedy(0, s, m);
    PacketCombination exact = select_combination_exact(0, s, m);
    CHECK(greedy == mask_of({0, 1}, 2));
    CHECK(exact == greedy);
    CHECK(target_set(greedy, s) == 0b110);
}

TEST_CASE("an encoder holding nothing sends nothing") {
    SideInformationState s(2, 2);
    s.wants[0].set(0);
    s.wants[0].set(1); // encoder 0 misses the whole frame
    s.wants[1].set(0);
    ErasureModel m(2);
    CHECK(select_combination_greedy(0, s, m).none());
}

TEST_CASE("exhaustive selector: all-zeros state has no targets") {
    SideInformationState s(2, 3);
    ErasureModel m(2);
    CHECK(select_combination_exact(0, s, m).none());
}

TEST_CASE("exhaustive selector enforces its enumeration cap") {
    SideInformationState s(2, 30);
    ErasureModel m(2);
    s.wants[1].set(0);
    CHECK_THROWS_AS(select_combination_exact(0, s, m), std::runtime_error);
}

TEST_CASE("selectors are deterministic and greedy never beats the exhaustive search") {
    Rng rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        int M = 2 + static_cast<int>(rng.below(4));
        int N = 3 + static_cast<int>(rng.below(6)); // |has| <= 8 keeps the oracle cheap
        SideInformationState s = random_state(rng, M, N);
        ErasureModel m = random_model(rng, M);
        for (int i = 0; i < M; ++i) {
            PacketCombination g1 = select_combination_greedy(i, s, m);
            PacketCombination g2 = select_combination_greedy(i, s, m);
            CHECK(g1 == g2);
            PacketCombination ex = select_combination_exact(i, s, m);
            std::uint64_t self = std::uint64_t{1} << i;
            std::uint64_t gt = target_set(g1, s) & ~self;
            std::uint64_t et = target_set(ex, s) & ~self;
            CHECK(__builtin_popcountll(gt) <= __builtin_popcountll(et));
            // feasibility agreement: when anyone can be served, greedy serves someone
            if (et != 0) CHECK(gt != 0);
            CHECK(targets_all_instantly_decodable(g1, s, gt));
            CHECK(g1.is_subset_of(s.has_mask(i)));
        }
    }
}

TEST_CASE("multi-start greedy never scores below the single pass") {
    Rng rng(777);
    for (int trial = 0; trial < 40; ++trial) {
        int M = 3 + static_cast<int>(rng.below(6));
        int N = 6 + static_cast<int>(rng.below(10));
        SideInformationState s = random_state(rng, M, N);
        ErasureModel m = random_model(rng, M);

        SelectorContext ctx;
        ctx.encoder = -1;
        ctx.has = BitVec(static_cast<std::size_t>(N)).complement();
        ctx.orderWeight.assign(static_cast<std::size_t>(M), 1.0);
        ctx.deliverySuccess.assign(static_cast<std::size_t>(M), 0.0);
        for (int i = 0; i < M; ++i) {
            ctx.orderWeight[static_cast<std::size_t>(i)] = 1.0 / (1.0 - m.q[static_cast<std::size_t>(i)]);
            ctx.deliverySuccess[static_cast<std::size_t>(i)] = 1.0 - m.q[static_cast<std::size_t>(i)];
        }

        PacketCombination single = select_greedy(ctx, s);
        PacketCombination multi = select_greedy_multistart(ctx, s);
        PacketCombination multi2 = select_greedy_multistart(ctx, s);
        CHECK(multi == multi2);

        std::uint64_t ts = target_set(single, s);
        std::uint64_t tm = target_set(multi, s);
        CHECK(__builtin_popcountll(tm) >= __builtin_popcountll(ts));
        CHECK(targets_all_instantly_decodable(multi, s, tm));
    }
}

TEST_CASE("wants indicator flags players with outstanding packets") {
    SideInformationState zero(2, 3);
    CHECK(wants_indicator(zero) == 0);
    CHECK(wants_indicator(crossed_state()) == 0b11);
    SideInformationState s(2, 3);
    s.wants[1].set(0);
    s.wants[1].set(1);
    CHECK(wants_indicator(s) == 0b10);
}
