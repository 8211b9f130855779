#pragma once

#include <cstdint>
#include <initializer_list>

namespace cdex {

// Deterministic random source. splitmix64 core with explicit uniform/bernoulli
// mappings, so that identical seeds produce identical byte streams on every
// platform and toolchain (the std:: distributions are implementation-defined,
// which would break the byte-determinism contract of the experiment outputs).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n). Rejection sampling keeps it unbiased and
    // deterministic for a given stream position.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    int range(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

private:
    std::uint64_t state_;
};

// Order-sensitive seed combiner: stream identity = (master, tag, indices...).
// Each component is passed through the splitmix64 finalizer so that adjacent
// seeds or indices do not produce correlated streams.
inline std::uint64_t hash_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) {
        std::uint64_t z = (p + 0x9e3779b97f4a7c15ULL) ^ (h >> 17);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        h = (h * 0x2545f4914f6cdd1dULL) ^ (z ^ (z >> 31));
    }
    return h;
}

} // namespace cdex
