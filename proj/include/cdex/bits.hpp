#pragma once

#include <cstdint>
#include <cstddef>
#include <vector>

namespace cdex {

// Fixed-size bit vector over 64-bit words. Used for Wants rows and packet
// combination masks, where set-algebra (subset tests, intersections) has to be
// cheap inside the selection and analysis inner loops.
class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t nbits)
        : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

    std::size_t size() const { return nbits_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }

    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    // Index of the lowest set bit, or size() when empty.
    std::size_t find_first() const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            if (words_[wi]) return wi * 64 + static_cast<std::size_t>(__builtin_ctzll(words_[wi]));
        return nbits_;
    }

    // True when every set bit of *this is also set in other.
    bool is_subset_of(const BitVec& other) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            if (words_[wi] & ~other.words_[wi]) return false;
        return true;
    }

    bool intersects(const BitVec& other) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            if (words_[wi] & other.words_[wi]) return true;
        return false;
    }

    std::size_t intersection_count(const BitVec& other) const {
        std::size_t c = 0;
        for (std::size_t wi = 0; wi < words_.size(); ++wi)
            c += static_cast<std::size_t>(__builtin_popcountll(words_[wi] & other.words_[wi]));
        return c;
    }

    // Lowest index set in (*this & other), or size() when the intersection is empty.
    std::size_t first_common(const BitVec& other) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi] & other.words_[wi];
            if (w) return wi * 64 + static_cast<std::size_t>(__builtin_ctzll(w));
        }
        return nbits_;
    }

    BitVec& operator&=(const BitVec& other) {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) words_[wi] &= other.words_[wi];
        return *this;
    }

    BitVec& operator|=(const BitVec& other) {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) words_[wi] |= other.words_[wi];
        return *this;
    }

    // Complement within the declared bit length.
    BitVec complement() const {
        BitVec r(nbits_);
        for (std::size_t wi = 0; wi < words_.size(); ++wi) r.words_[wi] = ~words_[wi];
        r.trim();
        return r;
    }

    friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }
    friend BitVec operator|(BitVec a, const BitVec& b) { a |= b; return a; }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.nbits_ == b.nbits_ && a.words_ == b.words_;
    }
    friend bool operator!=(const BitVec& a, const BitVec& b) { return !(a == b); }

    // Lexicographic compare of the numeric value sum(bit_j * 2^j); used for
    // smallest-mask tie-breaking in the exhaustive selector.
    bool value_less(const BitVec& b) const {
        for (std::size_t wi = words_.size(); wi-- > 0;) {
            if (words_[wi] != b.words_[wi]) return words_[wi] < b.words_[wi];
        }
        return false;
    }

    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                std::size_t b = static_cast<std::size_t>(__builtin_ctzll(w));
                fn(wi * 64 + b);
                w &= w - 1;
            }
        }
    }

private:
    void trim() {
        std::size_t extra = nbits_ & 63;
        if (extra && !words_.empty())
            words_.back() &= (std::uint64_t{1} << extra) - 1;
    }

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;
};

} // namespace cdex
