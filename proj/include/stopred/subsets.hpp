#pragma once
// Fixed-size subset enumeration over bitmasks (n <= 64) in colexicographic
// order, with unranking so parallel workers can start mid-sequence.

#include "stopred/bigint.hpp"

#include <cstdint>
#include <vector>
#include <stdexcept>

namespace stopred {

// Next mask with the same popcount, numerically larger (Gosper).  Numeric
// order on masks of fixed weight is exactly colex order on the subsets.
inline uint64_t next_same_weight(uint64_t v) {
    uint64_t c = v & (0 - v);
    uint64_t r = v + c;
    return (((r ^ v) >> 2) / c) | r;
}

inline uint64_t first_of_weight(uint32_t k) {
    return k == 0 ? 0 : (k >= 64 ? ~uint64_t(0) : (uint64_t(1) << k) - 1);
}

// Colex rank of a mask: rank = sum over set bits b (as the j-th smallest,
// 1-based) of C(b, j).
inline uint64_t colex_rank(uint64_t mask) {
    uint64_t rank = 0;
    uint32_t j = 0;
    while (mask) {
        uint32_t b = uint32_t(__builtin_ctzll(mask));
        mask &= mask - 1;
        rank += binomial_u64(b, ++j);
    }
    return rank;
}

// Inverse of colex_rank for weight-k subsets of [0, n).
inline uint64_t colex_unrank(uint64_t rank, uint32_t n, uint32_t k) {
    if (n > 64) throw std::invalid_argument("colex_unrank: n > 64");
    uint64_t mask = 0;
    uint32_t hi = n;
    for (uint32_t j = k; j >= 1; --j) {
        // Largest b < hi with C(b, j) <= rank; positions descend so b < hi keeps bits distinct.
        uint32_t b = j - 1;
        uint64_t cb = 0;  // C(b, j) with b = j-1 is 0
        for (uint32_t cand = hi; cand-- > j - 1;) {
            uint64_t c = binomial_u64(cand, j);
            if (c <= rank) { b = cand; cb = c; break; }
        }
        mask |= uint64_t(1) << b;
        rank -= cb;
        hi = b;
    }
    return mask;
}

// Visit every weight-k mask over [0, n) in colex order, ranks [lo, hi).
template <typename Visit>
void for_each_subset_range(uint32_t n, uint32_t k, uint64_t lo, uint64_t hi, Visit visit) {
    if (k == 0 || k > n) return;
    if (lo >= hi) return;
    uint64_t mask = colex_unrank(lo, n, k);
    for (uint64_t r = lo; r < hi; ++r) {
        visit(mask);
        if (r + 1 < hi) mask = next_same_weight(mask);
    }
}

template <typename Visit>
void for_each_subset(uint32_t n, uint32_t k, Visit visit) {
    if (k == 0 || k > n) return;
    for_each_subset_range(n, k, 0, binomial_u64(n, k), visit);
}

}  // namespace stopred
