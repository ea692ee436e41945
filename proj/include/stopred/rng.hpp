#pragma once
// Deterministic counter-based RNG plus the sampling primitives used by the
// Monte Carlo estimators and the random-code constructions.
//
// Counter-based (stateless) generation keeps parallel runs reproducible: a
// (seed, stream) pair names an infinite random sequence, and worker i can
// jump straight to any offset without touching shared state.

#include <cstdint>
#include <vector>
#include <stdexcept>
#include <algorithm>

namespace stopred {

inline uint64_t mix64(uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed, uint64_t stream = 0)
        : key_(mix64(seed ^ mix64(stream ^ 0x9e3779b97f4a7c15ULL))), counter_(0) {}

    // Jump to an absolute position in the stream (used by parallel chunks).
    void seek(uint64_t counter) { counter_ = counter; }
    uint64_t position() const { return counter_; }

    uint64_t next_u64() { return mix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL); }

    // Uniform in [0, bound) without modulo bias (rejection on the top range).
    uint64_t next_below(uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("next_below: bound 0");
        uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    double next_unit() {  // uniform in [0,1) with 53 random bits
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bool() { return next_u64() >> 63; }

private:
    uint64_t key_;
    uint64_t counter_;
};

// Uniform k-subset of {0,...,n-1}, ascending.  Floyd's algorithm: k RNG
// draws regardless of n, no rejection loop over duplicates.
inline std::vector<uint32_t> sample_subset(Rng& rng, uint32_t n, uint32_t k) {
    if (k > n) throw std::invalid_argument("sample_subset: k > n");
    std::vector<uint32_t> chosen;
    chosen.reserve(k);
    for (uint32_t j = n - k; j < n; ++j) {
        uint32_t t = uint32_t(rng.next_below(j + 1));
        if (std::find(chosen.begin(), chosen.end(), t) != chosen.end()) t = j;
        chosen.push_back(t);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(Rng& rng, std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i)
        std::swap(v[i - 1], v[size_t(rng.next_below(i))]);
}

// Random permutation of {0,...,n-1}.
inline std::vector<uint32_t> sample_permutation(Rng& rng, uint32_t n) {
    std::vector<uint32_t> p(n);
    for (uint32_t i = 0; i < n; ++i) p[i] = i;
    shuffle(rng, p);
    return p;
}

}  // namespace stopred
