#pragma once
// Stopping-set predicates, exhaustive spectrum enumeration, undecodable
// erasure-pattern profiles, and the frame-error-rate mixture.

#include "stopred/bitmat.hpp"
#include "stopred/bigint.hpp"
#include "stopred/subsets.hpp"
#include "stopred/rng.hpp"
#include "stopred/parallel.hpp"
#include "stopred/decoder.hpp"

#include <cstdint>
#include <vector>
#include <string>
#include <stdexcept>
#include <cmath>

namespace stopred {

// Counts of (coverable) stopping sets by size, u[1..ell] (u[0] unused).
struct StoppingSpectrum {
    uint32_t n = 0;
    uint32_t ell = 0;
    std::vector<Count> u;      // size ell + 1
    bool coverable_only = false;
    bool exact = true;         // false: estimated upper limits
};

// Per-weight counts of undecodable erasure patterns, psi[0..w_max].
struct PatternProfile {
    uint32_t n = 0;
    uint32_t w_max = 0;
    DecoderKind decoder = DecoderKind::iterative;
    std::vector<double> psi;        // exact counts, or estimates in sampled mode
    bool exact = true;
    // Sampled-mode metadata (empty in exhaustive mode): per weight.
    std::vector<uint64_t> successes;
    std::vector<uint64_t> trials;
    uint64_t seed = 0;
};

// No row of H restricted to S has weight exactly one.
inline bool is_stopping_set(const BinaryMatrix& h, const ColumnSet& s) {
    for (size_t r = 0; r < h.rows(); ++r) {
        int w = 0;
        for (uint32_t c : s) {
            if (c >= h.cols()) throw std::out_of_range("is_stopping_set: column index");
            w += h.get(r, c);
            if (w > 1) break;
        }
        if (w == 1) return false;
    }
    return true;
}

// |supp(h) ∩ S| = 1.
inline bool covers(const BinaryVector& h, const ColumnSet& s) {
    int w = 0;
    for (uint32_t c : s) {
        if (c >= h.len) throw std::out_of_range("covers: column index");
        w += h.get(c);
        if (w > 1) return false;
    }
    return w == 1;
}

// Columns of H_S linearly independent (equivalently: the erasure pattern S
// is ML-recoverable; equivalently some dual codeword covers S).
inline bool is_coverable(const BinaryMatrix& h, const ColumnSet& s) {
    if (s.size() > h.rows()) return false;
    return rank(column_submatrix(h, s)) == s.size();
}

namespace detail {

// Rows of H as column words: word c has bit r set iff H[r][c] = 1 (needs
// rows <= 64).  All mask kernels below run on this view.
struct ColWords {
    std::vector<uint64_t> col;
    size_t rows;
    explicit ColWords(const BinaryMatrix& h) : col(column_words(h)), rows(h.rows()) {}
};

// Stopping test on a subset mask: no row meets the subset exactly once.
// once/twice accumulate "rows hit exactly once / at least twice so far".
inline bool mask_is_stopping(const ColWords& cw, uint64_t mask) {
    uint64_t once = 0, twice = 0;
    while (mask) {
        uint64_t w = cw.col[size_t(std::countr_zero(mask))];
        mask &= mask - 1;
        twice |= once & w;
        once ^= w;
    }
    return (once & ~twice) == 0;
}

// Independence test on a subset mask via incremental basis insertion.
inline bool mask_is_coverable(const ColWords& cw, uint64_t mask) {
    uint64_t basis[64];
    int rk = 0;
    if (size_t(std::popcount(mask)) > cw.rows) return false;
    while (mask) {
        uint64_t cur = cw.col[size_t(std::countr_zero(mask))];
        mask &= mask - 1;
        for (int b = 0; b < rk; ++b) cur = std::min(cur, cur ^ basis[b]);
        if (!cur) return false;
        basis[rk++] = cur;
    }
    return true;
}

}  // namespace detail

inline constexpr uint64_t kDefaultSubsetBudget = uint64_t(1) << 28;

// Exact spectrum by enumerating every subset of size 1..ell (colex order,
// chunked across workers).  covered_excluded=true counts stopping sets (the
// usual meaning — a covered set is by definition not a stopping set);
// covered_excluded=false drops the stopping filter and counts all subsets,
// which combined with coverable_only=true yields the greedy cover domain.
inline StoppingSpectrum spectrum_exhaustive(const BinaryMatrix& h, uint32_t ell,
                                            bool coverable_only, bool covered_excluded = true,
                                            unsigned threads = 0,
                                            uint64_t budget = kDefaultSubsetBudget) {
    if (h.cols() > 64) throw std::invalid_argument("spectrum_exhaustive: cols > 64");
    if (h.rows() > 64) throw std::invalid_argument("spectrum_exhaustive: rows > 64");
    uint32_t n = uint32_t(h.cols());
    if (ell > n) ell = n;
    uint64_t work = 0;
    for (uint32_t i = 1; i <= ell; ++i) {
        work += binomial_u64(n, i);
        if (work > budget)
            throw std::runtime_error("spectrum_exhaustive: subset budget exceeded (use --force to raise)");
    }
    detail::ColWords cw(h);
    unsigned nthreads = resolve_threads(threads);
    StoppingSpectrum spec;
    spec.n = n;
    spec.ell = ell;
    spec.coverable_only = coverable_only;
    spec.exact = true;
    spec.u.assign(ell + 1, 0);
    for (uint32_t i = 1; i <= ell; ++i) {
        uint64_t total = binomial_u64(n, i);
        uint64_t cnt = parallel_range_sum<uint64_t>(total, nthreads, 1 << 16,
            [&, i](uint64_t lo, uint64_t hi) {
                uint64_t c = 0;
                for_each_subset_range(n, i, lo, hi, [&](uint64_t mask) {
                    if (covered_excluded && !detail::mask_is_stopping(cw, mask)) return;
                    if (coverable_only && !detail::mask_is_coverable(cw, mask)) return;
                    ++c;
                });
                return c;
            });
        spec.u[i] = cnt;
    }
    return spec;
}

enum class ProfileMode { exhaustive, sampled };

// Per-weight undecodable-pattern counts for one decoder.  Weights above the
// matrix rank short-circuit to C(n,w): the columns are necessarily dependent,
// so ML fails and the (weaker) iterative decoder fails too.  Sampled mode
// estimates psi[w] = C(n,w) * successes/trials and keeps the raw tallies.
inline PatternProfile undecodable_profile(const BinaryMatrix& h, DecoderKind decoder,
                                          uint32_t w_max, ProfileMode mode,
                                          uint64_t samples = 0, uint64_t seed = 0,
                                          unsigned threads = 0,
                                          uint64_t budget = kDefaultSubsetBudget) {
    if (h.cols() > 64) throw std::invalid_argument("undecodable_profile: cols > 64");
    uint32_t n = uint32_t(h.cols());
    if (w_max > n) w_max = n;
    size_t rank_h = rank(h);
    unsigned nthreads = resolve_threads(threads);
    PatternProfile prof;
    prof.n = n;
    prof.w_max = w_max;
    prof.decoder = decoder;
    prof.exact = (mode == ProfileMode::exhaustive);
    prof.psi.assign(w_max + 1, 0.0);
    if (mode == ProfileMode::sampled) {
        prof.successes.assign(w_max + 1, 0);
        prof.trials.assign(w_max + 1, 0);
        prof.seed = seed;
        if (samples == 0) throw std::invalid_argument("undecodable_profile: sampled mode needs samples > 0");
    } else {
        uint64_t work = 0;
        for (uint32_t w = 1; w <= w_max; ++w) {
            if (w > rank_h) continue;  // analytic short-circuit, no enumeration
            work += binomial_u64(n, w);
            if (work > budget)
                throw std::runtime_error("undecodable_profile: subset budget exceeded (use --force to raise)");
        }
    }
    // Shared kernels: ML failure = dependent columns (rank over the row
    // basis); iterative failure = nonempty peeling residual.
    std::vector<uint64_t> basis_cols = column_words(row_basis(h));
    auto ml_fails = [&](uint64_t mask) {
        uint64_t scratch[64];
        int rk = 0;
        while (mask) {
            uint64_t cur = basis_cols[size_t(std::countr_zero(mask))];
            mask &= mask - 1;
            for (int b = 0; b < rk; ++b) cur = std::min(cur, cur ^ scratch[b]);
            if (!cur) return true;
            scratch[rk++] = cur;
        }
        return false;
    };
    for (uint32_t w = 0; w <= w_max; ++w) {
        if (w == 0) { prof.psi[0] = 0.0; continue; }
        Count total_big = binomial(n, w);
        if (w > rank_h) {
            prof.psi[w] = total_big.convert_to<double>();
            if (mode == ProfileMode::sampled) { prof.successes[w] = 0; prof.trials[w] = 0; }
            continue;
        }
        if (mode == ProfileMode::exhaustive) {
            uint64_t total = binomial_u64(n, w);
            uint64_t fails = parallel_range_sum<uint64_t>(total, nthreads, 1 << 16,
                [&, w](uint64_t lo, uint64_t hi) {
                    uint64_t c = 0;
                    if (decoder == DecoderKind::ml) {
                        for_each_subset_range(n, w, lo, hi, [&](uint64_t mask) { c += ml_fails(mask); });
                    } else {
                        PeelContext peeler(h);
                        for_each_subset_range(n, w, lo, hi,
                            [&](uint64_t mask) { c += peeler.residual_mask(mask) != 0; });
                    }
                    return c;
                });
            prof.psi[w] = double(fails);
        } else {
            uint64_t fails = parallel_range_sum<uint64_t>(samples, nthreads, 1 << 14,
                [&, w](uint64_t lo, uint64_t hi) {
                    uint64_t c = 0;
                    PeelContext peeler(h);
                    for (uint64_t k = lo; k < hi; ++k) {
                        Rng trial_rng(seed, (uint64_t(w) << 48) | k);
                        uint64_t mask = col_mask(sample_subset(trial_rng, n, w));
                        bool fail = decoder == DecoderKind::ml ? ml_fails(mask)
                                                               : peeler.residual_mask(mask) != 0;
                        c += fail;
                    }
                    return c;
                });
            prof.successes[w] = fails;
            prof.trials[w] = samples;
            prof.psi[w] = total_big.convert_to<double>() * (double(fails) / double(samples));
        }
    }
    return prof;
}

// FER(p) = sum_w psi[w] p^w (1-p)^{n-w}.  Weights beyond the profile's w_max
// contribute zero, so pass a full-width profile for a complete curve.
inline double fer(const PatternProfile& profile, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("fer: p outside [0,1]");
    long double total = 0.0L;
    for (uint32_t w = 0; w <= profile.w_max; ++w) {
        if (profile.psi[w] == 0.0) continue;
        long double term = (long double)profile.psi[w]
            * powl((long double)p, (long double)w)
            * powl(1.0L - (long double)p, (long double)(profile.n - w));
        total += term;
    }
    return double(total);
}

}  // namespace stopred
