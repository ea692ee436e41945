#pragma once
// Monte-Carlo estimation of coverable-stopping-set spectra with one-sided
// upper confidence counts, for single matrices and for random ensembles.

#include "stopred/bigint.hpp"
#include "stopred/bounds.hpp"
#include "stopred/code.hpp"
#include "stopred/parallel.hpp"
#include "stopred/rng.hpp"
#include "stopred/stopping.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stopred {

// Inverse of the standard normal CDF.  Rational initial estimate refined by
// two Newton steps against erfc, giving better than 15 significant digits
// over (1e-300, 1 - 1e-16).
inline long double inverse_normal_cdf(long double q) {
    if (!(q > 0.0L && q < 1.0L)) throw std::domain_error("inverse_normal_cdf: q must be in (0,1)");
    // Initial estimate (rational minimax in three regimes).
    static const long double a[6] = {-3.969683028665376e+01L, 2.209460984245205e+02L,
                                     -2.759285104469687e+02L, 1.383577518672690e+02L,
                                     -3.066479806614716e+01L, 2.506628277459239e+00L};
    static const long double b[5] = {-5.447609879822406e+01L, 1.615858368580409e+02L,
                                     -1.556989798598866e+02L, 6.680131188771972e+01L,
                                     -1.328068155288572e+01L};
    static const long double c[6] = {-7.784894002430293e-03L, -3.223964580411365e-01L,
                                     -2.400758277161838e+00L, -2.549732539343734e+00L,
                                     4.374664141464968e+00L,  2.938163982698783e+00L};
    static const long double d[4] = {7.784695709041462e-03L, 3.224671290700398e-01L,
                                     2.445134137142996e+00L, 3.754408661907416e+00L};
    const long double p_low = 0.02425L, p_high = 1.0L - p_low;
    long double x;
    if (q < p_low) {
        long double r = std::sqrt(-2.0L * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0L);
    } else if (q <= p_high) {
        long double r = q - 0.5L, s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0L);
    } else {
        long double r = std::sqrt(-2.0L * std::log(1.0L - q));
        x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0L);
    }
    // Newton refinement: Phi(x) = erfc(-x/sqrt 2)/2, phi(x) = exp(-x^2/2)/sqrt(2 pi).
    const long double inv_sqrt2 = 0.7071067811865475244008443621048490393L;
    const long double sqrt_2pi = 2.5066282746310005024157652848110452530L;
    for (int it = 0; it < 2; ++it) {
        long double cdf = 0.5L * std::erfc(-x * inv_sqrt2);
        long double pdf = std::exp(-0.5L * x * x) / sqrt_2pi;
        if (pdf <= 0.0L) break;
        x -= (cdf - q) / pdf;
    }
    return x;
}

// One-sided upper confidence count: given x_bar successes-per-trial over
// n_samples draws from a population of `total` items, return an integer
// count that exceeds the true count with probability at least 1 - epsilon
// (second-order normal approximation with a shifted center and variance
// correction; the floor is taken in 64.64 fixed point so results are
// bit-reproducible across platforms).
inline Count upper_confidence_count(long double x_bar, uint64_t n_samples, const Count& total,
                                    long double epsilon) {
    if (!(epsilon > 0.0L && epsilon < 0.5L))
        throw std::domain_error("upper_confidence_count: epsilon must be in (0, 0.5)");
    if (n_samples == 0) throw std::invalid_argument("upper_confidence_count: n_samples must be >= 1");
    if (!(x_bar >= 0.0L && x_bar <= 1.0L))
        throw std::domain_error("upper_confidence_count: x_bar must be in [0,1]");
    if (total <= 0) return 0;
    long double kappa = inverse_normal_cdf(1.0L - epsilon);
    long double eta = kappa * kappa / 3.0L + 1.0L / 6.0L;
    long double nn = (long double)n_samples;
    long double x_tilde = (nn * x_bar + eta) / (nn + 2.0L * eta);
    long double gamma1 = -(13.0L * kappa * kappa) / 18.0L - 17.0L / 18.0L;
    long double gamma2 = kappa * kappa / 18.0L + 7.0L / 36.0L;
    long double v_hat = x_bar * (1.0L - x_bar);
    long double rad = v_hat / nn + (gamma1 * v_hat + gamma2) / (nn * nn);
    if (rad < 0.0L) rad = 0.0L;
    long double frac = x_tilde + kappa * std::sqrt(rad);
    if (frac <= 0.0L) return 0;
    if (frac >= 1.0L) return total;
    // floor(total * frac) computed as (total * floor(frac * 2^64)) >> 64.
    long double scaled = std::floor(std::ldexp(frac, 64));
    Count fixed = Count(scaled);
    Count u_hat = (total * fixed) >> 64;
    if (u_hat > total) u_hat = total;
    return u_hat;
}

struct EstimationResult {
    uint32_t n = 0;
    uint32_t ell = 0;
    uint64_t samples = 0;
    uint64_t seed = 0;
    std::vector<uint64_t> hits;        // size ell+1, [0] unused
    std::vector<long double> x_bar;    // empirical hit fractions
    std::vector<long double> epsilon;  // per-size one-sided failure probability
    std::vector<Count> total;          // C(n, i)
    std::vector<Count> u_hat;          // upper confidence counts
    long double confidence = 0;        // prod_i (1 - epsilon_i)
};

namespace detail {

// Expand a per-size epsilon spec: either one value for every size, or one
// per size (index 1..ell).
inline std::vector<long double> expand_epsilon(const std::vector<long double>& eps, uint32_t ell) {
    std::vector<long double> out(ell + 1, 0.0L);
    if (eps.size() == 1) {
        for (uint32_t i = 1; i <= ell; ++i) out[i] = eps[0];
    } else if (eps.size() == ell) {
        for (uint32_t i = 1; i <= ell; ++i) out[i] = eps[i - 1];
    } else if (eps.size() == ell + 1) {
        for (uint32_t i = 1; i <= ell; ++i) out[i] = eps[i];
    } else {
        throw std::invalid_argument("epsilon list must have 1 or ell entries");
    }
    for (uint32_t i = 1; i <= ell; ++i)
        if (!(out[i] > 0.0L && out[i] < 0.5L))
            throw std::domain_error("epsilon values must be in (0, 0.5)");
    return out;
}

inline EstimationResult finish_estimate(uint32_t n, uint32_t ell, uint64_t samples, uint64_t seed,
                                        std::vector<uint64_t> hits,
                                        std::vector<long double> eps) {
    EstimationResult r;
    r.n = n;
    r.ell = ell;
    r.samples = samples;
    r.seed = seed;
    r.hits = std::move(hits);
    r.epsilon = std::move(eps);
    r.x_bar.assign(ell + 1, 0.0L);
    r.total.assign(ell + 1, 0);
    r.u_hat.assign(ell + 1, 0);
    r.confidence = 1.0L;
    for (uint32_t i = 1; i <= ell; ++i) {
        r.x_bar[i] = (long double)r.hits[i] / (long double)samples;
        r.total[i] = binomial(n, i);
        r.u_hat[i] = upper_confidence_count(r.x_bar[i], samples, r.total[i], r.epsilon[i]);
        r.confidence *= 1.0L - r.epsilon[i];
    }
    return r;
}

}  // namespace detail

// Converts a joint confidence target into the per-size epsilon that attains
// it when applied at every size: epsilon_i = 1 - confidence^(1/ell).
inline long double epsilon_for_confidence(long double confidence, uint32_t ell) {
    if (!(confidence > 0.5L && confidence < 1.0L))
        throw std::domain_error("epsilon_for_confidence: confidence must be in (0.5, 1)");
    if (ell < 1) throw std::invalid_argument("epsilon_for_confidence: ell must be >= 1");
    return 1.0L - std::exp(std::log(confidence) / (long double)ell);
}

// Monte-Carlo estimate of the coverable stopping-set spectrum of one
// matrix.  For each size i, `samples` uniformly random size-i subsets are
// tested; trial k of size i uses the dedicated stream (i << 40) | k of the
// counter RNG, so results are independent of threading and chunking.
inline EstimationResult estimate_spectrum(const BinaryMatrix& h, uint32_t ell, uint64_t samples,
                                          uint64_t seed, const std::vector<long double>& epsilon,
                                          unsigned threads = 0) {
    const uint32_t n = h.cols();
    if (n == 0 || n > 64 || h.rows() > 64)
        throw std::invalid_argument("estimate_spectrum: matrix must fit in 64x64");
    if (ell < 1 || ell > n) throw std::invalid_argument("estimate_spectrum: need 1 <= ell <= n");
    if (samples == 0) throw std::invalid_argument("estimate_spectrum: samples must be >= 1");
    auto eps = detail::expand_epsilon(epsilon, ell);
    auto cw = detail::ColWords(h);
    unsigned nthreads = resolve_threads(threads);
    std::vector<uint64_t> hits(ell + 1, 0);
    for (uint32_t i = 1; i <= ell; ++i) {
        hits[i] = parallel_range_sum<uint64_t>(samples, nthreads, 1024, [&](uint64_t lo, uint64_t hi) {
            uint64_t local = 0;
            for (uint64_t k = lo; k < hi; ++k) {
                Rng rng(seed, (uint64_t(i) << 40) | k);
                uint64_t mask = col_mask(sample_subset(rng, n, i));
                if (detail::mask_is_stopping(cw, mask) && detail::mask_is_coverable(cw, mask))
                    ++local;
            }
            return local;
        });
    }
    return detail::finish_estimate(n, ell, samples, seed, std::move(hits), std::move(eps));
}

enum class EnsembleKind { sre, gallager };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::sre;
    uint32_t n = 0;
    uint32_t m = 0;  // rows (sre)
    uint32_t j = 0;  // column degree (gallager)
    uint32_t k = 0;  // row degree (gallager)
};

inline uint32_t ensemble_rows(const EnsembleSpec& spec) {
    if (spec.kind == EnsembleKind::sre) return spec.m;
    if (spec.k == 0 || (uint64_t(spec.n) * spec.j) % spec.k != 0)
        throw std::invalid_argument("ensemble: gallager needs k | n*j");
    return uint32_t(uint64_t(spec.n) * spec.j / spec.k);
}

// Ensemble variant: every trial draws a fresh matrix from the ensemble and
// a fresh subset, estimating the mean coverable stopping-set spectrum.
inline EstimationResult estimate_ensemble_spectrum(const EnsembleSpec& spec, uint32_t ell,
                                                   uint64_t samples, uint64_t seed,
                                                   const std::vector<long double>& epsilon,
                                                   unsigned threads = 0) {
    const uint32_t n = spec.n;
    const uint32_t rows = ensemble_rows(spec);
    if (n == 0 || n > 64 || rows == 0 || rows > 64)
        throw std::invalid_argument("estimate_ensemble_spectrum: matrices must fit in 64x64");
    if (ell < 1 || ell > n) throw std::invalid_argument("estimate_ensemble_spectrum: need 1 <= ell <= n");
    if (samples == 0) throw std::invalid_argument("estimate_ensemble_spectrum: samples must be >= 1");
    auto eps = detail::expand_epsilon(epsilon, ell);
    unsigned nthreads = resolve_threads(threads);
    std::vector<uint64_t> hits(ell + 1, 0);
    for (uint32_t i = 1; i <= ell; ++i) {
        hits[i] = parallel_range_sum<uint64_t>(samples, nthreads, 256, [&](uint64_t lo, uint64_t hi) {
            uint64_t local = 0;
            for (uint64_t k = lo; k < hi; ++k) {
                Rng rng(seed, (uint64_t(i) << 40) | k);
                uint64_t matrix_seed = rng.next_u64();
                LinearCode c = spec.kind == EnsembleKind::sre
                                   ? sample_sre(n, rows, matrix_seed)
                                   : sample_gallager(n, spec.j, spec.k, matrix_seed);
                uint64_t mask = col_mask(sample_subset(rng, n, i));
                auto cw = detail::ColWords(c.h);
                if (detail::mask_is_stopping(cw, mask) && detail::mask_is_coverable(cw, mask))
                    ++local;
            }
            return local;
        });
    }
    return detail::finish_estimate(n, ell, samples, seed, std::move(hits), std::move(eps));
}

}  // namespace stopred
