#pragma once
// Arbitrary-precision counting helpers: exact binomials, powers of two, and
// conversion of huge integer ratios to long double without overflow.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <cmath>

namespace stopred {

using Count = boost::multiprecision::cpp_int;  // exact, signed, unbounded
using Rational = boost::multiprecision::cpp_rational;

// C(n, k) exactly; 0 outside the triangle.  Multiplicative form: every
// intermediate division is exact.
inline Count binomial(uint64_t n, uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Count res = 1;
    for (uint64_t i = 1; i <= k; ++i) {
        res *= Count(n - k + i);
        res /= Count(i);
    }
    return res;
}

inline Count pow2(uint64_t e) { return Count(1) << e; }

// uint64 binomial for the n <= 64 hot paths (C(64,32) < 2^63, so the whole
// n = 64 row fits; larger n must use the big-integer version).
inline uint64_t binomial_u64(uint32_t n, uint32_t k) {
    if (n > 64) throw std::invalid_argument("binomial_u64: n > 64 may overflow");
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    unsigned __int128 res = 1;
    for (uint32_t i = 1; i <= k; ++i) {
        res = res * (n - k + i) / i;  // exact at each step (prefix binomial)
    }
    return uint64_t(res);
}

// num / 2^den_exp as a long double, correct to the full 64-bit mantissa even
// when num is thousands of bits wide.  Used to turn exact rational counts
// into the reals consumed by the bound objectives.
inline long double ratio_pow2_ld(const Count& num, uint64_t den_exp) {
    if (num == 0) return 0.0L;
    if (num < 0) return -ratio_pow2_ld(-num, den_exp);
    long long bits = (long long)boost::multiprecision::msb(num) + 1;
    long long sh = bits - 64;  // keep the top 64 bits exactly
    Count mant = sh > 0 ? Count(num >> sh) : Count(num << -sh);
    long double ld = mant.convert_to<long double>();
    return std::ldexp(ld, int(sh - (long long)den_exp));
}

// num / den as long double via base-2 scaling of both sides.
inline long double ratio_ld(const Count& num, const Count& den) {
    if (den <= 0) throw std::invalid_argument("ratio_ld: nonpositive denominator");
    if (num == 0) return 0.0L;
    if (num < 0) return -ratio_ld(-num, den);
    long long nb = (long long)boost::multiprecision::msb(num);
    long long db = (long long)boost::multiprecision::msb(den);
    // Scale so both mantissas carry ~96 bits, then divide in hardware.
    long long shn = nb - 95, shd = db - 95;
    Count nm = shn > 0 ? Count(num >> shn) : Count(num << -shn);
    Count dm = shd > 0 ? Count(den >> shd) : Count(den << -shd);
    long double q = nm.convert_to<long double>() / dm.convert_to<long double>();
    return std::ldexp(q, int(shn - shd));
}

inline std::string to_string(const Count& c) { return c.str(); }

}  // namespace stopred
