// Stopping-set predicates, exhaustive spectrum enumeration and
// undecodable-pattern profiles, checked against direct brute-force oracles.
#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <map>
#include <vector>

#include "stopred/bigint.hpp"
#include "stopred/bitmat.hpp"
#include "stopred/code.hpp"
#include "stopred/decoder.hpp"
#include "stopred/rng.hpp"
#include "stopred/stopping.hpp"

using namespace stopred;

namespace {

BinaryMatrix random_matrix(Rng& rng, size_t rows, size_t cols) {
    BinaryMatrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) m.set(r, c, rng.next_bool());
    return m;
}

// Direct spectrum oracle: iterate all nonempty masks, apply the slow
// per-subset predicates, bucket by size.
std::vector<Count> spectrum_oracle(const BinaryMatrix& h, uint32_t ell,
                                   bool coverable_only, bool covered_excluded) {
    uint32_t n = uint32_t(h.cols());
    std::vector<Count> u(ell + 1, 0);
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        uint32_t w = uint32_t(std::popcount(mask));
        if (w == 0 || w > ell) continue;
        ColumnSet s = set_from_mask(mask);
        if (covered_excluded && !is_stopping_set(h, s)) continue;
        if (coverable_only && !is_coverable(h, s)) continue;
        u[w] += 1;
    }
    return u;
}

}  // namespace

TEST_CASE("predicates: hand-constructed cases") {
    // H = [1 1 0; 0 1 1]
    BinaryMatrix h(2, 3);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(1, 1, true);
    h.set(1, 2, true);

    // {0,1}: row0 weight 2, row1 weight 1 -> not stopping.
    REQUIRE_FALSE(is_stopping_set(h, {0, 1}));
    // {0,2}: each row weight 1 -> not stopping.
    REQUIRE_FALSE(is_stopping_set(h, {0, 2}));
    // {0,1,2}: row weights 2 and 2 -> stopping.
    REQUIRE(is_stopping_set(h, {0, 1, 2}));
    // Empty set is trivially stopping.
    REQUIRE(is_stopping_set(h, {}));
    // Single column with a weight-1 row on it is not stopping.
    REQUIRE_FALSE(is_stopping_set(h, {0}));

    // covers: intersection weight exactly one.
    BinaryVector row = h.row(0);  // {0,1}
    REQUIRE(covers(row, {0}));
    REQUIRE(covers(row, {0, 2}));
    REQUIRE_FALSE(covers(row, {0, 1}));
    REQUIRE_FALSE(covers(row, {2}));

    // coverable: columns independent. {0,1,2} has rank 2 < 3 -> not coverable.
    REQUIRE(is_coverable(h, {0, 1}));
    REQUIRE_FALSE(is_coverable(h, {0, 1, 2}));
    // More columns than rows can never be independent.
    REQUIRE_FALSE(is_coverable(h, {0, 1, 2}));

    REQUIRE_THROWS(is_stopping_set(h, {5}));
    REQUIRE_THROWS(covers(row, {9}));
}

TEST_CASE("spectrum_exhaustive matches brute force on random small matrices") {
    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        uint32_t n = 4 + uint32_t(rng.next_below(7));   // 4..10
        uint32_t rows = 2 + uint32_t(rng.next_below(6));  // 2..7
        BinaryMatrix h = random_matrix(rng, rows, n);
        uint32_t ell = n;
        for (bool coverable_only : {false, true})
            for (bool covered_excluded : {true, false}) {
                StoppingSpectrum got =
                    spectrum_exhaustive(h, ell, coverable_only, covered_excluded);
                std::vector<Count> want =
                    spectrum_oracle(h, ell, coverable_only, covered_excluded);
                REQUIRE(got.u == want);
                REQUIRE(got.exact);
                REQUIRE(got.n == n);
                REQUIRE(got.coverable_only == coverable_only);
            }
    }
}

TEST_CASE("spectrum_exhaustive: thread count does not change results") {
    Rng rng(55);
    BinaryMatrix h = random_matrix(rng, 6, 12);
    StoppingSpectrum one = spectrum_exhaustive(h, 12, true, true, 1);
    StoppingSpectrum four = spectrum_exhaustive(h, 12, true, true, 4);
    REQUIRE(one.u == four.u);
}

TEST_CASE("Golay coverable stopping spectrum: small sizes") {
    LinearCode code = golay_extended();
    StoppingSpectrum spec = spectrum_exhaustive(code.h, 6, true);
    REQUIRE(spec.u[1] == 0);
    REQUIRE(spec.u[2] == 0);
    REQUIRE(spec.u[3] == 0);
    REQUIRE(spec.u[4] == 110);
    REQUIRE(spec.u[5] == 1837);
    REQUIRE(spec.u[6] == 14795);
    // All stopping sets (not only coverable) of size <= 5 coincide here:
    // the first dependent columns appear at size 8 (minimum distance).
    StoppingSpectrum all = spectrum_exhaustive(code.h, 5, false);
    REQUIRE(all.u[4] == 110);
    REQUIRE(all.u[5] == 1837);
}

TEST_CASE("spectrum budget guard throws") {
    LinearCode code = golay_extended();
    REQUIRE_THROWS_AS(spectrum_exhaustive(code.h, 12, true, true, 1, /*budget=*/1000),
                      std::runtime_error);
}

TEST_CASE("undecodable_profile matches brute force for both decoders") {
    Rng rng(909);
    for (int trial = 0; trial < 6; ++trial) {
        uint32_t n = 5 + uint32_t(rng.next_below(5));   // 5..9
        uint32_t rows = 2 + uint32_t(rng.next_below(5));
        BinaryMatrix h = random_matrix(rng, rows, n);
        for (DecoderKind kind : {DecoderKind::iterative, DecoderKind::ml}) {
            PatternProfile prof =
                undecodable_profile(h, kind, n, ProfileMode::exhaustive);
            std::vector<uint64_t> want(n + 1, 0);
            for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
                ColumnSet e = set_from_mask(mask);
                DecodeOutcome out = kind == DecoderKind::iterative
                                        ? peel(h, e)
                                        : ml_decode(h, e);
                if (!out.success) ++want[std::popcount(mask)];
            }
            REQUIRE(prof.exact);
            REQUIRE(prof.w_max == n);
            for (uint32_t w = 0; w <= n; ++w)
                REQUIRE(prof.psi[w] == double(want[w]));
        }
    }
}

TEST_CASE("undecodable_profile short-circuits weights above the rank") {
    // Rank-3 matrix over 6 columns: every 4-subset has dependent columns,
    // so all C(6,4)=15 patterns of weight 4 are ML-undecodable.
    BinaryMatrix h(3, 6);
    for (size_t r = 0; r < 3; ++r) h.set(r, r, true);
    h.set(0, 3, true);
    h.set(1, 4, true);
    h.set(2, 5, true);
    REQUIRE(rank(h) == 3);
    PatternProfile prof = undecodable_profile(h, DecoderKind::ml, 6,
                                              ProfileMode::exhaustive);
    REQUIRE(prof.psi[4] == 15.0);
    REQUIRE(prof.psi[5] == 6.0);
    REQUIRE(prof.psi[6] == 1.0);
}

TEST_CASE("sampled profile: determinism and thread invariance") {
    LinearCode code = golay_extended();
    PatternProfile a = undecodable_profile(code.h, DecoderKind::iterative, 8,
                                           ProfileMode::sampled, 2000, 17, 1);
    PatternProfile b = undecodable_profile(code.h, DecoderKind::iterative, 8,
                                           ProfileMode::sampled, 2000, 17, 4);
    PatternProfile c = undecodable_profile(code.h, DecoderKind::iterative, 8,
                                           ProfileMode::sampled, 2000, 18, 1);
    REQUIRE_FALSE(a.exact);
    REQUIRE(a.successes == b.successes);
    REQUIRE(a.trials == b.trials);
    REQUIRE(a.psi == b.psi);
    REQUIRE_FALSE(a.successes == c.successes);

    // Sampled estimates should be in the right ballpark of the exact counts.
    PatternProfile exact = undecodable_profile(code.h, DecoderKind::iterative, 8,
                                               ProfileMode::exhaustive);
    // Weight 4: exact 110 of C(24,4)=10626.  With 2000 samples expect ~20 hits;
    // accept a generous band.
    REQUIRE(a.psi[4] > 110.0 * 0.3);
    REQUIRE(a.psi[4] < 110.0 * 3.0);
    REQUIRE(exact.psi[4] == 110.0);
}

TEST_CASE("fer: closed form on a tiny profile") {
    PatternProfile prof;
    prof.n = 3;
    prof.w_max = 3;
    prof.psi = {0.0, 1.0, 2.0, 1.0};
    double p = 0.25;
    double want = 1.0 * p * (1 - p) * (1 - p) + 2.0 * p * p * (1 - p) + 1.0 * p * p * p;
    REQUIRE(fer(prof, p) == Catch::Approx(want).epsilon(1e-12));
    REQUIRE(fer(prof, 0.0) == 0.0);
    REQUIRE(fer(prof, 1.0) == 1.0);  // psi[3] = 1 pattern = all-erased
    REQUIRE_THROWS(fer(prof, 1.5));
}

TEST_CASE("orthogonal-array property of the row space") {
    // For any r independent-column subset E of a rank-r matrix, the row space
    // restricted to E takes each |E|-tuple exactly 2^(rank - |E|) times.
    Rng rng(6001);
    for (int trial = 0; trial < 5; ++trial) {
        uint32_t n = 10 + uint32_t(rng.next_below(5));
        uint32_t rows = 6 + uint32_t(rng.next_below(3));  // rank <= 8
        BinaryMatrix h = random_matrix(rng, rows, n);
        size_t r = rank(h);
        for (int pick = 0; pick < 8; ++pick) {
            uint32_t k = 1 + uint32_t(rng.next_below(uint32_t(std::min<size_t>(r, 4))));
            ColumnSet e = sample_subset(rng, n, k);
            if (!is_coverable(h, e)) continue;  // need independent columns
            std::map<uint64_t, uint64_t> tuple_count;
            row_space_iter(h, [&](const BinaryVector& v) {
                uint64_t t = 0;
                for (size_t i = 0; i < e.size(); ++i)
                    if (v.get(e[i])) t |= uint64_t(1) << i;
                ++tuple_count[t];
            });
            REQUIRE(tuple_count.size() == (uint64_t(1) << k));
            for (auto& [t, c] : tuple_count)
                REQUIRE(c == (uint64_t(1) << (r - k)));
        }
    }
}
