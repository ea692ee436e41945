// Greedy covering construction of redundant parity-check matrices:
// coverable-set listing, coset-walk scoring, full construction on the
// extended Golay code, and the coverage audit.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "stopred/code.hpp"
#include "stopred/greedy.hpp"
#include "stopred/rng.hpp"
#include "stopred/stopping.hpp"

using namespace stopred;

namespace {

BinaryMatrix random_code_matrix(Rng& rng, size_t rows, size_t cols) {
    BinaryMatrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) m.set(r, c, rng.next_bool());
    return m;
}

uint64_t codeword_of(const BinaryMatrix& basis, uint64_t x) {
    uint64_t w = 0;
    for (uint32_t b = 0; b < basis.rows(); ++b)
        if ((x >> b) & 1) w ^= basis.row_word(b);
    return w;
}

}  // namespace

TEST_CASE("coverable_masks matches a brute-force filter") {
    Rng rng(88);
    for (int trial = 0; trial < 10; ++trial) {
        uint32_t n = 5 + uint32_t(rng.next_below(6));  // 5..10
        uint32_t rows = 2 + uint32_t(rng.next_below(5));
        BinaryMatrix h = random_code_matrix(rng, rows, n);
        uint32_t ell = 1 + uint32_t(rng.next_below(n));
        std::vector<uint32_t> got = coverable_masks(h, ell);
        std::vector<uint32_t> want;
        for (uint32_t i = 1; i <= ell; ++i)
            for_each_subset(n, i, [&](uint64_t mask) {
                if (is_coverable(h, set_from_mask(mask)))
                    want.push_back(uint32_t(mask));
            });
        REQUIRE(got == want);

        std::vector<ColumnSet> lst = coverable_list(h, ell);
        REQUIRE(lst.size() == got.size());
        for (size_t i = 0; i < lst.size(); ++i)
            REQUIRE(col_mask(lst[i]) == got[i]);
    }
    BinaryMatrix wide(2, 33);
    REQUIRE_THROWS(coverable_masks(wide, 2));
    BinaryMatrix ok(2, 8);
    REQUIRE_THROWS(coverable_masks(ok, 0));
    REQUIRE_THROWS(coverable_masks(ok, 4, /*budget=*/3));
}

TEST_CASE("coset scorer credits exactly the covering codewords") {
    Rng rng(515);
    for (int trial = 0; trial < 8; ++trial) {
        uint32_t n = 8 + uint32_t(rng.next_below(6));
        uint32_t rows = 4 + uint32_t(rng.next_below(4));  // rank <= 7
        BinaryMatrix h = random_code_matrix(rng, rows, n);
        BinaryMatrix basis = row_basis(h);
        uint32_t r = basis.rows();
        if (r == 0) continue;
        detail::CosetScorer scorer(basis);

        std::vector<uint32_t> sets = coverable_masks(h, std::min(n, 4u));
        if (sets.empty()) continue;
        for (int pick = 0; pick < 5 && pick < int(sets.size()); ++pick) {
            uint32_t s_mask = sets[size_t(rng.next_below(sets.size()))];
            std::vector<int64_t> score(uint64_t(1) << r, 0);
            scorer.apply(score, s_mask, +1);
            int64_t setsize = std::popcount(s_mask);
            for (uint64_t x = 0; x < score.size(); ++x) {
                uint64_t cw = codeword_of(basis, x);
                bool covers_it = std::popcount(cw & s_mask) == 1;
                REQUIRE(score[x] == (covers_it ? setsize : 0));
            }
            // Retraction restores zero.
            scorer.apply(score, s_mask, -1);
            for (uint64_t x = 0; x < score.size(); ++x) REQUIRE(score[x] == 0);
        }
    }
}

TEST_CASE("coset scorer rejects non-coverable subsets") {
    // Two equal columns are dependent: {0,1} is not coverable.
    BinaryMatrix h(2, 4);
    h.set(0, 0, true);
    h.set(0, 1, true);
    h.set(1, 2, true);
    BinaryMatrix basis = row_basis(h);
    detail::CosetScorer scorer(basis);
    std::vector<int64_t> score(uint64_t(1) << basis.rows(), 0);
    REQUIRE_THROWS_AS(scorer.apply(score, 0b0011, +1), std::logic_error);
}

TEST_CASE("greedy_extend on the Golay code at ell = 4") {
    LinearCode code = golay_extended();
    GreedyResult res = greedy_extend(code, 4, /*seed=*/1);
    REQUIRE(res.h.rows() == 12);
    REQUIRE(res.greedy_rows + res.completion_rows == res.h.rows());
    REQUIRE(rank(res.h) == 12);
    REQUIRE(res.rows_per_restart.size() == res.restarts);
    REQUIRE(res.h.cols() == 24);

    // Every row of the construction is a dual codeword: appending it to the
    // original parity-check matrix must not raise the rank.
    for (size_t r = 0; r < res.h.rows(); ++r) {
        BinaryMatrix ext = code.h;
        ext.append_row(res.h.row(r));
        REQUIRE(rank(ext) == 12);
    }

    // The covering audit certifies no coverable set of size <= 4 remains.
    REQUIRE(audit_uncovered(res.h, code.h, 4) == 0);
    // No stopping sets of size <= 4 remain either (coverable or not: sizes
    // below the minimum distance have independent columns anyway).
    std::vector<uint32_t> sets = coverable_masks(code.h, 4);
    for (uint32_t s : sets)
        REQUIRE_FALSE(is_stopping_set(res.h, set_from_mask(s)));

    // Determinism.
    GreedyResult again = greedy_extend(code, 4, 1);
    REQUIRE(again.h == res.h);
    REQUIRE(again.rows_per_restart == res.rows_per_restart);
}

TEST_CASE("greedy_extend covers a random low-rank code and completes the rank") {
    Rng rng(2122);
    for (int trial = 0; trial < 6; ++trial) {
        uint32_t n = 8 + uint32_t(rng.next_below(8));  // 8..15
        uint32_t rows = 3 + uint32_t(rng.next_below(4));
        BinaryMatrix h = random_code_matrix(rng, rows, n);
        if (rank(h) == 0) continue;
        LinearCode code{h, "rnd"};
        uint32_t r = uint32_t(rank(h));
        uint32_t ell = 1 + uint32_t(rng.next_below(std::min(r, 3u)));
        GreedyResult res = greedy_extend(code, ell, 5, 3);
        REQUIRE(rank(res.h) == r);
        REQUIRE(audit_uncovered(res.h, code.h, ell) == 0);
        REQUIRE(res.greedy_rows + res.completion_rows == res.h.rows());
    }
}

TEST_CASE("audit_uncovered equals a brute-force count") {
    Rng rng(31);
    BinaryMatrix h = random_code_matrix(rng, 5, 12);
    // Use the original matrix itself as the 'extension': sets covered by no
    // original row stay uncovered.
    for (uint32_t ell = 1; ell <= 3; ++ell) {
        uint64_t want = 0;
        for (uint32_t s : coverable_masks(h, ell)) {
            bool covered = false;
            for (size_t r = 0; r < h.rows() && !covered; ++r)
                covered = covers(h.row(r), set_from_mask(s));
            if (!covered) ++want;
        }
        REQUIRE(audit_uncovered(h, h, ell) == want);
    }
    BinaryMatrix mismatched(2, 10);
    REQUIRE_THROWS(audit_uncovered(mismatched, h, 2));
}

TEST_CASE("greedy_extend guards") {
    LinearCode code = golay_extended();
    REQUIRE_THROWS(greedy_extend(code, 13, 1));  // ell > rank
    REQUIRE_THROWS(greedy_extend(code, 4, 1, 0));  // no restarts
    BinaryMatrix zero(3, 8);
    REQUIRE_THROWS(greedy_extend(LinearCode{zero, "zero"}, 2, 1));
}
