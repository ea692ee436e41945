// Bit-packed GF(2) linear algebra, subset iteration, RNG and big-integer
// utilities: unit tests against brute-force oracles and pinned identities.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "stopred/bigint.hpp"
#include "stopred/bitmat.hpp"
#include "stopred/code.hpp"
#include "stopred/rng.hpp"
#include "stopred/subsets.hpp"

using namespace stopred;

namespace {

BinaryMatrix random_matrix(Rng& rng, size_t rows, size_t cols) {
    BinaryMatrix m(rows, cols);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) m.set(r, c, rng.next_bool());
    return m;
}

// Dense-int rank oracle, independent of the packed implementation.
size_t rank_oracle(const BinaryMatrix& m) {
    std::vector<std::vector<int>> a(m.rows(), std::vector<int>(m.cols(), 0));
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c) a[r][c] = m.get(r, c) ? 1 : 0;
    size_t rk = 0;
    for (size_t c = 0; c < m.cols() && rk < m.rows(); ++c) {
        size_t piv = rk;
        while (piv < m.rows() && a[piv][c] == 0) ++piv;
        if (piv == m.rows()) continue;
        std::swap(a[piv], a[rk]);
        for (size_t r = 0; r < m.rows(); ++r)
            if (r != rk && a[r][c])
                for (size_t j = 0; j < m.cols(); ++j) a[r][j] ^= a[rk][j];
        ++rk;
    }
    return rk;
}

uint64_t row_mask(const BinaryMatrix& m, size_t r) { return m.row_word(r); }

}  // namespace

TEST_CASE("BinaryVector get/set/weight/xor") {
    BinaryVector v(100);
    REQUIRE(v.weight() == 0);
    v.set(0, true);
    v.set(63, true);
    v.set(64, true);
    v.set(99, true);
    REQUIRE(v.weight() == 4);
    REQUIRE(v.get(63));
    REQUIRE(v.get(64));
    REQUIRE_FALSE(v.get(62));
    v.set(63, false);
    REQUIRE(v.weight() == 3);

    BinaryVector w(100);
    w.set(0, true);
    w.set(50, true);
    BinaryVector x = v;
    x.xor_with(w);
    REQUIRE_FALSE(x.get(0));
    REQUIRE(x.get(50));
    REQUIRE(x.get(64));
    REQUIRE(x.weight() == 3);
    x.xor_with(w);
    REQUIRE(x == v);
}

TEST_CASE("BinaryMatrix basic ops across word boundaries") {
    BinaryMatrix m(3, 70);
    m.set(0, 0, true);
    m.set(0, 69, true);
    m.set(1, 69, true);
    m.set(2, 35, true);
    REQUIRE(m.rows() == 3);
    REQUIRE(m.cols() == 70);
    REQUIRE(m.words_per_row() == 2);
    REQUIRE(m.row_weight(0) == 2);
    REQUIRE(m.get(0, 69));

    m.xor_rows(0, 1);  // row0 ^= row1 -> clears bit 69
    REQUIRE(m.row_weight(0) == 1);
    REQUIRE(m.get(0, 0));
    REQUIRE_FALSE(m.get(0, 69));

    m.swap_rows(0, 2);
    REQUIRE(m.get(0, 35));
    REQUIRE(m.get(2, 0));

    BinaryVector r1 = m.row(1);
    REQUIRE(r1.len == 70);
    REQUIRE(r1.weight() == 1);
    REQUIRE(r1.get(69));

    BinaryMatrix m2(0, 70);
    for (size_t r = 0; r < m.rows(); ++r) m2.append_row(m.row(r));
    REQUIRE(m2 == m);

    BinaryVector wrong(69);
    REQUIRE_THROWS_AS(m2.append_row(wrong), std::invalid_argument);
}

TEST_CASE("col_mask / set_from_mask round-trip") {
    ColumnSet s = {0, 3, 5, 63};
    uint64_t mask = col_mask(s);
    REQUIRE(mask == ((1ULL << 0) | (1ULL << 3) | (1ULL << 5) | (1ULL << 63)));
    REQUIRE(set_from_mask(mask) == s);
    REQUIRE(set_from_mask(0).empty());
}

TEST_CASE("rank matches dense oracle on random matrices") {
    Rng rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        size_t rows = 1 + rng.next_below(12);
        size_t cols = 1 + rng.next_below(90);
        BinaryMatrix m = random_matrix(rng, rows, cols);
        REQUIRE(rank(m) == rank_oracle(m));
    }
    // Identity embedded in a wide matrix has full rank; duplicating rows and
    // XOR-ing rows together never changes the row space.
    BinaryMatrix id(8, 80);
    for (size_t i = 0; i < 8; ++i) id.set(i, 10 * i + 3, true);
    REQUIRE(rank(id) == 8);
    BinaryMatrix stacked = id;
    for (size_t i = 0; i < 8; ++i) stacked.append_row(id.row(i));
    stacked.xor_rows(0, 9);
    stacked.xor_rows(12, 3);
    REQUIRE(rank(stacked) == 8);
}

TEST_CASE("row_basis spans the same space") {
    Rng rng(777);
    for (int trial = 0; trial < 20; ++trial) {
        size_t rows = 1 + rng.next_below(10);
        size_t cols = 2 + rng.next_below(30);
        BinaryMatrix m = random_matrix(rng, rows, cols);
        BinaryMatrix b = row_basis(m);
        REQUIRE(b.rows() == rank(m));
        REQUIRE(rank(b) == b.rows());
        // Every original row must lie in the span of the basis: appending it
        // must not raise the rank.
        for (size_t r = 0; r < m.rows(); ++r) {
            BinaryMatrix ext = b;
            ext.append_row(m.row(r));
            REQUIRE(rank(ext) == b.rows());
        }
    }
}

TEST_CASE("column_submatrix extracts in order") {
    BinaryMatrix m(2, 6);
    // row0 = 101010, row1 = 011001
    for (size_t c : {0u, 2u, 4u}) m.set(0, c, true);
    for (size_t c : {1u, 2u, 5u}) m.set(1, c, true);
    BinaryMatrix s = column_submatrix(m, {1, 2, 5});
    REQUIRE(s.rows() == 2);
    REQUIRE(s.cols() == 3);
    REQUIRE_FALSE(s.get(0, 0));
    REQUIRE(s.get(0, 1));
    REQUIRE_FALSE(s.get(0, 2));
    REQUIRE(s.get(1, 0));
    REQUIRE(s.get(1, 1));
    REQUIRE(s.get(1, 2));
}

TEST_CASE("column_words / word_rank agree with rank of column submatrix") {
    Rng rng(424242);
    for (int trial = 0; trial < 20; ++trial) {
        size_t rows = 1 + rng.next_below(20);
        size_t cols = 1 + rng.next_below(40);
        BinaryMatrix m = random_matrix(rng, rows, cols);
        std::vector<uint64_t> cw = column_words(m);
        REQUIRE(cw.size() == cols);
        for (size_t c = 0; c < cols; ++c)
            for (size_t r = 0; r < rows; ++r)
                REQUIRE(bool((cw[c] >> r) & 1) == m.get(r, c));
        // word_rank over a random column subset == rank of the submatrix.
        size_t k = 1 + rng.next_below(cols);
        ColumnSet s = sample_subset(rng, uint32_t(cols), uint32_t(k));
        std::vector<uint64_t> words, scratch(k);
        for (uint32_t c : s) words.push_back(cw[c]);
        REQUIRE(size_t(word_rank(words.data(), k, scratch.data())) ==
                rank(column_submatrix(m, s)));
    }
}

TEST_CASE("solve_erasure_system: unique iff columns independent, fills codeword") {
    LinearCode code = golay_extended();
    const BinaryMatrix& h = code.h;
    // Build a small set of codewords of the (24,12) code via row space of a
    // generator: the code is self-dual, so H's row space is the code itself.
    std::vector<BinaryVector> words;
    row_space_iter(h, [&](const BinaryVector& v) {
        if (words.size() < 64) words.push_back(v);
    });
    Rng rng(99);
    for (const BinaryVector& cw : words) {
        size_t k = 1 + rng.next_below(12);
        ColumnSet e = sample_subset(rng, 24, uint32_t(k));
        BinaryVector received = cw;
        for (uint32_t j : e) received.set(j, false);  // erased positions zeroed
        ErasureSolution sol = solve_erasure_system(h, e, received);
        bool indep = rank(column_submatrix(h, e)) == e.size();
        if (indep) {
            REQUIRE(sol.status == SolveStatus::unique);
            REQUIRE(sol.filled == cw);
        } else {
            REQUIRE(sol.status == SolveStatus::multiple);
        }
    }
    // Non-codeword with no erasures -> inconsistent.
    BinaryVector bad(24);
    bad.set(0, true);  // weight 1 < minimum distance 8, not a codeword
    ErasureSolution sol = solve_erasure_system(h, {}, bad);
    REQUIRE(sol.status == SolveStatus::inconsistent);
    // A true codeword with no erasures is consistent and unique.
    ErasureSolution ok = solve_erasure_system(h, {}, words[1]);
    REQUIRE(ok.status == SolveStatus::unique);
    REQUIRE(ok.filled == words[1]);
}

TEST_CASE("row_space_iter on the Golay matrix gives the full weight enumerator") {
    LinearCode code = golay_extended();
    std::map<size_t, uint64_t> by_weight;
    std::set<std::vector<uint64_t>> distinct;
    row_space_iter(code.h, [&](const BinaryVector& v) {
        ++by_weight[v.weight()];
        distinct.insert(v.bits);
    });
    REQUIRE(distinct.size() == 4096);
    REQUIRE(by_weight[0] == 1);
    REQUIRE(by_weight[8] == 759);
    REQUIRE(by_weight[12] == 2576);
    REQUIRE(by_weight[16] == 759);
    REQUIRE(by_weight[24] == 1);
    uint64_t total = 0;
    for (auto& [w, c] : by_weight) total += c;
    REQUIRE(total == 4096);
    // Mask variant agrees.
    std::set<uint64_t> masks;
    row_space_masks(code.h, [&](uint64_t m) { masks.insert(m); });
    REQUIRE(masks.size() == 4096);
    for (const auto& bits : distinct) REQUIRE(masks.count(bits[0]) == 1);
}

TEST_CASE("row_space_iter enforces the rank limit") {
    BinaryMatrix big(8, 16);
    Rng rng(5);
    do {
        big = random_matrix(rng, 8, 16);
    } while (rank(big) < 8);
    uint64_t count = 0;
    row_space_iter(big, [&](const BinaryVector&) { ++count; }, 8);
    REQUIRE(count == 256);
    REQUIRE_THROWS_AS(row_space_iter(big, [](const BinaryVector&) {}, 7),
                      std::runtime_error);
}

TEST_CASE("subset iteration: colex rank/unrank and Gosper stepping") {
    const uint32_t n = 10, k = 3;
    // Full colex enumeration visits each weight-k mask once, in rank order.
    std::vector<uint64_t> seen;
    for_each_subset(n, k, [&](uint64_t m) { seen.push_back(m); });
    REQUIRE(seen.size() == binomial_u64(n, k));
    for (size_t i = 0; i < seen.size(); ++i) {
        REQUIRE(std::popcount(seen[i]) == int(k));
        REQUIRE(colex_rank(seen[i]) == i);
        REQUIRE(colex_unrank(i, n, k) == seen[i]);
    }
    REQUIRE(std::set<uint64_t>(seen.begin(), seen.end()).size() == seen.size());
    REQUIRE(seen.front() == first_of_weight(k));

    // Chunked ranges concatenate to the full enumeration.
    std::vector<uint64_t> chunked;
    uint64_t total = binomial_u64(n, k);
    for (uint64_t lo = 0; lo < total; lo += 17)
        for_each_subset_range(n, k, lo, std::min(lo + 17, total),
                              [&](uint64_t m) { chunked.push_back(m); });
    REQUIRE(chunked == seen);

    // next_same_weight preserves weight and increases value.
    uint64_t v = first_of_weight(5);
    for (int i = 0; i < 100; ++i) {
        uint64_t nx = next_same_weight(v);
        REQUIRE(nx > v);
        REQUIRE(std::popcount(nx) == 5);
        v = nx;
    }
}

TEST_CASE("Rng: determinism, stream separation, seek, bounds") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

    Rng s0(42, 0), s1(42, 1);
    bool differ = false;
    for (int i = 0; i < 10; ++i) differ = differ || (s0.next_u64() != s1.next_u64());
    REQUIRE(differ);

    // seek() jumps to an absolute position: counter-based stream.
    Rng c(42);
    std::vector<uint64_t> first(20);
    for (auto& x : first) x = c.next_u64();
    c.seek(7);
    REQUIRE(c.next_u64() == first[7]);
    REQUIRE(c.position() == 8);

    Rng d(1);
    for (int i = 0; i < 1000; ++i) {
        uint64_t r = d.next_below(13);
        REQUIRE(r < 13);
    }
    for (int i = 0; i < 1000; ++i) {
        double u = d.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    REQUIRE_THROWS_AS(d.next_below(0), std::invalid_argument);
}

TEST_CASE("sample_subset: ascending, unique, in range, exhaustive coverage") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        uint32_t n = 1 + uint32_t(rng.next_below(30));
        uint32_t k = uint32_t(rng.next_below(n + 1));
        auto s = sample_subset(rng, n, k);
        REQUIRE(s.size() == k);
        REQUIRE(std::is_sorted(s.begin(), s.end()));
        REQUIRE(std::adjacent_find(s.begin(), s.end()) == s.end());
        for (uint32_t x : s) REQUIRE(x < n);
    }
    // All C(5,2)=10 subsets appear over many draws (uniformity smoke test).
    std::set<uint64_t> hit;
    for (int t = 0; t < 500; ++t) hit.insert(col_mask(sample_subset(rng, 5, 2)));
    REQUIRE(hit.size() == 10);

    auto perm = sample_permutation(rng, 20);
    std::vector<uint32_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    for (uint32_t i = 0; i < 20; ++i) REQUIRE(sorted[i] == i);
}

TEST_CASE("binomial: Pascal recurrence and u64 fast path") {
    for (uint64_t n = 0; n <= 40; ++n) {
        REQUIRE(binomial(n, 0) == 1);
        REQUIRE(binomial(n, n) == 1);
        for (uint64_t k = 1; k < n; ++k)
            REQUIRE(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
    REQUIRE(binomial(24, 12) == Count(2704156));
    REQUIRE(binomial(3, 7) == 0);
    for (uint32_t n = 0; n <= 64; ++n)
        for (uint32_t k = 0; k <= n; ++k) {
            Count big = binomial(n, k);
            if (big <= Count(std::numeric_limits<uint64_t>::max()))
                REQUIRE(Count(binomial_u64(n, k)) == big);
        }
    REQUIRE(pow2(10) == 1024);
    REQUIRE(to_string(binomial(24, 12)) == "2704156");
}

TEST_CASE("ratio helpers: exact small cases and big-integer scaling") {
    REQUIRE(ratio_ld(Count(3), Count(4)) == Catch::Approx(0.75).epsilon(1e-15));
    REQUIRE(ratio_pow2_ld(Count(3), 2) == Catch::Approx(0.75).epsilon(1e-15));
    // A ratio of ~200-bit integers: scale both sides by 2^100 and compare.
    Count num = (Count(1) << 200) + 12345;
    Count den = (Count(1) << 201) + 999;
    long double got = ratio_ld(num, den);
    REQUIRE(double(got) == Catch::Approx(0.5).epsilon(1e-10));
    Count sn = num << 100, sd = den << 100;
    REQUIRE(double(ratio_ld(sn, sd)) == Catch::Approx(double(got)).epsilon(1e-15));
    REQUIRE(ratio_pow2_ld(Count(1) << 150, 151) == Catch::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("row_word fast path matches bit-level view") {
    Rng rng(31337);
    BinaryMatrix m = random_matrix(rng, 6, 24);
    for (size_t r = 0; r < m.rows(); ++r) {
        uint64_t w = row_mask(m, r);
        for (size_t c = 0; c < 24; ++c) REQUIRE(bool((w >> c) & 1) == m.get(r, c));
    }
}
