// Code constructions and matrix I/O: the extended-Golay parity-check matrix,
// dense/alist round-trips, and random-ensemble samplers.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "stopred/code.hpp"
#include "stopred/rng.hpp"

using namespace stopred;

namespace {

size_t intersection_weight(const BinaryMatrix& m, size_t a, size_t b) {
    size_t c = 0;
    for (size_t j = 0; j < m.cols(); ++j)
        if (m.get(a, j) && m.get(b, j)) ++c;
    return c;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("golay_extended: dimensions, rank, row weights, self-duality") {
    LinearCode code = golay_extended();
    REQUIRE(code.n() == 24);
    REQUIRE(code.m() == 12);
    REQUIRE(code.rank_h() == 12);
    REQUIRE(code.k() == 12);

    size_t weight8 = 0, weight12 = 0;
    for (size_t r = 0; r < 12; ++r) {
        size_t w = code.h.row_weight(r);
        if (w == 8) ++weight8;
        if (w == 12) ++weight12;
        // Doubly even: every row weight divisible by 4.
        REQUIRE(w % 4 == 0);
    }
    REQUIRE(weight8 == 11);
    REQUIRE(weight12 == 1);

    // Self-dual code: all pairwise row intersections even (rows orthogonal).
    for (size_t a = 0; a < 12; ++a)
        for (size_t b = a; b < 12; ++b)
            REQUIRE(intersection_weight(code.h, a, b) % 2 == 0);
}

TEST_CASE("dense format: round-trip, tolerant input, ragged rejection") {
    LinearCode code = golay_extended();
    std::ostringstream out;
    write_dense(out, code.h);
    std::istringstream in(out.str());
    REQUIRE(read_dense(in) == code.h);

    // '.' for zero and arbitrary spacing are accepted.
    std::istringstream dotted("1 . 1\n. 1 .\n");
    BinaryMatrix m = read_dense(dotted);
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 3);
    REQUIRE(m.get(0, 0));
    REQUIRE_FALSE(m.get(0, 1));
    REQUIRE(m.get(1, 1));

    std::istringstream packed("101\n010\n");
    REQUIRE(read_dense(packed) == m);

    std::istringstream ragged("101\n01\n");
    REQUIRE_THROWS(read_dense(ragged));
}

TEST_CASE("alist format: round-trip and cross-check failure") {
    LinearCode code = golay_extended();
    std::ostringstream out;
    write_alist(out, code.h);
    std::istringstream in(out.str());
    REQUIRE(read_alist(in) == code.h);

    // A 2x2 matrix with row/column sections that disagree must be rejected.
    // Columns claim entries {1},{2}; rows claim {1,2},{} — inconsistent.
    std::string bad =
        "2 2\n"
        "1 2\n"
        "1 1\n"
        "2 0\n"
        "1\n"
        "2\n"
        "1 2\n"
        "0 0\n";
    std::istringstream badin(bad);
    REQUIRE_THROWS(read_alist(badin));
}

TEST_CASE("load/save round-trips through files, format from extension") {
    LinearCode code = golay_extended();
    std::string dense_file = temp_path("stopred_test_mat.txt");
    std::string alist_file = temp_path("stopred_test_mat.alist");

    save_matrix(dense_file, code.h, MatrixFormat::dense);
    REQUIRE(load_matrix(dense_file, MatrixFormat::dense) == code.h);

    save_matrix(alist_file, code.h, MatrixFormat::alist);
    REQUIRE(load_matrix(alist_file, MatrixFormat::alist) == code.h);

    REQUIRE(format_for_path(alist_file) == MatrixFormat::alist);
    REQUIRE(format_for_path(dense_file) == MatrixFormat::dense);
    REQUIRE(format_for_path("noextension") == MatrixFormat::dense);

    REQUIRE(parse_format("dense") == MatrixFormat::dense);
    REQUIRE(parse_format("alist") == MatrixFormat::alist);
    REQUIRE_THROWS(parse_format("pbm"));

    std::remove(dense_file.c_str());
    std::remove(alist_file.c_str());
}

TEST_CASE("sample_sre: deterministic, correct shape, roughly balanced") {
    LinearCode a = sample_sre(50, 25, 7);
    LinearCode b = sample_sre(50, 25, 7);
    LinearCode c = sample_sre(50, 25, 8);
    REQUIRE(a.h == b.h);
    REQUIRE_FALSE(a.h == c.h);
    REQUIRE(a.n() == 50);
    REQUIRE(a.m() == 25);

    // Fair-coin entries: total ones within a loose band around half.
    size_t ones = 0;
    for (size_t r = 0; r < a.m(); ++r) ones += a.h.row_weight(r);
    REQUIRE(ones > 50 * 25 / 4);
    REQUIRE(ones < 50 * 25 * 3 / 4);

    // Columns beyond n must stay zero (top-word trimming).
    LinearCode odd = sample_sre(70, 10, 3);
    for (size_t r = 0; r < 10; ++r) {
        size_t w = 0;
        for (size_t col = 0; col < 70; ++col) w += odd.h.get(r, col) ? 1 : 0;
        REQUIRE(w == odd.h.row_weight(r));
    }
    REQUIRE_THROWS(sample_sre(0, 5, 1));
}

TEST_CASE("sample_gallager: regular degrees, block-diagonal first strip") {
    const uint32_t n = 20, J = 3, K = 5;
    LinearCode g = sample_gallager(n, J, K, 11);
    REQUIRE(g.n() == n);
    REQUIRE(g.m() == size_t(n) * J / K);

    // Row degree K everywhere.
    for (size_t r = 0; r < g.m(); ++r) REQUIRE(g.h.row_weight(r) == K);
    // Column degree J everywhere.
    for (size_t c = 0; c < n; ++c) {
        size_t deg = 0;
        for (size_t r = 0; r < g.m(); ++r) deg += g.h.get(r, c) ? 1 : 0;
        REQUIRE(deg == J);
    }
    // Strip 0 is block-diagonal: row j covers columns jK .. jK+K-1.
    for (uint32_t j = 0; j < n / K; ++j)
        for (uint32_t c = 0; c < n; ++c)
            REQUIRE(g.h.get(j, c) == (c >= j * K && c < (j + 1) * K));
    // Each later strip partitions the columns (row degrees already K, so it
    // suffices that every column is hit once per strip).
    for (uint32_t s = 1; s < J; ++s)
        for (uint32_t c = 0; c < n; ++c) {
            size_t hits = 0;
            for (uint32_t j = 0; j < n / K; ++j)
                hits += g.h.get(size_t(s) * (n / K) + j, c) ? 1 : 0;
            REQUIRE(hits == 1);
        }

    REQUIRE(sample_gallager(n, J, K, 11).h == g.h);
    REQUIRE_FALSE(sample_gallager(n, J, K, 12).h == g.h);

    REQUIRE(gallager_r_max(20, 3, 5) == 10);
    REQUIRE(rank(g.h) <= gallager_r_max(n, J, K));
    REQUIRE_THROWS(sample_gallager(21, 3, 5, 1));
    REQUIRE_THROWS(gallager_r_max(21, 3, 5));
}

TEST_CASE("LinearCode accessors on a rank-deficient matrix") {
    BinaryMatrix h(3, 6);
    h.set(0, 0, true);
    h.set(1, 1, true);
    h.set(2, 0, true);
    h.set(2, 1, true);  // row2 = row0 + row1
    LinearCode code{h, "demo"};
    REQUIRE(code.n() == 6);
    REQUIRE(code.m() == 3);
    REQUIRE(code.rank_h() == 2);
    REQUIRE(code.k() == 4);
    REQUIRE(code.name == "demo");
}
