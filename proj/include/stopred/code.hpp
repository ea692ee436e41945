#pragma once
// Code model: built-in codes, parity-check matrix I/O (dense text and alist),
// and the two random-matrix ensembles used for average-case experiments.

#include "stopred/bitmat.hpp"
#include "stopred/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stopred {

// A binary linear code presented by a (possibly redundant) parity-check
// matrix.  n = h.cols(), dimension k = n - rank(h).
struct LinearCode {
    BinaryMatrix h;
    std::string name;

    size_t n() const { return h.cols(); }
    size_t m() const { return h.rows(); }   // rows as given, may exceed rank
    size_t rank_h() const { return rank(h); }
    size_t k() const { return n() - rank_h(); }
};

// Systematic double-circulant parity-check matrix of the [24,12,8] extended
// binary Golay code (the classic presentation: identity block bordered by a
// circulant, all-ones last row on the right half).  Stopping distance 4.
inline LinearCode golay_extended() {
    // Support of each row; 11 rows of weight 8 plus one of weight 12.
    static const std::vector<std::vector<uint32_t>> supp = {
        {0, 1, 13, 14, 16, 17, 18, 22},
        {0, 2, 14, 15, 17, 18, 19, 23},
        {0, 3, 13, 15, 16, 18, 19, 20},
        {0, 4, 14, 16, 17, 19, 20, 21},
        {0, 5, 15, 17, 18, 20, 21, 22},
        {0, 6, 16, 18, 19, 21, 22, 23},
        {0, 7, 13, 17, 19, 20, 22, 23},
        {0, 8, 13, 14, 18, 20, 21, 23},
        {0, 9, 13, 14, 15, 19, 21, 22},
        {0, 10, 14, 15, 16, 20, 22, 23},
        {0, 11, 13, 15, 16, 17, 21, 23},
        {12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23},
    };
    BinaryMatrix h(12, 24);
    for (size_t r = 0; r < supp.size(); ++r)
        for (uint32_t c : supp[r]) h.set(r, c, true);
    return {h, "golay24"};
}

enum class MatrixFormat { dense, alist };

inline MatrixFormat parse_format(const std::string& s) {
    if (s == "dense") return MatrixFormat::dense;
    if (s == "alist") return MatrixFormat::alist;
    throw std::invalid_argument("unknown matrix format: " + s + " (expected dense or alist)");
}

// --- dense text: one row per line, characters 0/1 ('.' accepted as 0,
// spaces ignored).  All rows must have equal length.

inline BinaryMatrix read_dense(std::istream& in) {
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::string bits;
        for (char c : line) {
            if (c == '0' || c == '.') bits.push_back('0');
            else if (c == '1') bits.push_back('1');
            else if (c == ' ' || c == '\t' || c == '\r') continue;
            else throw std::runtime_error(std::string("dense matrix: unexpected character '") + c + "'");
        }
        if (!bits.empty()) lines.push_back(bits);
    }
    if (lines.empty()) throw std::runtime_error("dense matrix: no rows");
    size_t cols = lines[0].size();
    for (const auto& l : lines)
        if (l.size() != cols) throw std::runtime_error("dense matrix: ragged rows");
    BinaryMatrix m(lines.size(), cols);
    for (size_t r = 0; r < lines.size(); ++r)
        for (size_t c = 0; c < cols; ++c)
            if (lines[r][c] == '1') m.set(r, c, true);
    return m;
}

inline void write_dense(std::ostream& out, const BinaryMatrix& m) {
    for (size_t r = 0; r < m.rows(); ++r) {
        for (size_t c = 0; c < m.cols(); ++c) out.put(m.get(r, c) ? '1' : '0');
        out.put('\n');
    }
}

// --- alist (MacKay's sparse format): header "n m", then max column/row
// degrees, per-column and per-row degrees, then 1-based index lists.
// Zero padding in the index lists is accepted and ignored on read.

inline BinaryMatrix read_alist(std::istream& in) {
    auto next_int = [&in]() {
        long long v;
        if (!(in >> v)) throw std::runtime_error("alist: truncated input");
        return v;
    };
    long long n = next_int(), m = next_int();
    if (n <= 0 || m <= 0) throw std::runtime_error("alist: bad dimensions");
    long long max_col = next_int(), max_row = next_int();
    (void)max_col;
    (void)max_row;
    std::vector<long long> col_deg(static_cast<size_t>(n)), row_deg(static_cast<size_t>(m));
    for (auto& d : col_deg) d = next_int();
    for (auto& d : row_deg) d = next_int();
    BinaryMatrix h(static_cast<size_t>(m), static_cast<size_t>(n));
    for (long long c = 0; c < n; ++c) {
        for (long long k = 0; k < col_deg[size_t(c)]; ++k) {
            long long r = next_int();
            if (r == 0) { --k; continue; }  // padding slot before a real entry is malformed but tolerable
            if (r < 1 || r > m) throw std::runtime_error("alist: row index out of range");
            h.set(size_t(r - 1), size_t(c), true);
        }
        // consume padding zeros up to max_col? Writers differ; the reader is
        // permissive: remaining zeros are swallowed by the row-section loop below.
    }
    // Row section: use it to cross-check the column section when present.
    BinaryMatrix check(static_cast<size_t>(m), static_cast<size_t>(n));
    bool have_rows = true;
    for (long long r = 0; r < m && have_rows; ++r) {
        for (long long k = 0; k < row_deg[size_t(r)]; ++k) {
            long long c;
            if (!(in >> c)) { have_rows = false; break; }
            if (c == 0) { --k; continue; }
            if (c < 1 || c > n) throw std::runtime_error("alist: column index out of range");
            check.set(size_t(r), size_t(c - 1), true);
        }
    }
    if (have_rows && !(check == h))
        throw std::runtime_error("alist: row and column sections disagree");
    return h;
}

inline void write_alist(std::ostream& out, const BinaryMatrix& m) {
    size_t n = m.cols(), rows = m.rows();
    std::vector<std::vector<size_t>> by_col(n), by_row(rows);
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < n; ++c)
            if (m.get(r, c)) { by_col[c].push_back(r + 1); by_row[r].push_back(c + 1); }
    size_t max_col = 0, max_row = 0;
    for (const auto& v : by_col) max_col = std::max(max_col, v.size());
    for (const auto& v : by_row) max_row = std::max(max_row, v.size());
    out << n << ' ' << rows << '\n' << max_col << ' ' << max_row << '\n';
    for (size_t c = 0; c < n; ++c) out << by_col[c].size() << (c + 1 < n ? ' ' : '\n');
    for (size_t r = 0; r < rows; ++r) out << by_row[r].size() << (r + 1 < rows ? ' ' : '\n');
    auto dump = [&out](const std::vector<size_t>& v, size_t width) {
        for (size_t i = 0; i < width; ++i) out << (i < v.size() ? v[i] : 0) << (i + 1 < width ? ' ' : '\n');
    };
    for (size_t c = 0; c < n; ++c) dump(by_col[c], max_col);
    for (size_t r = 0; r < rows; ++r) dump(by_row[r], max_row);
}

inline BinaryMatrix load_matrix(const std::string& path, MatrixFormat fmt) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return fmt == MatrixFormat::dense ? read_dense(in) : read_alist(in);
}

inline void save_matrix(const std::string& path, const BinaryMatrix& m, MatrixFormat fmt) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    if (fmt == MatrixFormat::dense) write_dense(out, m); else write_alist(out, m);
    if (!out) throw std::runtime_error("write failed: " + path);
}

// Guess a format from a file extension; dense when in doubt.
inline MatrixFormat format_for_path(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot != std::string::npos && path.substr(dot) == ".alist") return MatrixFormat::alist;
    return MatrixFormat::dense;
}

// Standard random ensemble member: every entry i.i.d. Bernoulli(1/2).
// Deterministic in (n, m, seed); entries drawn row-major, 64 columns per draw.
inline LinearCode sample_sre(uint32_t n, uint32_t m, uint64_t seed) {
    if (n < 1 || m < 1) throw std::invalid_argument("sample_sre: need n >= 1 and m >= 1");
    Rng rng(seed, /*stream=*/0x53524500);  // tag keeps streams disjoint across ensembles
    BinaryMatrix h(m, n);
    size_t wpr = h.words_per_row();
    uint64_t top_mask = (n % 64) ? ((uint64_t(1) << (n % 64)) - 1) : ~uint64_t(0);
    for (size_t r = 0; r < m; ++r) {
        uint64_t* row = h.row_ptr(r);
        for (size_t w = 0; w < wpr; ++w) row[w] = rng.next_u64();
        row[wpr - 1] &= top_mask;
    }
    return {h, "sre_n" + std::to_string(n) + "_m" + std::to_string(m)};
}

// Gallager (J,K)-regular ensemble member: J strips of M = n/K rows.  Strip 1
// is block-diagonal (row j covers columns (j-1)K .. jK-1); each further strip
// applies an independent uniform column permutation to strip 1.  Every strip's
// rows partition the n columns, so the matrix is J-column-regular and
// K-row-regular with rank at most nJ/K - (J-1).
inline LinearCode sample_gallager(uint32_t n, uint32_t J, uint32_t K, uint64_t seed) {
    if (J < 1 || K < 1) throw std::invalid_argument("sample_gallager: need J >= 1 and K >= 1");
    if (n == 0 || n % K != 0) throw std::invalid_argument("sample_gallager: K must divide n");
    uint32_t M = n / K;
    Rng rng(seed, /*stream=*/0x47414c00);
    BinaryMatrix h(size_t(J) * M, n);
    for (uint32_t s = 0; s < J; ++s) {
        std::vector<uint32_t> perm;
        if (s == 0) {
            perm.resize(n);
            for (uint32_t c = 0; c < n; ++c) perm[c] = c;
        } else {
            perm = sample_permutation(rng, n);
        }
        for (uint32_t c = 0; c < n; ++c)
            h.set(size_t(s) * M + perm[c] / K, c, true);
    }
    return {h, "gallager_n" + std::to_string(n) + "_J" + std::to_string(J) + "_K" + std::to_string(K)};
}

// Largest useful row count of a Gallager (J,K) matrix: the strips share
// rank deficiencies, so at most nJ/K - (J-1) rows are independent.
inline uint64_t gallager_r_max(uint32_t n, uint32_t J, uint32_t K) {
    if (K == 0 || n % K != 0) throw std::invalid_argument("gallager_r_max: K must divide n");
    return uint64_t(n) * J / K - (J - 1);
}

}  // namespace stopred
