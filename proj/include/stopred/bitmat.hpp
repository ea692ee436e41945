#pragma once
// Bit-packed linear algebra over GF(2): matrices, vectors, rank, column
// extraction, erasure-system solving and row-space enumeration.

#include <cstdint>
#include <cstddef>
#include <bit>
#include <vector>
#include <string>
#include <stdexcept>
#include <optional>
#include <functional>
#include <algorithm>

namespace stopred {

// Subset of column indices [0, n), kept ascending.  When n <= 64 hot paths
// use the single-word mask form instead (see col_mask / set_from_mask).
using ColumnSet = std::vector<uint32_t>;

inline uint64_t col_mask(const ColumnSet& s) {
    uint64_t m = 0;
    for (uint32_t j : s) {
        if (j >= 64) throw std::invalid_argument("col_mask: index >= 64");
        m |= uint64_t(1) << j;
    }
    return m;
}

inline ColumnSet set_from_mask(uint64_t m) {
    ColumnSet s;
    while (m) {
        s.push_back(uint32_t(std::countr_zero(m)));
        m &= m - 1;
    }
    return s;
}

// Packed GF(2) vector.
struct BinaryVector {
    size_t len = 0;
    std::vector<uint64_t> bits;  // ceil(len/64) words, padding bits zero

    BinaryVector() = default;
    explicit BinaryVector(size_t n) : len(n), bits((n + 63) / 64, 0) {}

    bool get(size_t i) const { return (bits[i >> 6] >> (i & 63)) & 1; }
    void set(size_t i, bool v) {
        uint64_t w = uint64_t(1) << (i & 63);
        if (v) bits[i >> 6] |= w; else bits[i >> 6] &= ~w;
    }
    size_t weight() const {
        size_t c = 0;
        for (uint64_t w : bits) c += size_t(std::popcount(w));
        return c;
    }
    void xor_with(const BinaryVector& o) {
        for (size_t i = 0; i < bits.size(); ++i) bits[i] ^= o.bits[i];
    }
    bool operator==(const BinaryVector& o) const { return len == o.len && bits == o.bits; }
};

// Packed GF(2) matrix, row-major, one uint64 word per 64 columns.
// Empty matrices (0 rows and/or 0 columns) are valid.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    size_t words_per_row() const { return wpr_; }

    bool get(size_t r, size_t c) const { return (word(r, c >> 6) >> (c & 63)) & 1; }
    void set(size_t r, size_t c, bool v) {
        uint64_t m = uint64_t(1) << (c & 63);
        uint64_t& w = data_[r * wpr_ + (c >> 6)];
        if (v) w |= m; else w &= ~m;
    }

    uint64_t word(size_t r, size_t wi) const { return data_[r * wpr_ + wi]; }
    const uint64_t* row_ptr(size_t r) const { return data_.data() + r * wpr_; }
    uint64_t* row_ptr(size_t r) { return data_.data() + r * wpr_; }

    // First word of a row: the whole row when cols <= 64 (the fast path).
    uint64_t row_word(size_t r) const { return wpr_ ? data_[r * wpr_] : 0; }

    size_t row_weight(size_t r) const {
        size_t c = 0;
        for (size_t w = 0; w < wpr_; ++w) c += size_t(std::popcount(word(r, w)));
        return c;
    }

    void xor_rows(size_t dst, size_t src) {
        uint64_t* d = row_ptr(dst);
        const uint64_t* s = row_ptr(src);
        for (size_t w = 0; w < wpr_; ++w) d[w] ^= s[w];
    }
    void swap_rows(size_t a, size_t b) {
        if (a == b) return;
        std::swap_ranges(row_ptr(a), row_ptr(a) + wpr_, row_ptr(b));
    }

    BinaryVector row(size_t r) const {
        BinaryVector v(cols_);
        std::copy(row_ptr(r), row_ptr(r) + wpr_, v.bits.begin());
        return v;
    }
    void set_row(size_t r, const BinaryVector& v) {
        std::copy(v.bits.begin(), v.bits.end(), row_ptr(r));
    }
    void append_row(const BinaryVector& v) {
        if (v.len != cols_) throw std::invalid_argument("append_row: length mismatch");
        data_.resize((rows_ + 1) * wpr_, 0);
        ++rows_;
        set_row(rows_ - 1, v);
    }

    bool operator==(const BinaryMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    size_t rows_ = 0, cols_ = 0, wpr_ = 0;
    std::vector<uint64_t> data_;
};

// Dimension of the row space.  Works on a copy; input untouched.
inline size_t rank(BinaryMatrix m) {
    size_t rk = 0;
    size_t nrows = m.rows(), wpr = m.words_per_row();
    for (size_t wi = 0; wi < wpr && rk < nrows; ++wi) {
        for (int bit = 0; bit < 64 && rk < nrows; ++bit) {
            uint64_t probe = uint64_t(1) << bit;
            size_t piv = rk;
            while (piv < nrows && !(m.word(piv, wi) & probe)) ++piv;
            if (piv == nrows) continue;
            m.swap_rows(rk, piv);
            for (size_t r = 0; r < nrows; ++r)
                if (r != rk && (m.word(r, wi) & probe)) m.xor_rows(r, rk);
            ++rk;
        }
    }
    return rk;
}

// Row-reduced basis of the row space (rank rows, reduced echelon order).
inline BinaryMatrix row_basis(BinaryMatrix m) {
    size_t rk = 0;
    size_t nrows = m.rows(), wpr = m.words_per_row();
    for (size_t wi = 0; wi < wpr && rk < nrows; ++wi) {
        for (int bit = 0; bit < 64 && rk < nrows; ++bit) {
            uint64_t probe = uint64_t(1) << bit;
            size_t piv = rk;
            while (piv < nrows && !(m.word(piv, wi) & probe)) ++piv;
            if (piv == nrows) continue;
            m.swap_rows(rk, piv);
            for (size_t r = 0; r < nrows; ++r)
                if (r != rk && (m.word(r, wi) & probe)) m.xor_rows(r, rk);
            ++rk;
        }
    }
    BinaryMatrix out(rk, m.cols());
    for (size_t r = 0; r < rk; ++r)
        std::copy(m.row_ptr(r), m.row_ptr(r) + wpr, out.row_ptr(r));
    return out;
}

// New packed matrix made of the selected columns, in ascending index order.
inline BinaryMatrix column_submatrix(const BinaryMatrix& m, const ColumnSet& s) {
    for (uint32_t j : s)
        if (j >= m.cols()) throw std::out_of_range("column_submatrix: column index out of range");
    BinaryMatrix out(m.rows(), s.size());
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < s.size(); ++c)
            if (m.get(r, s[c])) out.set(r, c, true);
    return out;
}

// Columns of m packed as rows-bit words (bit r = entry in row r); rows() <= 64.
inline std::vector<uint64_t> column_words(const BinaryMatrix& m) {
    if (m.rows() > 64) throw std::invalid_argument("column_words: more than 64 rows");
    std::vector<uint64_t> cols(m.cols(), 0);
    for (size_t r = 0; r < m.rows(); ++r)
        for (size_t c = 0; c < m.cols(); ++c)
            if (m.get(r, c)) cols[c] |= uint64_t(1) << r;
    return cols;
}

// Rank of a set of <= 64-bit words (in-place basis build).
inline int word_rank(const uint64_t* words, size_t n, uint64_t* scratch /* >= n */) {
    int rk = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t cur = words[i];
        for (int b = 0; b < rk; ++b)
            cur = std::min(cur, cur ^ scratch[b]);
        if (cur) scratch[rk++] = cur;
    }
    return rk;
}

enum class SolveStatus { unique, multiple, inconsistent };

struct ErasureSolution {
    SolveStatus status;
    BinaryVector filled;  // complete codeword when status == unique
};

// Solve for the erased coordinates of a received word: H x^T = 0 with the
// positions outside E fixed.  Unique exactly when the columns H_E are
// linearly independent; "inconsistent" signals a received word that fixes
// coordinates incompatible with every codeword.
inline ErasureSolution solve_erasure_system(const BinaryMatrix& h, const ColumnSet& e,
                                            const BinaryVector& received) {
    if (received.len != h.cols()) throw std::invalid_argument("solve_erasure_system: length mismatch");
    size_t ne = e.size();
    std::vector<bool> erased(h.cols(), false);
    for (uint32_t j : e) {
        if (j >= h.cols()) throw std::out_of_range("solve_erasure_system: erasure index");
        erased[j] = true;
    }
    // Augmented system rows: [H_E | syndrome of the fixed part].
    size_t aw = (ne + 1 + 63) / 64;
    std::vector<uint64_t> aug(h.rows() * aw, 0);
    for (size_t r = 0; r < h.rows(); ++r) {
        uint64_t* row = aug.data() + r * aw;
        bool syn = false;
        size_t ei = 0;
        for (size_t c = 0; c < h.cols(); ++c) {
            if (erased[c]) {
                if (h.get(r, c)) row[ei >> 6] |= uint64_t(1) << (ei & 63);
                ++ei;
            } else if (h.get(r, c) && received.get(c)) {
                syn = !syn;
            }
        }
        if (syn) row[ne >> 6] |= uint64_t(1) << (ne & 63);
    }
    // Eliminate; detect free variables and inconsistency.
    std::vector<int> pivot_row(ne, -1);
    size_t rk = 0;
    for (size_t c = 0; c < ne && rk < h.rows(); ++c) {
        size_t piv = rk;
        while (piv < h.rows() && !((aug[piv * aw + (c >> 6)] >> (c & 63)) & 1)) ++piv;
        if (piv == h.rows()) continue;
        for (size_t w = 0; w < aw; ++w) std::swap(aug[rk * aw + w], aug[piv * aw + w]);
        for (size_t r = 0; r < h.rows(); ++r)
            if (r != rk && ((aug[r * aw + (c >> 6)] >> (c & 63)) & 1))
                for (size_t w = 0; w < aw; ++w) aug[r * aw + w] ^= aug[rk * aw + w];
        pivot_row[c] = int(rk);
        ++rk;
    }
    // Zero left part with syndrome 1 -> inconsistent.
    for (size_t r = rk; r < h.rows(); ++r)
        if ((aug[r * aw + (ne >> 6)] >> (ne & 63)) & 1)
            return {SolveStatus::inconsistent, {}};
    bool all_pivots = true;
    for (size_t c = 0; c < ne; ++c) all_pivots = all_pivots && pivot_row[c] >= 0;
    if (!all_pivots)
        return {SolveStatus::multiple, {}};
    BinaryVector filled = received;
    for (size_t c = 0; c < ne; ++c) {
        bool v = (aug[size_t(pivot_row[c]) * aw + (ne >> 6)] >> (ne & 63)) & 1;
        filled.set(e[c], v);
    }
    return {SolveStatus::unique, filled};
}

inline constexpr size_t kRowSpaceRankLimit = 30;

// Visit all 2^rank row-space vectors exactly once.  Order: Gray code over a
// row-reduced basis (vector k differs from vector k-1 by one basis row), so
// enumeration costs one XOR per step.  Starts at the zero vector.
inline void row_space_iter(const BinaryMatrix& m,
                           const std::function<void(const BinaryVector&)>& visit,
                           size_t rank_limit = kRowSpaceRankLimit) {
    BinaryMatrix basis = row_basis(m);
    size_t r = basis.rows();
    if (r > rank_limit) throw std::runtime_error("row_space_iter: rank exceeds enumeration limit");
    BinaryVector cur(m.cols());
    visit(cur);
    uint64_t total = uint64_t(1) << r;
    for (uint64_t k = 1; k < total; ++k) {
        size_t flip = size_t(std::countr_zero(k));  // Gray-code step
        const uint64_t* b = basis.row_ptr(flip);
        for (size_t w = 0; w < basis.words_per_row(); ++w) cur.bits[w] ^= b[w];
        visit(cur);
    }
}

// Single-word variant for cols <= 64: yields each row-space vector as a mask.
inline void row_space_masks(const BinaryMatrix& m,
                            const std::function<void(uint64_t)>& visit,
                            size_t rank_limit = kRowSpaceRankLimit) {
    if (m.cols() > 64) throw std::invalid_argument("row_space_masks: cols > 64");
    BinaryMatrix basis = row_basis(m);
    size_t r = basis.rows();
    if (r > rank_limit) throw std::runtime_error("row_space_masks: rank exceeds enumeration limit");
    uint64_t cur = 0;
    visit(cur);
    uint64_t total = uint64_t(1) << r;
    for (uint64_t k = 1; k < total; ++k) {
        cur ^= basis.row_word(size_t(std::countr_zero(k)));
        visit(cur);
    }
}

}  // namespace stopred
