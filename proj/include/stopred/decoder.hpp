#pragma once
// Erasure decoders: peeling (iterative) and maximum-likelihood, plus the
// head-to-head failure comparison used to audit extended matrices.

#include "stopred/bitmat.hpp"
#include "stopred/bigint.hpp"
#include "stopred/subsets.hpp"
#include "stopred/rng.hpp"
#include "stopred/parallel.hpp"

#include <cstdint>
#include <vector>
#include <queue>
#include <stdexcept>

namespace stopred {

enum class DecoderKind { iterative, ml };

struct DecodeOutcome {
    bool success = false;
    ColumnSet residual;  // unrecovered positions; empty iff success
    DecoderKind method = DecoderKind::iterative;
};

// Reusable peeling state for one matrix with n <= 64: row masks plus a
// column -> rows adjacency so each resolved position only touches its own
// checks.  residual_mask() is the hot path used millions of times.
class PeelContext {
public:
    explicit PeelContext(const BinaryMatrix& h) : n_(h.cols()) {
        if (h.cols() > 64) throw std::invalid_argument("PeelContext: cols > 64");
        rows_.reserve(h.rows());
        col_rows_.resize(h.cols());
        for (size_t r = 0; r < h.rows(); ++r) {
            uint64_t m = h.row_word(r);
            rows_.push_back(m);
            while (m) {
                col_rows_[size_t(std::countr_zero(m))].push_back(uint32_t(r));
                m &= m - 1;
            }
        }
        counts_.resize(rows_.size());
    }

    size_t cols() const { return n_; }

    // Erased positions still unresolved after peeling to the fixpoint: the
    // unique maximal stopping set inside e (0 when decoding succeeds).
    uint64_t residual_mask(uint64_t e) {
        if (!e) return 0;
        stack_.clear();
        for (size_t r = 0; r < rows_.size(); ++r) {
            int c = std::popcount(rows_[r] & e);
            counts_[r] = c;
            if (c == 1) stack_.push_back(uint32_t(r));
        }
        while (!stack_.empty()) {
            uint32_t r = stack_.back();
            stack_.pop_back();
            uint64_t inter = rows_[r] & e;
            if (std::popcount(inter) != 1) continue;  // stale entry
            uint32_t pos = uint32_t(std::countr_zero(inter));
            e &= ~inter;
            if (!e) return 0;
            for (uint32_t r2 : col_rows_[pos])
                if (--counts_[r2] == 1) stack_.push_back(r2);
        }
        return e;
    }

private:
    size_t n_;
    std::vector<uint64_t> rows_;
    std::vector<std::vector<uint32_t>> col_rows_;
    std::vector<int> counts_;
    std::vector<uint32_t> stack_;
};

// Peeling decoder: repeatedly use a check row with exactly one erased
// position to recover that position.  Works for any matrix width.
inline DecodeOutcome peel(const BinaryMatrix& h, const ColumnSet& e) {
    std::vector<uint8_t> erased(h.cols(), 0);
    for (uint32_t c : e) {
        if (c >= h.cols()) throw std::out_of_range("peel: erasure index");
        erased[c] = 1;
    }
    std::vector<std::vector<uint32_t>> row_pos(h.rows()), col_rows(h.cols());
    for (size_t r = 0; r < h.rows(); ++r)
        for (size_t c = 0; c < h.cols(); ++c)
            if (h.get(r, c)) { row_pos[r].push_back(uint32_t(c)); col_rows[c].push_back(uint32_t(r)); }
    std::vector<int> counts(h.rows(), 0);
    std::vector<uint32_t> stack;
    for (size_t r = 0; r < h.rows(); ++r) {
        int cnt = 0;
        for (uint32_t c : row_pos[r]) cnt += erased[c];
        counts[r] = cnt;
        if (cnt == 1) stack.push_back(uint32_t(r));
    }
    size_t remaining = 0;
    for (uint32_t c : e) remaining += erased[c];
    while (!stack.empty() && remaining) {
        uint32_t r = stack.back();
        stack.pop_back();
        if (counts[r] != 1) continue;
        uint32_t pos = 0;
        for (uint32_t c : row_pos[r])
            if (erased[c]) { pos = c; break; }
        erased[pos] = 0;
        --remaining;
        for (uint32_t r2 : col_rows[pos])
            if (--counts[r2] == 1) stack.push_back(r2);
    }
    DecodeOutcome out;
    out.method = DecoderKind::iterative;
    for (uint32_t c : e)
        if (erased[c]) out.residual.push_back(c);
    out.success = out.residual.empty();
    return out;
}

// ML decoding over the erasure channel: succeeds iff the erased columns are
// linearly independent (values are irrelevant for failure statistics of a
// linear code).  On failure the residual lists the erased positions whose
// value is genuinely undetermined, i.e. those touched by the kernel of H_E.
inline DecodeOutcome ml_decode(const BinaryMatrix& h, const ColumnSet& e) {
    DecodeOutcome out;
    out.method = DecoderKind::ml;
    BinaryMatrix sub = column_submatrix(h, e);
    // Reduced echelon over the |e| columns, tracking pivot columns.
    size_t ne = e.size(), rk = 0;
    std::vector<int> pivot_of_col(ne, -1);
    for (size_t c = 0; c < ne && rk < sub.rows(); ++c) {
        size_t piv = rk;
        while (piv < sub.rows() && !sub.get(piv, c)) ++piv;
        if (piv == sub.rows()) continue;
        sub.swap_rows(rk, piv);
        for (size_t r = 0; r < sub.rows(); ++r)
            if (r != rk && sub.get(r, c)) sub.xor_rows(r, rk);
        pivot_of_col[c] = int(rk);
        ++rk;
    }
    if (rk == ne) {
        out.success = true;
        return out;
    }
    // Undetermined positions: free columns plus every pivot column whose
    // echelon row meets a free column.
    std::vector<bool> undetermined(ne, false);
    for (size_t c = 0; c < ne; ++c)
        if (pivot_of_col[c] < 0) {
            undetermined[c] = true;
            for (size_t p = 0; p < ne; ++p)
                if (pivot_of_col[p] >= 0 && sub.get(size_t(pivot_of_col[p]), c))
                    undetermined[p] = true;
        }
    for (size_t c = 0; c < ne; ++c)
        if (undetermined[c]) out.residual.push_back(e[c]);
    out.success = false;
    return out;
}

struct CompareRow {
    uint32_t w = 0;
    Count total = 0;          // C(n, w)
    bool exhaustive = true;   // false -> `trials` seeded samples
    uint64_t trials = 0;      // patterns actually examined
    uint64_t iterative_fail = 0;
    uint64_t ml_fail = 0;
    uint64_t disagreements = 0;
};

struct CompareReport {
    uint32_t n = 0;
    uint64_t seed = 0;
    std::vector<CompareRow> rows;
};

namespace detail {
struct CmpCounts {
    uint64_t it = 0, ml = 0, dis = 0;
    CmpCounts& operator+=(const CmpCounts& o) { it += o.it; ml += o.ml; dis += o.dis; return *this; }
};
}  // namespace detail

// Per-weight failure counts of both decoders on the same patterns:
// exhaustive for w <= exhaustive_to, seeded sampling above.  H_ext may be
// redundant; ML ranks are taken against its row basis.
inline CompareReport compare_decoders(const BinaryMatrix& h_ext, uint32_t w_lo, uint32_t w_hi,
                                      uint32_t exhaustive_to, uint64_t samples, uint64_t seed,
                                      unsigned threads = 0) {
    if (h_ext.cols() > 64) throw std::invalid_argument("compare_decoders: cols > 64");
    uint32_t n = uint32_t(h_ext.cols());
    if (w_hi > n) w_hi = n;
    unsigned nthreads = resolve_threads(threads);
    std::vector<uint64_t> basis_cols = column_words(row_basis(h_ext));
    size_t rank_h = rank(h_ext);
    auto ml_ok = [&](uint64_t mask, uint32_t w) {
        if (w > rank_h) return false;
        uint64_t scratch[64];
        int rk = 0;
        while (mask) {
            uint64_t cur = basis_cols[size_t(std::countr_zero(mask))];
            mask &= mask - 1;
            for (int b = 0; b < rk; ++b) cur = std::min(cur, cur ^ scratch[b]);
            if (!cur) return false;
            scratch[rk++] = cur;
        }
        return true;
    };
    CompareReport report;
    report.n = n;
    report.seed = seed;
    for (uint32_t w = w_lo; w <= w_hi; ++w) {
        CompareRow row;
        row.w = w;
        row.total = binomial(n, w);
        detail::CmpCounts agg;
        if (w <= exhaustive_to) {
            uint64_t total = binomial_u64(n, w);
            row.exhaustive = true;
            row.trials = total;
            agg = parallel_range_sum<detail::CmpCounts>(total, nthreads, 1 << 14,
                [&](uint64_t lo, uint64_t hi) {
                    detail::CmpCounts c;
                    PeelContext local(h_ext);
                    for_each_subset_range(n, w, lo, hi, [&](uint64_t mask) {
                        bool it_fail = local.residual_mask(mask) != 0;
                        bool ml_fail = !ml_ok(mask, w);
                        c.it += it_fail;
                        c.ml += ml_fail;
                        c.dis += it_fail != ml_fail;
                    });
                    return c;
                });
        } else {
            row.exhaustive = false;
            row.trials = samples;
            agg = parallel_range_sum<detail::CmpCounts>(samples, nthreads, 1 << 14,
                [&](uint64_t lo, uint64_t hi) {
                    detail::CmpCounts c;
                    PeelContext local(h_ext);
                    for (uint64_t k = lo; k < hi; ++k) {
                        Rng trial_rng(seed, (uint64_t(w) << 48) | k);  // keyed per trial: sharding-invariant
                        uint64_t mask = col_mask(sample_subset(trial_rng, n, w));
                        bool it_fail = local.residual_mask(mask) != 0;
                        bool ml_fail = !ml_ok(mask, w);
                        c.it += it_fail;
                        c.ml += ml_fail;
                        c.dis += it_fail != ml_fail;
                    }
                    return c;
                });
        }
        row.iterative_fail = agg.it;
        row.ml_fail = agg.ml;
        row.disagreements = agg.dis;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace stopred
