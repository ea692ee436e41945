#pragma once
// Greedy construction of redundant parity-check matrices: repeatedly pick
// the dual codeword that one-covers the most (size-weighted) not-yet-covered
// coverable subsets, until every coverable subset of size <= ell is covered,
// then top the row rank up to the code rank.

#include "stopred/bigint.hpp"
#include "stopred/code.hpp"
#include "stopred/parallel.hpp"
#include "stopred/rng.hpp"
#include "stopred/stopping.hpp"
#include "stopred/subsets.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stopred {

// All coverable subsets of size 1..ell, as packed column masks, sizes
// ascending and numerically increasing within a size.  This is the greedy
// cover domain: full column rank is the only membership test.
inline std::vector<uint32_t> coverable_masks(const BinaryMatrix& h, uint32_t ell,
                                             uint64_t budget = kDefaultSubsetBudget) {
    const uint32_t n = h.cols();
    if (n == 0 || n > 32) throw std::invalid_argument("coverable_masks: need 1 <= n <= 32 columns");
    if (h.rows() > 64) throw std::invalid_argument("coverable_masks: more than 64 rows");
    if (ell < 1 || ell > n) throw std::invalid_argument("coverable_masks: need 1 <= ell <= n");
    Count work = 0;
    for (uint32_t i = 1; i <= ell; ++i) work += binomial(n, i);
    if (work > budget)
        throw std::runtime_error("coverable_masks: subset enumeration (" + to_string(work) +
                                 ") exceeds budget " + std::to_string(budget) +
                                 "; use --force to raise it");
    auto cw = detail::ColWords(h);
    std::vector<uint32_t> out;
    for (uint32_t i = 1; i <= ell; ++i) {
        for_each_subset(n, i, [&](uint64_t mask) {
            if (detail::mask_is_coverable(cw, mask)) out.push_back(uint32_t(mask));
        });
    }
    return out;
}

// ColumnSet view of the same list, for callers that want explicit indices.
inline std::vector<ColumnSet> coverable_list(const BinaryMatrix& h, uint32_t ell,
                                             uint64_t budget = kDefaultSubsetBudget) {
    std::vector<ColumnSet> out;
    for (uint32_t mask : coverable_masks(h, ell, budget)) out.push_back(set_from_mask(mask));
    return out;
}

struct GreedyResult {
    BinaryMatrix h;                        // constructed matrix, full code rank
    uint32_t ell = 0;
    uint64_t seed = 0;
    uint32_t restarts = 0;
    uint32_t best_restart = 0;             // winning restart index
    uint32_t greedy_rows = 0;              // rows picked by covering
    uint32_t completion_rows = 0;          // rows appended for rank completion
    std::vector<uint32_t> rows_per_restart;
};

namespace detail {

// Scoring works in the dual-space index domain: x in [0, 2^r) indexes the
// codeword cw[x] = XOR of basis rows selected by bits of x.  A codeword
// covers subset S iff its restriction to S has weight one; for fixed S and
// a target position j in S, the solution set {x : cw[x] restricted to S =
// e_j} is a coset of the kernel of x -> cw[x]|_S, of size 2^(r-|S|), found
// by row-reducing the restriction map with its transform tracked.
struct CosetScorer {
    uint32_t r;
    std::vector<uint64_t> basis_cols;  // column words of the basis matrix (r bits each)

    CosetScorer(const BinaryMatrix& basis) : r(basis.rows()), basis_cols(column_words(basis)) {}

    // Add `delta * |S|` to score[x] for every x whose codeword covers S.
    void apply(std::vector<int64_t>& score, uint32_t s_mask, int64_t delta) const {
        uint32_t cols[32];
        uint32_t i = 0;
        for (uint32_t m = s_mask; m; m &= m - 1) cols[i++] = uint32_t(__builtin_ctz(m));
        // Row-reduce [A | T]: A row p = basis column cols[p] (r bits), T = I_i
        // in bits r .. r+i-1.
        uint64_t rows[32];
        for (uint32_t p = 0; p < i; ++p) rows[p] = basis_cols[cols[p]] | (uint64_t(1) << (r + p));
        uint32_t pivot_col[32];
        uint32_t rank = 0;
        for (uint32_t col = 0; col < r && rank < i; ++col) {
            uint32_t sel = rank;
            while (sel < i && !(rows[sel] >> col & 1)) ++sel;
            if (sel == i) continue;
            std::swap(rows[rank], rows[sel]);
            for (uint32_t p = 0; p < i; ++p)
                if (p != rank && (rows[p] >> col & 1)) rows[p] ^= rows[rank];
            pivot_col[rank++] = col;
        }
        if (rank != i) throw std::logic_error("CosetScorer: subset is not coverable");
        // Kernel basis of the restriction map.
        uint64_t kernel[32];
        uint32_t kdim = 0;
        uint64_t pivot_mask = 0;
        for (uint32_t p = 0; p < i; ++p) pivot_mask |= uint64_t(1) << pivot_col[p];
        for (uint32_t f = 0; f < r; ++f) {
            if (pivot_mask >> f & 1) continue;
            uint64_t v = uint64_t(1) << f;
            for (uint32_t p = 0; p < i; ++p)
                if (rows[p] >> f & 1) v |= uint64_t(1) << pivot_col[p];
            kernel[kdim++] = v;
        }
        const int64_t add = delta * int64_t(i);
        for (uint32_t pos = 0; pos < i; ++pos) {
            uint64_t xp = 0;  // particular solution for target e_pos
            for (uint32_t p = 0; p < i; ++p)
                if (rows[p] >> (r + pos) & 1) xp |= uint64_t(1) << pivot_col[p];
            // Gray walk over the kernel span.
            uint64_t x = xp;
            score[x] += add;
            const uint64_t span = uint64_t(1) << kdim;
            for (uint64_t g = 1; g < span; ++g) {
                x ^= kernel[uint64_t(__builtin_ctzll(g))];
                score[x] += add;
            }
        }
    }
};

}  // namespace detail

// One greedy covering run over a fixed coverable list with precomputed base
// scores; returns the picked dual-space indices in order.
namespace detail {
inline std::vector<uint64_t> greedy_run(const CosetScorer& scorer,
                                        const std::vector<uint32_t>& base_list,
                                        const std::vector<int64_t>& base_score,
                                        const std::vector<uint64_t>& cw, Rng rng) {
    std::vector<uint32_t> list = base_list;
    std::vector<int64_t> score = base_score;
    std::vector<uint64_t> picks;
    while (!list.empty()) {
        // Reservoir argmax: strict improvements reset, ties draw.
        int64_t best = 0;
        uint64_t pick = 0;
        uint64_t ties = 0;
        for (uint64_t x = 1; x < score.size(); ++x) {
            if (score[x] > best) {
                best = score[x];
                pick = x;
                ties = 1;
            } else if (score[x] == best && best > 0) {
                ++ties;
                if (rng.next_below(ties) == 0) pick = x;
            }
        }
        if (best <= 0) throw std::logic_error("greedy_run: no row covers a remaining subset");
        picks.push_back(pick);
        const uint64_t row = cw[pick];
        // Remove newly covered subsets and retract their score contributions.
        size_t keep = 0;
        for (size_t idx = 0; idx < list.size(); ++idx) {
            uint32_t s = list[idx];
            if (__builtin_popcountll(row & s) == 1) {
                scorer.apply(score, s, -1);
            } else {
                list[keep++] = s;
            }
        }
        list.resize(keep);
    }
    return picks;
}
}  // namespace detail

// Greedy covering construction.  Scores every dual codeword by the
// size-weighted number of coverable subsets it one-covers, picks a maximum
// (ties broken uniformly at random), removes what it covered, and repeats
// until nothing remains; basis rows are then appended if the picked rows do
// not already span the dual space.  The best of `restarts` runs (fewest
// rows, earliest run on ties) is returned.
inline GreedyResult greedy_extend(const LinearCode& code, uint32_t ell, uint64_t seed,
                                  uint32_t restarts = 10, unsigned threads = 0,
                                  uint64_t budget = kDefaultSubsetBudget) {
    const uint32_t n = code.n();
    if (restarts < 1) throw std::invalid_argument("greedy_extend: restarts must be >= 1");
    BinaryMatrix basis = row_basis(code.h);
    const uint32_t r = basis.rows();
    if (r == 0) throw std::invalid_argument("greedy_extend: zero-rank code");
    if (r > 22) throw std::invalid_argument("greedy_extend: dual space 2^r too large (r > 22)");
    if (ell > r) throw std::invalid_argument("greedy_extend: ell exceeds code rank");
    std::vector<uint32_t> list = coverable_masks(code.h, ell, budget);
    // Dual codewords indexed by basis-combination bits.
    std::vector<uint64_t> cw(uint64_t(1) << r, 0);
    for (uint64_t x = 1; x < cw.size(); ++x)
        cw[x] = cw[x & (x - 1)] ^ basis.row_word(uint32_t(__builtin_ctzll(x)));
    detail::CosetScorer scorer(basis);
    std::vector<int64_t> base_score(cw.size(), 0);
    for (uint32_t s : list) scorer.apply(base_score, s, +1);
    // Independent restarts (deterministic per restart index).
    unsigned nthreads = resolve_threads(threads);
    auto runs = parallel_map<std::vector<uint64_t>>(restarts, nthreads, [&](size_t rs) {
        return detail::greedy_run(scorer, list, base_score, cw, Rng(seed, rs));
    });
    uint32_t best_restart = 0;
    for (uint32_t rs = 1; rs < restarts; ++rs)
        if (runs[rs].size() < runs[best_restart].size()) best_restart = rs;
    const std::vector<uint64_t>& picks = runs[best_restart];
    GreedyResult out;
    out.ell = ell;
    out.seed = seed;
    out.restarts = restarts;
    out.best_restart = best_restart;
    out.greedy_rows = uint32_t(picks.size());
    for (const auto& run : runs) out.rows_per_restart.push_back(uint32_t(run.size()));
    BinaryMatrix hx(0, n);
    std::vector<uint64_t> wbasis;  // reduction basis of the rows appended so far
    auto try_insert = [&wbasis](uint64_t w) {
        for (uint64_t b : wbasis) w = std::min(w, w ^ b);
        if (w) wbasis.push_back(w);
        return w != 0;
    };
    auto append_word = [&hx, n](uint64_t w) {
        BinaryVector v(n);
        v.bits[0] = w;
        hx.append_row(v);
    };
    for (uint64_t x : picks) {
        append_word(cw[x]);
        try_insert(cw[x]);
    }
    // Rank completion from the basis.
    for (uint32_t b = 0; b < r && wbasis.size() < r; ++b) {
        if (try_insert(basis.row_word(b))) {
            append_word(basis.row_word(b));
            ++out.completion_rows;
        }
    }
    out.h = std::move(hx);
    return out;
}

// Number of coverable subsets of size <= ell that no row of `h_ext`
// one-covers; zero certifies the covering property.
inline uint64_t audit_uncovered(const BinaryMatrix& h_ext, const BinaryMatrix& h_code,
                                uint32_t ell, uint64_t budget = kDefaultSubsetBudget) {
    if (h_ext.cols() != h_code.cols())
        throw std::invalid_argument("audit_uncovered: column count mismatch");
    std::vector<uint32_t> list = coverable_masks(h_code, ell, budget);
    uint64_t missed = 0;
    for (uint32_t s : list) {
        bool covered = false;
        for (uint32_t rr = 0; rr < h_ext.rows() && !covered; ++rr)
            covered = __builtin_popcountll(h_ext.row_word(rr) & s) == 1;
        if (!covered) ++missed;
    }
    return missed;
}

}  // namespace stopred
