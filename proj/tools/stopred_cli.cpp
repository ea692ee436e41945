// stopred: stopping-redundancy toolkit for binary linear codes.
//
// Subcommands: bounds, spectrum, greedy, profile, ensemble, reproduce.
// Standard output stays machine-readable (text tables, or --json / --csv);
// progress and diagnostics go to standard error.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stopred/bigint.hpp"
#include "stopred/bitmat.hpp"
#include "stopred/bounds.hpp"
#include "stopred/code.hpp"
#include "stopred/decoder.hpp"
#include "stopred/estimator.hpp"
#include "stopred/greedy.hpp"
#include "stopred/serialize.hpp"
#include "stopred/stopping.hpp"
#include "stopred/subsets.hpp"

namespace {

using namespace stopred;

struct Global {
    std::string code = "builtin:golay";
    std::string format;  // empty: infer from file extension
    std::string out;     // empty: stdout
    bool as_json = false;
    bool as_csv = false;
    std::optional<uint64_t> seed;
    unsigned threads = 0;
    bool force = false;
};

uint64_t budget_of(const Global& g) {
    return g.force ? (uint64_t(1) << 62) : kDefaultSubsetBudget;
}

uint64_t resolve_seed(const Global& g) {
    if (g.seed) return *g.seed;
    std::random_device rd;
    uint64_t s = (uint64_t(rd()) << 32) ^ uint64_t(rd());
    std::cerr << "seed: " << s << "  (pass --seed " << s << " to replay)\n";
    return s;
}

LinearCode resolve_code(const Global& g) {
    if (g.code == "builtin:golay") return golay_extended();
    if (g.code.rfind("builtin:", 0) == 0)
        throw std::runtime_error("unknown builtin code: " + g.code);
    MatrixFormat fmt = g.format.empty() ? format_for_path(g.code) : parse_format(g.format);
    LinearCode c;
    c.h = load_matrix(g.code, fmt);
    c.name = g.code;
    return c;
}

void emit(const Global& g, const json& j, const std::string& csv, const std::string& text) {
    std::string payload;
    if (g.as_json) payload = j.dump(2) + "\n";
    else if (g.as_csv) payload = csv;
    else payload = text;
    if (!g.out.empty()) {
        write_text_file(g.out, payload);
        std::cerr << "wrote " << g.out << "\n";
    } else {
        std::cout << payload;
    }
}

// ------------------------------------------------------------- rendering ---

std::string text_bound_line(const BoundReport& b) {
    std::ostringstream os;
    os << b.name;
    if (b.ell) os << " ell=" << b.ell;
    os << ": " << to_string(b.value);
    if (b.has_real) os << "  (objective " << format_ld(b.real_value) << ")";
    if (b.name == "hierarchy_bound_xi1")
        os << "  [tau=" << b.witness.tau << " t*=" << b.witness.t_star
           << " kappa=" << b.witness.kappa_at_t_star << " delta=" << b.witness.delta << "]";
    if (b.approximate) os << "  [upper bound valid; t* not certified optimal]";
    os << "\n";
    return os.str();
}

std::string text_spectrum(const StoppingSpectrum& s) {
    std::ostringstream os;
    os << "# " << (s.coverable_only ? "coverable stopping sets" : "stopping sets")
       << (s.exact ? ", exact" : ", estimated") << "  n=" << s.n << "\n";
    os << "i\tcount\ttotal\n";
    for (uint32_t i = 1; i <= s.ell; ++i)
        os << i << '\t' << to_string(s.u[i]) << '\t' << to_string(binomial(s.n, i)) << "\n";
    return os.str();
}

std::string text_real_spectrum(const RealSpectrum& s) {
    std::ostringstream os;
    os << "# ensemble mean coverable stopping sets  n=" << s.n << "\n";
    os << "i\tmean_count\n";
    for (uint32_t i = 1; i <= s.ell; ++i) os << i << '\t' << format_ld(s.u[i]) << "\n";
    return os.str();
}

std::string text_estimate(const EstimationResult& e) {
    std::ostringstream os;
    os << "# upper confidence counts  n=" << e.n << " samples=" << e.samples
       << " seed=" << e.seed << " confidence=" << format_ld(e.confidence, 6) << "\n";
    os << "i\thits\tx_bar\tepsilon\tu_hat\ttotal\n";
    for (uint32_t i = 1; i <= e.ell; ++i)
        os << i << '\t' << e.hits[i] << '\t' << format_ld(e.x_bar[i], 6) << '\t'
           << format_ld(e.epsilon[i], 6) << '\t' << to_string(e.u_hat[i]) << '\t'
           << to_string(e.total[i]) << "\n";
    return os.str();
}

std::string text_profile(const PatternProfile& p) {
    std::ostringstream os;
    os << "# undecodable erasure patterns  decoder=" << decoder_name(p.decoder)
       << (p.exact ? " (exact)" : " (sampled)") << "  n=" << p.n << "\n";
    os << "w\tcount\ttotal\n";
    for (uint32_t w = 0; w <= p.w_max; ++w) {
        os << w << '\t' << format_ld((long double)p.psi[w], 17) << '\t'
           << to_string(binomial(p.n, w)) << "\n";
    }
    return os.str();
}

std::string text_compare(const CompareReport& r) {
    std::ostringstream os;
    os << "# iterative vs maximum-likelihood failures  n=" << r.n << " seed=" << r.seed << "\n";
    os << "w\ttotal\tmode\ttrials\titerative_fail\tml_fail\tdisagreements\n";
    for (const auto& row : r.rows)
        os << row.w << '\t' << to_string(row.total) << '\t'
           << (row.exhaustive ? "exhaustive" : "sampled") << '\t' << row.trials << '\t'
           << row.iterative_fail << '\t' << row.ml_fail << '\t' << row.disagreements << "\n";
    return os.str();
}

// ---------------------------------------------------------------- bounds ---

struct BoundsOpts {
    uint32_t n = 0, k = 0, d = 0;
    uint32_t ell = 0;
    bool all_ell = false;
    std::string tau;  // "", "m", or a small integer
    uint32_t w = 0;
    int64_t delta = -1;
    std::string rank_param = "r";  // r | m | both
};

void run_bounds(const Global& g, const BoundsOpts& o) {
    std::vector<BoundReport> reports;

    auto push_closed_forms = [&](uint32_t n, uint32_t r, uint32_t d, uint32_t k) {
        BoundReport e1;
        e1.name = "sv_bound";
        e1.value = sv_bound(r, d);
        e1.n = n; e1.k = k; e1.d = d; e1.rank_param = r;
        reports.push_back(e1);
        BoundReport e2;
        e2.name = "hs_bound";
        e2.value = hs_bound(n, d, r);
        e2.n = n; e2.k = k; e2.d = d; e2.rank_param = r;
        reports.push_back(e2);
    };

    if (o.n > 0 && g.code == "builtin:golay" && o.k > 0) {
        // Pure closed-form path: no matrix needed.
        if (o.d == 0) throw CLI::ValidationError("bounds", "--n/--k need --d");
        if (o.k >= o.n) throw CLI::ValidationError("bounds", "need k < n");
        push_closed_forms(o.n, o.n - o.k, o.d, o.k);
    } else {
        LinearCode c = resolve_code(g);
        uint32_t n = uint32_t(c.n());
        uint32_t r = uint32_t(c.rank_h());
        uint32_t mrows = uint32_t(c.m());
        if (o.d > 0) push_closed_forms(n, r, o.d, n - r);

        if (!o.tau.empty()) {
            uint32_t ell = o.ell ? o.ell : (o.d > 1 ? o.d - 1 : 0);
            if (ell == 0) throw CLI::ValidationError("bounds", "--tau needs --ell (or --d)");
            uint32_t tau_v = 0;
            if (o.tau == "m") tau_v = mrows;
            else tau_v = uint32_t(std::stoul(o.tau));
            StoppingSpectrum u;
            uint32_t rank_tau = 0;
            if (tau_v == mrows && tau_v > 2) {
                std::cerr << "enumerating coverable stopping sets up to size " << ell << "...\n";
                u = spectrum_exhaustive(c.h, ell, /*coverable_only=*/true, true, g.threads,
                                        budget_of(g));
                rank_tau = r;
            } else if (tau_v == 1) {
                uint32_t w = o.w ? o.w : uint32_t(c.h.row_weight(0));
                u = u_single_row(n, w, ell);
                rank_tau = 1;
            } else if (tau_v == 2) {
                uint32_t w = o.w ? o.w : uint32_t(c.h.row_weight(0));
                uint32_t delta;
                if (o.delta >= 0) {
                    delta = uint32_t(o.delta);
                } else {
                    delta = 0;
                    for (size_t col = 0; col < c.h.cols(); ++col)
                        delta += c.h.get(0, col) && c.h.get(1, col);
                }
                u = u_two_rows(n, w, delta, ell);
                BinaryMatrix two(2, c.h.cols());
                two.set_row(0, c.h.row(0));
                two.set_row(1, c.h.row(1));
                rank_tau = uint32_t(rank(two));
            } else {
                throw CLI::ValidationError(
                    "bounds", "--tau supports 1, 2, or the full row count (m)");
            }
            std::vector<uint32_t> rps;
            if (o.rank_param == "r") rps = {r};
            else if (o.rank_param == "m") rps = {mrows};
            else if (o.rank_param == "both") rps = {r, mrows};
            else throw CLI::ValidationError("bounds", "--rank-param must be r, m, or both");
            for (uint32_t rp : rps) reports.push_back(hierarchy_bound_xi1(u, rp, tau_v, rank_tau, ell));
        }

        if (o.all_ell || (o.ell > 0 && o.tau.empty())) {
            uint32_t ell_max = o.all_ell ? std::min<uint32_t>(r, n) : o.ell;
            std::cerr << "enumerating coverable stopping sets up to size " << ell_max << "...\n";
            StoppingSpectrum u = spectrum_exhaustive(c.h, ell_max, /*coverable_only=*/true, true,
                                                     g.threads, budget_of(g));
            uint32_t ell_lo = o.all_ell ? 1 : o.ell;
            for (uint32_t ell = ell_lo; ell <= ell_max; ++ell) {
                reports.push_back(hierarchy_bound_xi1(u, r, mrows, r, ell));
                reports.push_back(xi2_bound(u, r, ell));
            }
        }
    }

    if (reports.empty())
        throw CLI::ValidationError("bounds", "nothing to compute: pass --d, --tau, --ell or --all-ell");

    json j = json::array();
    for (const auto& b : reports) j.push_back(json_bound(b));
    std::string text;
    for (const auto& b : reports) text += text_bound_line(b);
    emit(g, j, csv_bounds(reports), text);
}

// -------------------------------------------------------------- spectrum ---

struct SpectrumOpts {
    uint32_t ell = 0;
    bool coverable = false;
    bool estimate = false;
    double samples = 0;
    std::vector<double> eps;
    double confidence = 0;
};

void run_spectrum(const Global& g, const SpectrumOpts& o) {
    LinearCode c = resolve_code(g);
    if (o.ell < 1) throw CLI::ValidationError("spectrum", "--ell must be >= 1");
    if (o.estimate) {
        if (o.samples < 1) throw CLI::ValidationError("spectrum", "--estimate needs --N >= 1");
        uint64_t seed = resolve_seed(g);
        std::vector<long double> eps;
        if (o.confidence > 0) {
            eps.push_back(epsilon_for_confidence((long double)o.confidence, o.ell));
        } else if (!o.eps.empty()) {
            for (double e : o.eps) eps.push_back((long double)e);
        } else {
            eps.push_back(0.001L);
        }
        std::cerr << "sampling " << uint64_t(o.samples) << " subsets per size...\n";
        EstimationResult e = estimate_spectrum(c.h, o.ell, uint64_t(o.samples), seed, eps, g.threads);
        emit(g, json_estimate(e), csv_estimate(e), text_estimate(e));
        return;
    }
    std::cerr << "enumerating subsets up to size " << o.ell << "...\n";
    StoppingSpectrum s = spectrum_exhaustive(c.h, o.ell, o.coverable, true, g.threads, budget_of(g));
    emit(g, json_spectrum(s), csv_spectrum(s), text_spectrum(s));
}

// ---------------------------------------------------------------- greedy ---

struct GreedyOpts {
    uint32_t ell = 0;
    uint32_t restarts = 10;
    bool no_audit = false;
};

void run_greedy(const Global& g, const GreedyOpts& o) {
    LinearCode c = resolve_code(g);
    if (o.ell < 1) throw CLI::ValidationError("greedy", "--ell must be >= 1");
    uint64_t seed = resolve_seed(g);
    std::cerr << "greedy covering: ell=" << o.ell << " restarts=" << o.restarts << "...\n";
    GreedyResult res = greedy_extend(c, o.ell, seed, o.restarts, g.threads, budget_of(g));
    json j = json_greedy(res);
    if (!g.out.empty()) {
        MatrixFormat fmt = g.format.empty() ? format_for_path(g.out) : parse_format(g.format);
        save_matrix(g.out, res.h, fmt);
        std::cerr << "wrote " << g.out << " (" << res.h.rows() << " rows)\n";
        j["matrix_path"] = g.out;
        // Round-trip before auditing: the audit runs on what was written.
        res.h = load_matrix(g.out, fmt);
    }
    if (!o.no_audit) {
        std::cerr << "auditing coverage...\n";
        uint64_t missed = audit_uncovered(res.h, c.h, o.ell, budget_of(g));
        j["audit_uncovered"] = missed;
        if (missed > 0) std::cerr << "WARNING: " << missed << " coverable sets left uncovered\n";
    }
    std::ostringstream text;
    text << "rows: " << res.h.rows() << " (greedy " << res.greedy_rows << " + completion "
         << res.completion_rows << ")\nbest restart: " << res.best_restart << " of " << res.restarts
         << "\nrows per restart:";
    for (uint32_t v : res.rows_per_restart) text << ' ' << v;
    text << "\nseed: " << res.seed << "\n";
    if (j.contains("audit_uncovered"))
        text << "audit: " << (j["audit_uncovered"].get<uint64_t>() == 0 ? "clean" : "INCOMPLETE")
             << "\n";
    // The run log goes to stdout; --out already received the matrix.
    std::string payload = g.as_json || !g.out.empty() ? j.dump(2) + "\n"
                          : g.as_csv               ? std::string("key,value\nrows,") +
                                            std::to_string(res.h.rows()) + "\n"
                                                    : text.str();
    std::cout << payload;
}

// --------------------------------------------------------------- profile ---

struct ProfileOpts {
    std::string decoder = "it";
    uint32_t w_max = 0;       // 0: full length
    int64_t exhaustive_to = -1;
    double samples = 0;
    bool fer_curve = false;
    std::string p_grid = "0.05:0.5:0.05";
    std::string compare;      // "it,ml"
    std::string matrix;       // extended matrix for --compare
    uint32_t w_min = 1;
};

void run_profile(const Global& g, const ProfileOpts& o) {
    LinearCode c = resolve_code(g);
    uint32_t n = uint32_t(c.n());
    uint32_t w_max = o.w_max ? std::min(o.w_max, n) : n;

    if (!o.compare.empty()) {
        if (o.compare != "it,ml" && o.compare != "ml,it")
            throw CLI::ValidationError("profile", "--compare supports exactly: it,ml");
        BinaryMatrix h_ext = c.h;
        if (!o.matrix.empty()) {
            MatrixFormat fmt = g.format.empty() ? format_for_path(o.matrix) : parse_format(g.format);
            h_ext = load_matrix(o.matrix, fmt);
            if (h_ext.cols() != c.h.cols())
                throw std::runtime_error("--matrix column count differs from --code");
        }
        uint64_t seed = resolve_seed(g);
        uint32_t exh_to = o.exhaustive_to >= 0 ? uint32_t(o.exhaustive_to) : 8;
        uint64_t samples = o.samples > 0 ? uint64_t(o.samples) : 1000000;
        std::cerr << "comparing decoders: w=" << o.w_min << ".." << w_max << ", exhaustive to "
                  << exh_to << ", " << samples << " samples per sampled weight...\n";
        CompareReport rep = compare_decoders(h_ext, o.w_min, w_max, exh_to, samples, seed, g.threads);
        emit(g, json_compare(rep), csv_compare(rep), text_compare(rep));
        return;
    }

    DecoderKind dec;
    if (o.decoder == "it" || o.decoder == "iterative") dec = DecoderKind::iterative;
    else if (o.decoder == "ml") dec = DecoderKind::ml;
    else throw CLI::ValidationError("profile", "--decoder must be it or ml");

    PatternProfile prof;
    if (o.exhaustive_to >= 0 && uint32_t(o.exhaustive_to) < std::min<uint32_t>(w_max, uint32_t(rank(c.h)))) {
        // Exhaustive up to the requested weight, sampled above it (weights
        // above the matrix rank short-circuit inside the library).
        uint32_t split = uint32_t(o.exhaustive_to);
        if (o.samples < 1)
            throw CLI::ValidationError("profile", "--exhaustive-to below rank needs --samples");
        uint64_t seed = resolve_seed(g);
        std::cerr << "profiling: exhaustive to w=" << split << ", sampled to w=" << w_max << "...\n";
        PatternProfile lo = undecodable_profile(c.h, dec, split, ProfileMode::exhaustive, 0, 0,
                                                g.threads, budget_of(g));
        PatternProfile hi = undecodable_profile(c.h, dec, w_max, ProfileMode::sampled,
                                                uint64_t(o.samples), seed, g.threads, budget_of(g));
        prof = hi;
        prof.exact = false;
        for (uint32_t w = 0; w <= split; ++w) {
            prof.psi[w] = lo.psi[w];
            prof.successes[w] = 0;
            prof.trials[w] = 0;
        }
    } else {
        std::cerr << "profiling decoder=" << o.decoder << " exhaustively to w=" << w_max << "...\n";
        prof = undecodable_profile(c.h, dec, w_max, ProfileMode::exhaustive, 0, 0, g.threads,
                                   budget_of(g));
    }

    if (o.fer_curve) {
        double lo, hi, step;
        char c1, c2;
        std::istringstream ps(o.p_grid);
        if (!(ps >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':')
            throw CLI::ValidationError("profile", "--p-grid expects lo:hi:step");
        std::string csv = csv_fer(prof, lo, hi, step);
        json j{{"type", "fer"}, {"decoder", decoder_name(prof.decoder)}, {"rows", json::array()}};
        for (double p = lo; p <= hi + 1e-12; p += step)
            j["rows"].push_back({{"p", p}, {"fer", fer(prof, p)}});
        emit(g, j, csv, csv);
        return;
    }
    emit(g, json_profile(prof), csv_profile(prof), text_profile(prof));
}

// -------------------------------------------------------------- ensemble ---

struct EnsembleOpts {
    uint32_t n = 0;
    uint32_t m = 0;
    std::string rate;
    uint32_t J = 0, K = 0;
    uint32_t ell = 0;
    bool analytic = false;
    bool estimate = false;
    double samples = 0;
    std::vector<double> eps;
    double confidence = 0.95;
};

uint32_t rate_to_rows(uint32_t n, const std::string& rate) {
    auto slash = rate.find('/');
    if (slash == std::string::npos) throw CLI::ValidationError("ensemble", "--rate expects P/Q");
    uint64_t p = std::stoull(rate.substr(0, slash));
    uint64_t q = std::stoull(rate.substr(slash + 1));
    if (q == 0 || p >= q) throw CLI::ValidationError("ensemble", "--rate must be in (0,1)");
    if ((uint64_t(n) * p) % q != 0)
        throw CLI::ValidationError("ensemble", "--rate does not divide n evenly");
    return n - uint32_t(uint64_t(n) * p / q);
}

void run_ensemble(const Global& g, const EnsembleOpts& o, EnsembleKind kind) {
    if (o.n < 1) throw CLI::ValidationError("ensemble", "--n is required");
    EnsembleSpec spec;
    spec.kind = kind;
    spec.n = o.n;
    uint32_t rows;
    json extra;
    if (kind == EnsembleKind::sre) {
        if (o.m > 0) spec.m = o.m;
        else if (!o.rate.empty()) spec.m = rate_to_rows(o.n, o.rate);
        else throw CLI::ValidationError("ensemble", "sre needs --m or --rate");
        rows = spec.m;
    } else {
        if (o.J < 1 || o.K < 1) throw CLI::ValidationError("ensemble", "gallager needs --J and --K");
        spec.j = o.J;
        spec.k = o.K;
        rows = ensemble_rows(spec);
        uint64_t rmax = gallager_r_max(o.n, o.J, o.K);
        extra["r_max"] = rmax;
        std::cerr << "gallager ensemble: " << rows << " rows, rank <= r_max = " << rmax << "\n";
    }
    uint32_t ell = o.ell;
    if (ell == 0)
        ell = kind == EnsembleKind::sre ? rows : uint32_t(gallager_r_max(o.n, o.J, o.K));
    ell = std::min(ell, o.n);

    if (o.analytic) {
        if (kind != EnsembleKind::sre)
            throw CLI::ValidationError("ensemble", "--analytic is available for sre only");
        std::cerr << "computing mean spectrum and bound: n=" << o.n << " m=" << rows
                  << " ell=" << ell << "...\n";
        RealSpectrum s = sre_mean_spectrum(o.n, rows, ell);
        BoundReport b = ensemble_bound(s, rows, ell);
        json j{{"type", "ensemble_analytic"},
               {"n", o.n},
               {"m", rows},
               {"mean_spectrum", json_real_spectrum(s)},
               {"bound", json_bound(b)}};
        std::string text = text_real_spectrum(s) + text_bound_line(b);
        emit(g, j, csv_real_spectrum(s) + csv_bounds({b}), text);
        return;
    }
    if (o.estimate) {
        if (o.samples < 1) throw CLI::ValidationError("ensemble", "--estimate needs --N >= 1");
        uint64_t seed = resolve_seed(g);
        std::vector<long double> eps;
        if (!o.eps.empty()) for (double e : o.eps) eps.push_back((long double)e);
        else eps.push_back(epsilon_for_confidence((long double)o.confidence, ell));
        std::cerr << "sampling " << uint64_t(o.samples) << " (matrix, subset) pairs per size...\n";
        EstimationResult e =
            estimate_ensemble_spectrum(spec, ell, uint64_t(o.samples), seed, eps, g.threads);
        json j = json_estimate(e);
        j["type"] = "ensemble_estimate";
        for (auto& [k, v] : extra.items()) j[k] = v;
        std::string text = text_estimate(e);
        if (kind == EnsembleKind::sre) {
            // Bound on the estimated upper-confidence counts (floored).
            RealSpectrum s;
            s.n = o.n;
            s.ell = ell;
            s.u.assign(ell + 1, 0.0L);
            for (uint32_t i = 1; i <= ell; ++i) s.u[i] = ratio_ld(e.u_hat[i], Count(1));
            BoundReport b = ensemble_bound(s, rows, ell);
            b.name = "ensemble_bound_estimated";
            j["bound"] = json_bound(b);
            text += text_bound_line(b);
        } else if (extra.contains("r_max")) {
            text += "r_max: " + std::to_string(extra["r_max"].get<uint64_t>()) + "\n";
        }
        emit(g, j, csv_estimate(e), text);
        return;
    }
    throw CLI::ValidationError("ensemble", "pass --analytic or --estimate");
}

// ------------------------------------------------------------- reproduce ---

struct Tally {
    int pass = 0, fail = 0, info = 0;
    std::ostringstream log;

    void check(const std::string& label, const std::string& computed, const std::string& expected) {
        bool ok = computed == expected;
        (ok ? pass : fail)++;
        line(ok ? "PASS" : "FAIL", label, computed, expected);
    }
    void check_real(const std::string& label, long double computed, const std::string& printed,
                    long double tol) {
        long double want = std::strtold(printed.c_str(), nullptr);
        bool ok = std::fabs((double)(computed - want)) <= (double)tol;
        (ok ? pass : fail)++;
        line(ok ? "PASS" : "FAIL", label, format_ld(computed), printed);
    }
    void note(const std::string& label, const std::string& computed, const std::string& expected) {
        ++info;
        line("INFO", label, computed, expected);
    }
    void line(const char* status, const std::string& label, const std::string& computed,
              const std::string& expected) {
        std::ostringstream os;
        os << status << "  " << label << ": got " << computed;
        if (!expected.empty()) os << ", published " << expected;
        os << "\n";
        std::cout << os.str();
        log << os.str();
    }
};

json load_expected(const std::string& dir, const std::string& name) {
    std::ifstream in(dir + "/" + name);
    if (!in) throw std::runtime_error("cannot open expected data " + dir + "/" + name +
                                      " (pass --data DIR)");
    json j;
    in >> j;
    return j;
}

// Tolerance implied by a printed decimal: one unit in its last digit.
long double printed_ulp(const std::string& s) {
    int decimals = 0, exp10 = 0;
    auto epos = s.find_first_of("eE");
    std::string mant = epos == std::string::npos ? s : s.substr(0, epos);
    if (epos != std::string::npos) exp10 = std::stoi(s.substr(epos + 1));
    auto dot = mant.find('.');
    if (dot != std::string::npos) decimals = int(mant.size() - dot - 1);
    return powl(10.0L, (long double)(exp10 - decimals));
}

void reproduce_table1(const Global& g, const json& exp, Tally& t) {
    std::cout << "--- closed-form and single-matrix bounds ---\n";
    for (const auto& row : exp.at("rows")) {
        std::string code = row.at("code");
        uint32_t n = row.at("n"), d = row.at("d"), r = row.at("r");
        t.check(code + ".sv_bound", to_string(sv_bound(r, d)), row.at("eq1"));
        t.check(code + ".hs_bound", std::to_string(hs_bound(n, d, r)), row.at("eq2"));
        uint32_t w = row.at("tau1_w");
        StoppingSpectrum u1 = u_single_row(n, w, d - 1);
        if (row.contains("xi1_tau1")) {
            BoundReport b = hierarchy_bound_xi1(u1, r, 1, 1, d - 1);
            t.check(code + ".xi1[tau=1]", to_string(b.value), row.at("xi1_tau1"));
        } else if (row.contains("xi1_tau1_published")) {
            uint32_t mrows = row.value("rows", r);
            std::cerr << "computing xi1 tau=1 for " << code << " (may take a moment)...\n";
            BoundReport br = hierarchy_bound_xi1(u1, r, 1, 1, d - 1);
            std::string got = to_string(br.value) + " (rank " + std::to_string(r) + ")";
            if (mrows != r) {
                BoundReport bm = hierarchy_bound_xi1(u1, mrows, 1, 1, d - 1);
                got += " / " + to_string(bm.value) + " (rows " + std::to_string(mrows) + ")";
            }
            t.note(code + ".xi1[tau=1]", got, row.at("xi1_tau1_published"));
        }
        if (row.contains("xi1_tau_m")) {
            LinearCode c = golay_extended();
            StoppingSpectrum u = spectrum_exhaustive(c.h, d - 1, true, true, g.threads, budget_of(g));
            BoundReport b = hierarchy_bound_xi1(u, r, uint32_t(c.m()), r, d - 1);
            t.check(code + ".xi1[tau=m]", to_string(b.value), row.at("xi1_tau_m"));
        } else if (row.contains("xi1_tau_m_published")) {
            t.note(code + ".xi1[tau=m]", "not computed (needs this code's exhaustive spectrum)",
                   row.at("xi1_tau_m_published"));
        }
    }
}

void reproduce_table2(const Global& g, const json& exp, Tally& t) {
    std::cout << "--- hierarchy bounds from exact and estimated spectra ---\n";
    LinearCode c = golay_extended();
    uint32_t r = uint32_t(c.rank_h()), mrows = uint32_t(c.m());
    std::cerr << "enumerating coverable stopping sets up to size 12 (~9.7e6 subsets)...\n";
    StoppingSpectrum u = spectrum_exhaustive(c.h, 12, true, true, g.threads, budget_of(g));
    const auto& exact_u = exp.at("exact_u");
    for (uint32_t i = 1; i <= 12; ++i)
        t.check("exact_u[" + std::to_string(i) + "]", to_string(u.u[i]), exact_u.at(i - 1));
    auto check_columns = [&](const StoppingSpectrum& spec, const json& xi1_col, const json& xi2_col,
                             const std::string& tag) {
        for (uint32_t ell = 1; ell <= 12; ++ell) {
            BoundReport b1 = hierarchy_bound_xi1(spec, r, mrows, r, ell);
            t.check(tag + ".xi1[" + std::to_string(ell) + "]", to_string(b1.value),
                    xi1_col.at(ell - 1));
            BoundReport b2 = xi2_bound(spec, r, ell);
            t.check(tag + ".xi2[" + std::to_string(ell) + "]", to_string(b2.value),
                    xi2_col.at(ell - 1));
        }
    };
    check_columns(u, exp.at("exact_xi1"), exp.at("exact_xi2"), "exact");

    for (const char* block : {"n1e3", "n1e6"}) {
        const json& blk = exp.at(block);
        uint64_t N = blk.at("N");
        long double eps = std::strtold(exp.at("epsilon").get<std::string>().c_str(), nullptr);
        StoppingSpectrum uh;
        uh.n = 24;
        uh.ell = 12;
        uh.coverable_only = true;
        uh.exact = false;
        uh.u.assign(13, 0);
        for (uint32_t i = 1; i <= 12; ++i) {
            long double xb =
                std::strtold(blk.at("x_bar").at(i - 1).get<std::string>().c_str(), nullptr);
            uh.u[i] = upper_confidence_count(xb, N, binomial(24, i), eps);
            t.check(std::string(block) + ".u_hat[" + std::to_string(i) + "]", to_string(uh.u[i]),
                    blk.at("u_hat").at(i - 1));
        }
        check_columns(uh, blk.at("xi1"), blk.at("xi2"), block);
    }
}

void reproduce_table4(const Global& g, const json& exp, Tally& t) {
    std::cout << "--- undecodable erasure patterns (original matrix and ml) ---\n";
    LinearCode c = golay_extended();
    uint32_t n = uint32_t(c.n());
    std::cerr << "profiling iterative decoder over all pattern weights...\n";
    PatternProfile ph = undecodable_profile(c.h, DecoderKind::iterative, n, ProfileMode::exhaustive,
                                            0, 0, g.threads, budget_of(g));
    std::cerr << "profiling maximum-likelihood decoder over all pattern weights...\n";
    PatternProfile pml = undecodable_profile(c.h, DecoderKind::ml, n, ProfileMode::exhaustive, 0, 0,
                                             g.threads, budget_of(g));
    auto cell = [](const PatternProfile& p, uint32_t w) {
        return to_string(Count((long long)p.psi[w]));
    };
    const auto& psi_h = exp.at("psi_h");
    const auto& psi_ml = exp.at("psi_ml");
    for (uint32_t w = 0; w <= 3; ++w) {
        t.check("psi_h[" + std::to_string(w) + "]", cell(ph, w), "0");
        t.check("psi_ml[" + std::to_string(w) + "]", cell(pml, w), "0");
    }
    for (uint32_t w = 4; w <= 12; ++w) {
        t.check("psi_h[" + std::to_string(w) + "]", cell(ph, w), psi_h.at(w - 4));
        t.check("psi_ml[" + std::to_string(w) + "]", cell(pml, w), psi_ml.at(w - 4));
    }
    for (uint32_t w = 13; w <= n; ++w) {
        // Every pattern wider than the rank defeats both decoders, so the
        // computed column is C(24, w); the published table prints C(23, w)
        // for the iterative row, which cannot be right for w = 24 (the
        // all-erased pattern is undecodable yet C(23,24) = 0).
        t.note("psi_h[" + std::to_string(w) + "]", cell(ph, w) + " = C(24," + std::to_string(w) + ")",
               to_string(binomial(23, w)) + " = C(23," + std::to_string(w) + ") as printed");
        t.check("psi_ml[" + std::to_string(w) + "]", cell(pml, w), to_string(binomial(24, w)));
    }
    if (exp.contains("intermediate"))
        for (const auto& [name, vals] : exp.at("intermediate").items()) {
            std::string joined;
            for (const auto& v : vals) joined += (joined.empty() ? "" : ",") + v.get<std::string>();
            t.note("psi_" + name + "[w=8..12]", "not recomputed (randomized construction)", joined);
        }
}

void reproduce_table5(const Global&, const json& exp, Tally& t) {
    std::cout << "--- ensemble-average bounds ---\n";
    for (const auto& row : exp.at("rows")) {
        uint32_t n = row.at("n"), m = row.at("m");
        std::string rate = row.at("rate");
        std::string printed = row.at("rho_m");
        std::cerr << "ensemble bound n=" << n << " rate=" << rate << " (m=" << m << ")...\n";
        RealSpectrum s = sre_mean_spectrum(n, m, m);
        BoundReport b = ensemble_bound(s, m, m);
        std::string label = "rho_m[n=" + std::to_string(n) + ",R=" + rate + "]";
        long double tol = n <= 30 ? printed_ulp(printed)
                                  : 5e-4L * std::strtold(printed.c_str(), nullptr);
        t.check_real(label, b.real_value, printed, tol);
        long double eps_pct = 100.0L * (1.0L - powl(0.95L, 1.0L / (long double)m));
        t.note("epsilon_pct[n=" + std::to_string(n) + ",R=" + rate + "]", format_ld(eps_pct, 3),
               row.value("eps_pct", std::string()));
        if (row.contains("rho_hat_published"))
            t.note("rho_hat[n=" + std::to_string(n) + ",R=" + rate + "]",
                   "not recomputed (randomized estimate)", row.at("rho_hat_published"));
    }
}

struct ReproduceOpts {
    std::vector<int> tables;
    std::string data_dir = "data/expected";
};

int run_reproduce(const Global& g, const ReproduceOpts& o) {
    std::vector<int> tables = o.tables.empty() ? std::vector<int>{1, 2, 4, 5} : o.tables;
    Tally t;
    for (int tbl : tables) {
        switch (tbl) {
            case 1: reproduce_table1(g, load_expected(o.data_dir, "table1.json"), t); break;
            case 2: reproduce_table2(g, load_expected(o.data_dir, "table2.json"), t); break;
            case 4: reproduce_table4(g, load_expected(o.data_dir, "table4.json"), t); break;
            case 5: reproduce_table5(g, load_expected(o.data_dir, "table5.json"), t); break;
            default: throw CLI::ValidationError("reproduce", "--table must be one of 1,2,4,5");
        }
    }
    std::ostringstream sum;
    sum << "summary: " << t.pass << " pass, " << t.fail << " fail, " << t.info << " info\n";
    std::cout << sum.str();
    if (!g.out.empty()) write_text_file(g.out, t.log.str() + sum.str());
    return t.fail == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stopping-redundancy bounds, spectra, and decoder profiles for binary linear codes"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    uint64_t seed_v = 0;
    app.add_option("--code", g.code, "builtin:golay or a parity-check matrix file");
    app.add_option("--format", g.format, "matrix file format: dense or alist");
    app.add_option("--out", g.out, "write output to this file");
    auto* jf = app.add_flag("--json", g.as_json, "emit JSON");
    app.add_flag("--csv", g.as_csv, "emit CSV")->excludes(jf);
    auto* seed_opt = app.add_option("--seed", seed_v, "RNG seed (default: random, printed)");
    app.add_option("--threads", g.threads, "worker threads (0 = auto; env STOPRED_THREADS)");
    app.add_flag("--force", g.force, "raise enumeration work budgets");

    BoundsOpts bo;
    auto* cb = app.add_subcommand("bounds", "closed-form and hierarchy upper bounds");
    cb->add_option("--n", bo.n, "block length (closed-form path)");
    cb->add_option("--k", bo.k, "dimension (closed-form path)");
    cb->add_option("--d", bo.d, "minimum distance");
    cb->add_option("--ell", bo.ell, "hierarchy level");
    cb->add_flag("--all-ell", bo.all_ell, "all levels 1..rank from the exact spectrum");
    cb->add_option("--tau", bo.tau, "starting rows: 1, 2, or m (all rows)");
    cb->add_option("--w", bo.w, "row weight override for tau = 1 or 2");
    cb->add_option("--delta", bo.delta, "row overlap override for tau = 2");
    cb->add_option("--rank-param", bo.rank_param, "survival-factor rank: r, m, or both");

    SpectrumOpts so;
    auto* cs = app.add_subcommand("spectrum", "stopping-set counts by size");
    cs->add_option("--ell", so.ell, "largest set size")->required();
    cs->add_flag("--coverable", so.coverable, "count only coverable stopping sets");
    cs->add_flag("--estimate", so.estimate, "Monte-Carlo upper confidence counts");
    cs->add_option("--N", so.samples, "samples per size for --estimate");
    cs->add_option("--eps", so.eps, "per-size failure probabilities");
    cs->add_option("--confidence", so.confidence, "joint confidence target, e.g. 0.95");

    GreedyOpts go;
    auto* cg = app.add_subcommand("greedy", "build a redundant parity-check matrix by covering");
    cg->add_option("--ell", go.ell, "cover all coverable sets up to this size")->required();
    cg->add_option("--restarts", go.restarts, "random restarts (default 10)");
    cg->add_flag("--no-audit", go.no_audit, "skip the final coverage audit");

    ProfileOpts po;
    auto* cp = app.add_subcommand("profile", "undecodable-pattern counts and FER curves");
    cp->add_option("--decoder", po.decoder, "it (iterative) or ml");
    cp->add_option("--w-max", po.w_max, "largest pattern weight (default n)");
    cp->add_option("--exhaustive-to", po.exhaustive_to, "exhaustive up to this weight, sampled above");
    cp->add_option("--samples", po.samples, "samples per sampled weight");
    cp->add_flag("--fer", po.fer_curve, "emit FER(p) over --p-grid");
    cp->add_option("--p-grid", po.p_grid, "erasure probability grid lo:hi:step");
    cp->add_option("--compare", po.compare, "compare decoders: it,ml");
    cp->add_option("--matrix", po.matrix, "extended parity-check matrix for --compare");
    cp->add_option("--w-min", po.w_min, "smallest pattern weight for --compare");

    EnsembleOpts eo;
    auto* ce = app.add_subcommand("ensemble", "random-ensemble spectra and bounds");
    ce->require_subcommand(1);
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", eo.n, "block length")->required();
        sub->add_option("--ell", eo.ell, "largest set size (default: rows / r_max)");
        sub->add_flag("--analytic", eo.analytic, "exact mean spectrum and bound (sre only)");
        sub->add_flag("--estimate", eo.estimate, "Monte-Carlo estimate");
        sub->add_option("--N", eo.samples, "samples per size for --estimate");
        sub->add_option("--eps", eo.eps, "per-size failure probabilities");
        sub->add_option("--confidence", eo.confidence, "joint confidence target (default 0.95)");
    };
    auto* ce_sre = ce->add_subcommand("sre", "i.i.d. fair-coin matrices");
    add_common(ce_sre);
    ce_sre->add_option("--m", eo.m, "rows");
    ce_sre->add_option("--rate", eo.rate, "design rate P/Q (rows = n - nP/Q)");
    auto* ce_gal = ce->add_subcommand("gallager", "regular (J,K) constructions");
    add_common(ce_gal);
    ce_gal->add_option("--J", eo.J, "column degree");
    ce_gal->add_option("--K", eo.K, "row degree");

    ReproduceOpts ro;
    auto* cr = app.add_subcommand("reproduce", "recompute published tables and diff against expected data");
    cr->add_option("--table", ro.tables, "tables to run (1,2,4,5; default all)");
    cr->add_option("--data", ro.data_dir, "expected-data directory (default data/expected)");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) g.seed = seed_v;

    try {
        if (app.got_subcommand(cb)) run_bounds(g, bo);
        else if (app.got_subcommand(cs)) run_spectrum(g, so);
        else if (app.got_subcommand(cg)) run_greedy(g, go);
        else if (app.got_subcommand(cp)) run_profile(g, po);
        else if (app.got_subcommand(ce)) {
            run_ensemble(g, eo, ce->got_subcommand(ce_sre) ? EnsembleKind::sre
                                                           : EnsembleKind::gallager);
        } else if (app.got_subcommand(cr)) {
            return run_reproduce(g, ro);
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
