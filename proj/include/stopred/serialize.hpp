#pragma once

// JSON and CSV emitters for the library's result types.  JSON keeps exact
// counts as decimal strings (they routinely exceed 64 bits); CSV column
// order is part of the public contract and must stay stable.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stopred/bigint.hpp"
#include "stopred/bounds.hpp"
#include "stopred/decoder.hpp"
#include "stopred/estimator.hpp"
#include "stopred/greedy.hpp"
#include "stopred/stopping.hpp"

namespace stopred {

using json = nlohmann::json;

// Shortest round-trippable-ish text for a long double (default 12
// significant digits covers every table we print).
inline std::string format_ld(long double v, int sig = 12) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*Lg", sig, v);
    return std::string(buf);
}

inline const char* decoder_name(DecoderKind k) {
    return k == DecoderKind::iterative ? "iterative" : "ml";
}

// ---------------------------------------------------------------- JSON ---

inline json json_spectrum(const StoppingSpectrum& s) {
    json rows = json::array();
    for (uint32_t i = 1; i <= s.ell; ++i)
        rows.push_back({{"i", i},
                        {"count", to_string(s.u[i])},
                        {"total", to_string(binomial(s.n, i))}});
    return json{{"type", "spectrum"},
                {"n", s.n},
                {"ell", s.ell},
                {"coverable_only", s.coverable_only},
                {"exact", s.exact},
                {"rows", rows}};
}

inline json json_real_spectrum(const RealSpectrum& s) {
    json rows = json::array();
    for (uint32_t i = 1; i <= s.ell; ++i)
        rows.push_back({{"i", i}, {"mean_count", format_ld(s.u[i])}});
    return json{{"type", "mean_spectrum"}, {"n", s.n}, {"ell", s.ell}, {"rows", rows}};
}

inline json json_bound(const BoundReport& b) {
    json j{{"type", "bound"},
           {"name", b.name},
           {"value", to_string(b.value)},
           {"approximate", b.approximate}};
    if (b.has_real) j["real_value"] = format_ld(b.real_value);
    j["witness"] = {{"tau", b.witness.tau},
                    {"t_star", b.witness.t_star},
                    {"kappa_at_t_star", b.witness.kappa_at_t_star},
                    {"delta", b.witness.delta}};
    if (b.n) j["n"] = b.n;
    if (b.k) j["k"] = b.k;
    if (b.d) j["d"] = b.d;
    if (b.ell) j["ell"] = b.ell;
    if (b.rank_param) j["rank_param"] = b.rank_param;
    return j;
}

inline json json_profile(const PatternProfile& p) {
    json rows = json::array();
    for (uint32_t w = 0; w <= p.w_max; ++w) {
        json row{{"w", w},
                 {"count", p.psi[w]},
                 {"total", to_string(binomial(p.n, w))}};
        if (!p.trials.empty()) {
            row["successes"] = p.successes[w];
            row["trials"] = p.trials[w];
        }
        rows.push_back(std::move(row));
    }
    json j{{"type", "profile"},
           {"n", p.n},
           {"w_max", p.w_max},
           {"decoder", decoder_name(p.decoder)},
           {"exact", p.exact},
           {"rows", rows}};
    if (!p.trials.empty()) j["seed"] = p.seed;
    return j;
}

inline json json_estimate(const EstimationResult& e) {
    json rows = json::array();
    for (uint32_t i = 1; i <= e.ell; ++i)
        rows.push_back({{"i", i},
                        {"total", to_string(e.total[i])},
                        {"hits", e.hits[i]},
                        {"x_bar", format_ld(e.x_bar[i])},
                        {"epsilon", format_ld(e.epsilon[i])},
                        {"u_hat", to_string(e.u_hat[i])}});
    return json{{"type", "estimate"},
                {"n", e.n},
                {"ell", e.ell},
                {"samples", e.samples},
                {"seed", e.seed},
                {"confidence", format_ld(e.confidence)},
                {"rows", rows}};
}

inline json json_compare(const CompareReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"w", row.w},
                        {"total", to_string(row.total)},
                        {"exhaustive", row.exhaustive},
                        {"trials", row.trials},
                        {"iterative_fail", row.iterative_fail},
                        {"ml_fail", row.ml_fail},
                        {"disagreements", row.disagreements}});
    return json{{"type", "compare"}, {"n", r.n}, {"seed", r.seed}, {"rows", rows}};
}

inline json json_greedy(const GreedyResult& g) {
    return json{{"type", "greedy"},
                {"n", (uint32_t)g.h.cols()},
                {"rows", (uint32_t)g.h.rows()},
                {"ell", g.ell},
                {"seed", g.seed},
                {"restarts", g.restarts},
                {"best_restart", g.best_restart},
                {"greedy_rows", g.greedy_rows},
                {"completion_rows", g.completion_rows},
                {"rows_per_restart", g.rows_per_restart}};
}

// ----------------------------------------------------------------- CSV ---

inline std::string csv_spectrum(const StoppingSpectrum& s) {
    std::string out = "i,count,total,exact\n";
    for (uint32_t i = 1; i <= s.ell; ++i) {
        out += std::to_string(i) + ',' + to_string(s.u[i]) + ',' +
               to_string(binomial(s.n, i)) + ',' + (s.exact ? '1' : '0') + '\n';
    }
    return out;
}

inline std::string csv_real_spectrum(const RealSpectrum& s) {
    std::string out = "i,mean_count\n";
    for (uint32_t i = 1; i <= s.ell; ++i)
        out += std::to_string(i) + ',' + format_ld(s.u[i]) + '\n';
    return out;
}

inline std::string csv_profile(const PatternProfile& p) {
    std::string out = "w,count,total,exact\n";
    for (uint32_t w = 0; w <= p.w_max; ++w) {
        out += std::to_string(w) + ',' + format_ld((long double)p.psi[w], 17) + ',' +
               to_string(binomial(p.n, w)) + ',' + (p.exact ? '1' : '0') + '\n';
    }
    return out;
}

inline std::string csv_bounds(const std::vector<BoundReport>& bounds) {
    std::string out = "name,ell,value,real_value,approximate,tau,t_star,kappa,delta\n";
    for (const auto& b : bounds) {
        out += b.name + ',' + std::to_string(b.ell) + ',' + to_string(b.value) + ',';
        out += (b.has_real ? format_ld(b.real_value) : std::string());
        out += ',' + std::string(b.approximate ? "1" : "0") + ',' +
               std::to_string(b.witness.tau) + ',' + std::to_string(b.witness.t_star) + ',' +
               std::to_string(b.witness.kappa_at_t_star) + ',' + std::to_string(b.witness.delta) +
               '\n';
    }
    return out;
}

inline std::string csv_estimate(const EstimationResult& e) {
    std::string out = "i,total,hits,samples,epsilon,u_hat\n";
    for (uint32_t i = 1; i <= e.ell; ++i) {
        out += std::to_string(i) + ',' + to_string(e.total[i]) + ',' +
               std::to_string(e.hits[i]) + ',' + std::to_string(e.samples) + ',' +
               format_ld(e.epsilon[i]) + ',' + to_string(e.u_hat[i]) + '\n';
    }
    return out;
}

inline std::string csv_compare(const CompareReport& r) {
    std::string out = "w,total,exhaustive,trials,iterative_fail,ml_fail,disagreements\n";
    for (const auto& row : r.rows) {
        out += std::to_string(row.w) + ',' + to_string(row.total) + ',' +
               (row.exhaustive ? '1' : '0') + ',' + std::to_string(row.trials) + ',' +
               std::to_string(row.iterative_fail) + ',' + std::to_string(row.ml_fail) + ',' +
               std::to_string(row.disagreements) + '\n';
    }
    return out;
}

// FER curve from a profile over an inclusive p-grid.
inline std::string csv_fer(const PatternProfile& p, double p_lo, double p_hi, double p_step) {
    if (!(p_step > 0)) throw std::invalid_argument("p-grid step must be positive");
    std::string out = "p,fer\n";
    for (int i = 0;; ++i) {
        double pe = p_lo + i * p_step;
        if (pe > p_hi + 1e-12) break;
        out += format_ld((long double)pe, 10) + ',' + format_ld((long double)fer(p, pe), 10) + '\n';
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace stopred
