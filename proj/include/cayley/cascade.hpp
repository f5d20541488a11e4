#pragma once

// Numeric audit of the proof-parameter cascades.
//
// Every formula depends on N only through log N and log log N. The threshold N of
// the general-mode proof is so large that log N itself overflows, so the primary
// internal variable is LL = log log N and each inequality is rewritten in a scale
// where both sides stay finite:
//   linear  - both sides compared directly,
//   log     - both sides are natural logs of the original quantities,
//   loglog  - both sides are log log of the original quantities.
// Common positive factors (10^j, log N) are divided out before comparing.

#include <cayley/error.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace cayley {

enum class CascadeMode { general, exponent2 };

inline std::string to_string(CascadeMode m) { return m == CascadeMode::general ? "general" : "exponent2"; }

inline CascadeMode parse_cascade_mode(const std::string& s) {
    if (s == "general") return CascadeMode::general;
    if (s == "exponent2" || s == "exponent-2") return CascadeMode::exponent2;
    throw StructuralError("unknown audit mode '" + s + "' (expected general or exponent2)");
}

/// Unnamed absolute constants of the proofs; all default to 1.
struct CascadeConstants {
    long double C = 1;         // Lemma 6 count exponent in (23)
    long double C_prop8 = 1;   // prefactor of the deviation bound (8)
    long double C_prime = 1;   // prefactor of the subspace bound before (11)
    long double C1 = 1;        // dim(X'), dim(Y') <= C1 M (log log N)^2
    long double C2 = 1;        // exponent constant of the Theorem 1 remark
    bool operator==(const CascadeConstants&) const = default;
};

struct CascadeInputs {
    CascadeMode mode = CascadeMode::general;
    std::optional<long double> log_n;  // set when the audit was requested by log N
    long double loglog_n = 0;          // log log N, always set
    long double w = 0;
    std::optional<long double> epsilon;  // exponent-2 mode override; default w^{-1/13}
    CascadeConstants constants;
    bool operator==(const CascadeInputs&) const = default;
};

struct CascadeRow {
    std::string name;
    std::string anchor;  // the formula the row checks, as written in the proof
    std::string scale;   // linear | log | loglog
    long double lhs = 0;
    long double rhs = 0;
    std::string relation;  // <, <=, >, >=
    bool pass = false;
    bool gating = true;
    std::vector<std::string> constants;  // unnamed constants the row depends on
    bool operator==(const CascadeRow&) const = default;
};

struct CascadeParam {
    std::string name;
    long double value = 0;
    bool operator==(const CascadeParam&) const = default;
};

struct CascadeLedger {
    CascadeInputs inputs;
    std::vector<CascadeParam> params;
    std::vector<long double> log_n_nu;          // log n_nu, nu = 0..nu0
    std::vector<long double> log_k_prime_j0;    // log K' at j = 0, per nu
    std::vector<long double> log_k_prime_jlast; // log K' at j = j0 - 1, per nu
    std::vector<CascadeRow> rows;
    std::vector<CascadeRow> findings;  // non-gating observations

    bool passes() const {
        for (const auto& r : rows)
            if (r.gating && !r.pass) return false;
        return true;
    }
    const CascadeRow* row(const std::string& name) const {
        for (const auto& r : rows)
            if (r.name == name) return &r;
        return nullptr;
    }
    std::optional<long double> param(const std::string& name) const {
        for (const auto& p : params)
            if (p.name == name) return p.value;
        return std::nullopt;
    }
    bool operator==(const CascadeLedger&) const = default;
};

namespace detail {

inline bool compare(long double lhs, const std::string& rel, long double rhs) {
    if (rel == "<") return lhs < rhs;
    if (rel == "<=") return lhs <= rhs;
    if (rel == ">") return lhs > rhs;
    return lhs >= rhs;
}

inline CascadeRow make_row(std::string name, std::string anchor, std::string scale, long double lhs,
                           std::string rel, long double rhs, std::vector<std::string> constants = {}) {
    CascadeRow r{std::move(name), std::move(anchor), std::move(scale), lhs, rhs, rel, false, true, std::move(constants)};
    r.pass = compare(lhs, r.relation, rhs);
    return r;
}

/// log of ceil(e^v); exact below 2^60, where the ceiling is still visible.
inline long double log_ceil_exp(long double v) {
    if (v < 41) return std::log(std::ceil(std::exp(v)));
    return v;
}

/// log log (N + 3) from LL = log log N.
inline long double loglog_n_plus_3(long double LL) {
    if (LL > 60) return LL;
    const long double L = std::exp(LL);
    return std::log(L + std::log1p(3 * std::exp(-L)));
}

inline const long double kLn2 = std::log(2.0L);
inline const long double kLn10 = std::log(10.0L);

inline void audit_general(CascadeLedger& led) {
    const CascadeInputs& in = led.inputs;
    const long double LL = in.loglog_n;
    const long double lLL = std::log(LL);
    const long double w = in.w;
    const long double C = in.constants.C;
    const long double lw = std::log(w);
    const long double w1 = std::sqrt(w);
    const long double lw1 = lw / 2;
    const long double eps = std::exp(-lw / 13);
    const long double leps = -lw / 13;
    const long double et = eps / 4;
    const long double let = leps - 2 * kLn2;
    // log N, possibly infinite at threshold scale
    const long double L = in.log_n ? *in.log_n : std::exp(LL);

    const long double log_n0t = log_ceil_exp(lw1 + LL + 2 * lLL);   // n~0 = ceil(w1 L LL^2)
    const long double log_n1t = kLn2 + log_n0t;                      // n~1 = 2 n~0
    const long double log_m = lw + LL + 10 * lLL;                    // m = w L LL^10
    const long double j0 = std::ceil(LL / 2);
    const long double log_nu0_base = let + lw1 + LL + lLL;           // n0 = eps~ w1 L LL
    // 2^nu0 <= 2 LL / eps~ < 2^{nu0 + 1}
    const long double nu0 = std::floor(std::log2(2 * LL / et));
    const long double log_X0 = lw1 + LL + 4 * lLL;                   // w1 L LL^4

    led.params = {
        {"log_n", L},
        {"loglog_n", LL},
        {"w", w},
        {"w1", w1},
        {"epsilon", eps},
        {"epsilon_tilde", et},
        {"log_n_tilde_0", log_n0t},
        {"log_n_tilde_1", log_n1t},
        {"log_m", log_m},
        {"j0", j0},
        {"log_n_0", log_nu0_base},
        {"nu0", nu0},
        {"log_M_first", kLn10},          // M = 10^{j+1} at j = 0
        {"log_M_last", j0 * kLn10},      // at j = j0 - 1
    };

    const auto nus = static_cast<std::size_t>(nu0) + 1;
    led.log_n_nu.resize(nus);
    led.log_k_prime_j0.resize(nus);
    led.log_k_prime_jlast.resize(nus);
    long double kprime_gap = 0;
    for (std::size_t nu = 0; nu < nus; ++nu) {
        const long double lnn = static_cast<long double>(nu) * kLn2 + log_nu0_base;
        led.log_n_nu[nu] = lnn;
        for (long double j : {0.0L, j0 - 1}) {
            // K' = 10^j (n_nu / (2 w1 L LL^2))^2  and  K' = 10^j n_nu^2 / (4 w1^2 L^2 LL^4)
            // log n_nu - log(2 w1 L LL^2) = nu log 2 + log eps~ - log 2 - log LL, with log L cancelled symbolically
            const long double ratio = static_cast<long double>(nu) * kLn2 + let - kLn2 - lLL;
            const long double a = j * kLn10 + 2 * ratio;
            const long double b = j * kLn10 + 2 * static_cast<long double>(nu) * kLn2 + 2 * let - 2 * kLn2 - 2 * lLL;
            kprime_gap = std::max(kprime_gap, std::fabs(a - b) / std::max(1.0L, std::fabs(a)));
            (j == 0 ? led.log_k_prime_j0 : led.log_k_prime_jlast)[nu] = a;
        }
    }

    auto& R = led.rows;
    R.push_back(make_row("w_le_loglog", "(16) w(N) <= log log(N + 3)", "linear", w, "<=", loglog_n_plus_3(LL)));
    R.push_back(make_row("eps_tilde_sq_w1_over_32", "eps~^2 w1(N)/32 > 1", "linear", et * et * w1 / 32, ">", 1));
    // n_nu eps'^2 / (4 log N) >= eps~^2 w1^2 L LL^2 / (16 n_nu), smallest at nu0
    R.push_back(make_row("prop16_applicability", "n_nu (eps')^2 / (4 log N) > 1 for all nu <= nu0", "linear",
                         et * w1 * LL * std::exp2(-nu0 - 4), ">", 1));
    R.push_back(make_row("nu0_bracket", "n_nu0 <= 2 w1(N) log N (log log N)^2 < n_{nu0+1}", "log",
                         nu0 * kLn2, "<=", std::log(2 * LL / et)));
    R.back().pass = R.back().pass && std::log(2 * LL / et) < (nu0 + 1) * kLn2;
    R.push_back(make_row("j0_exceeds_x", "10^{j0} > |X| with |X| <= n~1", "log", j0 * kLn10, ">", log_n1t));
    // both sides divided by L LL^2
    R.push_back(make_row("x_split_feasible", "|X~| >= w(N) log N (log log N)^2 >= n~1", "log", lw, ">=",
                         kLn2 + lw1 + (log_n0t - (lw1 + LL + 2 * lLL))));
    R.push_back(make_row("kprime_consistency", "K' = 10^j (n_nu / (2 w1 log N (log log N)^2))^2 = 10^j n_nu^2 / (4 w1^2 log^2 N (log log N)^4)",
                         "linear", kprime_gap, "<=", 1e-15L));
    // (23) against (24) with m: 2 C w1 10^j L LL^4 < 10^j eps^6 LL^{-6} m / 2^26, divided by 10^j L
    R.push_back(make_row("p_jnu_exponent", "2C w1(N) 10^j log N (log log N)^4 < 10^j eps^6 (log log N)^{-6} m / 2^26",
                         "log", std::log(2 * C) + lw1 + 4 * lLL, "<", 6 * leps + lw + 4 * lLL - 26 * kLn2, {"C"}));
    R.push_back(make_row("p_jnu_bound", "P_{j,nu} <= exp(-10^j w1(N) log N (log log N)^4)", "log",
                         std::log(2 * C + 1) + lw1, "<=", 6 * leps + lw - 26 * kLn2, {"C"}));
    // (nu0 + 1) e^{-X} <= e^{-X/2} with X = 10^j w1 L LL^4, hardest at j = 0
    R.push_back(make_row("p_j_geometric_sum", "sum_nu P_{j,nu} <= exp(-10^j w1(N) log N (log log N)^4 / 2)", "loglog",
                         std::log(std::log(nu0 + 1)), "<=", log_X0 - kLn2));
    // sum_{j < j0} e^{-10^j X0 / 2} <= j0 e^{-X0/2} <= e^{-X0/3}
    R.push_back(make_row("p0_final", "P_0 <= exp(-w1(N) log N (log log N)^4 / 3)", "loglog", std::log(std::log(j0)),
                         "<=", log_X0 - std::log(6.0L)));

    // (24) taken literally at nu0: (eps')^6 K' = 10^j eps~^6 w1^4 L^4 LL^2 / (256 n_nu^4) against
    // 10^j eps^6 LL^{-6} / 2^18, divided by 10^j.
    // With n_nu0 = 2^nu0 eps~ w1 L LL the left side reduces to eps~^2 / (256 16^nu0 LL^2).
    CascadeRow f24 = make_row("eq24_literal", "(24) (eps')^6 K' >= 10^j eps^6 (log log N)^{-6} / 2^18", "log",
                              2 * let - 2 * lLL - 8 * kLn2 - 4 * nu0 * kLn2, ">=",
                              6 * leps - 6 * lLL - 18 * kLn2);
    f24.gating = false;
    led.findings.push_back(f24);
    CascadeRow f24c = make_row("eq24_corrected", "(eps')^6 K' >= 10^j eps^6 (log log N)^{-6} / 2^24", "log", f24.lhs,
                               ">=", 6 * leps - 6 * lLL - 24 * kLn2);
    f24c.gating = false;
    led.findings.push_back(f24c);
    CascadeRow fp = make_row("p_jnu_bound_corrected", "P_{j,nu} <= exp(-10^j w1(N) log N (log log N)^4) with 2^32 in place of 2^26",
                             "log", std::log(2 * C + 1) + lw1, "<=", 6 * leps + lw - 32 * kLn2, {"C"});
    fp.gating = false;
    led.findings.push_back(fp);
}

inline void audit_exponent2(CascadeLedger& led) {
    const CascadeInputs& in = led.inputs;
    const CascadeConstants& k = in.constants;
    const long double LL = in.loglog_n;
    const long double lLL = std::log(LL);
    const long double w = in.w;
    const long double lw = std::log(w);
    const long double eps = in.epsilon ? *in.epsilon : std::exp(-lw / 13);
    if (!(eps > 0 && eps <= 1)) throw StructuralError("exponent-2 audit needs epsilon in (0, 1]");
    const long double leps = std::log(eps);
    const long double L = in.log_n ? *in.log_n : std::exp(LL);
    const long double log_size = lw + lLL + 1.5L * LL;   // w LL L^{3/2}
    const long double log_M = 0.5L * LL - lLL;           // M = L^{1/2} / LL

    led.params = {
        {"log_n", L},
        {"loglog_n", LL},
        {"w", w},
        {"epsilon", eps},
        {"log_M", log_M},
        {"log_r", leps - 2 * kLn2 + log_size},   // r = (eps/4) w LL L^{3/2}
        {"log_size_threshold", log_size},
        {"log_d", std::log(2 * k.C1) + 0.5L * LL + lLL},  // d = 2 C1 M LL^2
    };

    auto& R = led.rows;
    R.push_back(make_row("thm1_remark", "C1 exp(-C2 eps^{-4} log^2 N) < 1", "log", std::log(k.C1), "<",
                         std::log(k.C2) - 4 * leps + 2 * LL, {"C1", "C2"}));
    R.push_back(make_row("thm7_window", "w(N) (log log N) log^{3/2} N <= log^{5/2} N", "log", log_size, "<=", 2.5L * LL));
    R.push_back(make_row("cor9_eps_condition", "eps^7 >= 2^25 / (w(N) log log N sqrt(log N))", "log", 7 * leps, ">=",
                         25 * kLn2 - lw - lLL - 0.5L * LL));
    // (8) with K = M, r = (eps/4) w LL L^{3/2}: 2000 L^2 / eps^4 - eps^3 w L^2 / 160, divided by L^2
    R.push_back(make_row("cor9_exponent_negative", "2000 log^2 N / eps^4 - eps^2 r M / 40 < 0", "linear",
                         2000 / std::pow(eps, 4.0L) + std::log(k.C_prop8) * std::exp(-2 * LL), "<",
                         std::pow(eps, 3.0L) * w / 160, {"C_prop8"}));
    // min{eps |Y~|, |X'|} >= 2000 (eps/4)^{-4} log N, with |X'| >= (eps/2) w LL L^{3/2}
    R.push_back(make_row("x_prime_size", "min{eps |Y~|, |X'|} >> eps^{-4} log N", "log",
                         2 * leps + lw + lLL - 2 * kLn2 + 1.5L * LL, ">=", std::log(512000.0L) - 4 * leps + LL));
    // (11): eps^2 |X'| / 160 > 2^19 d^2 / eps^4 + d log N + log |Y| + log C', divided by L^{3/2}
    const long double lhs11 = std::pow(eps, 3.0L) * w * LL / 320;
    const long double rhs11 = std::ldexp(4 * k.C1 * k.C1, 19) * LL * LL * std::exp(-0.5L * LL) / std::pow(eps, 4.0L) +
                              2 * k.C1 * LL + (2.5L * LL + std::log(k.C_prime)) * std::exp(-1.5L * LL);
    R.push_back(make_row("union_bound_11", "(11) eps^2 max{|X'|,|Y'|} >> d^2/eps^4 + d log N + log |Y|", "linear", lhs11,
                         ">", rhs11, {"C1", "C_prime"}));
}

} // namespace detail

/// Audit from a complete input record; the same inputs always give the same ledger.
inline CascadeLedger cascade_audit(const CascadeInputs& in) {
    if (!(in.loglog_n > 0) || !std::isfinite(in.loglog_n)) throw StructuralError("audit needs log N > 1");
    if (in.mode == CascadeMode::general && !(in.loglog_n > 1)) throw StructuralError("general audit needs log N > e");
    if (!(in.w > 1) || !std::isfinite(in.w)) throw StructuralError("audit needs a finite w > 1");
    CascadeLedger led;
    led.inputs = in;
    if (in.mode == CascadeMode::general) detail::audit_general(led);
    else detail::audit_exponent2(led);
    return led;
}

inline CascadeLedger cascade_audit(CascadeMode mode, long double log_n, long double w,
                                   CascadeConstants constants = {}, std::optional<long double> epsilon = std::nullopt) {
    if (!(log_n > 1)) throw StructuralError("audit needs log N > 1");
    CascadeInputs in{mode, log_n, std::log(log_n), w, epsilon, constants};
    return cascade_audit(in);
}

inline CascadeLedger cascade_audit_loglog(CascadeMode mode, long double loglog_n, long double w,
                                          CascadeConstants constants = {},
                                          std::optional<long double> epsilon = std::nullopt) {
    CascadeInputs in{mode, std::nullopt, loglog_n, w, epsilon, constants};
    return cascade_audit(in);
}

/// Recompute from the ledger's stored inputs.
inline CascadeLedger replay(const CascadeLedger& led) { return cascade_audit(led.inputs); }

struct ThresholdResult {
    bool found = false;
    long double loglog_n = 0;   // least passing log log N found, with w = log log N
    long double log_n = 0;      // e^{loglog_n}; infinite when beyond long double range
    int steps = 0;
    CascadeLedger ledger;       // audit at the threshold
    std::vector<std::pair<long double, bool>> grid;  // (log log N, passes) probes
    bool upward_closed = false;
};

/// Least log log N (with w = log log N) where every gating row passes: exponential search on
/// log log N from 2, then bisection on log(log log N), then an upward-closure check on a grid.
inline ThresholdResult find_threshold(CascadeMode mode, CascadeConstants constants = {},
                                      std::optional<long double> epsilon = std::nullopt, int grid_points = 64) {
    auto passes = [&](long double LL) { return cascade_audit_loglog(mode, LL, LL, constants, epsilon).passes(); };
    ThresholdResult out;
    long double lo = 2;
    if (passes(lo)) {
        out.found = true;
        out.loglog_n = lo;
    } else {
        long double hi = lo;
        while (true) {
            hi = lo * 2;
            ++out.steps;
            if (!std::isfinite(hi) || hi > 1e4000L) return out;
            if (passes(hi)) break;
            lo = hi;
        }
        long double a = std::log(lo);
        long double b = std::log(hi);
        for (int i = 0; i < 200 && b - a > 1e-15L * std::max(1.0L, b); ++i) {
            ++out.steps;
            long double mid = (a + b) / 2;
            if (passes(std::exp(mid))) b = mid;
            else a = mid;
        }
        out.found = true;
        out.loglog_n = std::exp(b);
        if (!passes(out.loglog_n)) out.loglog_n = hi;
    }
    out.log_n = std::exp(out.loglog_n);
    out.ledger = cascade_audit_loglog(mode, out.loglog_n, out.loglog_n, constants, epsilon);

    // Probe log(log log N) on a grid from log 2 to 1.5 x the threshold's log.
    const long double g0 = std::log(2.0L);
    const long double g1 = std::max(g0 + 1, 1.5L * std::log(out.loglog_n));
    bool seen_pass = false;
    out.upward_closed = true;
    for (int i = 0; i < grid_points; ++i) {
        long double LL = std::exp(g0 + (g1 - g0) * i / (grid_points - 1));
        bool p = passes(LL);
        out.grid.emplace_back(LL, p);
        if (seen_pass && !p) out.upward_closed = false;
        seen_pass = seen_pass || p;
    }
    return out;
}

} // namespace cayley
