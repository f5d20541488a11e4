#pragma once

// Monte Carlo experiments and exhaustive scans.
//
// Seeds: trial t of an experiment with master seed s draws A from trial_seed(s, t);
// fixed sets (X, Y) are drawn from the setup stream trial_seed(s, 2^64 - 1). Trials
// share nothing mutable and aggregate by integer addition, so the worker count never
// changes a report.

#include <cayley/bounds.hpp>
#include <cayley/deviation.hpp>
#include <cayley/report.hpp>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <thread>
#include <vector>

namespace cayley {

inline constexpr std::uint64_t kSetupStream = ~std::uint64_t{0};

struct ExperimentConfig {
    std::string kind;                  // lemma10 | sigma-tail | restriction | worst-case
    std::string group;                 // empty: per-kind default
    std::uint64_t trials = 0;          // 0: per-kind default
    std::uint64_t seed = 0;
    Rational epsilon = Rational(1, 2);
    std::vector<std::size_t> sizes;    // lemma10: k values; sigma-tail: tiers; restriction: |X|, |Y|
    std::size_t x_size = 32;           // lemma10: n = |X|
    std::size_t size_floor = 1;        // worst-case: min |X|, |Y|
    std::optional<std::string> set_a;  // worst-case: explicit A; otherwise random from the seed
    unsigned threads = 0;              // 0: hardware concurrency
};

struct ExperimentReport {
    std::string kind;
    Json config;
    Json results;
    bool accepted = true;
    double wall_seconds = 0;

    /// The "timing" key is the only nondeterministic field.
    Json to_json() const {
        return Json{{"kind", kind},           {"seed", config.value("seed", std::uint64_t{0})},
                    {"config", config},       {"results", results},
                    {"accepted", accepted},   {"timing", {{"wall_seconds", wall_seconds}}}};
    }
};

struct Proportion {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double estimate = 0;
    double lo = 0;
    double hi = 0;
};

/// Wilson score interval at 95%.
inline Proportion wilson_interval(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw StructuralError("wilson_interval needs trials >= 1");
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1 + z * z / n;
    const double center = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {successes, trials, p, std::max(0.0, std::min(p, center - half)), std::min(1.0, std::max(p, center + half))};
}

inline Json to_json(const Proportion& p) {
    return Json{{"successes", p.successes}, {"trials", p.trials}, {"frequency", p.estimate}, {"ci95", {p.lo, p.hi}}};
}

/// Runs per_trial(t, counts) for t in [0, trials) over worker threads and sums the counts.
template <typename F>
std::vector<std::uint64_t> run_trials(std::uint64_t trials, std::size_t slots, unsigned threads, F per_trial) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(trials, 1)));
    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(slots, 0));
    auto work = [&](unsigned w) {
        for (std::uint64_t t = w; t < trials; t += threads) per_trial(t, partial[w]);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::vector<std::uint64_t> total(slots, 0);
    for (const auto& p : partial)
        for (std::size_t i = 0; i < slots; ++i) total[i] += p[i];
    return total;
}

namespace detail {

inline GroupSpec experiment_group(const ExperimentConfig& c, const char* fallback) {
    return GroupSpec::parse(c.group.empty() ? std::string(fallback) : c.group);
}

inline Json config_echo(const ExperimentConfig& c, const GroupSpec& g, std::uint64_t trials) {
    Json j{{"kind", c.kind},       {"group", g.str()},      {"trials", trials},
           {"seed", c.seed},       {"epsilon", c.epsilon.str()}, {"sizes", c.sizes}};
    if (c.kind == "lemma10") j["x_size"] = c.x_size;
    if (c.kind == "worst-case") {
        j["size_floor"] = c.size_floor;
        j["set_a"] = c.set_a ? Json(*c.set_a) : Json(nullptr);
    }
    return j;
}

inline GroupSubset random_sized_subset(const GroupSpec& g, Engine& rng, std::size_t size) {
    if (size > g.order()) throw StructuralError("requested subset size exceeds the group order");
    return GroupSubset(g, sample_without_replacement(rng, GroupSubset::full(g).indices(), size));
}

/// |sigma_A(X, y)| >= eps, i.e. |2c - n| q >= 2 p n.
inline bool row_deviates(const GroupSubset& a, const std::vector<Index>& xs, Index y, const Rational& eps) {
    const i128 n = static_cast<i128>(xs.size());
    i128 dev = 2 * static_cast<i128>(row_count(a, xs, y)) - n;
    if (dev < 0) dev = -dev;
    return dev * eps.den() >= 2 * static_cast<i128>(eps.num()) * n;
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace detail

/// Event (13) for the first k packing rows against exp(-eps^2 k n / 2).
inline ExperimentReport mc_lemma10(const ExperimentConfig& cfg) {
    const auto t0 = detail::Clock::now();
    const GroupSpec g = detail::experiment_group(cfg, "f2^8");
    const std::uint64_t trials = cfg.trials ? cfg.trials : 100000;
    const std::vector<std::size_t> ks = cfg.sizes.empty() ? std::vector<std::size_t>{1, 2, 4} : cfg.sizes;
    detail::require_epsilon(cfg.epsilon);
    if (cfg.x_size < 1) throw StructuralError("lemma10 needs |X| >= 1");

    Engine setup(trial_seed(cfg.seed, kSetupStream));
    const GroupSubset x = detail::random_sized_subset(g, setup, cfg.x_size);
    const PackingResult pack = greedy_packing(x, GroupSubset::full(g), cfg.epsilon);
    const std::size_t kmax = *std::max_element(ks.begin(), ks.end());
    if (kmax > pack.k) {
        throw StructuralError("packing construction failure: only " + std::to_string(pack.k) +
                              " low-overlap translates, need " + std::to_string(kmax));
    }
    const std::vector<Index> rows(pack.ys.begin(), pack.ys.begin() + static_cast<std::ptrdiff_t>(kmax));
    const auto xs = x.indices();

    // slots [0, kmax]: number of trials whose leading run of deviating rows has length >= i;
    // slots [kmax + 1, 2 kmax]: per-row marginals.
    auto counts = run_trials(trials, 2 * kmax + 1, cfg.threads, [&](std::uint64_t t, std::vector<std::uint64_t>& c) {
        const CayleySample a = random_subset(g, trial_seed(cfg.seed, t));
        std::size_t run = 0;
        bool leading = true;
        for (std::size_t j = 0; j < kmax; ++j) {
            bool dev = detail::row_deviates(a.a, xs, rows[j], cfg.epsilon);
            if (dev) ++c[kmax + 1 + j];
            if (leading && dev) ++run;
            else leading = false;
        }
        for (std::size_t i = 0; i <= run; ++i) ++c[i];
    });

    ExperimentReport rep;
    rep.kind = "lemma10";
    rep.config = detail::config_echo(cfg, g, trials);
    const long double eps = cfg.epsilon.to_long_double();
    const long double n = static_cast<long double>(xs.size());
    Json per_k = Json::array();
    for (std::size_t k : ks) {
        const Proportion p = wilson_interval(counts[k], trials);
        const BoundValue b = lemma10_bound(eps, static_cast<long double>(k), n);
        const double slack = 3 * std::sqrt(b.value * (1 - b.value) / static_cast<double>(trials));
        const bool ok = p.estimate <= b.value + slack;
        rep.accepted = rep.accepted && ok;
        per_k.push_back({{"k", k},
                         {"events", p.successes},
                         {"trials", p.trials},
                         {"frequency", p.estimate},
                         {"ci95_lo", p.lo},
                         {"ci95_hi", p.hi},
                         {"bound", b.value},
                         {"log_bound", jnum(b.log_value)},
                         {"slack_3sigma", slack},
                         {"accept_threshold", b.value + slack},
                         {"accepted", ok}});
    }
    Json marginals = Json::array();
    for (std::size_t j = 0; j < kmax; ++j) {
        marginals.push_back(
            {{"row", j + 1}, {"y", rows[j]}, {"proportion", to_json(wilson_interval(counts[kmax + 1 + j], trials))}});
    }
    // A forced to G: every row deviates by exactly 1/2, whatever the bound says.
    const GroupSubset full = GroupSubset::full(g);
    bool all_full = true;
    for (Index y : rows) all_full = all_full && detail::row_deviates(full, xs, y, cfg.epsilon);
    const BoundValue bmax = lemma10_bound(eps, static_cast<long double>(kmax), n);
    rep.results = Json{{"x", to_json(x)},
                       {"packing", pack.ys},
                       {"packing_size", pack.k},
                       {"rows_used", rows},
                       {"per_k", per_k},
                       {"row_marginals", marginals},
                       {"sanity_forced_full",
                        {{"k", kmax}, {"event_occurs", all_full}, {"bound", bmax.value}, {"bound_exceeded", all_full && bmax.value < 1}}}};
    rep.wall_seconds = detail::seconds_since(t0);
    return rep;
}

struct TierSummary {
    std::size_t size = 0;
    double median = 0;
    double median_ci_lo = 0;
    double median_ci_hi = 0;
    double max = 0;
    double mean = 0;
};

/// Distribution of |sigma_A(X, Y)| for one A and many random (X, Y) with |X| = |Y| = size, per tier.
inline ExperimentReport mc_sigma_tail(const ExperimentConfig& cfg) {
    const auto t0 = detail::Clock::now();
    const GroupSpec g = detail::experiment_group(cfg, "f2^10");
    if (g.order() > (Index{1} << 16)) throw GuardExceeded("sigma-tail refuses groups of order > 2^16");
    const std::uint64_t trials = cfg.trials ? cfg.trials : 1000;
    const std::vector<std::size_t> tiers = cfg.sizes.empty() ? std::vector<std::size_t>{4, 8, 16, 32, 64} : cfg.sizes;
    const CayleySample a = random_subset(g, trial_seed(cfg.seed, kSetupStream));
    const auto all = GroupSubset::full(g).indices();

    ExperimentReport rep;
    rep.kind = "sigma-tail";
    rep.config = detail::config_echo(cfg, g, trials);
    Json out_tiers = Json::array();
    std::vector<TierSummary> summaries;
    for (std::size_t ti = 0; ti < tiers.size(); ++ti) {
        const std::size_t s = tiers[ti];
        if (s < 1 || s > g.order()) throw StructuralError("sigma-tail tier size out of range");
        std::vector<double> vals(trials);
        const std::uint64_t tier_seed = trial_seed(cfg.seed, ti);
        // Each trial writes only its own slot; the count vector is unused.
        run_trials(trials, 0, cfg.threads, [&](std::uint64_t t, std::vector<std::uint64_t>&) {
            Engine rng(trial_seed(tier_seed, t));
            GroupSubset x(g, sample_without_replacement(rng, all, s));
            GroupSubset y(g, sample_without_replacement(rng, all, s));
            vals[t] = abs(sigma(a.a, x, y).sigma).to_double();
        });
        double sum = 0;
        for (double v : vals) sum += v;
        std::sort(vals.begin(), vals.end());
        TierSummary ts;
        ts.size = s;
        const std::size_t T = vals.size();
        ts.median = T % 2 ? vals[T / 2] : (vals[T / 2 - 1] + vals[T / 2]) / 2;
        // order-statistic 95% interval for the median
        const double half = 0.9799819922700268 * std::sqrt(static_cast<double>(T));
        const auto lo_rank = static_cast<std::ptrdiff_t>(std::floor(T / 2.0 - half));
        const auto hi_rank = static_cast<std::ptrdiff_t>(std::ceil(T / 2.0 + half));
        ts.median_ci_lo = vals[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(lo_rank, 0, T - 1))];
        ts.median_ci_hi = vals[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(hi_rank, 0, T - 1))];
        ts.max = vals.back();
        ts.mean = sum / static_cast<double>(T);
        summaries.push_back(ts);
        out_tiers.push_back({{"size", s},
                             {"pairs", T},
                             {"median", ts.median},
                             {"median_ci95_lo", ts.median_ci_lo},
                             {"median_ci95_hi", ts.median_ci_hi},
                             {"max", ts.max},
                             {"mean", ts.mean}});
    }
    bool nonincreasing = true;
    for (std::size_t i = 1; i < summaries.size(); ++i) {
        if (summaries[i].size > summaries[i - 1].size) nonincreasing = nonincreasing && summaries[i].median <= summaries[i - 1].median;
    }
    Json full = nullptr;
    if (g.order() <= 4096) {
        const GroupSubset gs = GroupSubset::full(g);
        const Rational s = sigma(a.a, gs, gs).sigma;
        const Rational expected = Rational(static_cast<std::int64_t>(a.a.size()), g.order()) - Rational(1, 2);
        full = {{"sigma", to_json(s)}, {"expected", to_json(expected)}, {"equal", s == expected}};
    }
    rep.results = Json{{"a_size", a.a.size()}, {"tiers", out_tiers}, {"median_nonincreasing", nonincreasing}, {"full_group", full}};
    rep.wall_seconds = detail::seconds_since(t0);
    return rep;
}

/// Frequency with which the two restriction inequalities hold for fixed X, Y over random A and draws.
inline ExperimentReport mc_restriction(const ExperimentConfig& cfg) {
    const auto t0 = detail::Clock::now();
    const GroupSpec g = detail::experiment_group(cfg, "f2^8");
    const std::uint64_t trials = cfg.trials ? cfg.trials : 1000;
    const std::vector<std::size_t> sz = cfg.sizes.empty() ? std::vector<std::size_t>{64, 64} : cfg.sizes;
    if (sz.size() != 2) throw StructuralError("restriction needs --sizes |X|,|Y|");
    Engine setup(trial_seed(cfg.seed, kSetupStream));
    const GroupSubset x = detail::random_sized_subset(g, setup, sz[0]);
    const GroupSubset y = detail::random_sized_subset(g, setup, sz[1]);
    const EnergyValue e = additive_energy(x, y);
    const RestrictionParams params =
        restriction_params(x.size(), y.size(), g.order(), energy_ratio(x.size(), y.size(), e), cfg.epsilon);

    auto counts = run_trials(trials, 3, cfg.threads, [&](std::uint64_t t, std::vector<std::uint64_t>& c) {
        const std::uint64_t ts = trial_seed(cfg.seed, t);
        const CayleySample a = random_subset(g, ts);
        const RestrictionSample r = restriction_sample(a.a, x, y, cfg.epsilon, splitmix64(ts), params);
        c[0] += r.energy_inequality;
        c[1] += r.deviation_inequality;
        c[2] += r.energy_inequality && r.deviation_inequality;
    });
    ExperimentReport rep;
    rep.kind = "restriction";
    rep.config = detail::config_echo(cfg, g, trials);
    const Proportion both = wilson_interval(counts[2], trials);
    rep.accepted = both.estimate >= 0.5;
    rep.results = Json{{"x", to_json(x)},
                       {"y", to_json(y)},
                       {"params", {{"s", params.s}, {"t", params.t}, {"r", params.r}, {"K", to_json(params.K)}}},
                       {"energy_inequality", to_json(wilson_interval(counts[0], trials))},
                       {"deviation_inequality", to_json(wilson_interval(counts[1], trials))},
                       {"both", to_json(both)},
                       {"smoke_threshold", 0.5}};
    rep.wall_seconds = detail::seconds_since(t0);
    return rep;
}

struct WorstCase {
    Rational max_abs_sigma;
    GroupSubset x;
    GroupSubset y;
    Rational witness_sigma;
    bool witness_matches = false;
};

inline constexpr Index kWorstCaseGuard = 16;

/// max |sigma_A(X, Y)| over all X, Y with |X|, |Y| >= floor.
///
/// For fixed X, sum_{y in Y} c_y with c_y = #{x in X : x + y in A} is extremal over |Y| = t at
/// the t largest or t smallest c_y, so only X is enumerated. Ties keep the first optimum in
/// increasing X-mask order, then smaller t, then the upper extreme; equal counts are ordered by index.
inline WorstCase worst_case_search(const GroupSubset& a, std::size_t floor) {
    const GroupSpec& g = a.group();
    const Index N = g.order();
    if (N > kWorstCaseGuard) throw GuardExceeded("worst-case scan refuses N = " + std::to_string(N) + " > 16");
    if (floor < 1 || floor > N) throw StructuralError("worst-case size floor must lie in [1, N]");
    // shifted[y] = mask of {x : x + y in A}
    std::vector<std::uint32_t> shifted(N, 0);
    for (Index y = 0; y < N; ++y)
        for (Index x = 0; x < N; ++x)
            if (a.test(g.add_index(x, y))) shifted[y] |= 1u << x;

    // best value as |2S - n t| / (2 n t)
    std::uint64_t best_num = 0, best_den = 1;
    std::uint32_t best_x = 0;
    std::vector<Index> best_y;
    bool have = false;
    std::vector<Index> order(N);
    std::vector<std::uint32_t> c(N);
    for (std::uint32_t xm = 1; xm < (std::uint32_t{1} << N); ++xm) {
        const std::size_t n = static_cast<std::size_t>(std::popcount(xm));
        if (n < floor) continue;
        for (Index y = 0; y < N; ++y) c[y] = static_cast<std::uint32_t>(std::popcount(xm & shifted[y]));
        for (Index i = 0; i < N; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](Index p, Index q) { return c[p] > c[q]; });
        std::uint64_t top = 0, bottom = 0;
        for (std::size_t t = 1; t <= N; ++t) {
            top += c[order[t - 1]];
            bottom += c[order[N - t]];
            if (t < floor) continue;
            for (int side = 0; side < 2; ++side) {
                const std::uint64_t S = side == 0 ? top : bottom;
                const std::int64_t diff = 2 * static_cast<std::int64_t>(S) - static_cast<std::int64_t>(n * t);
                const std::uint64_t num = static_cast<std::uint64_t>(diff < 0 ? -diff : diff);
                const std::uint64_t den = 2 * n * t;
                if (!have || num * best_den > best_num * den) {
                    have = true;
                    best_num = num;
                    best_den = den;
                    best_x = xm;
                    best_y.clear();
                    for (std::size_t i = 0; i < t; ++i) best_y.push_back(side == 0 ? order[i] : order[N - 1 - i]);
                }
            }
        }
    }
    GroupSubset xs(g);
    for (Index i = 0; i < N; ++i)
        if ((best_x >> i) & 1u) xs.insert(i);
    GroupSubset ys(g, best_y);
    WorstCase out{Rational::from_wide(best_num, best_den), xs, ys, Rational(0), false};
    out.witness_sigma = sigma(a, xs, ys).sigma;
    out.witness_matches = abs(out.witness_sigma) == out.max_abs_sigma;
    return out;
}

inline ExperimentReport worst_case_scan(const ExperimentConfig& cfg) {
    const auto t0 = detail::Clock::now();
    const GroupSpec g = detail::experiment_group(cfg, "4");
    if (g.order() > kWorstCaseGuard) throw GuardExceeded("worst-case scan refuses N = " + std::to_string(g.order()) + " > 16");
    const GroupSubset a = cfg.set_a ? GroupSubset::parse(g, *cfg.set_a) : random_subset(g, cfg.seed).a;
    const WorstCase wc = worst_case_search(a, cfg.size_floor);
    ExperimentReport rep;
    rep.kind = "worst-case";
    rep.config = detail::config_echo(cfg, g, 1);
    rep.accepted = wc.witness_matches;
    rep.results = Json{{"a", to_json(a)},
                       {"max_abs_sigma", to_json(wc.max_abs_sigma)},
                       {"witness_x", to_json(wc.x)},
                       {"witness_y", to_json(wc.y)},
                       {"witness_sigma", to_json(wc.witness_sigma)},
                       {"witness_matches", wc.witness_matches}};
    rep.wall_seconds = detail::seconds_since(t0);
    return rep;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.kind == "lemma10") return mc_lemma10(cfg);
    if (cfg.kind == "sigma-tail") return mc_sigma_tail(cfg);
    if (cfg.kind == "restriction") return mc_restriction(cfg);
    if (cfg.kind == "worst-case") return worst_case_scan(cfg);
    throw StructuralError("unknown experiment kind '" + cfg.kind + "'");
}

} // namespace cayley
