// One line per acceptance criterion; exit status is nonzero if any fails.

#include "oracles.hpp"

#include <cayley/cli.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace cayley;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

template <typename F>
void criterion(int id, const char* title, F body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %2d. %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
}

std::string count_msg(std::size_t bad, std::size_t total) {
    return std::to_string(bad) + " violations in " + std::to_string(total) + " instances";
}

// k q^2 E > p^2 |Y|^2 n  <=>  k > eps^2 |Y| K / n
bool packing_large(std::size_t k, const Rational& eps, std::uint64_t e, std::size_t y, std::size_t n, i128 extra = 1) {
    const i128 p = eps.num(), q = eps.den();
    return extra * static_cast<i128>(k) * q * q * static_cast<i128>(e) >
           p * p * static_cast<i128>(y) * static_cast<i128>(y) * static_cast<i128>(n);
}

Json strip(const std::string& s) {
    Json j = Json::parse(s);
    j.erase("timing");
    return j;
}

} // namespace

int main() {
    std::mt19937_64 rng(20240601);
    const std::vector<GroupSpec> c1_groups{GroupSpec({12}), GroupSpec({2, 2, 2, 2}), GroupSpec({3, 5})};
    std::vector<std::pair<GroupSubset, GroupSubset>> c1_pairs;
    for (int i = 0; i < 200; ++i) {
        const GroupSpec& g = c1_groups[static_cast<std::size_t>(i) % 3];
        c1_pairs.emplace_back(oracle::random_set(g, rng, 10), oracle::random_set(g, rng, 10));
    }

    criterion(1, "energy equals the quadruple-count oracle on 200 pairs", [&] {
        std::size_t bad = 0;
        for (auto& [x, y] : c1_pairs) bad += additive_energy(x, y).count != additive_energy_oracle(x, y).count;
        return Outcome{bad == 0, count_msg(bad, c1_pairs.size())};
    });

    criterion(2, "square-root subadditivity and disjoint superadditivity on 500 triples", [&] {
        const std::vector<GroupSpec> gs{GroupSpec({64}), GroupSpec::parse("f2^6"), GroupSpec({4, 4, 4}), GroupSpec({7, 9}),
                                        GroupSpec({3, 5})};
        std::size_t bad = 0;
        for (int i = 0; i < 500; ++i) {
            const GroupSpec& g = gs[static_cast<std::size_t>(i) % gs.size()];
            auto x = oracle::random_set(g, rng, 16), y = oracle::random_set(g, rng, 16), z = oracle::random_set(g, rng, 16);
            const i128 u = additive_energy(x | y, z).count;
            const i128 a = additive_energy(x, z).count;
            const i128 b = additive_energy(y, z).count;
            const i128 d = u - a - b;
            bad += !(d <= 0 || d * d <= 4 * a * b);
            auto y2 = y - x;
            if (!y2.empty()) {
                bad += additive_energy(x | y2, z).count < additive_energy(x, z).count + additive_energy(y2, z).count;
            }
        }
        return Outcome{bad == 0, count_msg(bad, 500)};
    });

    criterion(3, "|X||Y| <= E(X,Y) <= |X||Y|min(|X|,|Y|) on the criterion 1 sweep", [&] {
        std::size_t bad = 0;
        for (auto& [x, y] : c1_pairs) {
            const std::uint64_t e = additive_energy(x, y).count, xy = x.size() * y.size();
            bad += e < xy || e > xy * std::min(x.size(), y.size());
        }
        return Outcome{bad == 0, count_msg(bad, c1_pairs.size())};
    });

    criterion(4, "dissociation agrees with GF(2) independence on all 2^16 subsets of Z_2^4", [&] {
        const GroupSpec g = GroupSpec::parse("f2^4");
        std::size_t bad = 0;
        for (std::uint32_t m = 0; m < (1u << 16); ++m) {
            GroupSubset s = oracle::from_mask(g, m);
            const std::size_t rank = oracle::gf2_rank(s.indices());
            bad += is_dissociated(s) != (rank == s.size());
            bad += additive_dimension(s).value != rank;
        }
        return Outcome{bad == 0, count_msg(bad, 1u << 16)};
    });

    criterion(5, "energy partition postconditions on 50 instances with M in {2K, 4K, 8K}", [&] {
        const std::vector<GroupSpec> gs{GroupSpec::parse("f2^5"), GroupSpec({32}), GroupSpec({4, 8})};
        std::size_t bad = 0, runs = 0;
        for (int i = 0; i < 50; ++i) {
            const GroupSpec& g = gs[static_cast<std::size_t>(i) % gs.size()];
            auto a = oracle::random_set(g, rng, 20, 10);
            auto b = oracle::random_set(g, rng, 10, 2);
            const Rational K = energy_partition(a, b, Rational(1)).K;
            for (int f : {2, 4, 8}) {
                ++runs;
                const Rational M = K * Rational(f);
                auto r = energy_partition(a, b, M, FinderMode::exhaustive);
                bool ok = (r.b_prime | r.b_doubleprime) == b && r.b_prime.intersection_size(r.b_doubleprime) == 0;
                const std::uint64_t e2 = oracle::energy(a, r.b_doubleprime);
                const i128 bsz = static_cast<i128>(r.b_doubleprime.size());
                ok = ok && (r.b_doubleprime.empty() ||
                            static_cast<i128>(e2) * M.num() < static_cast<i128>(a.size()) * bsz * bsz * M.den());
                for (std::size_t s = 0; s < r.steps.size(); ++s) {
                    const std::uint64_t after =
                        s + 1 < r.steps.size() ? r.steps[s + 1].remainder_energy.count : e2;
                    ok = ok && 32 * after <= 31 * r.steps[s].remainder_energy.count;
                }
                const long double bound =
                    std::ceil(std::log(static_cast<long double>(b.size()) * M.to_long_double() / K.to_long_double()) /
                              std::log(32.0L / 31.0L)) +
                    1;
                ok = ok && static_cast<long double>(r.steps.size()) <= bound;
                if (r.steps.size() >= 2) ok = ok && 32 * oracle::energy(a, r.b_prime) >= oracle::energy(a, b);
                bad += !ok;
            }
        }
        return Outcome{bad == 0, count_msg(bad, runs)};
    });

    criterion(6, "packing, row extraction and pipeline inequalities on 200 instances each", [&] {
        const std::vector<GroupSpec> gs{GroupSpec::parse("f2^6"), GroupSpec({16})};
        const std::vector<Rational> eps_choices{Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(3, 8)};
        std::size_t bad = 0, packs = 0, extracts = 0, pipes = 0, attempts = 0;
        while ((packs < 200 || extracts < 200 || pipes < 200) && attempts < 200000) {
            ++attempts;
            const GroupSpec& g = gs[attempts % gs.size()];
            const Rational eps = eps_choices[attempts % eps_choices.size()];
            // Skewed densities make |sigma| >= eps common.
            const double density = (attempts % 2) ? 0.08 : 0.92;
            GroupSubset a(g);
            std::bernoulli_distribution coin(density);
            for (Index i = 0; i < g.order(); ++i)
                if (coin(rng)) a.insert(i);
            auto x = oracle::random_set(g, rng, 6), y = oracle::random_set(g, rng, 12);
            const std::uint64_t e = oracle::energy(x, y);
            if (packs < 200) {
                ++packs;
                auto p = greedy_packing(x, y, eps);
                bad += !packing_large(p.k, eps, e, y.size(), x.size());
            }
            const Rational s = abs(oracle::sigma(a, x, y));
            if (s < eps) continue;
            if (extracts < 200) {
                ++extracts;
                auto yp = lemma14_extract(a, x, y, eps);
                bad += Rational(static_cast<std::int64_t>(yp.size())) < eps * Rational(static_cast<std::int64_t>(y.size()));
            }
            if (pipes < 200) {
                ++pipes;
                auto c = corollary15_pipeline(a, x, y, eps);
                if (!c.hypothesis_holds || !c.packing || !c.K_prime) {
                    ++bad;
                    continue;
                }
                const Rational e2 = eps * eps;
                bad += !packing_large(c.packing->k, e2, e, y.size(), x.size(), 4);
                bad += *c.K_prime < eps * c.K;
            }
        }
        const bool enough = packs == 200 && extracts == 200 && pipes == 200;
        return Outcome{bad == 0 && enough, count_msg(bad, packs + extracts + pipes)};
    });

    criterion(7, "low-overlap row deviations stay under the exponential bound (1e5 trials)", [&] {
        ExperimentConfig c;
        c.kind = "lemma10";
        c.seed = 1;
        auto r = run_experiment(c);
        std::ostringstream d;
        for (const auto& k : r.results["per_k"]) {
            d << "k=" << k["k"].get<int>() << " freq=" << k["frequency"].get<double>()
              << " bound=" << k["bound"].get<double>() << "; ";
        }
        return Outcome{r.accepted && r.results["per_k"].size() == 3 &&
                           r.config["trials"].get<std::uint64_t>() == 100000,
                       d.str()};
    });

    criterion(8, "low-dimension count 15 in Z_2^3 and the counting chain on 100 points", [&] {
        auto c = count_low_dim_sets(GroupSpec::parse("f2^3"), 5, 1);
        bool ok = c.exact && *c.exact == 15 && std::fabs(static_cast<double>(c.bound.log_bound) - 10) < 1e-12 &&
                  static_cast<long double>(*c.exact) <= std::exp(c.bound.log_bound);
        std::uniform_real_distribution<double> logn(0.1, 60), slack(0, 100), dd(0, 40);
        std::size_t bad = 0;
        for (int i = 0; i < 100; ++i) {
            const long double N = std::exp(static_cast<long double>(logn(rng)));
            auto b = lemma6_bound(N, 2 * std::log(N) + slack(rng), std::floor(dd(rng)));
            bad += !(b.precondition_ok && b.chain_holds);
        }
        return Outcome{ok && bad == 0, "count " + (c.exact ? std::to_string(*c.exact) : std::string("n/a")) + ", " +
                                           count_msg(bad, 100)};
    });

    criterion(9, "closed form matches the composed packing and tail bound at 100 points", [&] {
        std::uniform_real_distribution<double> e(1e-3, 0.5), m(1, 1e8), k(1, 1e6), n(1, 1e5);
        long double worst = 0;
        for (int i = 0; i < 100; ++i) {
            const long double ep = e(rng), mm = m(rng), kk = k(rng), nn = n(rng);
            const long double a = prop16_bound(ep, mm, kk).log_value;
            const long double b = prop16_composed(ep, mm, kk, nn).log_value;
            worst = std::max(worst, std::fabs(a - b) / std::fabs(a));
        }
        std::ostringstream d;
        d << "max relative error " << static_cast<double>(worst);
        return Outcome{worst < 1e-12L, d.str()};
    });

    criterion(10, "cascade audit: failing row at log N = 230, threshold search, bit-identical replay", [&] {
        auto led = cascade_audit(CascadeMode::general, 230, std::log(230.0L));
        const CascadeRow* r = led.row("eps_tilde_sq_w1_over_32");
        bool ok = r && !r->pass && std::fabs(static_cast<double>(r->lhs) - 0.0035) <= 0.00035;
        ok = ok && replay(led) == led;
        auto t = find_threshold(CascadeMode::general);
        ok = ok && t.found && t.ledger.passes() && replay(t.ledger) == t.ledger;
        std::ostringstream d;
        d << "row value " << static_cast<double>(r ? r->lhs : 0) << ", threshold log2(log log N) = "
          << static_cast<double>(std::log2(t.loglog_n));
        return Outcome{ok, d.str()};
    });

    criterion(11, "mc and scan reruns give identical reports", [&] {
        const std::vector<std::vector<std::string>> cmds{
            {"--seed", "4", "mc", "--kind", "lemma10", "--trials", "2000"},
            {"--seed", "4", "mc", "--kind", "sigma-tail", "--trials", "200"},
            {"--seed", "4", "mc", "--kind", "restriction", "--trials", "20"},
            {"--seed", "4", "mc", "--kind", "sigma-tail", "--trials", "200", "--threads", "1"},
            {"--group", "f2^6", "--seed", "9", "scan", "--random-sizes", "8,16", "--epsilon", "1/8"},
            {"--group", "16", "--seed", "2", "scan", "--set-x", "[0,1,2]", "--epsilon", "1/4"},
            {"--group", "f2^5", "--seed", "5", "pack", "--random-sizes", "4,12", "--epsilon", "1/4"},
        };
        std::size_t bad = 0, ran = 0;
        for (const auto& cmd : cmds) {
            std::ostringstream o1, o2, e1, e2;
            const int c1 = run_cli(cmd, o1, e1);
            const int c2 = run_cli(cmd, o2, e2);
            ++ran;
            if (c1 != 0 || c2 != 0 || strip(o1.str()) != strip(o2.str())) ++bad;
        }
        // Thread count must not change an mc report.
        std::ostringstream a, b, ea, eb;
        run_cli({"--seed", "4", "mc", "--kind", "sigma-tail", "--trials", "200", "--threads", "1"}, a, ea);
        run_cli({"--seed", "4", "mc", "--kind", "sigma-tail", "--trials", "200", "--threads", "3"}, b, eb);
        Json ja = strip(a.str()), jb = strip(b.str());
        ja["config"].erase("threads");
        jb["config"].erase("threads");
        bad += ja != jb;
        return Outcome{bad == 0, count_msg(bad, ran + 1)};
    });

    criterion(12, "worst-case scan on Z_4 with A = {0,1} gives exactly 1/2", [&] {
        const GroupSpec g({4});
        const GroupSubset a = GroupSubset::parse(g, "[0,1]");
        auto wc = worst_case_search(a, 1);
        const bool ok = wc.max_abs_sigma == Rational(1, 2) && wc.witness_matches &&
                        abs(oracle::sigma(a, wc.x, wc.y)) == Rational(1, 2) &&
                        oracle::worst_case(a, 1) == Rational(1, 2);
        return Outcome{ok, "max |sigma| = " + wc.max_abs_sigma.str() + " at X = " + wc.x.str() + ", Y = " + wc.y.str()};
    });

    std::printf("%s: %d of 12 criteria failed\n", failures ? "FAILED" : "OK", failures);
    return failures ? 1 : 0;
}
