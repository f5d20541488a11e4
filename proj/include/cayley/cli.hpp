#pragma once

// Command-line front end. run_cli returns 0 on success, 1 when an invariant or an
// experiment's acceptance check fails, and 2 on usage errors.

#include <cayley/cascade.hpp>
#include <cayley/decomposition.hpp>
#include <cayley/harness.hpp>
#include <cayley/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace cayley {

namespace cli {

struct Globals {
    std::string group;
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
};

/// A rendered result and whether it counts as a property failure.
struct Outcome {
    Json json;
    std::string csv_table;
    bool failed = false;
};

inline GroupSpec need_group(const Globals& g) {
    if (g.group.empty()) throw StructuralError("--group is required");
    return GroupSpec::parse(g.group);
}

inline std::vector<std::size_t> parse_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == 'x') {
            if (!cur.empty()) out.push_back(static_cast<std::size_t>(std::stoull(cur)));
            cur.clear();
        } else if (c != ' ' && c != '[' && c != ']' && c != '(' && c != ')') {
            if (c < '0' || c > '9') throw StructuralError("bad size list '" + s + "'");
            cur += c;
        }
    }
    return out;
}

inline std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, std::string> out;
    for (const auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw StructuralError("--params expects key=value, got '" + s + "'");
        out[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return out;
}

inline long double param(const std::map<std::string, std::string>& p, const std::string& key,
                         std::optional<long double> fallback = std::nullopt) {
    auto it = p.find(key);
    if (it == p.end()) {
        if (fallback) return *fallback;
        throw StructuralError("missing --params " + key + "=...");
    }
    std::size_t used = 0;
    long double v = 0;
    try {
        v = std::stold(it->second, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != it->second.size()) {
        // allow exact fractions such as eps=1/2
        v = Rational::parse(it->second).to_long_double();
    }
    return v;
}

inline Json bound_json(const BoundValue& b) { return Json{{"value", b.value}, {"log_value", jnum(b.log_value)}}; }

inline Json evaluate_bound(const std::string& name, const std::map<std::string, std::string>& p, const Globals& g) {
    if (name == "hoeffding") return bound_json(hoeffding_tail(param(p, "lambda"), param(p, "count")));
    if (name == "lemma10") return bound_json(lemma10_bound(param(p, "eps"), param(p, "k"), param(p, "n")));
    if (name == "cor11" || name == "cor12") {
        auto b = cor11_cor12_bounds(param(p, "N"), param(p, "eps"), param(p, "n"), param(p, "k"));
        return Json{{"cor11_union_bound", bound_json(b.union_bound)},
                    {"cor12_simplified", bound_json(b.simplified)},
                    {"threshold", jnum(b.threshold)},
                    {"threshold_ok", b.threshold_ok}};
    }
    if (name == "prop8") {
        auto b = prop8_bound(param(p, "N"), param(p, "eps"), param(p, "r"), param(p, "K"), param(p, "C", 1));
        return Json{{"exponent", jnum(b.exponent)}, {"bound", bound_json(b.bound)}};
    }
    if (name == "cor9") {
        auto b = corollary9_bound(param(p, "N"), param(p, "eps"), param(p, "w"), param(p, "C", 1));
        return Json{{"M", jnum(b.M)},
                    {"r", jnum(b.r)},
                    {"eps_condition_ok", b.eps_condition_ok},
                    {"exponent", jnum(b.prop8.exponent)},
                    {"bound", bound_json(b.prop8.bound)}};
    }
    if (name == "prop16") {
        Json j{{"bound", bound_json(prop16_bound(param(p, "eps"), param(p, "m"), param(p, "K")))}};
        if (p.count("n")) j["composed"] = bound_json(prop16_composed(param(p, "eps"), param(p, "m"), param(p, "K"), param(p, "n")));
        return j;
    }
    if (name == "lemma6") {
        auto b = lemma6_bound(param(p, "N"), param(p, "n"), param(p, "d"));
        return Json{{"log_intermediate", jnum(b.log_intermediate)},
                    {"log_middle", jnum(b.log_middle)},
                    {"log_bound", jnum(b.log_bound)},
                    {"precondition_ok", b.precondition_ok},
                    {"chain_holds", b.chain_holds}};
    }
    if (name == "thresholds") {
        auto it = p.find("theorem");
        if (it == p.end()) throw StructuralError("missing --params theorem=thm1|thm2|thm7");
        auto t = theorem_thresholds(parse_theorem(it->second), param(p, "N"), param(p, "w"));
        return Json{{"x", jnum(t.x)}, {"y", jnum(t.y)}};
    }
    if (name == "low-dim-count") {
        const GroupSpec grp = need_group(g);
        auto c = count_low_dim_sets(grp, static_cast<std::size_t>(param(p, "n")), static_cast<std::size_t>(param(p, "d")));
        return Json{{"group", grp.str()},
                    {"exact", c.exact ? Json(*c.exact) : Json(nullptr)},
                    {"method", c.method},
                    {"log_bound", jnum(c.bound.log_bound)},
                    {"log_intermediate", jnum(c.bound.log_intermediate)},
                    {"precondition_ok", c.bound.precondition_ok},
                    {"chain_holds", c.bound.chain_holds},
                    {"exact_within_bound", c.exact_within_bound}};
    }
    throw StructuralError("unknown bound '" + name +
                          "' (hoeffding, lemma10, cor11, prop8, cor9, prop16, lemma6, thresholds, low-dim-count)");
}

inline Json dimension_json(const DimensionResult& d) {
    return Json{{"value", d.value}, {"witness", to_json(d.witness)}, {"exact", d.exact}};
}

inline Json packing_json(const PackingResult& p) {
    return Json{{"ys", p.ys},        {"k", p.k},
                {"epsilon", p.epsilon.str()}, {"z", to_json(p.z)},
                {"K", to_json(p.K)}, {"energy", p.energy.count}};
}

inline Json deviation_json(const DeviationReport& d) {
    return Json{{"sigma", to_json(d.sigma)}, {"x_size", d.x_size}, {"y_size", d.y_size}, {"edges", d.edges}};
}

inline Json decomposition_json(const DecompositionResult& r) {
    Json steps = Json::array();
    for (std::size_t i = 0; i < r.steps.size(); ++i) {
        const auto& s = r.steps[i];
        steps.push_back({{"step", i + 1},
                         {"piece", to_json(s.piece)},
                         {"remainder_energy_before", s.remainder_energy.count},
                         {"piece_energy", s.piece_energy.count},
                         {"piece_dim", s.piece_dim.value},
                         {"piece_dim_exact", s.piece_dim.exact},
                         {"piece_dim_within_target", s.piece_dim_within_target}});
    }
    return Json{{"b_prime", to_json(r.b_prime)},
                {"b_doubleprime", to_json(r.b_doubleprime)},
                {"K", to_json(r.K)},
                {"M", to_json(r.M)},
                {"input_energy", r.input_energy.count},
                {"b_prime_energy", r.b_prime_energy.count},
                {"b_doubleprime_energy", r.b_doubleprime_energy.count},
                {"step_count", r.step_count()},
                {"step_bound", jnum(r.step_bound)},
                {"halted_on_energy", r.halted_on_energy},
                {"b_prime_dim", r.b_prime_dim ? dimension_json(*r.b_prime_dim) : Json(nullptr)},
                {"dim_subadditivity_checked", r.dim_subadditivity_checked},
                {"steps", steps}};
}

inline Json threshold_json(const ThresholdResult& t) {
    Json grid = Json::array();
    for (auto [ll, ok] : t.grid) grid.push_back({{"loglog_n", jnum(ll)}, {"pass", ok}});
    return Json{{"found", t.found},
                {"loglog_n", jnum(t.loglog_n)},
                {"log2_loglog_n", jnum(std::log2(t.loglog_n))},
                {"log_n", std::isfinite(t.log_n) ? jnum(t.log_n) : Json("exp(" + std::to_string(static_cast<double>(t.loglog_n)) + ")")},
                {"w", jnum(t.loglog_n)},
                {"steps", t.steps},
                {"upward_closed", t.upward_closed},
                {"grid", grid},
                {"ledger", to_json(t.ledger)}};
}

inline void emit(const Outcome& o, const Globals& g, std::ostream& out) {
    std::string text = g.format == "csv" ? to_csv(o.json, o.csv_table) : o.json.dump(2) + "\n";
    if (g.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw StructuralError("cannot open --out path '" + g.out + "'");
    f << text;
}

} // namespace cli

/// args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli;
    CLI::App app{"Additive energy, dissociation and random Cayley sum graph toolkit", "cayley"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--group", g.group, "group literal: \"2,2,2\", \"z8\", \"f2^10\"");
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out", g.out, "write the report to PATH instead of stdout");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::string set_x, set_y, set_a, set_b, set, mode, M, epsilon = "1/2", sizes, kind, bound_name, random_sizes;
    std::vector<std::string> params;
    std::uint64_t trials = 0;
    std::size_t n = 32, floor = 1;
    unsigned threads = 0;
    long double c1 = kDefaultDimConstant;

    auto* group_cmd = app.add_subcommand("group", "describe a group");

    auto* energy = app.add_subcommand("energy", "additive energy E(X, Y)");
    energy->add_option("--set-x", set_x, "set literal [i,j,...] or 0x... bitmask")->required();
    energy->add_option("--set-y", set_y)->required();

    auto* dim = app.add_subcommand("dim", "additive dimension of a set");
    dim->add_option("--set", set)->required();
    dim->add_option("--mode", mode, "exact or greedy")->check(CLI::IsMember({"exact", "greedy"}))->default_str("exact");

    auto* decompose = app.add_subcommand("decompose", "energy partition of B against A");
    decompose->add_option("--set-a", set_a)->required();
    decompose->add_option("--set-b", set_b)->required();
    decompose->add_option("--M", M, "threshold M (p/q or decimal)")->required();
    decompose->add_option("--mode", mode, "exhaustive or greedy finder")->check(CLI::IsMember({"exhaustive", "greedy"}));
    decompose->add_option("--c1", c1, "dimension target constant")->capture_default_str();

    auto* pack = app.add_subcommand("pack", "maximal low-overlap packing of X-translates");
    auto* scan = app.add_subcommand("scan", "deviation, row extraction and packing for a random A");
    for (auto* sc : {pack, scan}) {
        sc->add_option("--set-x", set_x);
        sc->add_option("--set-y", set_y, "default: the whole group");
        sc->add_option("--random-sizes", random_sizes, "|X|,|Y| drawn from the seed");
        sc->add_option("--epsilon", epsilon)->capture_default_str();
    }
    scan->add_option("--set-a", set_a, "explicit A instead of a random one");

    auto* mc = app.add_subcommand("mc", "Monte Carlo experiment");
    mc->add_option("--kind", kind)->required()->check(CLI::IsMember({"lemma10", "sigma-tail", "restriction"}));
    mc->add_option("--trials", trials);
    mc->add_option("--epsilon", epsilon)->capture_default_str();
    mc->add_option("--sizes", sizes, "lemma10: k values; sigma-tail: tier sizes; restriction: |X|,|Y|");
    mc->add_option("--n", n, "lemma10: |X|")->capture_default_str();
    mc->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* bounds = app.add_subcommand("bounds", "evaluate a closed-form bound");
    bounds->add_option("--name", bound_name)->required();
    bounds->add_option("--params", params, "key=value pairs")->expected(0, -1);

    CascadeInputs ain;
    std::optional<long double> log_n, loglog_n, w, eps_audit;
    std::string audit_mode = "general";
    bool find = false;
    auto* audit = app.add_subcommand("audit", "proof-parameter cascade ledger");
    audit->add_option("--mode", audit_mode)->check(CLI::IsMember({"general", "exponent2"}))->capture_default_str();
    audit->add_option("--logN", log_n);
    audit->add_option("--loglogN", loglog_n);
    audit->add_option("--w", w, "default: log log N");
    audit->add_option("--epsilon", eps_audit, "exponent2 mode; default w^(-1/13)");
    audit->add_option("--C", ain.constants.C);
    audit->add_option("--C-prop8", ain.constants.C_prop8);
    audit->add_option("--C-prime", ain.constants.C_prime);
    audit->add_option("--C1", ain.constants.C1);
    audit->add_option("--C2", ain.constants.C2);
    audit->add_flag("--find-threshold", find, "search the least passing log log N with w = log log N");

    auto* worst = app.add_subcommand("worst-case", "exhaustive max |sigma| over all X, Y (N <= 16)");
    worst->add_option("--set-a", set_a, "default: random A from the seed");
    worst->add_option("--floor", floor, "minimum |X| and |Y|")->capture_default_str();

    if (args.empty()) {
        err << app.help();
        return 2;
    }
    std::vector<std::string> argv_store{"cayley"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        Outcome o;
        if (group_cmd->parsed()) {
            const GroupSpec grp = need_group(g);
            Json j{{"group", grp.str()},   {"moduli", grp.moduli()},        {"order", grp.order()},
                   {"rank", grp.rank()},   {"exponent_two", grp.is_exponent_two()}, {"cyclic", grp.is_cyclic()}};
            if (grp.order() <= 64) {
                Json el = Json::array();
                for (Index i = 0; i < grp.order(); ++i) el.push_back(grp.decode(i).coords);
                j["elements"] = el;
            }
            o.json = j;
        } else if (energy->parsed()) {
            const GroupSpec grp = need_group(g);
            const GroupSubset x = GroupSubset::parse(grp, set_x);
            const GroupSubset y = GroupSubset::parse(grp, set_y);
            const EnergyValue e = additive_energy(x, y);
            o.json = Json{{"group", grp.str()}, {"x", to_json(x)}, {"y", to_json(y)}, {"energy", e.count},
                          {"sumset_size", sumset(x, y).size()}};
            if (!x.empty() && !y.empty()) o.json["K"] = to_json(energy_ratio(x.size(), y.size(), e));
        } else if (dim->parsed()) {
            const GroupSpec grp = need_group(g);
            const GroupSubset s = GroupSubset::parse(grp, set);
            o.json = dimension_json(additive_dimension(s, mode == "greedy" ? DimensionMode::greedy : DimensionMode::exact));
        } else if (decompose->parsed()) {
            const GroupSpec grp = need_group(g);
            const FinderMode fm = mode.empty() ? FinderMode::exhaustive : parse_finder_mode(mode);
            o.json = decomposition_json(energy_partition(GroupSubset::parse(grp, set_a), GroupSubset::parse(grp, set_b),
                                                         Rational::parse(M), fm, c1));
            o.json["group"] = grp.str();
            o.csv_table = "steps";
        } else if (pack->parsed() || scan->parsed()) {
            const GroupSpec grp = need_group(g);
            const Rational eps = Rational::parse(epsilon);
            std::optional<GroupSubset> x, y;
            if (!random_sizes.empty()) {
                auto sz = parse_sizes(random_sizes);
                if (sz.size() != 2) throw StructuralError("--random-sizes expects |X|,|Y|");
                Engine setup(trial_seed(g.seed, kSetupStream));
                x = detail::random_sized_subset(grp, setup, sz[0]);
                y = detail::random_sized_subset(grp, setup, sz[1]);
            }
            if (!set_x.empty()) x = GroupSubset::parse(grp, set_x);
            if (!set_y.empty()) y = GroupSubset::parse(grp, set_y);
            if (!x) throw StructuralError("give --set-x or --random-sizes");
            if (!y) y = GroupSubset::full(grp);
            Json j{{"group", grp.str()}, {"seed", g.seed}, {"epsilon", eps.str()}, {"x", to_json(*x)}, {"y", to_json(*y)}};
            if (pack->parsed()) {
                j["packing"] = packing_json(greedy_packing(*x, *y, eps));
            } else {
                const GroupSubset a = set_a.empty() ? random_subset(grp, g.seed).a : GroupSubset::parse(grp, set_a);
                j["a"] = to_json(a);
                j["deviation"] = deviation_json(sigma(a, *x, *y));
                j["lemma14_rows"] = to_json(lemma14_extract(a, *x, *y, eps));
                const Cor15Result c = corollary15_pipeline(a, *x, *y, eps);
                j["corollary15"] = {{"hypothesis_holds", c.hypothesis_holds},
                                    {"diagnostic", c.diagnostic},
                                    {"K", to_json(c.K)},
                                    {"y_prime", c.y_prime ? to_json(*c.y_prime) : Json(nullptr)},
                                    {"K_prime", c.K_prime ? to_json(*c.K_prime) : Json(nullptr)},
                                    {"packing", c.packing ? packing_json(*c.packing) : Json(nullptr)}};
            }
            o.json = j;
        } else if (mc->parsed() || worst->parsed()) {
            ExperimentConfig cfg;
            cfg.kind = mc->parsed() ? kind : "worst-case";
            cfg.group = g.group;
            cfg.seed = g.seed;
            cfg.trials = trials;
            cfg.epsilon = Rational::parse(epsilon);
            cfg.sizes = sizes.empty() ? std::vector<std::size_t>{} : parse_sizes(sizes);
            cfg.x_size = n;
            cfg.threads = threads;
            cfg.size_floor = floor;
            if (!set_a.empty()) cfg.set_a = set_a;
            const ExperimentReport rep = run_experiment(cfg);
            o.json = rep.to_json();
            o.failed = !rep.accepted;
            if (cfg.kind == "lemma10") o.csv_table = "results/per_k";
            if (cfg.kind == "sigma-tail") o.csv_table = "results/tiers";
        } else if (bounds->parsed()) {
            o.json = Json{{"name", bound_name}, {"params", parse_params(params)}, {"result", evaluate_bound(bound_name, parse_params(params), g)}};
        } else if (audit->parsed()) {
            const CascadeMode cm = parse_cascade_mode(audit_mode);
            if (find) {
                o.json = threshold_json(find_threshold(cm, ain.constants, eps_audit));
                o.failed = !o.json["found"].get<bool>();
                o.csv_table = "grid";
            } else {
                if (log_n.has_value() == loglog_n.has_value()) throw StructuralError("give exactly one of --logN, --loglogN");
                ain.mode = cm;
                ain.log_n = log_n;
                ain.loglog_n = log_n ? std::log(*log_n) : *loglog_n;
                ain.w = w ? *w : ain.loglog_n;
                ain.epsilon = eps_audit;
                o.json = to_json(cascade_audit(ain));
                o.csv_table = "rows";
            }
        }
        emit(o, g, out);
        return o.failed ? 1 : 0;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const GuardExceeded& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return 1;
    }
}

} // namespace cayley
