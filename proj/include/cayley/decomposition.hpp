#pragma once

// Structured-subset finder and the iterative energy partition built on it.
//
// The finder's energy guarantee E(A, B*) >= E(A, B) / 32 is a hard postcondition.
// The dimension target dim(B*) <= c1 K log|A| is reported, not enforced: the
// constant behind it is not known, and the search here is not a proof.

#include <cayley/dissociation.hpp>
#include <cayley/rational.hpp>
#include <cayley/setops.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cayley {

enum class FinderMode { exhaustive, greedy };

inline FinderMode parse_finder_mode(const std::string& s) {
    if (s == "exhaustive") return FinderMode::exhaustive;
    if (s == "greedy") return FinderMode::greedy;
    throw StructuralError("unknown finder mode '" + s + "' (expected exhaustive or greedy)");
}

inline constexpr std::size_t kExhaustiveFinderGuard = 12;
inline constexpr long double kDefaultDimConstant = 16;

struct StructuredSubset {
    GroupSubset subset;
    EnergyValue energy;       // E(A, B*)
    EnergyValue source_energy; // E(A, B)
    DimensionResult dim;
    long double dim_target = 0;  // c1 K log|A|
    bool dim_within_target = false;
};

namespace detail {

/// 32 E(A, S) >= E(A, B)
inline bool meets_energy_fraction(EnergyValue sub, EnergyValue full) {
    return static_cast<i128>(sub.count) * 32 >= static_cast<i128>(full.count);
}

/// E >= |A||B|^2 / K with K = p/q, i.e. E p >= |A||B|^2 q.
inline bool energy_at_least(EnergyValue e, std::size_t a_size, std::size_t b_size, const Rational& K) {
    i128 lhs = detail::mul_checked(static_cast<i128>(e.count), K.num());
    i128 rhs = detail::mul_checked(static_cast<i128>(a_size) * b_size * b_size, K.den());
    return lhs >= rhs;
}

} // namespace detail

/// A nonempty B* subset of B carrying at least a 2^-5 share of E(A, B).
///
/// Exhaustive mode (|B| <= 12) returns, among all qualifying subsets, one of least exact
/// dimension, ties broken by smaller size and then by the lexicographic order of the
/// sorted index lists. Greedy mode adds the element of B maximising E(A, B* + y) (lowest
/// index on ties) until the energy share is reached.
inline StructuredSubset structured_subset_find(const GroupSubset& a, const GroupSubset& b, const Rational& K,
                                               FinderMode mode, long double c1 = kDefaultDimConstant) {
    a.require_same_group(b);
    if (b.empty()) throw StructuralError("structured_subset_find needs a nonempty B");
    if (a.size() < b.size()) throw StructuralError("structured_subset_find needs |A| >= |B|");
    if (K <= Rational(0)) throw StructuralError("structured_subset_find needs K > 0");
    const EnergyValue full = additive_energy(a, b);
    if (!detail::energy_at_least(full, a.size(), b.size(), K)) {
        throw StructuralError("structured_subset_find precondition E(A,B) >= |A||B|^2/K fails for K = " + K.str());
    }

    std::optional<GroupSubset> best;
    EnergyValue best_energy;
    std::optional<DimensionResult> best_dim;

    if (mode == FinderMode::exhaustive) {
        if (b.size() > kExhaustiveFinderGuard) {
            throw GuardExceeded("exhaustive finder refuses |B| = " + std::to_string(b.size()) + " > 12");
        }
        const auto elems = b.indices();
        const std::uint32_t subsets = 1u << elems.size();
        for (std::uint32_t mask = 1; mask < subsets; ++mask) {
            GroupSubset cand(b.group());
            for (std::size_t i = 0; i < elems.size(); ++i) {
                if ((mask >> i) & 1u) cand.insert(elems[i]);
            }
            EnergyValue e = additive_energy(a, cand);
            if (!detail::meets_energy_fraction(e, full)) continue;
            DimensionResult d = additive_dimension(cand);
            bool better = !best;
            if (best) {
                if (d.value != best_dim->value) better = d.value < best_dim->value;
                else if (cand.size() != best->size()) better = cand.size() < best->size();
                else better = lex_compare(cand, *best) < 0;
            }
            if (better) {
                best = std::move(cand);
                best_energy = e;
                best_dim = std::move(d);
            }
        }
    } else {
        GroupSubset cur(b.group());
        EnergyValue cur_energy{0};
        const auto elems = b.indices();
        while (!detail::meets_energy_fraction(cur_energy, full)) {
            std::optional<Index> pick;
            EnergyValue pick_energy{0};
            for (Index y : elems) {
                if (cur.test(y)) continue;
                GroupSubset trial = cur;
                trial.insert(y);
                EnergyValue e = additive_energy(a, trial);
                if (!pick || e > pick_energy) {
                    pick = y;
                    pick_energy = e;
                }
            }
            cur.insert(*pick);
            cur_energy = pick_energy;
        }
        best_dim = best_effort_dimension(cur);
        best_energy = cur_energy;
        best = std::move(cur);
    }

    ensure(best.has_value(), "structured_subset_find found no qualifying subset");
    ensure(detail::meets_energy_fraction(best_energy, full), "finder output misses the 2^-5 energy share");

    StructuredSubset out{std::move(*best), best_energy, full, std::move(*best_dim), 0, false};
    out.dim_target = c1 * K.to_long_double() * std::log(static_cast<long double>(a.size()));
    out.dim_within_target = static_cast<long double>(out.dim.value) <= out.dim_target;
    return out;
}

struct DecompositionStep {
    GroupSubset piece;           // G_j
    EnergyValue remainder_energy; // E(A, B''_j) before the step
    EnergyValue piece_energy;     // E(A, G_j)
    DimensionResult piece_dim;
    bool piece_dim_within_target = false;
};

struct DecompositionResult {
    GroupSubset b_prime;
    GroupSubset b_doubleprime;
    std::vector<DecompositionStep> steps;
    Rational K;                   // |A||B|^2 / E(A, B)
    Rational M;
    EnergyValue input_energy;     // E(A, B)
    EnergyValue b_prime_energy;
    EnergyValue b_doubleprime_energy;
    long double step_bound = 0;   // ceil(log_{32/31}(|B| M / K)) + 1
    bool halted_on_energy = false;
    std::optional<DimensionResult> b_prime_dim;
    bool dim_subadditivity_checked = false;

    std::size_t step_count() const { return steps.size(); }
};

/// Splits B into B' (a union of structured pieces) and B'' with E(A, B'') < |A||B''|^2 / M.
///
/// Runs the loop literally: while B'' is nonempty and E(A, B'') >= |A||B''|^2 / M, take a
/// structured piece of B'' (with K = M) and move it to B'. When M < K the loop never runs.
inline DecompositionResult energy_partition(const GroupSubset& a, const GroupSubset& b, const Rational& M,
                                            FinderMode mode = FinderMode::exhaustive,
                                            long double c1 = kDefaultDimConstant) {
    a.require_same_group(b);
    if (b.size() < 2) throw StructuralError("energy_partition needs |B| >= 2");
    if (a.size() < b.size()) throw StructuralError("energy_partition needs |A| >= |B|; orient the arguments");
    if (M <= Rational(0)) throw StructuralError("energy_partition needs M > 0");

    DecompositionResult out{GroupSubset(b.group()), b, {}, Rational(0), M, {}, {}, {}, 0, false, std::nullopt, false};
    out.input_energy = additive_energy(a, b);
    out.K = Rational::from_wide(static_cast<i128>(a.size()) * b.size() * b.size(), out.input_energy.count);
    out.step_bound =
        std::ceil(std::log((static_cast<long double>(b.size()) * M.to_long_double()) / out.K.to_long_double()) /
                  std::log(32.0L / 31.0L)) +
        1;

    if (M >= out.K) {
        EnergyValue remainder = out.input_energy;
        while (!out.b_doubleprime.empty()) {
            if (!detail::energy_at_least(remainder, a.size(), out.b_doubleprime.size(), M)) {
                out.halted_on_energy = true;
                break;
            }
            StructuredSubset piece = structured_subset_find(a, out.b_doubleprime, M, mode, c1);
            out.b_doubleprime -= piece.subset;
            out.b_prime |= piece.subset;
            EnergyValue next = additive_energy(a, out.b_doubleprime);
            ensure(static_cast<i128>(next.count) * 32 <= static_cast<i128>(remainder.count) * 31,
                   "remainder energy failed to decay by 31/32");
            out.steps.push_back({std::move(piece.subset), remainder, piece.energy, std::move(piece.dim),
                                 piece.dim_within_target});
            remainder = next;
        }
    }

    out.b_prime_energy = additive_energy(a, out.b_prime);
    out.b_doubleprime_energy = additive_energy(a, out.b_doubleprime);

    ensure((out.b_prime | out.b_doubleprime) == b && out.b_prime.intersection_size(out.b_doubleprime) == 0,
           "B' and B'' do not partition B");
    ensure(out.b_doubleprime.empty() ||
               !detail::energy_at_least(out.b_doubleprime_energy, a.size(), out.b_doubleprime.size(), M),
           "halting condition fails on the remainder");
    if (!out.steps.empty()) {
        ensure(detail::meets_energy_fraction(out.b_prime_energy, out.input_energy),
               "E(A, B') fell below 2^-5 E(A, B)");
        ensure(static_cast<long double>(out.steps.size()) <= out.step_bound, "step count exceeds the log bound");
    }

    if (!out.b_prime.empty()) {
        out.b_prime_dim = best_effort_dimension(out.b_prime);
        bool pieces_exact = true;
        std::size_t sum = 0;
        for (const auto& s : out.steps) {
            pieces_exact = pieces_exact && s.piece_dim.exact;
            sum += s.piece_dim.value;
        }
        // A lower bound for dim(B') against exact piece dimensions is still a valid check.
        if (pieces_exact) {
            out.dim_subadditivity_checked = true;
            ensure(out.b_prime_dim->value <= sum, "dim(B') exceeds the sum of piece dimensions");
        }
    }
    return out;
}

} // namespace cayley
