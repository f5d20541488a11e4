#pragma once

// Dissociated sets, Span, and additive dimension.
//
// A set L is dissociated when sum eps_l * l = 0 with eps in {-1,0,1} forces eps = 0.
// Equivalently, its 2^|L| subset sums are pairwise distinct: two distinct subsets
// U, V with equal sums give the relation with eps = +1 on U\V and -1 on V\U, and
// every relation arises this way. The tracker below maintains the subset-sum set
// incrementally, so extending a dissociated set by one element costs O(2^|L|), and
// 2^|L| <= N always holds for a dissociated L.

#include <cayley/bounds.hpp>
#include <cayley/subset.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cayley {

inline constexpr std::size_t kDissociationGuard = 24;
inline constexpr std::size_t kExactDimensionGuard = 20;
inline constexpr Index kLowDimEnumerationCap = 32;

namespace detail {

/// Subset sums of a growing dissociated set, with O(1) membership.
class SubsetSumTracker {
public:
    explicit SubsetSumTracker(const GroupSpec& g) : g_(g), seen_((g.order() + 63) / 64, 0) {
        sums_.reserve(64);
        mark(0);
        sums_.push_back(0);
    }

    std::size_t depth() const { return marks_.size(); }

    /// Adds l when the set stays dissociated; leaves the state untouched otherwise.
    bool try_extend(Index l) {
        const std::size_t n = sums_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (is_marked(g_.add_index(sums_[i], l))) return false;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Index s = g_.add_index(sums_[i], l);
            mark(s);
            sums_.push_back(s);
        }
        marks_.push_back(n);
        return true;
    }

    void pop() {
        std::size_t n = marks_.back();
        marks_.pop_back();
        for (std::size_t i = n; i < sums_.size(); ++i) unmark(sums_[i]);
        sums_.resize(n);
    }

private:
    bool is_marked(Index i) const { return (seen_[i >> 6] >> (i & 63)) & 1u; }
    void mark(Index i) { seen_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void unmark(Index i) { seen_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    const GroupSpec& g_;
    std::vector<std::uint64_t> seen_;
    std::vector<Index> sums_;
    std::vector<std::size_t> marks_;
};

/// Gaussian elimination over F_2 on index bit-vectors (exponent-2 groups only).
class Gf2Basis {
public:
    bool insert(Index v) {
        for (int bit = 31; bit >= 0; --bit) {
            if (!((v >> bit) & 1u)) continue;
            if (pivots_[bit] == 0) {
                pivots_[bit] = v;
                ++rank_;
                return true;
            }
            v ^= pivots_[bit];
        }
        return false;
    }
    std::size_t rank() const { return rank_; }

private:
    std::array<Index, 32> pivots_{};
    std::size_t rank_ = 0;
};

inline std::size_t floor_log2(Index n) { return static_cast<std::size_t>(std::bit_width(n)) - 1; }

} // namespace detail

inline bool is_dissociated(const GroupSubset& s) {
    const GroupSpec& g = s.group();
    if (g.is_exponent_two()) {
        detail::Gf2Basis basis;
        bool independent = true;
        s.for_each([&](Index v) { independent = independent && basis.insert(v); });
        return independent;
    }
    if (s.size() > kDissociationGuard) {
        throw GuardExceeded("is_dissociated refuses |S| = " + std::to_string(s.size()) + " > 24 outside exponent-2 groups");
    }
    if (s.contains(0)) return false;
    if (s.size() > detail::floor_log2(g.order())) return false;
    detail::SubsetSumTracker tracker(g);
    bool ok = true;
    s.for_each([&](Index v) { ok = ok && tracker.try_extend(v); });
    return ok;
}

/// Span(S) = { sum eps_j s_j : eps_j in {-1, 0, 1} }, built one generator at a time.
inline GroupSubset span(const GroupSubset& s) {
    const GroupSpec& g = s.group();
    if (!g.is_exponent_two() && s.size() > kDissociationGuard) {
        throw GuardExceeded("span refuses |S| = " + std::to_string(s.size()) + " > 24 outside exponent-2 groups");
    }
    GroupSubset acc(g);
    acc.insert(0);
    s.for_each([&](Index v) {
        Index minus = g.neg_index(v);
        GroupSubset next = acc;
        acc.for_each([&](Index a) {
            next.insert(g.add_index(a, v));
            next.insert(g.add_index(a, minus));
        });
        acc = std::move(next);
    });
    return acc;
}

enum class DimensionMode { exact, greedy };

struct DimensionResult {
    std::size_t value = 0;
    GroupSubset witness;
    bool exact = false;
};

namespace detail {

inline DimensionResult greedy_dimension(const GroupSubset& a) {
    SubsetSumTracker tracker(a.group());
    GroupSubset witness(a.group());
    a.for_each([&](Index v) {
        if (v != 0 && tracker.try_extend(v)) witness.insert(v);
    });
    return {witness.size(), std::move(witness), false};
}

class DimensionSearch {
public:
    explicit DimensionSearch(const GroupSubset& a) : a_(a), tracker_(a.group()) {
        a.for_each([&](Index v) {
            if (v != 0) elems_.push_back(v);
        });
        cap_ = std::min(elems_.size(), floor_log2(a.group().order()));
    }

    DimensionResult run() {
        dfs(0);
        GroupSubset witness(a_.group(), best_set_);
        return {best_set_.size(), std::move(witness), true};
    }

private:
    void dfs(std::size_t i) {
        if (current_.size() > best_set_.size()) best_set_ = current_;
        if (best_set_.size() == cap_) return;
        if (current_.size() + (elems_.size() - i) <= best_set_.size()) return;
        if (i == elems_.size()) return;
        if (tracker_.try_extend(elems_[i])) {
            current_.push_back(elems_[i]);
            dfs(i + 1);
            current_.pop_back();
            tracker_.pop();
            if (best_set_.size() == cap_) return;
        }
        dfs(i + 1);
    }

    const GroupSubset& a_;
    SubsetSumTracker tracker_;
    std::vector<Index> elems_;
    std::vector<Index> current_;
    std::vector<Index> best_set_;
    std::size_t cap_ = 0;
};

} // namespace detail

/// Size of a largest dissociated subset, with a witness.
/// Exact mode is exact only; greedy mode returns a maximal-by-inclusion witness (a lower bound).
inline DimensionResult additive_dimension(const GroupSubset& a, DimensionMode mode = DimensionMode::exact) {
    if (mode == DimensionMode::greedy) return detail::greedy_dimension(a);
    if (a.group().is_exponent_two()) {
        // Greedy selection over F_2 is a basis of the spanned subspace, hence of maximal size.
        auto r = detail::greedy_dimension(a);
        r.exact = true;
        return r;
    }
    if (a.size() > kExactDimensionGuard) {
        throw GuardExceeded("exact dimension refuses |A| = " + std::to_string(a.size()) +
                            " > 20 outside exponent-2 groups; use greedy mode");
    }
    return detail::DimensionSearch(a).run();
}

/// Exact dimension when affordable, greedy lower bound otherwise.
inline DimensionResult best_effort_dimension(const GroupSubset& a) {
    if (a.group().is_exponent_two() || a.size() <= kExactDimensionGuard) return additive_dimension(a);
    return additive_dimension(a, DimensionMode::greedy);
}

struct LowDimCount {
    std::optional<std::uint64_t> exact;
    std::string method;  // "closed-form", "enumeration", or "bound-only"
    Lemma6Bound bound;
    bool exact_within_bound = true;
};

namespace detail {

class LowDimCounter {
public:
    LowDimCounter(const GroupSpec& g, std::size_t n, std::size_t d, std::uint64_t budget)
        : g_(g), n_(n), d_(d), budget_(budget), tracker_(g) {}

    std::optional<std::uint64_t> run() {
        if (!recurse(0)) return std::nullopt;
        return count_;
    }

private:
    // Every nonempty X visited satisfies |X| <= n and dim X <= d; supersets of a set with
    // dim > d are pruned since dimension is monotone under inclusion.
    bool recurse(Index start) {
        for (Index e = start; e < g_.order(); ++e) {
            if (current_.size() >= n_) return true;
            if (!keeps_dimension(e)) continue;
            if (++count_ > budget_) return false;
            current_.push_back(e);
            bool ok = recurse(e + 1);
            current_.pop_back();
            if (!ok) return false;
        }
        return true;
    }

    // Given dim(current) <= d, dim(current + e) > d iff some dissociated (d+1)-set contains e.
    bool keeps_dimension(Index e) {
        if (e == 0) return true;
        if (d_ == 0) return false;
        if (!tracker_.try_extend(e)) return true;
        bool found = extend_from(0, 1);
        tracker_.pop();
        return !found;
    }

    bool extend_from(std::size_t i, std::size_t size) {
        if (size == d_ + 1) return true;
        if (size + (current_.size() - i) < d_ + 1) return false;
        for (std::size_t k = i; k < current_.size(); ++k) {
            Index v = current_[k];
            if (v == 0 || !tracker_.try_extend(v)) continue;
            bool found = extend_from(k + 1, size + 1);
            tracker_.pop();
            if (found) return true;
        }
        return false;
    }

    const GroupSpec& g_;
    std::size_t n_;
    std::size_t d_;
    std::uint64_t budget_;
    std::uint64_t count_ = 0;
    std::vector<Index> current_;
    SubsetSumTracker tracker_;
};

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

/// Number of nonempty X with |X| <= n and dim X <= d, against the bound e^{2nd}.
/// Enumeration runs only for groups of order <= 32.
inline LowDimCount count_low_dim_sets(const GroupSpec& g, std::size_t n, std::size_t d,
                                      std::uint64_t budget = 200'000'000) {
    LowDimCount out;
    out.bound = lemma6_bound(static_cast<long double>(g.order()), static_cast<long double>(n),
                             static_cast<long double>(d));
    if (g.order() > kLowDimEnumerationCap) {
        out.method = "bound-only";
        return out;
    }
    const std::size_t max_dim = std::min<std::size_t>(n, detail::floor_log2(g.order()));
    if (d >= max_dim) {
        std::uint64_t total = 0;
        for (std::size_t k = 1; k <= std::min<std::size_t>(n, g.order()); ++k) total += detail::binomial(g.order(), k);
        out.exact = total;
        out.method = "closed-form";
    } else {
        out.exact = detail::LowDimCounter(g, n, d, budget).run();
        out.method = out.exact ? "enumeration" : "bound-only";
    }
    if (out.exact) {
        out.exact_within_bound = *out.exact == 0 || std::log(static_cast<long double>(*out.exact)) <= out.bound.log_bound;
    }
    return out;
}

} // namespace cayley
