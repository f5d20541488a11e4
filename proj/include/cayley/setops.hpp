#pragma once

#include <cayley/rational.hpp>
#include <cayley/subset.hpp>

#include <algorithm>
#include <cstdint>
#include <vector>

namespace cayley {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit product overflow");
    return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("64-bit sum overflow");
    return r;
}

/// f(z) = #{(x, y) in X x Y : x + y = z}.
struct RepFunction {
    std::vector<std::uint32_t> values;
    std::size_t x_size = 0;
    std::size_t y_size = 0;
};

/// Number of additive quadruples (x1, x2, y1, y2) with x1 + y1 = x2 + y2.
struct EnergyValue {
    std::uint64_t count = 0;

    friend auto operator<=>(const EnergyValue&, const EnergyValue&) = default;
};

inline GroupSubset sumset(const GroupSubset& x, const GroupSubset& y) {
    x.require_same_group(y);
    const GroupSpec& g = x.group();
    GroupSubset out(g);
    const GroupSubset& small = x.size() <= y.size() ? x : y;
    const GroupSubset& large = x.size() <= y.size() ? y : x;
    small.for_each([&](Index s) { large.for_each([&](Index l) { out.insert(g.add_index(s, l)); }); });
    return out;
}

inline RepFunction rep_function(const GroupSubset& x, const GroupSubset& y) {
    x.require_same_group(y);
    const GroupSpec& g = x.group();
    RepFunction f;
    f.values.assign(g.order(), 0);
    f.x_size = x.size();
    f.y_size = y.size();
    const GroupSubset& small = x.size() <= y.size() ? x : y;
    const GroupSubset& large = x.size() <= y.size() ? y : x;
    // Pair enumeration is O(|X||Y|) <= O(N min(|X|,|Y|)).
    auto large_idx = large.indices();
    small.for_each([&](Index s) {
        for (Index l : large_idx) ++f.values[g.add_index(s, l)];
    });
    return f;
}

inline EnergyValue energy_from_rep(const RepFunction& f) {
    std::uint64_t e = 0;
    for (auto v : f.values) {
        if (v != 0) e = checked_add(e, checked_mul(v, v));
    }
    return {e};
}

/// E(X, Y) computed as the sum of squares of the representation function.
inline EnergyValue additive_energy(const GroupSubset& x, const GroupSubset& y) {
    return energy_from_rep(rep_function(x, y));
}

inline constexpr std::uint64_t kEnergyOracleGuard = 100'000'000;

/// Literal quadruple count over X x X x Y x Y. Refuses when |X|^2 |Y|^2 > 10^8.
inline EnergyValue additive_energy_oracle(const GroupSubset& x, const GroupSubset& y) {
    x.require_same_group(y);
    std::uint64_t xy = checked_mul(x.size(), y.size());
    if (xy > 0 && checked_mul(xy, xy) > kEnergyOracleGuard) {
        throw GuardExceeded("energy oracle refuses |X|^2|Y|^2 = " + std::to_string(xy * xy) + " > 10^8");
    }
    const GroupSpec& g = x.group();
    auto xs = x.indices();
    auto ys = y.indices();
    std::uint64_t count = 0;
    for (Index x1 : xs)
        for (Index y1 : ys) {
            Index lhs = g.add_index(x1, y1);
            for (Index x2 : xs)
                for (Index y2 : ys) count += (lhs == g.add_index(x2, y2)) ? 1 : 0;
        }
    return {count};
}

/// K defined by E(X, Y) = |X|^2 |Y| / K. Requires E > 0.
inline Rational energy_ratio(std::size_t x_size, std::size_t y_size, EnergyValue e) {
    if (e.count == 0) throw StructuralError("energy ratio undefined for empty sets");
    std::uint64_t top = checked_mul(checked_mul(x_size, x_size), y_size);
    return Rational::from_wide(static_cast<i128>(top), static_cast<i128>(e.count));
}

} // namespace cayley
