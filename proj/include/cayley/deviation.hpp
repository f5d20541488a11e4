#pragma once

// Random Cayley sum graphs and edge-density deviation.
//
// For a random A, (x, y) is an edge iff x + y is in A. The deviation
//   sigma_A(X, Y) = (1/|X||Y|) * #{(x, y) in X x Y : x + y in A} - 1/2
// is kept as an exact rational; every lemma inequality below is checked in exact
// integer arithmetic.

#include <cayley/random.hpp>
#include <cayley/rational.hpp>
#include <cayley/setops.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cayley {

struct CayleySample {
    GroupSubset a;
    std::uint64_t seed = 0;
    Rational p = Rational(1, 2);
};

/// Each element enters A by an independent fair coin: bit i of A is bit (i % 64)
/// of the (i / 64)-th output of mt19937_64 seeded with `seed`.
inline CayleySample random_subset(const GroupSpec& g, std::uint64_t seed) {
    Engine rng(seed);
    std::vector<std::uint64_t> words((g.order() + 63) / 64);
    for (auto& w : words) w = rng();
    return {GroupSubset::from_words(g, std::move(words)), seed};
}

inline bool edge_query(const CayleySample& a, const Element& x, const Element& y) {
    const GroupSpec& g = a.a.group();
    return a.a.test(g.encode(g.add(x, y)));
}

struct DeviationReport {
    Rational sigma;
    std::size_t x_size = 0;
    std::size_t y_size = 0;
    std::uint64_t edges = 0;  // sum over X x Y of A(x + y)
};

namespace detail {

/// #{x in X : x + y in A}
inline std::size_t row_count(const GroupSubset& a, const std::vector<Index>& xs, Index y) {
    const GroupSpec& g = a.group();
    std::size_t c = 0;
    for (Index x : xs) c += a.test(g.add_index(x, y)) ? 1 : 0;
    return c;
}

inline Rational deviation_of(std::uint64_t edges, std::uint64_t pairs) {
    return Rational::from_wide(2 * static_cast<i128>(edges) - static_cast<i128>(pairs), 2 * static_cast<i128>(pairs));
}

inline void require_epsilon(const Rational& eps) {
    if (eps <= Rational(0) || eps > Rational(1, 2)) throw StructuralError("epsilon must lie in (0, 1/2]");
}

} // namespace detail

inline DeviationReport sigma(const GroupSubset& a, const GroupSubset& x, const GroupSubset& y) {
    a.require_same_group(x);
    a.require_same_group(y);
    if (x.empty() || y.empty()) throw StructuralError("sigma needs nonempty X and Y");
    const auto xs = x.indices();
    std::uint64_t edges = 0;
    y.for_each([&](Index yi) { edges += detail::row_count(a, xs, yi); });
    DeviationReport r;
    r.x_size = x.size();
    r.y_size = y.size();
    r.edges = edges;
    r.sigma = detail::deviation_of(edges, static_cast<std::uint64_t>(x.size()) * y.size());
    return r;
}

/// Y' = {y in Y : |sigma_A(X, y)| >= eps/2}. When |sigma_A(X, Y)| >= eps, |Y'| >= eps |Y| is checked.
inline GroupSubset lemma14_extract(const GroupSubset& a, const GroupSubset& x, const GroupSubset& y,
                                   const Rational& eps) {
    detail::require_epsilon(eps);
    DeviationReport whole = sigma(a, x, y);
    const auto xs = x.indices();
    const i128 n = static_cast<i128>(xs.size());
    GroupSubset out(y.group());
    y.for_each([&](Index yi) {
        i128 dev = 2 * static_cast<i128>(detail::row_count(a, xs, yi)) - n;
        if (dev < 0) dev = -dev;
        // |2c - n| / (2n) >= eps / 2  <=>  |2c - n| q >= p n
        if (dev * eps.den() >= static_cast<i128>(eps.num()) * n) out.insert(yi);
    });
    if (abs(whole.sigma) >= eps) {
        ensure(static_cast<i128>(out.size()) * eps.den() >= static_cast<i128>(eps.num()) * y.size(),
               "extracted set is smaller than eps |Y| although |sigma| >= eps");
    }
    return out;
}

struct PackingResult {
    std::vector<Index> ys;  // y_1, ..., y_k in admission order
    std::size_t k = 0;
    Rational epsilon;
    GroupSubset z;          // union of the translates X + y_i
    Rational K;             // |X|^2 |Y| / E(X, Y)
    EnergyValue energy;     // E(X, Y)
};

/// Overlap of X + y with the union of earlier translates must stay <= eps |X|.
inline bool overlap_admissible(std::size_t overlap, std::size_t n, const Rational& eps) {
    return static_cast<i128>(overlap) * eps.den() <= static_cast<i128>(eps.num()) * n;
}

/// Re-derives condition (12) along the order and maximality against Y; throws on failure.
inline void verify_packing(const GroupSubset& x, const GroupSubset& y, const PackingResult& p) {
    const std::size_t n = x.size();
    GroupSubset z(x.group());
    GroupSubset chosen(x.group());
    for (Index yi : p.ys) {
        ensure(y.contains(yi), "packing element outside Y");
        GroupSubset tr = x.translate(yi);
        ensure(overlap_admissible(tr.intersection_size(z), n, p.epsilon), "packing violates the overlap condition");
        z |= tr;
        chosen.insert(yi);
    }
    ensure(z == p.z, "packing union does not match the recorded translates");
    y.for_each([&](Index yi) {
        if (chosen.test(yi)) return;
        ensure(!overlap_admissible(x.translate(yi).intersection_size(z), n, p.epsilon),
               "packing is not maximal");
    });
}

/// Scans Y in increasing index order and admits y whenever |(X + y) n Z| <= eps n.
/// The result satisfies k > eps^2 |Y| K / n, which is checked exactly.
inline PackingResult greedy_packing(const GroupSubset& x, const GroupSubset& y, const Rational& eps) {
    x.require_same_group(y);
    if (eps <= Rational(0) || eps > Rational(1, 2)) throw StructuralError("epsilon must lie in (0, 1/2]");
    if (x.empty()) throw StructuralError("greedy_packing needs a nonempty X");
    if (y.empty()) throw StructuralError("greedy_packing needs a nonempty Y");
    const std::size_t n = x.size();
    PackingResult out{{}, 0, eps, GroupSubset(x.group()), Rational(0), {}};
    y.for_each([&](Index yi) {
        GroupSubset tr = x.translate(yi);
        if (overlap_admissible(tr.intersection_size(out.z), n, eps)) {
            out.ys.push_back(yi);
            out.z |= tr;
        }
    });
    out.k = out.ys.size();
    out.energy = additive_energy(x, y);
    out.K = energy_ratio(n, y.size(), out.energy);

    verify_packing(x, y, out);
    // k > eps^2 |Y| K / n  <=>  k q^2 E > p^2 n |Y|^2
    const i128 p = eps.num();
    const i128 q = eps.den();
    const i128 ysz = static_cast<i128>(y.size());
    ensure(detail::mul_checked(detail::mul_checked(static_cast<i128>(out.k), q * q), out.energy.count) >
               detail::mul_checked(p * p * static_cast<i128>(n), ysz * ysz),
           "packing size does not exceed eps^2 |Y| K / n");
    return out;
}

struct Cor15Result {
    bool hypothesis_holds = false;
    std::string diagnostic;
    DeviationReport deviation;
    Rational K;                          // for Y
    std::optional<GroupSubset> y_prime;
    std::optional<Rational> K_prime;     // for Y'
    std::optional<PackingResult> packing;
};

/// Extract the strongly deviating rows Y', then pack them with eps/2.
/// Checks K' >= eps K, |sigma_A(X, y_j)| >= eps/2 and k > eps^4 |Y| K / (4n).
inline Cor15Result corollary15_pipeline(const GroupSubset& a, const GroupSubset& x, const GroupSubset& y,
                                        const Rational& eps) {
    detail::require_epsilon(eps);
    Cor15Result out;
    out.deviation = sigma(a, x, y);
    const EnergyValue e = additive_energy(x, y);
    out.K = energy_ratio(x.size(), y.size(), e);
    if (abs(out.deviation.sigma) < eps) {
        out.diagnostic = "|sigma_A(X,Y)| = " + abs(out.deviation.sigma).str() + " < eps = " + eps.str();
        return out;
    }
    out.hypothesis_holds = true;
    GroupSubset yp = lemma14_extract(a, x, y, eps);
    const EnergyValue ep = additive_energy(x, yp);
    out.K_prime = energy_ratio(x.size(), yp.size(), ep);
    ensure(*out.K_prime >= eps * out.K, "K' < eps K on the extracted rows");

    const Rational half = eps * Rational(1, 2);
    PackingResult pack = greedy_packing(x, yp, half);
    const auto xs = x.indices();
    const i128 n = static_cast<i128>(xs.size());
    for (Index yi : pack.ys) {
        i128 dev = 2 * static_cast<i128>(detail::row_count(a, xs, yi)) - n;
        if (dev < 0) dev = -dev;
        ensure(dev * eps.den() >= static_cast<i128>(eps.num()) * n, "packed row deviates by less than eps/2");
    }
    // k > eps^4 |Y| K / (4n)  <=>  4 k q^4 E > p^4 n |Y|^2
    const i128 p = eps.num();
    const i128 q = eps.den();
    const i128 ysz = static_cast<i128>(y.size());
    ensure(detail::mul_checked(detail::mul_checked(4 * static_cast<i128>(pack.k), q * q * q * q), e.count) >
               detail::mul_checked(p * p * p * p * n, ysz * ysz),
           "packing size does not exceed eps^4 |Y| K / (4n)");
    out.y_prime = std::move(yp);
    out.packing = std::move(pack);
    return out;
}

/// Consecutive index-ordered blocks with sizes in [lo, hi].
/// Blocks of size hi are filled first; a short final block borrows from its
/// predecessors (last first) until it reaches lo.
inline std::vector<GroupSubset> split_blocks(const GroupSubset& y, std::size_t lo, std::size_t hi) {
    if (lo == 0 || lo > hi) throw StructuralError("split_blocks needs 1 <= lo <= hi");
    const std::size_t total = y.size();
    if (total < lo) throw StructuralError("split_blocks needs |Y| >= lo");
    const std::size_t blocks = (total + hi - 1) / hi;
    if (blocks * lo > total) {
        throw StructuralError("no split of " + std::to_string(total) + " elements into blocks of size [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    std::vector<std::size_t> sizes(blocks, hi);
    sizes.back() = total - (blocks - 1) * hi;
    for (std::size_t i = blocks - 1; sizes.back() < lo && i > 0; --i) {
        std::size_t give = std::min(sizes[i - 1] - lo, lo - sizes.back());
        sizes[i - 1] -= give;
        sizes.back() += give;
    }
    std::vector<GroupSubset> out;
    const auto idx = y.indices();
    std::size_t pos = 0;
    for (std::size_t s : sizes) {
        GroupSubset b(y.group());
        for (std::size_t i = 0; i < s; ++i) b.insert(idx[pos++]);
        out.push_back(std::move(b));
    }
    return out;
}

struct RestrictionParams {
    std::size_t s = 0;   // ceil(2000 log N / eps^4), clipped to [1, |X|]
    std::size_t t = 0;   // ceil(K |Y| eps^2 / (10 log N)), clipped to [1, |Y|]
    std::size_t r = 0;   // |Y|, the largest threshold the pair satisfies
    Rational K;          // |X|^2 |Y| / E(X, Y)
};

struct RestrictionSample {
    GroupSubset s;
    GroupSubset t;
    RestrictionParams params;
    bool energy_inequality = false;     // E(S,T) <= 2st + 2 s^2 t^2 E(X,Y) / (|X|^2 |Y|^2)
    bool deviation_inequality = false;  // |sigma(X,Y) - sigma(S,T)| <= 6 sqrt(|Y| / (st))
    EnergyValue energy_st;
    Rational deviation_gap;
};

inline RestrictionParams restriction_params(std::size_t x_size, std::size_t y_size, Index order,
                                            const Rational& K, const Rational& eps) {
    const long double logN = std::log(static_cast<long double>(order));
    const long double e = eps.to_long_double();
    RestrictionParams p;
    long double s = std::ceil(2000 * logN / (e * e * e * e));
    long double t = std::ceil(K.to_long_double() * static_cast<long double>(y_size) * e * e / (10 * logN));
    p.s = static_cast<std::size_t>(std::clamp<long double>(s, 1, static_cast<long double>(x_size)));
    p.t = static_cast<std::size_t>(std::clamp<long double>(t, 1, static_cast<long double>(y_size)));
    p.r = y_size;
    p.K = K;
    return p;
}

/// Draws uniform S in X and T in Y of the prescribed sizes and evaluates both
/// restriction inequalities exactly for this draw.
inline RestrictionSample restriction_sample(const GroupSubset& a, const GroupSubset& x, const GroupSubset& y,
                                            const Rational& eps, std::uint64_t seed,
                                            std::optional<RestrictionParams> params = std::nullopt) {
    detail::require_epsilon(eps);
    if (x.empty() || y.empty()) throw StructuralError("restriction_sample needs nonempty X and Y");
    const EnergyValue exy = additive_energy(x, y);
    RestrictionParams p = params ? *params
                                 : restriction_params(x.size(), y.size(), x.group().order(),
                                                      energy_ratio(x.size(), y.size(), exy), eps);
    if (p.s < 1 || p.s > x.size() || p.t < 1 || p.t > y.size()) {
        throw StructuralError("restriction sample sizes must satisfy 1 <= s <= |X| and 1 <= t <= |Y|");
    }
    Engine rng(seed);
    GroupSubset s(x.group(), sample_without_replacement(rng, x.indices(), p.s));
    GroupSubset t(y.group(), sample_without_replacement(rng, y.indices(), p.t));

    RestrictionSample out{s, t, p, false, false, additive_energy(s, t), Rational(0)};
    const i128 xs = static_cast<i128>(x.size());
    const i128 ys = static_cast<i128>(y.size());
    const i128 ss = static_cast<i128>(p.s);
    const i128 ts = static_cast<i128>(p.t);
    const i128 denom = detail::mul_checked(xs * xs, ys * ys);
    // E(S,T) |X|^2|Y|^2 <= 2 s t |X|^2|Y|^2 + 2 s^2 t^2 E(X,Y)
    out.energy_inequality = detail::mul_checked(out.energy_st.count, denom) <=
                            detail::mul_checked(2 * ss * ts, denom) +
                                detail::mul_checked(2 * ss * ss * ts * ts, static_cast<i128>(exy.count));

    Rational gap = abs(sigma(a, x, y).sigma - sigma(a, s, t).sigma);
    out.deviation_gap = gap;
    // gap^2 <= 36 |Y| / (s t)  <=>  num^2 s t <= 36 |Y| den^2
    const i128 gn = gap.num();
    const i128 gd = gap.den();
    out.deviation_inequality =
        detail::mul_checked(gn * gn, ss * ts) <= detail::mul_checked(36 * ys, detail::mul_checked(gd, gd));
    return out;
}

} // namespace cayley
