#pragma once

// Closed-form probability bounds. Every bound is evaluated as a natural-log exponent
// first; the probability itself is exp(exponent) clipped to [0, 1], so huge negative
// exponents underflow cleanly to 0 without losing the exponent.

#include <cayley/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace cayley {

struct BoundValue {
    long double log_value = 0;  // natural log of the unclipped bound
    double value = 1;           // exp(log_value) clipped to [0, 1]

    static BoundValue from_log(long double log_value) {
        BoundValue b;
        b.log_value = log_value;
        b.value = log_value >= 0 ? 1.0 : static_cast<double>(std::exp(log_value));
        return b;
    }
};

namespace detail {
inline void require(bool ok, const char* what) {
    if (!ok) throw StructuralError(what);
}
} // namespace detail

/// P(S - E[S] >= lambda) <= exp(-2 lambda^2 / count) for a sum of `count` fair coins.
inline BoundValue hoeffding_tail(long double lambda, long double count) {
    detail::require(count >= 1, "hoeffding_tail needs count >= 1");
    detail::require(lambda >= 0, "hoeffding_tail needs lambda >= 0");
    return BoundValue::from_log(-2 * lambda * lambda / count);
}

/// exp(-eps^2 k n / 2): all k low-overlap rows deviate by eps.
inline BoundValue lemma10_bound(long double eps, long double k, long double n) {
    detail::require(eps > 0 && eps <= 0.5L, "lemma10_bound needs eps in (0, 1/2]");
    detail::require(k >= 0 && n >= 1, "lemma10_bound needs k >= 0 and n >= 1");
    return BoundValue::from_log(-eps * eps * k * n / 2);
}

struct Cor11Cor12Bounds {
    BoundValue union_bound;      // (N exp(-eps^2 n / 2))^k
    BoundValue simplified;       // exp(-eps^2 n k / 4)
    long double threshold = 0;   // 4 log N / eps^2
    bool threshold_ok = false;   // n >= threshold; `simplified` is only a valid bound when true
};

inline Cor11Cor12Bounds cor11_cor12_bounds(long double N, long double eps, long double n, long double k) {
    detail::require(N >= 2, "cor11_cor12_bounds needs N >= 2");
    detail::require(eps > 0 && eps <= 0.5L, "cor11_cor12_bounds needs eps in (0, 1/2]");
    detail::require(n >= 1 && k >= 0, "cor11_cor12_bounds needs n >= 1 and k >= 0");
    Cor11Cor12Bounds out;
    const long double logN = std::log(N);
    out.union_bound = BoundValue::from_log(k * (logN - eps * eps * n / 2));
    out.simplified = BoundValue::from_log(-eps * eps * n * k / 4);
    out.threshold = 4 * logN / (eps * eps);
    out.threshold_ok = n >= out.threshold;
    return out;
}

struct Prop8Bound {
    long double exponent = 0;  // 2000 log^2 N / eps^4 - eps^2 r K / 40
    BoundValue bound;          // C * exp(exponent)
};

inline Prop8Bound prop8_bound(long double N, long double eps, long double r, long double K, long double C = 1) {
    detail::require(N >= 2, "prop8_bound needs N >= 2");
    detail::require(eps > 0 && eps <= 1, "prop8_bound needs eps in (0, 1]");
    detail::require(r >= 1 && K >= 1, "prop8_bound needs r, K >= 1");
    detail::require(C > 0, "prop8_bound needs C > 0");
    const long double logN = std::log(N);
    Prop8Bound out;
    out.exponent = 2000 * logN * logN / (eps * eps * eps * eps) - eps * eps * r * K / 40;
    out.bound = BoundValue::from_log(std::log(C) + out.exponent);
    return out;
}

/// The energy-threshold specialisation K = M = (log log N)^{-1} (log N)^{1/2},
/// r = (eps/4) w log log N log^{3/2} N.
struct Cor9Bound {
    long double M = 0;
    long double r = 0;
    bool eps_condition_ok = false;  // eps^7 >= 2^25 / (w log log N sqrt(log N))
    Prop8Bound prop8;
};

inline Cor9Bound corollary9_bound(long double N, long double eps, long double w, long double C = 1) {
    detail::require(N > std::exp(1.0L), "corollary9_bound needs log log N > 0");
    detail::require(w > 0, "corollary9_bound needs w > 0");
    const long double L = std::log(N);
    const long double LL = std::log(L);
    Cor9Bound out;
    out.M = std::sqrt(L) / LL;
    out.r = (eps / 4) * w * LL * L * std::sqrt(L);
    out.eps_condition_ok = std::pow(eps, 7.0L) >= std::ldexp(1.0L, 25) / (w * LL * std::sqrt(L));
    out.prop8 = prop8_bound(N, eps, std::max<long double>(out.r, 1), std::max<long double>(out.M, 1), C);
    return out;
}

/// exp(-eps^6 m K / 64).
inline BoundValue prop16_bound(long double eps, long double m, long double K) {
    detail::require(eps > 0 && eps <= 0.5L, "prop16_bound needs eps in (0, 1/2]");
    detail::require(m >= 1 && K >= 1, "prop16_bound needs m, K >= 1");
    return BoundValue::from_log(-std::pow(eps, 6.0L) * m * K / 64);
}

/// The same bound assembled from its two ingredients: the packing size
/// k = eps^4 m K / (4n) fed into exp(-(eps/2)^2 n k / 4).
inline BoundValue prop16_composed(long double eps, long double m, long double K, long double n) {
    detail::require(n >= 1, "prop16_composed needs n >= 1");
    const long double k = std::pow(eps, 4.0L) * m * K / (4 * n);
    const long double half = eps / 2;
    return BoundValue::from_log(-half * half * n * k / 4);
}

struct Lemma6Bound {
    long double log_intermediate = 0;  // log(N^d 3^{nd})
    long double log_middle = 0;        // (log N + 1.1 n) d
    long double log_bound = 0;         // 2 n d
    bool precondition_ok = false;      // n >= 2 log N
    bool chain_holds = false;          // N^d 3^{nd} < e^{(log N + 1.1n) d} <= e^{2nd}  (all equal 1 when d = 0)
};

inline Lemma6Bound lemma6_bound(long double N, long double n, long double d) {
    detail::require(N >= 1 && n >= 0 && d >= 0, "lemma6_bound needs N >= 1, n >= 0, d >= 0");
    const long double logN = std::log(N);
    Lemma6Bound out;
    out.log_intermediate = d * logN + n * d * std::log(3.0L);
    out.log_middle = (logN + 1.1L * n) * d;
    out.log_bound = 2 * n * d;
    out.precondition_ok = n >= 2 * logN;
    if (d == 0) {
        out.chain_holds = true;
    } else {
        out.chain_holds = out.log_intermediate < out.log_middle && out.log_middle <= out.log_bound;
    }
    if (out.precondition_ok && !out.chain_holds) {
        throw InvariantViolation("low-dimension counting chain failed although n >= 2 log N");
    }
    return out;
}

enum class Theorem { thm1, thm2, thm7 };

struct SizeThresholds {
    long double x = 0;
    long double y = 0;
};

/// Lower size thresholds for |X| and |Y| in each of the three deviation theorems.
inline SizeThresholds theorem_thresholds(Theorem which, long double N, long double w) {
    detail::require(N >= 16, "theorem_thresholds needs N >= 16");
    detail::require(w > 0, "theorem_thresholds needs w > 0");
    const long double L = std::log(N);
    const long double LL = std::log(L);
    switch (which) {
        case Theorem::thm1:
            return {w * L, w * L * L};
        case Theorem::thm2:
            return {w * L * LL * LL, w * L * std::pow(LL, 10.0L)};
        case Theorem::thm7: {
            long double t = w * LL * L * std::sqrt(L);
            return {t, t};
        }
    }
    return {};
}

inline Theorem parse_theorem(const std::string& s) {
    if (s == "thm1") return Theorem::thm1;
    if (s == "thm2") return Theorem::thm2;
    if (s == "thm7") return Theorem::thm7;
    throw StructuralError("unknown theorem '" + s + "' (expected thm1, thm2 or thm7)");
}

} // namespace cayley
