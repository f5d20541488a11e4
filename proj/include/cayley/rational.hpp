#pragma once

#include <cayley/error.hpp>

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>

namespace cayley {

using i128 = __int128;

namespace detail {

inline std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("rational component exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

inline i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

/// a*b with overflow detection on 128-bit operands.
inline i128 mul_checked(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit product overflow");
    return r;
}

} // namespace detail

/// Exact rational with 64-bit numerator and positive denominator, always reduced.
/// Intermediates are carried in 128 bits; results that do not fit throw OverflowError.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(implicit)
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    static Rational from_wide(i128 n, i128 d) {
        if (d == 0) throw StructuralError("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = detail::gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        Rational r;
        r.num_ = detail::narrow(n);
        r.den_ = detail::narrow(d);
        return r;
    }

    /// Accepts "p", "p/q", or a finite decimal such as "0.125" or "-2.5".
    static Rational parse(std::string_view s);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const { return from_wide(-static_cast<i128>(num_), den_); }
    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_wide(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                         static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw StructuralError("division by zero rational");
        return from_wide(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
    }
    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        i128 l = static_cast<i128>(a.num_) * b.den_;
        i128 r = static_cast<i128>(b.num_) * a.den_;
        return l <=> r;
    }

private:
    void assign(std::int64_t n, std::int64_t d) { *this = from_wide(n, d); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

inline Rational Rational::parse(std::string_view s) {
    auto bad = [&] { return StructuralError("invalid rational literal '" + std::string(s) + "'"); };
    if (s.empty()) throw bad();
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Rational n = parse(s.substr(0, slash));
        Rational d = parse(s.substr(slash + 1));
        if (d.num() == 0) throw bad();
        return n / d;
    }
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    i128 num = 0;
    i128 den = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_point) throw bad();
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') throw bad();
        seen_digit = true;
        num = num * 10 + (c - '0');
        if (seen_point) den *= 10;
        if (num > (i128{1} << 100) || den > (i128{1} << 100)) throw bad();
    }
    if (!seen_digit) throw bad();
    return from_wide(neg ? -num : num, den);
}

} // namespace cayley
