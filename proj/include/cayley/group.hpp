#pragma once

// Finite abelian groups Z_{m1} x ... x Z_{mk}.
//
// Elements are mixed-radix coordinate vectors. The index encoding is row-major
// with the last modulus varying fastest, so in Z_3 x Z_4 the element (2,1) has
// index 2*4 + 1 = 9. In an exponent-2 group this makes the index bits equal to
// the coordinates, and group addition is XOR of indices.

#include <cayley/error.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace cayley {

using Index = std::uint32_t;

inline constexpr std::uint64_t kDefaultDenseCap = std::uint64_t{1} << 20;

/// Dense cap on the group order. CAYLEY_DENSE_CAP overrides the default 2^20.
inline std::uint64_t dense_cap() {
    if (const char* env = std::getenv("CAYLEY_DENSE_CAP"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0' && v >= 2 && v <= (std::uint64_t{1} << 31)) return v;
        throw StructuralError("CAYLEY_DENSE_CAP must be an integer in [2, 2^31]");
    }
    return kDefaultDenseCap;
}

struct Element {
    std::vector<std::uint32_t> coords;

    friend bool operator==(const Element&, const Element&) = default;
};

class GroupSpec {
public:
    explicit GroupSpec(std::vector<std::uint32_t> moduli) : GroupSpec(std::move(moduli), dense_cap()) {}

    GroupSpec(std::vector<std::uint32_t> moduli, std::uint64_t cap) {
        if (moduli.empty()) throw StructuralError("group needs at least one cyclic factor");
        auto data = std::make_shared<Data>();
        std::uint64_t order = 1;
        for (auto m : moduli) {
            if (m < 2) throw StructuralError("every modulus must be >= 2");
            order *= m;
            if (order > cap) {
                throw StructuralError("group order exceeds the dense cap of " + std::to_string(cap));
            }
        }
        data->order = static_cast<Index>(order);
        data->strides.assign(moduli.size(), 1);
        for (std::size_t i = moduli.size() - 1; i > 0; --i) {
            data->strides[i - 1] = data->strides[i] * moduli[i];
        }
        data->exponent_two = std::all_of(moduli.begin(), moduli.end(), [](auto m) { return m == 2; });
        data->moduli = std::move(moduli);
        data_ = std::move(data);
    }

    /// Accepts "2,2,2", "z8", "f2^10" (ten copies of 2) and combinations such as "z4,f2^3".
    static GroupSpec parse(std::string_view literal);

    const std::vector<std::uint32_t>& moduli() const { return data_->moduli; }
    std::size_t rank() const { return data_->moduli.size(); }
    Index order() const { return data_->order; }
    bool is_exponent_two() const { return data_->exponent_two; }
    bool is_cyclic() const { return data_->moduli.size() == 1; }

    std::string str() const {
        std::string s;
        for (auto m : data_->moduli) {
            if (!s.empty()) s += ',';
            s += std::to_string(m);
        }
        return s;
    }

    friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
        return a.data_ == b.data_ || a.data_->moduli == b.data_->moduli;
    }

    // --- Element-level arithmetic -------------------------------------------------

    void validate(const Element& a) const {
        if (a.coords.size() != rank()) {
            throw StructuralError("element has " + std::to_string(a.coords.size()) + " coordinates, group has " +
                                  std::to_string(rank()));
        }
        for (std::size_t i = 0; i < rank(); ++i) {
            if (a.coords[i] >= data_->moduli[i]) throw StructuralError("element coordinate not reduced");
        }
    }

    Element zero() const { return Element{std::vector<std::uint32_t>(rank(), 0)}; }

    Element add(const Element& a, const Element& b) const {
        validate(a);
        validate(b);
        Element r = a;
        for (std::size_t i = 0; i < rank(); ++i) {
            std::uint32_t m = data_->moduli[i];
            std::uint32_t s = a.coords[i] + b.coords[i];
            r.coords[i] = s >= m ? s - m : s;
        }
        return r;
    }

    Element neg(const Element& a) const {
        validate(a);
        Element r = a;
        for (std::size_t i = 0; i < rank(); ++i) {
            r.coords[i] = a.coords[i] == 0 ? 0 : data_->moduli[i] - a.coords[i];
        }
        return r;
    }

    Index encode(const Element& a) const {
        validate(a);
        Index idx = 0;
        for (std::size_t i = 0; i < rank(); ++i) idx += a.coords[i] * data_->strides[i];
        return idx;
    }

    Element decode(Index idx) const {
        if (idx >= order()) {
            throw StructuralError("index " + std::to_string(idx) + " out of range for group of order " +
                                  std::to_string(order()));
        }
        Element r = zero();
        for (std::size_t i = 0; i < rank(); ++i) {
            r.coords[i] = (idx / data_->strides[i]) % data_->moduli[i];
        }
        return r;
    }

    // --- Index-level arithmetic (hot path, unchecked) ------------------------------

    Index add_index(Index a, Index b) const {
        if (data_->exponent_two) return a ^ b;
        if (rank() == 1) {
            Index s = a + b;
            return s >= data_->order ? s - data_->order : s;
        }
        Index r = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            Index st = data_->strides[i];
            Index m = data_->moduli[i];
            Index s = (a / st) % m + (b / st) % m;
            r += (s >= m ? s - m : s) * st;
        }
        return r;
    }

    Index neg_index(Index a) const {
        if (data_->exponent_two) return a;
        if (rank() == 1) return a == 0 ? 0 : data_->order - a;
        Index r = 0;
        for (std::size_t i = 0; i < rank(); ++i) {
            Index st = data_->strides[i];
            Index m = data_->moduli[i];
            Index c = (a / st) % m;
            r += (c == 0 ? 0 : m - c) * st;
        }
        return r;
    }

    Index sub_index(Index a, Index b) const { return add_index(a, neg_index(b)); }

private:
    struct Data {
        std::vector<std::uint32_t> moduli;
        std::vector<Index> strides;
        Index order = 0;
        bool exponent_two = false;
    };
    std::shared_ptr<const Data> data_;
};

inline bool is_exponent_two(const GroupSpec& g) { return g.is_exponent_two(); }

inline GroupSpec GroupSpec::parse(std::string_view literal) {
    auto bad = [&](const std::string& why) {
        return StructuralError("invalid group literal '" + std::string(literal) + "': " + why);
    };
    auto parse_uint = [&](std::string_view s) -> std::uint64_t {
        if (s.empty() || s.size() > 10) throw bad("expected a positive integer");
        std::uint64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw bad("expected a positive integer");
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        return v;
    };

    std::vector<std::uint32_t> moduli;
    std::size_t pos = 0;
    while (pos <= literal.size()) {
        std::size_t comma = literal.find(',', pos);
        std::string_view tok = literal.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (tok.empty()) throw bad("empty factor");

        std::uint64_t repeat = 1;
        if (tok.front() == 'z' || tok.front() == 'Z' || tok.front() == 'f' || tok.front() == 'F') {
            tok.remove_prefix(1);
            if (auto caret = tok.find('^'); caret != std::string_view::npos) {
                repeat = parse_uint(tok.substr(caret + 1));
                tok = tok.substr(0, caret);
            }
        }
        std::uint64_t m = parse_uint(tok);
        if (m < 2 || m > (std::uint64_t{1} << 31)) throw bad("modulus out of range");
        if (repeat < 1 || repeat > 64) throw bad("repeat count out of range");
        for (std::uint64_t r = 0; r < repeat; ++r) moduli.push_back(static_cast<std::uint32_t>(m));

        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return GroupSpec(std::move(moduli));
}

} // namespace cayley
