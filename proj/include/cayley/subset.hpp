#pragma once

#include <cayley/group.hpp>

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cayley {

/// A subset of a finite abelian group, stored as a dense bitset over the index space.
class GroupSubset {
public:
    explicit GroupSubset(GroupSpec g) : group_(std::move(g)), words_((group_.order() + 63) / 64, 0) {}

    GroupSubset(GroupSpec g, const std::vector<Index>& indices) : GroupSubset(std::move(g)) {
        for (Index i : indices) insert(i);
    }

    static GroupSubset full(GroupSpec g) {
        GroupSubset s(std::move(g));
        for (auto& w : s.words_) w = ~std::uint64_t{0};
        s.trim();
        s.count_ = s.group_.order();
        return s;
    }

    /// "[0,1,5]" (index list) or "0x2f" (hex mask, bit i = index i).
    static GroupSubset parse(const GroupSpec& g, std::string_view literal);

    /// Builds a subset directly from packed words; bits beyond the group order are cleared.
    static GroupSubset from_words(GroupSpec g, std::vector<std::uint64_t> words) {
        GroupSubset s(std::move(g));
        if (words.size() != s.words_.size()) throw StructuralError("word count does not match group order");
        s.words_ = std::move(words);
        s.trim();
        s.recount();
        return s;
    }

    const GroupSpec& group() const { return group_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool contains(Index i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    /// No range check; i must be < order.
    bool test(Index i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    void insert(Index i) {
        check_index(i);
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (!(words_[i >> 6] & bit)) {
            words_[i >> 6] |= bit;
            ++count_;
        }
    }
    void erase(Index i) {
        check_index(i);
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (words_[i >> 6] & bit) {
            words_[i >> 6] &= ~bit;
            --count_;
        }
    }

    template <typename F>
    void for_each(F&& f) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits != 0) {
                int b = std::countr_zero(bits);
                f(static_cast<Index>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
    }

    std::vector<Index> indices() const {
        std::vector<Index> out;
        out.reserve(count_);
        for_each([&](Index i) { out.push_back(i); });
        return out;
    }

    std::string str() const {
        std::string s = "[";
        bool first = true;
        for_each([&](Index i) {
            if (!first) s += ',';
            s += std::to_string(i);
            first = false;
        });
        return s + "]";
    }

    bool is_subset_of(const GroupSubset& o) const {
        require_same_group(o);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~o.words_[w]) return false;
        }
        return true;
    }

    std::size_t intersection_size(const GroupSubset& o) const {
        require_same_group(o);
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & o.words_[w]);
        return c;
    }

    GroupSubset& operator|=(const GroupSubset& o) { return combine(o, [](auto a, auto b) { return a | b; }); }
    GroupSubset& operator&=(const GroupSubset& o) { return combine(o, [](auto a, auto b) { return a & b; }); }
    GroupSubset& operator-=(const GroupSubset& o) { return combine(o, [](auto a, auto b) { return a & ~b; }); }

    friend GroupSubset operator|(GroupSubset a, const GroupSubset& b) { return a |= b; }
    friend GroupSubset operator&(GroupSubset a, const GroupSubset& b) { return a &= b; }
    friend GroupSubset operator-(GroupSubset a, const GroupSubset& b) { return a -= b; }

    GroupSubset complement() const {
        GroupSubset c(group_);
        for (std::size_t w = 0; w < words_.size(); ++w) c.words_[w] = ~words_[w];
        c.trim();
        c.count_ = group_.order() - count_;
        return c;
    }

    /// Translate by t: {x + t : x in this}.
    GroupSubset translate(Index t) const {
        GroupSubset r(group_);
        for_each([&](Index x) { r.insert(group_.add_index(x, t)); });
        return r;
    }

    friend bool operator==(const GroupSubset& a, const GroupSubset& b) {
        return a.group_ == b.group_ && a.words_ == b.words_;
    }

    /// Lexicographic order on the sorted index lists.
    friend std::strong_ordering lex_compare(const GroupSubset& a, const GroupSubset& b) {
        auto ia = a.indices();
        auto ib = b.indices();
        return std::lexicographical_compare_three_way(ia.begin(), ia.end(), ib.begin(), ib.end());
    }

    void require_same_group(const GroupSubset& o) const {
        if (!(group_ == o.group_)) {
            throw StructuralError("subsets belong to different groups (" + group_.str() + " vs " + o.group_.str() + ")");
        }
    }

private:
    template <typename Op>
    GroupSubset& combine(const GroupSubset& o, Op op) {
        require_same_group(o);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] = op(words_[w], o.words_[w]);
        recount();
        return *this;
    }

    void check_index(Index i) const {
        if (i >= group_.order()) {
            throw StructuralError("index " + std::to_string(i) + " outside group of order " +
                                  std::to_string(group_.order()));
        }
    }

    void trim() {
        std::size_t tail = group_.order() % 64;
        if (tail != 0) words_.back() &= (std::uint64_t{1} << tail) - 1;
    }

    void recount() {
        count_ = 0;
        for (auto w : words_) count_ += static_cast<std::size_t>(std::popcount(w));
    }

    GroupSpec group_;
    std::vector<std::uint64_t> words_;
    std::size_t count_ = 0;
};

inline GroupSubset GroupSubset::parse(const GroupSpec& g, std::string_view literal) {
    auto bad = [&](const std::string& why) {
        return StructuralError("invalid subset literal '" + std::string(literal) + "': " + why);
    };
    GroupSubset s(g);
    if (literal.size() >= 2 && literal[0] == '0' && (literal[1] == 'x' || literal[1] == 'X')) {
        std::string_view hex = literal.substr(2);
        if (hex.empty()) throw bad("empty hex mask");
        Index bit = 0;
        for (auto it = hex.rbegin(); it != hex.rend(); ++it, bit += 4) {
            char c = *it;
            unsigned v;
            if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
            else throw bad("non-hex digit");
            for (unsigned k = 0; k < 4; ++k) {
                if ((v >> k) & 1u) {
                    if (bit + k >= g.order()) throw bad("mask has bits beyond the group order");
                    s.insert(bit + k);
                }
            }
        }
        return s;
    }
    std::string_view body = literal;
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw bad("expected [i,j,...] or 0x...");
    body = body.substr(1, body.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
        std::size_t comma = body.find(',', pos);
        std::string_view tok = body.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (tok.empty() || tok.size() > 10) throw bad("bad index");
        std::uint64_t v = 0;
        for (char c : tok) {
            if (c < '0' || c > '9') throw bad("bad index");
            v = v * 10 + static_cast<std::uint64_t>(c - '0');
        }
        if (v >= g.order()) throw bad("index " + std::to_string(v) + " outside the group");
        s.insert(static_cast<Index>(v));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return s;
}

} // namespace cayley
