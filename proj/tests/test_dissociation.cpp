#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cayley;

namespace {

GroupSubset S(const GroupSpec& g, const char* lit) { return GroupSubset::parse(g, lit); }

} // namespace

TEST(Dissociated, Examples) {
    GroupSpec v4({2, 2}), z8({8});
    EXPECT_TRUE(is_dissociated(S(v4, "[1,2]")));
    EXPECT_FALSE(is_dissociated(S(z8, "[1,2,3]")));
    EXPECT_TRUE(is_dissociated(S(z8, "[1,2]")));
    EXPECT_FALSE(is_dissociated(S(z8, "[0]")));
    EXPECT_TRUE(is_dissociated(GroupSubset(z8)));
    EXPECT_TRUE(is_dissociated(S(z8, "[4]")));
}

TEST(Dissociated, MatchesSignVectorOracle) {
    std::mt19937_64 rng(3);
    for (auto lit : {"8", "12", "3,5", "2,4", "27", "2,2,3"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 80; ++t) {
            auto s = oracle::random_set(g, rng, 6);
            EXPECT_EQ(is_dissociated(s), oracle::dissociated(s)) << g.str() << " " << s.str();
        }
    }
}

TEST(Dissociated, ExhaustiveZ2FourIsLinearIndependence) {
    GroupSpec g = GroupSpec::parse("f2^4");
    for (std::uint32_t m = 0; m < (1u << 16); ++m) {
        GroupSubset s = oracle::from_mask(g, m);
        auto idx = s.indices();
        const std::size_t rank = oracle::gf2_rank(idx);
        ASSERT_EQ(is_dissociated(s), rank == idx.size());
        ASSERT_EQ(additive_dimension(s).value, rank);
    }
}

TEST(Dissociated, SubsetsOfDissociatedAreDissociated) {
    GroupSpec g({31});
    std::mt19937_64 rng(8);
    for (int t = 0; t < 40; ++t) {
        auto s = oracle::random_set(g, rng, 4);
        if (!is_dissociated(s)) continue;
        for (Index i : s.indices()) {
            auto sub = s;
            sub.erase(i);
            EXPECT_TRUE(is_dissociated(sub));
        }
    }
}

TEST(Span, Examples) {
    EXPECT_EQ(span(S(GroupSpec({5}), "[1]")), S(GroupSpec({5}), "[0,1,4]"));
    EXPECT_EQ(span(S(GroupSpec({7}), "[1,2]")), GroupSubset::full(GroupSpec({7})));
    EXPECT_EQ(span(GroupSubset(GroupSpec({9}))), S(GroupSpec({9}), "[0]"));
}

TEST(Span, MatchesOracleAndSizeBound) {
    std::mt19937_64 rng(4);
    for (auto lit : {"64", "3,3,3", "2,2,2,2,2", "10"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 40; ++t) {
            auto s = oracle::random_set(g, rng, 5);
            auto sp = span(s);
            EXPECT_EQ(sp, oracle::span(s));
            EXPECT_TRUE(sp.contains(0));
            const double cap = std::pow(3.0, static_cast<double>(s.size()));
            EXPECT_LE(static_cast<double>(sp.size()), cap);
            auto sums = oracle::signed_sums(s);
            std::set<Index> distinct(sums.begin(), sums.end());
            EXPECT_EQ(static_cast<double>(sp.size()) == cap, distinct.size() == sums.size());
        }
    }
}

TEST(Dimension, Examples) {
    EXPECT_EQ(additive_dimension(GroupSubset::full(GroupSpec::parse("f2^3"))).value, 3u);
    EXPECT_EQ(additive_dimension(S(GroupSpec({8}), "[0]")).value, 0u);
    EXPECT_EQ(additive_dimension(GroupSubset(GroupSpec({8}))).value, 0u);
    auto d = additive_dimension(S(GroupSpec({8}), "[1,2,3]"));
    EXPECT_EQ(d.value, 2u);
    EXPECT_TRUE(d.exact);
}

TEST(Dimension, ExactMatchesBruteForceAndWitnessesAreValid) {
    std::mt19937_64 rng(12);
    for (auto lit : {"16", "3,5", "2,8", "25", "2,2,2,2,2"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 30; ++t) {
            auto a = oracle::random_set(g, rng, 9);
            auto exact = additive_dimension(a);
            auto greedy = additive_dimension(a, DimensionMode::greedy);
            EXPECT_EQ(exact.value, oracle::dimension(a)) << a.str();
            for (const auto* r : {&exact, &greedy}) {
                EXPECT_TRUE(r->witness.is_subset_of(a));
                EXPECT_TRUE(oracle::dissociated(r->witness));
                EXPECT_EQ(r->witness.size(), r->value);
            }
            EXPECT_FALSE(greedy.exact);
            EXPECT_LE(greedy.value, exact.value);
            // Greedy witnesses are maximal, so A lies in their span.
            EXPECT_TRUE(a.is_subset_of(span(greedy.witness)));
        }
    }
}

TEST(Dimension, Guards) {
    GroupSpec g({1000});
    GroupSubset a(g);
    for (Index i = 1; i <= 21; ++i) a.insert(i);
    EXPECT_THROW(additive_dimension(a), GuardExceeded);
    EXPECT_NO_THROW(additive_dimension(a, DimensionMode::greedy));
    GroupSubset b(g);
    for (Index i = 1; i <= 25; ++i) b.insert(i * 3);
    EXPECT_THROW(is_dissociated(b), GuardExceeded);
    EXPECT_THROW(span(b), GuardExceeded);
}

TEST(LowDimCount, LemmaSixExamples) {
    auto c = count_low_dim_sets(GroupSpec::parse("f2^3"), 5, 1);
    ASSERT_TRUE(c.exact.has_value());
    EXPECT_EQ(*c.exact, 15u);
    EXPECT_EQ(c.method, "enumeration");
    EXPECT_NEAR(static_cast<double>(c.bound.log_bound), 10.0, 1e-12);
    EXPECT_TRUE(c.exact_within_bound);
    for (auto lit : {"8", "3,3", "2,2,2,2"}) {
        auto z = count_low_dim_sets(GroupSpec::parse(lit), 4, 0);
        ASSERT_TRUE(z.exact.has_value());
        EXPECT_EQ(*z.exact, 1u);
    }
}

TEST(LowDimCount, EnumerationMatchesBruteForce) {
    for (auto lit : {"8", "2,2,2", "3,3", "12", "2,2,2,2"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (std::size_t n = 1; n <= 5; ++n) {
            for (std::size_t d = 0; d <= 3; ++d) {
                std::uint64_t brute = 0;
                for (std::uint64_t m = 1; m < (std::uint64_t{1} << g.order()); ++m) {
                    if (static_cast<std::size_t>(std::popcount(m)) > n) continue;
                    if (oracle::dimension(oracle::from_mask(g, m)) <= d) ++brute;
                }
                auto c = count_low_dim_sets(g, n, d);
                ASSERT_TRUE(c.exact.has_value());
                EXPECT_EQ(*c.exact, brute) << lit << " n=" << n << " d=" << d;
            }
        }
    }
}

TEST(LowDimCount, LargeGroupsAreBoundOnly) {
    auto c = count_low_dim_sets(GroupSpec::parse("f2^6"), 10, 2);
    EXPECT_FALSE(c.exact.has_value());
    EXPECT_EQ(c.method, "bound-only");
}
