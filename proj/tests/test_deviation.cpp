#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cayley;

namespace {

GroupSubset S(const GroupSpec& g, const char* lit) { return GroupSubset::parse(g, lit); }

} // namespace

TEST(RandomSubset, DeterministicAndBalanced) {
    GroupSpec g = GroupSpec::parse("f2^16");
    auto a = random_subset(g, 42);
    auto b = random_subset(g, 42);
    auto c = random_subset(g, 43);
    EXPECT_EQ(a.a, b.a);
    EXPECT_NE(a.a, c.a);
    EXPECT_EQ(a.p, Rational(1, 2));
    // |A| ~ Bin(65536, 1/2): sd = 128.
    EXPECT_LT(std::fabs(static_cast<double>(a.a.size()) - 32768.0), 6 * 128.0);
    // Neighbouring bits agree about half the time.
    std::size_t agree = 0;
    for (Index i = 0; i + 1 < g.order(); ++i) agree += a.a.test(i) == a.a.test(i + 1);
    EXPECT_LT(std::fabs(static_cast<double>(agree) - 32767.5), 6 * 128.0);
}

TEST(RandomSubset, FirstWordIsEngineOutput) {
    GroupSpec g({64});
    auto a = random_subset(g, 7);
    Engine rng(7);
    EXPECT_EQ(a.a.words()[0], rng());
}

TEST(EdgeQuery, Example) {
    GroupSpec z4({4});
    CayleySample a{S(z4, "[1]"), 0};
    EXPECT_TRUE(edge_query(a, Element{{2}}, Element{{3}}));
    EXPECT_FALSE(edge_query(a, Element{{2}}, Element{{2}}));
}

TEST(Sigma, Examples) {
    GroupSpec v4({2, 2});
    auto g = GroupSubset::full(v4);
    auto r = sigma(S(v4, "[0]"), g, g);
    EXPECT_EQ(r.sigma, Rational(-1, 4));
    EXPECT_EQ(r.edges, 4u);
    EXPECT_EQ(sigma(g, g, g).sigma, Rational(1, 2));
    EXPECT_EQ(sigma(GroupSubset(v4), g, g).sigma, Rational(-1, 2));
    GroupSpec z4({4});
    EXPECT_EQ(sigma(S(z4, "[0,1]"), S(z4, "[0]"), S(z4, "[0,1]")).sigma, Rational(1, 2));
    EXPECT_THROW(sigma(g, GroupSubset(v4), g), StructuralError);
}

TEST(Sigma, MatchesOracle) {
    std::mt19937_64 rng(2);
    for (auto lit : {"12", "2,2,2,2", "3,5"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 50; ++t) {
            auto a = oracle::random_set(g, rng, g.order(), 0);
            auto x = oracle::random_set(g, rng, 8), y = oracle::random_set(g, rng, 8);
            auto r = sigma(a, x, y);
            EXPECT_EQ(r.sigma, oracle::sigma(a, x, y));
            EXPECT_EQ(r.edges, oracle::edges(a, x, y).first);
            EXPECT_LE(abs(r.sigma), Rational(1, 2));
        }
    }
}

TEST(Lemma14, ExtractsDeviatingRows) {
    std::mt19937_64 rng(14);
    for (auto lit : {"2,2,2,2,2,2", "16"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 100; ++t) {
            auto a = oracle::random_set(g, rng, g.order(), 0);
            auto x = oracle::random_set(g, rng, 8), y = oracle::random_set(g, rng, 16);
            Rational eps(1, 2 + static_cast<std::int64_t>(rng() % 8));
            auto yp = lemma14_extract(a, x, y, eps);
            EXPECT_TRUE(yp.is_subset_of(y));
            for (Index yi : y.indices()) {
                GroupSubset single(g);
                single.insert(yi);
                bool strong = abs(oracle::sigma(a, x, single)) >= eps * Rational(1, 2);
                EXPECT_EQ(yp.contains(yi), strong);
            }
            if (abs(oracle::sigma(a, x, y)) >= eps) {
                EXPECT_GE(Rational(static_cast<std::int64_t>(yp.size())),
                          eps * Rational(static_cast<std::int64_t>(y.size())));
            }
        }
    }
    EXPECT_THROW(lemma14_extract(S(GroupSpec({4}), "[0]"), S(GroupSpec({4}), "[0]"), S(GroupSpec({4}), "[0]"),
                                 Rational(3, 4)),
                 StructuralError);
}

TEST(Packing, Examples) {
    GroupSpec g({8});
    auto y = S(g, "[0,2,3,7]");
    auto single = greedy_packing(S(g, "[5]"), y, Rational(1, 4));
    EXPECT_EQ(single.k, y.size());
    auto full = greedy_packing(GroupSubset::full(g), y, Rational(1, 4));
    EXPECT_EQ(full.k, 1u);
    EXPECT_EQ(full.ys, std::vector<Index>{0});
    // X = {0,1}: 0 admitted, 2 disjoint, 3 overlaps {2,3} in one point = eps n, 7 overlaps {0} once.
    auto p = greedy_packing(S(g, "[0,1]"), y, Rational(1, 2));
    EXPECT_EQ(p.ys, (std::vector<Index>{0, 2, 3, 7}));
    auto q = greedy_packing(S(g, "[0,1]"), y, Rational(1, 4));
    EXPECT_EQ(q.ys, (std::vector<Index>{0, 2}));
    EXPECT_THROW(greedy_packing(S(g, "[0]"), GroupSubset(g), Rational(1, 4)), StructuralError);
}

TEST(Packing, RandomInstancesAreMaximalAndLarge) {
    std::mt19937_64 rng(15);
    for (auto lit : {"2,2,2,2,2,2", "16", "64"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 60; ++t) {
            auto x = oracle::random_set(g, rng, 10), y = oracle::random_set(g, rng, 20);
            Rational eps(1, 2 + static_cast<std::int64_t>(rng() % 6));
            auto p = greedy_packing(x, y, eps);
            EXPECT_NO_THROW(verify_packing(x, y, p));
            // k > eps^2 |Y| K / n with K = n^2 |Y| / E.
            const long double e = eps.to_long_double();
            const long double bound = e * e * y.size() * y.size() * x.size() / static_cast<long double>(oracle::energy(x, y));
            EXPECT_GT(static_cast<long double>(p.k), bound);
        }
    }
}

TEST(Cor15, PipelineAndDiagnostic) {
    GroupSpec g = GroupSpec::parse("f2^4");
    auto full = GroupSubset::full(g);
    auto r = corollary15_pipeline(S(g, "[0]"), full, full, Rational(1, 2));
    EXPECT_FALSE(r.hypothesis_holds);
    EXPECT_NE(r.diagnostic.find("< eps"), std::string::npos);
    auto h = corollary15_pipeline(full, S(g, "[1,2]"), S(g, "[3,4,5]"), Rational(1, 2));
    EXPECT_TRUE(h.hypothesis_holds);
    ASSERT_TRUE(h.packing.has_value());
    EXPECT_GE(h.packing->k, 1u);
    EXPECT_GE(*h.K_prime, Rational(1, 2) * h.K);
}

TEST(Cor15, RandomInstances) {
    std::mt19937_64 rng(16);
    int held = 0;
    for (auto lit : {"2,2,2,2,2,2", "16"}) {
        GroupSpec g = GroupSpec::parse(lit);
        for (int t = 0; t < 100; ++t) {
            auto a = oracle::random_set(g, rng, g.order(), 0);
            auto x = oracle::random_set(g, rng, 4), y = oracle::random_set(g, rng, 12);
            auto r = corollary15_pipeline(a, x, y, Rational(1, 4));
            if (!r.hypothesis_holds) continue;
            ++held;
            for (Index yi : r.packing->ys) {
                GroupSubset single(g);
                single.insert(yi);
                EXPECT_GE(abs(oracle::sigma(a, x, single)), Rational(1, 8));
            }
        }
    }
    EXPECT_GT(held, 10);
}

TEST(SplitBlocks, Examples) {
    GroupSpec g({64});
    GroupSubset y(g);
    for (Index i = 0; i < 10; ++i) y.insert(i * 3);
    auto b = split_blocks(y, 3, 5);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[0].size(), 5u);
    EXPECT_EQ(b[1].size(), 5u);
    GroupSubset four = S(g, "[1,2,3,4]");
    auto f = split_blocks(four, 4, 4);
    ASSERT_EQ(f.size(), 1u);
    EXPECT_EQ(f[0], four);
    GroupSubset seven = S(g, "[0,1,2,3,4,5,6]");
    EXPECT_THROW(split_blocks(seven, 4, 5), StructuralError);
    auto borrow = split_blocks(seven, 3, 4);
    ASSERT_EQ(borrow.size(), 2u);
    EXPECT_EQ(borrow[0].size(), 4u);
    EXPECT_EQ(borrow[1].size(), 3u);
    auto uneven = split_blocks(S(g, "[0,1,2,3,4,5,6,7,8,9,10]"), 3, 4);
    std::size_t total = 0;
    for (auto& s : uneven) {
        EXPECT_GE(s.size(), 3u);
        EXPECT_LE(s.size(), 4u);
        total += s.size();
    }
    EXPECT_EQ(total, 11u);
    EXPECT_THROW(split_blocks(four, 0, 2), StructuralError);
}

TEST(Restriction, FullSampleIsExact) {
    GroupSpec g = GroupSpec::parse("f2^6");
    std::mt19937_64 rng(1);
    auto a = oracle::random_set(g, rng, 64, 0);
    auto x = oracle::random_set(g, rng, 20, 10), y = oracle::random_set(g, rng, 20, 10);
    RestrictionParams p{x.size(), y.size(), y.size(), Rational(1)};
    auto r = restriction_sample(a, x, y, Rational(1, 2), 5, p);
    EXPECT_EQ(r.s, x);
    EXPECT_EQ(r.t, y);
    EXPECT_EQ(r.deviation_gap, Rational(0));
    EXPECT_TRUE(r.energy_inequality);
    EXPECT_TRUE(r.deviation_inequality);
}

TEST(Restriction, DeterministicSampleSizes) {
    GroupSpec g = GroupSpec::parse("f2^8");
    auto a = random_subset(g, 3).a;
    std::mt19937_64 rng(4);
    auto x = oracle::random_set(g, rng, 64, 64), y = oracle::random_set(g, rng, 64, 64);
    auto r1 = restriction_sample(a, x, y, Rational(1, 2), 9);
    auto r2 = restriction_sample(a, x, y, Rational(1, 2), 9);
    EXPECT_EQ(r1.s, r2.s);
    EXPECT_EQ(r1.t, r2.t);
    EXPECT_EQ(r1.s.size(), r1.params.s);
    EXPECT_EQ(r1.t.size(), r1.params.t);
    EXPECT_TRUE(r1.s.is_subset_of(x));
    EXPECT_TRUE(r1.t.is_subset_of(y));
    EXPECT_EQ(r1.energy_st.count, oracle::energy(r1.s, r1.t));
}

TEST(Restriction, BlockAverageIdentity) {
    // sigma(X, Y) is the size-weighted mean of sigma(X, Y_i) over any block split.
    GroupSpec g({64});
    std::mt19937_64 rng(10);
    for (int t = 0; t < 20; ++t) {
        auto a = oracle::random_set(g, rng, 64, 0);
        auto x = oracle::random_set(g, rng, 16), y = oracle::random_set(g, rng, 30, 12);
        Rational acc(0);
        for (const auto& blk : split_blocks(y, 3, 5)) {
            acc = acc + sigma(a, x, blk).sigma * Rational(static_cast<std::int64_t>(blk.size()));
        }
        EXPECT_EQ(acc * Rational(1, static_cast<std::int64_t>(y.size())), sigma(a, x, y).sigma);
    }
}
