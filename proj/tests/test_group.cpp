#include <topoforge/group.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace topoforge;

namespace {

// Burnside: orbits = (1/|G|) sum_k #{commuting (g,h) fixed by conjugation with k}
int burnside_pairs(const FiniteGroup& G) {
    int fixed = 0;
    for (int k = 0; k < G.order; ++k)
        for (int g = 0; g < G.order; ++g)
            for (int h = 0; h < G.order; ++h)
                if (G.mul(g, h) == G.mul(h, g) && G.conj(k, g) == g && G.conj(k, h) == h) ++fixed;
    EXPECT_EQ(fixed % G.order, 0);
    return fixed / G.order;
}

class AllGroups : public ::testing::TestWithParam<const char*> {};

} // namespace

TEST_P(AllGroups, TableIsAGroup) {
    auto G = build_group(GetParam());
    for (int a = 0; a < G.order; ++a) {
        EXPECT_EQ(G.mul(0, a), a);
        EXPECT_EQ(G.mul(a, G.inverse(a)), 0);
        EXPECT_EQ(G.inverse(G.inverse(a)), a);
        for (int b = 0; b < G.order; ++b)
            for (int c = 0; c < G.order; ++c) ASSERT_EQ(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c)));
    }
}

TEST_P(AllGroups, ClassesPartitionTheGroup) {
    auto G = build_group(GetParam());
    std::set<int> all;
    int total = 0;
    for (const auto& c : conjugacy_classes(G)) {
        total += static_cast<int>(c.members.size());
        for (int m : c.members) {
            EXPECT_TRUE(all.insert(m).second);
            // every member is conjugate to the representative
            bool found = false;
            for (int k = 0; k < G.order; ++k) found = found || G.conj(k, c.representative) == m;
            EXPECT_TRUE(found);
        }
    }
    EXPECT_EQ(total, G.order);
}

TEST_P(AllGroups, PairOrbitsMatchBurnside) {
    auto G = build_group(GetParam());
    EXPECT_EQ(commuting_pair_orbit_count(G), burnside_pairs(G));
}

INSTANTIATE_TEST_SUITE_P(Supported, AllGroups, ::testing::Values("Z2", "Z3", "Z4", "Z7", "S3", "D4"));

TEST(Group, Orders) {
    EXPECT_EQ(build_group("Z2").order, 2);
    EXPECT_EQ(build_group("Z48").order, 48);
    EXPECT_EQ(build_group("S3").order, 6);
    EXPECT_EQ(build_group("D4").order, 8);
    EXPECT_EQ(build_group("Z2").mul(1, 1), 0);
    EXPECT_FALSE(build_group("S3").abelian());
    EXPECT_TRUE(build_group("Z5").abelian());
}

TEST(Group, ClassCounts) {
    EXPECT_EQ(conjugacy_classes(build_group("Z6")).size(), 6u);
    EXPECT_EQ(conjugacy_classes(build_group("S3")).size(), 3u);
    EXPECT_EQ(conjugacy_classes(build_group("D4")).size(), 5u);
}

TEST(Group, AnyonCounts) {
    EXPECT_EQ(commuting_pair_orbit_count(build_group("Z2")), 4);
    EXPECT_EQ(commuting_pair_orbit_count(build_group("Z3")), 9);
    EXPECT_EQ(commuting_pair_orbit_count(build_group("S3")), 8);
    EXPECT_EQ(commuting_pair_orbit_count(build_group("D4")), 22);
}

TEST(Group, S3CommutingPairsByHand) {
    // 18 commuting pairs: identity with anything (11), 3-cycles among themselves (4),
    // each transposition with itself (3)
    auto G = build_group("S3");
    int pairs = 0;
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) pairs += G.mul(g, h) == G.mul(h, g);
    EXPECT_EQ(pairs, 18);
}

TEST(Group, RejectsUnknownNames) {
    auto kind = [](const char* s) {
        try {
            build_group(s);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ZeroState;
    };
    EXPECT_EQ(kind("Q8"), ErrorKind::UnknownGroup);
    EXPECT_EQ(kind("Z49"), ErrorKind::UnknownGroup);
    EXPECT_EQ(kind("Zx"), ErrorKind::UnknownGroup);
    EXPECT_EQ(kind("Z1"), ErrorKind::InvalidParameter);
}
