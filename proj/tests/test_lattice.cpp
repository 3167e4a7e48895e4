#include <topoforge/lattice.hpp>

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace topoforge;

class Tori : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(Tori, Counts) {
    auto [a, b] = GetParam();
    auto lat = honeycomb_torus(a, b);
    EXPECT_EQ(lat.nv, 2 * a * b);
    EXPECT_EQ(lat.ne(), 3 * a * b);
    EXPECT_EQ(lat.np(), a * b);
    EXPECT_EQ(lat.nv - lat.ne() + lat.np(), 0); // torus
}

TEST_P(Tori, Trivalent) {
    auto [a, b] = GetParam();
    auto lat = honeycomb_torus(a, b);
    std::vector<int> degree(lat.nv, 0);
    for (int e = 0; e < lat.ne(); ++e) {
        EXPECT_NE(lat.src(e), lat.tgt(e));
        ++degree[lat.src(e)], ++degree[lat.tgt(e)];
    }
    for (int v = 0; v < lat.nv; ++v) {
        EXPECT_EQ(degree[v], 3);
        std::set<int> es(lat.inc[v].begin(), lat.inc[v].end());
        EXPECT_EQ(es.size(), 3u);
        for (int e : es) EXPECT_TRUE(lat.incident(e, v));
    }
}

TEST_P(Tori, WalksAreClosedHexagons) {
    auto [a, b] = GetParam();
    auto lat = honeycomb_torus(a, b);
    std::map<int, std::pair<int, int>> seen; // edge -> (forward count, backward count)
    for (int p = 0; p < lat.np(); ++p) {
        const auto& w = lat.plaquettes[p].walk;
        std::set<int> vs, es;
        for (int k = 0; k < 6; ++k) {
            const auto& s = w[k];
            int next = w[(k + 1) % 6].vertex;
            EXPECT_EQ(s.forward ? lat.src(s.edge) : lat.tgt(s.edge), s.vertex);
            EXPECT_EQ(s.forward ? lat.tgt(s.edge) : lat.src(s.edge), next);
            vs.insert(s.vertex), es.insert(s.edge);
            auto& c = seen[s.edge];
            (s.forward ? c.first : c.second)++;
            // counterclockwise walk keeps p on the left of forward edges
            EXPECT_EQ(lat.faces_of_edge[s.edge][s.forward ? 0 : 1], p);
        }
        EXPECT_EQ(vs.size(), 6u);
        EXPECT_EQ(es.size(), 6u);
        EXPECT_EQ(lat.plaquettes[p].base, *vs.begin());
    }
    ASSERT_EQ(static_cast<int>(seen.size()), lat.ne());
    for (const auto& [e, c] : seen) EXPECT_EQ(c, std::make_pair(1, 1)) << "edge " << e;
}

TEST_P(Tori, DualTrianglesCloseUp) {
    auto [a, b] = GetParam();
    auto lat = honeycomb_torus(a, b);
    auto d = dual_triangulation(lat);
    ASSERT_EQ(static_cast<int>(d.triangles.size()), lat.nv);
    for (const auto& t : d.triangles) {
        std::set<int> ps(t.plaquettes.begin(), t.plaquettes.end());
        EXPECT_EQ(ps.size(), 3u);
        for (int p : t.plaquettes) EXPECT_TRUE(lat.on_boundary(p, t.vertex));
    }
}

INSTANTIATE_TEST_SUITE_P(UpToFour, Tori,
                         ::testing::Values(std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}, std::pair{3, 3},
                                           std::pair{2, 4}, std::pair{4, 3}, std::pair{4, 4}));

TEST(Lattice, RejectsDegenerateTorus) {
    EXPECT_THROW(honeycomb_torus(1, 3), Error);
    EXPECT_THROW(honeycomb_torus(3, 0), Error);
}

TEST(Lattice, Theta) {
    auto g = theta_graph();
    EXPECT_EQ(g.nv, 2);
    EXPECT_EQ(g.ne(), 3);
    for (int e = 0; e < 3; ++e) EXPECT_TRUE(g.incident(e, 0) && g.incident(e, 1));
}

TEST(Lattice, PlaquetteLoopIsClosedDualStrip) {
    auto lat = honeycomb_torus(3, 2);
    for (int p = 0; p < lat.np(); ++p) {
        auto r = plaquette_loop(lat, p);
        EXPECT_TRUE(r.closed());
        ASSERT_EQ(r.triangles.size(), 6u);
        std::set<int> es;
        for (const auto& t : r.triangles) {
            EXPECT_EQ(t.kind, TriangleKind::Dual);
            es.insert(t.edge);
        }
        EXPECT_EQ(es.size(), 6u);
    }
}

TEST(Lattice, StripSteps) {
    auto lat = honeycomb_torus(2, 2);
    const auto& w = lat.plaquettes[0].walk;
    Site a{0, w[0].vertex}, b{0, w[1].vertex};
    auto t = site_step(lat, a, b);
    EXPECT_EQ(t.kind, TriangleKind::Dual);
    EXPECT_EQ(t.edge, w[0].edge);
    int q = lat.faces_of_edge[w[0].edge][1];
    auto d = site_step(lat, a, Site{q, w[0].vertex});
    EXPECT_EQ(d.kind, TriangleKind::Direct);
    EXPECT_EQ(d.edge, w[0].edge);
    // opposite corners of a hexagon are not adjacent
    EXPECT_THROW(site_step(lat, a, Site{0, w[3].vertex}), Error);
    EXPECT_THROW(ribbon_strip(lat, {a}), Error);
}
