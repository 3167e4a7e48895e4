#include <topoforge/string_net.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace topoforge;

namespace {

struct Model {
    explicit Model(const char* g, int a = 2, int b = 2)
        : R(build_group(g)), T(R.f_symbols()), lat(honeycomb_torus(a, b)), cols(admissible_colorings(lat, R)),
          c(T.n, lat.ne()) {}
    RepTheory R;
    FSymbolTable T;
    HoneycombLattice lat;
    std::vector<std::vector<int>> cols;
    Codec c;

    StateVector basis(const std::vector<int>& j) const { return basis_state(Basis::Spin, c, c.encode(j)); }
    StateVector random_state(std::mt19937_64& rng, int terms = 4) const {
        std::normal_distribution<double> nd;
        StateVector s(Basis::Spin, c);
        for (int k = 0; k < terms; ++k) s.add(c.encode(cols[rng() % cols.size()]), cplx(nd(rng), nd(rng)));
        return s.normalize();
    }
};

StringPath hexagon(const HoneycombLattice& lat, int p, bool ccw) {
    StringPath path;
    const auto& w = lat.plaquettes[p].walk;
    for (int k = 0; k <= 6; ++k) path.vertices.push_back(w[ccw ? k % 6 : (6 - k) % 6].vertex);
    return path;
}

} // namespace

TEST(StringNet, VertexRuleMatchesFusion) {
    Model m("S3");
    for (int v = 0; v < m.lat.nv; ++v) {
        std::vector<int> j(m.lat.ne(), 0);
        EXPECT_TRUE(check_vertex(m.lat, m.T, j, v));
        for (int a = 0; a < m.T.n; ++a)
            for (int b = 0; b < m.T.n; ++b)
                for (int c = 0; c < m.T.n; ++c) {
                    const auto& e = m.lat.inc[v];
                    j[e[0]] = a, j[e[1]] = b, j[e[2]] = c;
                    auto l = vertex_labels(m.lat, m.T.dual, j, v);
                    EXPECT_EQ(check_vertex(m.lat, m.T, j, v), m.R.fusion_coefficient(l[0], l[1], l[2]) == 1);
                }
    }
    Model z("Z2");
    std::vector<int> one(z.lat.ne(), 0);
    one[4] = 1;
    EXPECT_FALSE(check_vertex(z.lat, z.T, one, z.lat.src(4)));
}

TEST(StringNet, TrivialTypeIsIdentity) {
    Model m("S3");
    std::mt19937_64 rng(1);
    for (int t = 0; t < 10; ++t) {
        auto s = m.random_state(rng);
        for (int p = 0; p < m.lat.np(); ++p) EXPECT_LT(distance(apply_Bp_s(m.T, m.lat, 0, p, s), s), 1e-12);
    }
}

TEST(StringNet, Z2LoopFlipsTheHexagon) {
    Model m("Z2");
    std::vector<int> zero(m.lat.ne(), 0);
    for (int p = 0; p < m.lat.np(); ++p) {
        auto out = apply_Bp_s(m.T, m.lat, 1, p, m.basis(zero));
        ASSERT_EQ(out.amp.size(), 1u);
        auto [k, a] = *out.amp.begin();
        EXPECT_NEAR(std::abs(a - 1.0), 0, 1e-12);
        auto j = m.c.decode(k);
        for (const auto& s : m.lat.plaquettes[p].walk) EXPECT_EQ(j[s.edge], 1);
        EXPECT_EQ(std::count(j.begin(), j.end(), 1), 6);
    }
}

TEST(StringNet, SupportIsThePlaquette) {
    Model m("S3");
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; ++t) {
        const auto& j = m.cols[rng() % m.cols.size()];
        int p = static_cast<int>(rng() % m.lat.np());
        std::set<int> inner;
        for (const auto& s : m.lat.plaquettes[p].walk) inner.insert(s.edge);
        for (int s = 0; s < m.T.n; ++s)
            for (const auto& [k, a] : apply_Bp_s(m.T, m.lat, s, p, m.basis(j)).amp) {
                auto out = m.c.decode(k);
                ASSERT_TRUE(coloring_admissible(m.lat, m.R, out));
                for (int e = 0; e < m.lat.ne(); ++e)
                    if (!inner.count(e)) {
                        ASSERT_EQ(out[e], j[e]);
                    }
            }
    }
}

TEST(StringNet, ProjectorAlgebra) {
    for (const char* g : {"Z3", "S3", "D4"}) {
        Model m(g);
        std::mt19937_64 rng(3);
        for (int t = 0; t < 6; ++t) {
            auto x = m.random_state(rng), y = m.random_state(rng);
            for (int p = 0; p < m.lat.np(); ++p) {
                auto bx = apply_Bp(m.T, m.lat, p, x);
                EXPECT_LT(distance(apply_Bp(m.T, m.lat, p, bx), bx), 1e-10) << g;
                EXPECT_LT(std::abs(inner(y, bx) - inner(apply_Bp(m.T, m.lat, p, y), x)), 1e-10) << g;
                for (int q = p + 1; q < m.lat.np(); ++q)
                    EXPECT_LT(distance(apply_Bp(m.T, m.lat, q, bx), apply_Bp(m.T, m.lat, p, apply_Bp(m.T, m.lat, q, x))), 1e-10) << g;
            }
        }
    }
}

TEST(StringNet, ProductOrderDoesNotMatter) {
    Model m("S3");
    std::mt19937_64 rng(4);
    auto x = m.random_state(rng);
    EXPECT_LT(distance(apply_Bp_product(m.T, m.lat, {0, 1, 2, 3}, x), apply_Bp_product(m.T, m.lat, {3, 1, 0, 2}, x)), 1e-10);
}

TEST(StringNet, GroundDimensionFromPlaquettes) {
    // tr prod_p B_p over the admissible subspace equals the Kitaev count
    for (auto [g, want] : {std::pair{"Z2", 4}, std::pair{"Z3", 9}}) {
        Model m(g);
        std::vector<int> all(m.lat.np());
        std::iota(all.begin(), all.end(), 0);
        cplx tr = 0;
        for (const auto& j : m.cols) tr += apply_Bp_product(m.T, m.lat, all, m.basis(j)).get(m.c.encode(j));
        EXPECT_NEAR(tr.real(), want, 1e-9) << g;
        EXPECT_NEAR(tr.imag(), 0, 1e-9) << g;
    }
}

TEST(StringNet, DualityZ2Exhaustive) {
    Model m("Z2");
    SpinBasis B(m.lat, m.R);
    for (int p = 0; p < m.lat.np(); ++p) {
        auto r = duality_compare_Bp(B, m.T, m.lat, p, 0);
        EXPECT_EQ(r.pairs, 32 * 32);
        EXPECT_GT(r.nonzero_pairs, 0);
        EXPECT_LT(r.max_dev, 1e-9);
    }
}

TEST(StringNet, DualitySampled) {
    for (const char* g : {"Z3", "S3", "D4"}) {
        Model m(g);
        SpinBasis B(m.lat, m.R);
        auto r = duality_compare_Bp(B, m.T, m.lat, 1, 4);
        EXPECT_GT(r.nonzero_pairs, 0) << g;
        EXPECT_LT(r.max_dev, 1e-8) << g;
    }
}

TEST(StringNet, HexagonStringIsThePlaquetteTerm) {
    for (const char* g : {"Z3", "S3"}) {
        Model m(g);
        auto om = OmegaData::identity(m.T.n);
        std::mt19937_64 rng(5);
        for (int p = 0; p < m.lat.np(); ++p) {
            auto x = m.random_state(rng, 2);
            for (int s = 0; s < m.T.n; ++s) {
                auto ref = apply_Bp_s(m.T, m.lat, s, p, x);
                EXPECT_LT(distance(apply_string_operator(m.T, m.lat, hexagon(m.lat, p, true), {s}, om, x), ref), 1e-9) << g;
                // the clockwise loop carries the dual type
                EXPECT_LT(distance(apply_string_operator(m.T, m.lat, hexagon(m.lat, p, false), {m.T.dual[s]}, om, x), ref), 1e-9) << g;
            }
        }
    }
}

TEST(StringNet, OpenStringViolatesOnlyItsEnds) {
    Model m("Z3");
    auto om = OmegaData::identity(m.T.n);
    const auto& w = m.lat.plaquettes[0].walk;
    StringPath path{{w[0].vertex, w[1].vertex, w[2].vertex, w[3].vertex}};
    std::vector<int> zero(m.lat.ne(), 0);
    auto out = apply_string_operator(m.T, m.lat, path, {1}, om, m.basis(zero));
    ASSERT_FALSE(out.amp.empty());
    std::set<int> bad;
    for (const auto& [k, a] : out.amp) {
        auto j = m.c.decode(k);
        for (int v = 0; v < m.lat.nv; ++v)
            if (!check_vertex(m.lat, m.T, j, v)) bad.insert(v);
    }
    for (int v : bad) EXPECT_TRUE(v == path.vertices.front() || v == path.vertices.back()) << v;
    EXPECT_FALSE(bad.empty());
    // type 0 along the same path changes nothing
    auto same = apply_string_operator(m.T, m.lat, path, {0}, om, m.basis(zero));
    EXPECT_LT(distance(same.prune(1e-12), m.basis(zero)), 1e-12);
}

TEST(StringNet, OmegaFileErrors) {
    auto o = parse_omega("dim 1\nomega 0 0 0 0 1 0 # identity\n");
    EXPECT_EQ(o.get(0, 0, 0, 0).at(0), cplx(1.0));
    EXPECT_EQ(o.get(1, 0, 0, 0).at(0), cplx(0.0));
    auto kind = [](const std::string& text) {
        try {
            parse_omega(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ZeroState;
    };
    EXPECT_EQ(kind("dim 2\nomega 0 0 0 0 1 0\n"), ErrorKind::ShapeMismatch);
    EXPECT_EQ(kind("matrix 0\n"), ErrorKind::ParseError);
    EXPECT_EQ(kind("dim 0\n"), ErrorKind::ParseError);
    Model m("Z2");
    EXPECT_THROW(apply_string_operator(m.T, m.lat, StringPath{{0, 3}}, {1}, OmegaData::identity(2), m.basis(std::vector<int>(12, 0))),
                 Error);
}

TEST(StringNet, CorruptedTableBreaksDuality) {
    Model m("Z2");
    SpinBasis B(m.lat, m.R);
    auto bad = m.T;
    bad.at(1, 1, 0, 1, 1, 0) += 0.1;
    EXPECT_GT(duality_compare_Bp(B, bad, m.lat, 0, 0).max_dev, 1e-3);
}
