#include <topoforge/turaev_viro.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace topoforge;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

GluedComplex3 load(const std::string& dir, const std::string& name) { return parse_complex(slurp(dir + "/" + name)); }

// |Hom(Z_k, G)| / |G|: elements with g^k = 1, over the group order
double torsion_count(const FiniteGroup& G, int k) {
    int n = 0;
    for (int g = 0; g < G.order; ++g) {
        int x = 0;
        for (int i = 0; i < k; ++i) x = G.mul(x, g);
        n += x == 0;
    }
    return double(n) / G.order;
}

struct Case {
    const char* dir;
    const char* file;
    double (*expected)(const FiniteGroup&);
};

const Case kCases[] = {
    {TOPOFORGE_DATA, "sphere_d4.tri", [](const FiniteGroup& G) { return 1.0 / G.order; }},
    {TOPOFORGE_DATA, "sphere_2t.tri", [](const FiniteGroup& G) { return 1.0 / G.order; }},
    {TOPOFORGE_DATA, "s2xs1.tri", [](const FiniteGroup&) { return 1.0; }},
    {TOPOFORGE_DATA, "rp3.tri", [](const FiniteGroup& G) { return torsion_count(G, 2); }},
    {TOPOFORGE_TEST_DATA, "s2xs1_twisted.tri", [](const FiniteGroup&) { return 1.0; }},
    {TOPOFORGE_TEST_DATA, "rp3_twisted.tri", [](const FiniteGroup& G) { return torsion_count(G, 2); }},
    {TOPOFORGE_TEST_DATA, "l31.tri", [](const FiniteGroup& G) { return torsion_count(G, 3); }},
};

class StateSums : public ::testing::TestWithParam<const char*> {};

} // namespace

TEST_P(StateSums, MatchFundamentalGroupCounts) {
    auto G = build_group(GetParam());
    RepTheory R(G);
    auto T = R.f_symbols();
    for (const auto& c : kCases) {
        auto cx = load(c.dir, c.file);
        double want = c.expected(G);
        double dw = dw_value(cx, G);
        auto tv = tv_closed(cx, R, T);
        EXPECT_NEAR(dw, want, 1e-12) << c.file;
        EXPECT_NEAR(tv.value.real(), dw, 1e-8) << c.file;
        EXPECT_NEAR(tv.value.imag(), 0, 1e-8) << c.file;
        EXPECT_GT(tv.terms, 0u);
    }
}

TEST_P(StateSums, SphereTriangulationsAgree) {
    auto G = build_group(GetParam());
    RepTheory R(G);
    auto T = R.f_symbols();
    auto a = tv_closed(load(TOPOFORGE_DATA, "sphere_d4.tri"), R, T).value;
    auto b = tv_closed(load(TOPOFORGE_DATA, "sphere_2t.tri"), R, T).value;
    EXPECT_LT(std::abs(a - b), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Supported, StateSums, ::testing::Values("Z2", "Z3", "Z4", "S3", "D4"));

TEST(TuraevViro, ThreadCountDoesNotChangeTheSum) {
    auto G = build_group("D4");
    RepTheory R(G);
    auto T = R.f_symbols();
    auto cx = load(TOPOFORGE_DATA, "sphere_d4.tri");
    StateSumOptions one, many;
    one.threads = 1;
    many.threads = 3;
    EXPECT_LT(std::abs(tv_closed(cx, R, T, one).value - tv_closed(cx, R, T, many).value), 1e-12);
    EXPECT_NEAR(dw_value(cx, G, one), dw_value(cx, G, many), 1e-15);
}

TEST(TuraevViro, Errors) {
    auto G = build_group("Z2");
    RepTheory R(G);
    auto T = R.f_symbols();
    auto ball = parse_complex("tetrahedra 1\ntet 0 - - - -\n");
    auto kind = [](const std::function<void()>& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ZeroState;
    };
    EXPECT_EQ(kind([&] { tv_closed(ball, R, T); }), ErrorKind::HasBoundary);
    EXPECT_EQ(kind([&] { dw_value(ball, G); }), ErrorKind::HasBoundary);
    StateSumOptions tiny;
    tiny.budget = 4;
    EXPECT_EQ(kind([&] { tv_closed(load(TOPOFORGE_DATA, "sphere_d4.tri"), R, T, tiny); }), ErrorKind::BudgetExceeded);
    // boundary edge left uncolored
    EXPECT_EQ(kind([&] { tv_boundary(ball, R, T, {}); }), ErrorKind::InadmissibleBoundary);
    // odd Z2 parity around a triangle
    auto odd = parse_complex("tetrahedra 1\ntet 0 - - - -\ncolor 0.01 1\ncolor 0.02 0\ncolor 0.03 0\ncolor 0.12 0\n"
                             "color 0.13 0\ncolor 0.23 0\n");
    EXPECT_EQ(kind([&] { tv_boundary(odd, R, T, boundary_from_colors(odd, R)); }), ErrorKind::InadmissibleBoundary);
    auto bad_label = parse_complex("tetrahedra 1\ntet 0 - - - -\ncolor 0.01 5\n");
    EXPECT_EQ(kind([&] { boundary_from_colors(bad_label, R); }), ErrorKind::InadmissibleBoundary);
    // two tetrahedra sharing one face: boundary is closed, so accepted
    auto pair = parse_complex("tetrahedra 2\ntet 0 1:0123 - - -\ntet 1 0:0123 - - -\n");
    BoundaryColoring zero;
    for (int e = 0; e < pair.nedges; ++e)
        if (pair.boundary_edge[e]) zero[e] = 0;
    EXPECT_NO_THROW(tv_boundary(pair, R, T, zero));
}

TEST(TuraevViro, BallWithTrivialBoundary) {
    // one tetrahedron, all edges trivial: d^(-V_bd/2) with V_bd = 4
    for (const char* g : {"Z2", "S3"}) {
        auto G = build_group(g);
        RepTheory R(G);
        auto T = R.f_symbols();
        auto ball = parse_complex("tetrahedra 1\ntet 0 - - - -\n");
        BoundaryColoring zero;
        for (int e = 0; e < 6; ++e) zero[e] = 0;
        auto z = tv_boundary(ball, R, T, zero);
        EXPECT_NEAR(z.value.real(), 1.0 / (G.order * G.order), 1e-12) << g;
    }
}

TEST(TuraevViro, GluingBallsAlongAFace) {
    // two balls glued along a triangle give a ball: with trivial boundary labels
    // the value is d^(-V_bd/2) again, now with 5 boundary vertices and no interior edge
    auto G = build_group("Z3");
    RepTheory R(G);
    auto T = R.f_symbols();
    auto pair = parse_complex("tetrahedra 2\ntet 0 1:0123 - - -\ntet 1 0:0123 - - -\n");
    EXPECT_EQ(pair.boundary_vertex_count(), 5);
    BoundaryColoring zero;
    for (int e = 0; e < pair.nedges; ++e)
        if (pair.boundary_edge[e]) zero[e] = 0;
    EXPECT_NEAR(tv_boundary(pair, R, T, zero).value.real(), std::pow(3.0, -2.5), 1e-12);
}
