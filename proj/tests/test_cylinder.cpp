#include <topoforge/turaev_viro.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace topoforge;

namespace {

struct Fixture {
    explicit Fixture(const char* g)
        : R(build_group(g)), T(R.f_symbols()), lat(honeycomb_torus(2, 2)), cols(admissible_colorings(lat, R)),
          c(T.n, lat.ne()) {}
    RepTheory R;
    FSymbolTable T;
    HoneycombLattice lat;
    std::vector<std::vector<int>> cols;
    Codec c;

    cplx projector(const std::vector<int>& from, const std::vector<int>& to) const {
        return apply_Bp_product(T, lat, {0, 1, 2, 3}, basis_state(Basis::Spin, c, c.encode(from))).get(c.encode(to));
    }
};

} // namespace

TEST(Cylinder, Shape) {
    auto lat = honeycomb_torus(2, 2);
    auto cyl = build_cylinder_complex(lat, {0, 1, 2, 3});
    const auto& cx = cyl.cx;
    EXPECT_EQ(cx.ntet(), 3 * lat.nv);
    EXPECT_EQ(cx.nvertices, 2 * lat.np());
    EXPECT_EQ(cx.nedges, 40);
    EXPECT_EQ(std::count(cx.boundary_edge.begin(), cx.boundary_edge.end(), 1), 2 * lat.ne());
    EXPECT_EQ(cx.boundary_vertex_count(), 2 * lat.np());
    EXPECT_EQ(cx.euler_characteristic(), 0); // torus x interval
    EXPECT_TRUE(cx.orientable);
    EXPECT_FALSE(cx.closed());
}

TEST(Cylinder, Z2AllPairs) {
    Fixture s("Z2");
    for (auto order : {std::vector<int>{0, 1, 2, 3}, std::vector<int>{2, 0, 3, 1}}) {
        auto r = compare_projector(s.lat, s.R, s.T, order, 0);
        EXPECT_EQ(r.pairs, 32 * 32);
        EXPECT_GT(r.nonzero_pairs, 0);
        EXPECT_LT(r.max_dev, 1e-8);
    }
}

TEST(Cylinder, SampledGroups) {
    for (auto [g, n] : {std::pair{"Z3", 30}, std::pair{"S3", 4}}) {
        Fixture s(g);
        auto r = compare_projector(s.lat, s.R, s.T, {1, 3, 0, 2}, n);
        EXPECT_LT(r.max_dev, 1e-8) << g;
    }
    // random S3 pairs are almost always zero, so also check some diagonal ones
    Fixture s("S3");
    auto cyl = build_cylinder_complex(s.lat, {0, 1, 2, 3});
    int nonzero = 0;
    for (std::size_t a = 0; a < s.cols.size(); a += s.cols.size() / 3) {
        cplx p = s.projector(s.cols[a], s.cols[a]);
        EXPECT_NEAR(std::abs(cylinder_amplitude(cyl, s.lat, s.R, s.T, s.cols[a], s.cols[a]) - p), 0, 1e-8);
        nonzero += std::abs(p) > 1e-12;
    }
    EXPECT_GT(nonzero, 0);
}

TEST(Cylinder, DiagonalIsReal) {
    Fixture s("Z2");
    auto cyl = build_cylinder_complex(s.lat, {0, 1, 2, 3});
    for (std::size_t a = 0; a < s.cols.size(); a += 3) {
        cplx z = cylinder_amplitude(cyl, s.lat, s.R, s.T, s.cols[a], s.cols[a]);
        cplx p = s.projector(s.cols[a], s.cols[a]);
        EXPECT_NEAR(z.imag(), 0, 1e-9);
        EXPECT_NEAR(p.imag(), 0, 1e-9);
        EXPECT_NEAR(z.real(), p.real(), 1e-9);
    }
}

TEST(Cylinder, AmplitudeIgnoresPlaquetteOrder) {
    Fixture s("Z3");
    std::vector<CylinderComplex> cyls;
    for (auto o : {std::vector<int>{0, 1, 2, 3}, std::vector<int>{3, 2, 1, 0}, std::vector<int>{1, 0, 3, 2}})
        cyls.push_back(build_cylinder_complex(s.lat, o));
    std::mt19937_64 rng(8);
    for (int t = 0; t < 10; ++t) {
        const auto& a = s.cols[rng() % s.cols.size()];
        auto img = apply_Bp_product(s.T, s.lat, {0, 1, 2, 3}, basis_state(Basis::Spin, s.c, s.c.encode(a)));
        for (const auto& [k, v] : img.amp) {
            auto b = s.c.decode(k);
            cplx z0 = cylinder_amplitude(cyls[0], s.lat, s.R, s.T, a, b);
            for (std::size_t i = 1; i < cyls.size(); ++i)
                EXPECT_LT(std::abs(cylinder_amplitude(cyls[i], s.lat, s.R, s.T, a, b) - z0), 1e-10);
        }
    }
}

TEST(Cylinder, StackingIsIdempotent) {
    // summing the middle boundary of two stacked cylinders gives one cylinder
    Fixture s("Z2");
    auto cyl = build_cylinder_complex(s.lat, {0, 1, 2, 3});
    const std::size_t n = s.cols.size();
    std::vector<cplx> Z(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) Z[a * n + b] = cylinder_amplitude(cyl, s.lat, s.R, s.T, s.cols[a], s.cols[b]);
    double worst = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            cplx two = 0;
            for (std::size_t m = 0; m < n; ++m) two += Z[a * n + m] * Z[m * n + b];
            worst = std::max(worst, std::abs(two - Z[a * n + b]));
        }
    EXPECT_LT(worst, 1e-10);
    // and the trace counts ground states
    cplx tr = 0;
    for (std::size_t a = 0; a < n; ++a) tr += Z[a * n + a];
    EXPECT_NEAR(tr.real(), 4.0, 1e-9);
}

TEST(Cylinder, CorruptedGluingIsDetected) {
    // re-glue one interior face with two of its vertices swapped; the first
    // variant that is still a valid complex must change the amplitudes
    Fixture s("Z2");
    auto cyl = build_cylinder_complex(s.lat, {0, 1, 2, 3});
    bool tested = false;
    for (int t = 0; t < cyl.cx.ntet() && !tested; ++t)
        for (int k = 0; k < 4 && !tested; ++k) {
            const auto g = cyl.cx.glue[t][k];
            if (g.boundary() || g.tet < t) continue;
            auto glue = cyl.cx.glue;
            auto f = face_vertices(k);
            auto p = g.perm;
            std::swap(p[f[0]], p[f[1]]);
            std::array<int, 4> inv{};
            for (int m = 0; m < 4; ++m) inv[p[m]] = m;
            glue[t][k].perm = p;
            glue[g.tet][p[k]].perm = inv;
            GluedComplex3 bad;
            try {
                bad = make_complex(glue);
            } catch (const Error&) {
                continue;
            }
            tested = true;
            double dev = 0;
            for (std::size_t a = 0; a < s.cols.size(); a += 3)
                for (std::size_t b = 0; b < s.cols.size(); b += 5) {
                    auto bc = cylinder_boundary(cyl, s.R, s.cols[a], s.cols[b]);
                    // carry the boundary labels over slot by slot
                    bad.colors.clear();
                    for (int u = 0; u < cyl.cx.ntet(); ++u)
                        for (int sl = 0; sl < 6; ++sl) {
                            auto it = bc.find(cyl.cx.edge_class[u][sl]);
                            if (it == bc.end()) continue;
                            int lab = cyl.cx.edge_sign[u][sl] > 0 ? it->second : s.R.dual(it->second);
                            bad.colors.push_back({u, kEdgeSlots[sl][0], kEdgeSlots[sl][1], lab});
                        }
                    cplx z = tv_boundary(bad, s.R, s.T, boundary_from_colors(bad, s.R)).value;
                    dev = std::max(dev, std::abs(z - tv_boundary(cyl.cx, s.R, s.T, bc).value));
                }
            EXPECT_GT(dev, 1e-3);
        }
    EXPECT_TRUE(tested);
}
