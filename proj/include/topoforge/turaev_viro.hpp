#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "complex.hpp"
#include "group.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "rep_theory.hpp"
#include "state_space.hpp"
#include "string_net.hpp"

namespace topoforge {

using BoundaryColoring = std::map<int, int>; // boundary edge class -> label along the class orientation

struct TVValue {
    cplx value = 0;
    std::uint64_t terms = 0; // admissible colorings summed
    double seconds = 0;
};

struct StateSumOptions {
    std::uint64_t budget = std::uint64_t(1) << 40;
    int threads = 0;
};

namespace detail {

// Orientation-aware labels of a tetrahedron under a class coloring.
inline int local_label(const GluedComplex3& cx, const RepTheory& R, const std::vector<int>& j, int t, int a, int b) {
    int s = edge_slot(a, b);
    int x = cx.edge_sign[t][s] > 0 ? j[cx.edge_class[t][s]] : R.dual(j[cx.edge_class[t][s]]);
    return a < b ? x : R.dual(x);
}

// Face (a<b<c) carries Icyc(x_ab, x_bc, x_ca) on legs (ab, bc, ca).
inline std::array<int, 3> face_labels(const GluedComplex3& cx, const RepTheory& R, const std::vector<int>& j, int t, int k) {
    auto f = face_vertices(k);
    return {local_label(cx, R, j, t, f[0], f[1]), local_label(cx, R, j, t, f[1], f[2]), local_label(cx, R, j, t, f[2], f[0])};
}

// Relative phase of the face tensor seen from (t,k) against the class
// representative. Across an orientation-reversing identification the legs
// carry dual labels and the comparison is with the conjugate tensor.
inline cplx face_phase(const GluedComplex3& cx, const RepTheory& R, const std::vector<int>& j, int t, int k) {
    const auto rep = cx.face_rep[cx.face_class[t][k]];
    if (rep[0] == t && rep[1] == k) return 1.0;
    const auto& g = cx.glue[t][k];
    if (g.tet != rep[0] || g.perm[k] != rep[1]) fail(ErrorKind::GluingInconsistent, "face class with more than two members");
    auto f = face_vertices(k), f0 = face_vertices(rep[1]);
    // image of the local cycle a->b->c in the representative's vertex positions
    std::array<int, 3> pos{};
    for (int i = 0; i < 3; ++i) pos[i] = static_cast<int>(std::find(f0.begin(), f0.end(), g.perm[f[i]]) - f0.begin());
    const bool even = (pos[1] - pos[0] + 3) % 3 == 1;
    auto la = face_labels(cx, R, j, t, k), l0 = face_labels(cx, R, j, rep[0], rep[1]);
    const Tensor3& L = R.vertex_tensor(la[0], la[1], la[2]);
    const Tensor3& C = R.vertex_tensor(l0[0], l0[1], l0[2]);
    // leg i of the local face (edge f[i] f[i+1]) is leg leg_of[i] of the representative
    std::array<int, 3> leg_of{};
    for (int i = 0; i < 3; ++i) {
        int u = pos[i], w = pos[(i + 1) % 3];
        leg_of[i] = (w - u + 3) % 3 == 1 ? u : w; // leg u runs u -> u+1
    }
    cplx e = 0;
    std::array<int, 3> idx{}, ci{};
    for (idx[0] = 0; idx[0] < L.dims[0]; ++idx[0])
        for (idx[1] = 0; idx[1] < L.dims[1]; ++idx[1])
            for (idx[2] = 0; idx[2] < L.dims[2]; ++idx[2]) {
                for (int i = 0; i < 3; ++i) ci[leg_of[i]] = idx[i];
                cplx c = C.at(ci[0], ci[1], ci[2]);
                e += (even ? std::conj(c) : c) * L.at(idx[0], idx[1], idx[2]);
            }
    if (std::abs(std::abs(e) - 1) > 1e-9) fail(ErrorKind::NumericalInconsistency, "face tensors are not proportional");
    return e;
}

// Symmetric symbol of tetrahedron t: F^{x01 x12 x02*}_{x23 x03* x13} / d_{x13},
// phases of the four faces aligned with their class representatives.
inline cplx tet_symbol(const GluedComplex3& cx, const RepTheory& R, const FSymbolTable& T, const std::vector<int>& j, int t) {
    auto x = [&](int a, int b) { return local_label(cx, R, j, t, a, b); };
    cplx f = T(x(0, 1), x(1, 2), R.dual(x(0, 2)), x(2, 3), R.dual(x(0, 3)), x(1, 3));
    if (f == 0.0) return 0.0;
    f /= static_cast<double>(R.dim(x(1, 3)));
    // faces 012 and 023 enter linearly, 013 and 123 through the conjugate
    f *= std::conj(face_phase(cx, R, j, t, 3)) * std::conj(face_phase(cx, R, j, t, 1)) * face_phase(cx, R, j, t, 2) *
         face_phase(cx, R, j, t, 0);
    return f;
}

// Depth-first enumeration of the classes in `free`, pruning on face
// admissibility; the first few classes are split into parallel work units.
struct Enumerator {
    const GluedComplex3* cx;
    int labels;
    std::vector<int> free;                   // classes summed over, in order
    std::vector<std::vector<int>> check_at;  // faces to check after setting depth d-1
    std::function<bool(const std::vector<int>&, int)> face_ok;

    Enumerator(const GluedComplex3& c, int n, std::vector<int> fr, std::function<bool(const std::vector<int>&, int)> ok)
        : cx(&c), labels(n), free(std::move(fr)), face_ok(std::move(ok)) {
        std::vector<int> depth_of(cx->nedges, -1);
        for (std::size_t d = 0; d < free.size(); ++d) depth_of[free[d]] = static_cast<int>(d);
        check_at.assign(free.size() + 1, {});
        for (int f = 0; f < cx->nfaces; ++f) {
            auto [t, k] = cx->face_rep[f];
            auto v = face_vertices(k);
            int d = -1;
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) d = std::max(d, depth_of[cx->edge_class[t][edge_slot(v[a], v[b])]]);
            check_at[d + 1].push_back(f);
        }
    }

    bool faces_pass(const std::vector<int>& j, int depth) const {
        for (int f : check_at[depth])
            if (!face_ok(j, f)) return false;
        return true;
    }

    // sum of leaf(j) over completions of j from `depth`
    template <class T, class Leaf>
    void run(std::vector<int>& j, std::size_t depth, T& acc, std::uint64_t& terms, Leaf& leaf) const {
        if (depth == free.size()) {
            acc += leaf(j);
            ++terms;
            return;
        }
        for (int x = 0; x < labels; ++x) {
            j[free[depth]] = x;
            if (faces_pass(j, static_cast<int>(depth) + 1)) run(j, depth + 1, acc, terms, leaf);
        }
    }

    // parallel over the labels of the first few classes
    template <class T, class Leaf>
    std::pair<T, std::uint64_t> sum(std::vector<int> j, int threads, Leaf make_leaf) const {
        if (!faces_pass(j, 0)) return {T{}, 0};
        std::size_t prefix = 0;
        std::uint64_t units = 1;
        while (prefix < free.size() && units < 256) units *= labels, ++prefix;
        struct Part {
            T acc{};
            std::uint64_t terms = 0;
        };
        auto part = parallel_reduce<Part>(
            0, units, resolve_threads(threads), static_cast<int>(std::min<std::uint64_t>(units, 64)), Part{},
            [&](std::uint64_t lo, std::uint64_t hi) {
                Part p;
                auto jj = j;
                auto leaf = make_leaf();
                for (std::uint64_t u = lo; u < hi; ++u) {
                    std::uint64_t r = u;
                    bool ok = true;
                    for (std::size_t d = prefix; d-- > 0;) {
                        jj[free[d]] = static_cast<int>(r % labels);
                        r /= labels;
                    }
                    for (std::size_t d = 0; d < prefix && ok; ++d) ok = faces_pass(jj, static_cast<int>(d) + 1);
                    if (ok) run(jj, prefix, p.acc, p.terms, leaf);
                }
                return p;
            },
            [](Part a, const Part& b) {
                a.acc += b.acc;
                a.terms += b.terms;
                return a;
            });
        return {part.acc, part.terms};
    }
};

inline void check_budget(std::uint64_t base, std::size_t exponent, std::uint64_t budget, const char* what) {
    long double total = std::pow(static_cast<long double>(base), static_cast<long double>(exponent));
    if (total > static_cast<long double>(budget))
        fail(ErrorKind::BudgetExceeded, std::string(what) + ": " + std::to_string(base) + "^" + std::to_string(exponent) +
                                            " colorings exceed budget " + std::to_string(budget));
}

inline bool face_admissible(const GluedComplex3& cx, const RepTheory& R, const std::vector<int>& j, int f) {
    auto [t, k] = cx.face_rep[f];
    auto l = face_labels(cx, R, j, t, k);
    return R.admissible(l[0], l[1], l[2]);
}

} // namespace detail

// Z = d^-V sum_j prod_e d_j prod_tets {6j}
inline TVValue tv_closed(const GluedComplex3& cx, const RepTheory& R, const FSymbolTable& T, const StateSumOptions& opt = {}) {
    auto t0 = std::chrono::steady_clock::now();
    if (!cx.closed()) fail(ErrorKind::HasBoundary, "complex has boundary faces");
    detail::check_budget(R.count(), cx.nedges, opt.budget, "tv");
    std::vector<int> all(cx.nedges);
    std::iota(all.begin(), all.end(), 0);
    detail::Enumerator en(cx, R.count(), all, [&](const std::vector<int>& j, int f) { return detail::face_admissible(cx, R, j, f); });
    auto [s, terms] = en.sum<cplx>(std::vector<int>(cx.nedges, 0), opt.threads, [&] {
        return [&](const std::vector<int>& j) {
            cplx w = 1;
            for (int x : j) w *= static_cast<double>(R.dim(x));
            for (int t = 0; t < cx.ntet() && w != 0.0; ++t) w *= detail::tet_symbol(cx, R, T, j, t);
            return w;
        };
    });
    TVValue v;
    v.value = s / std::pow(static_cast<double>(T.d_total), cx.nvertices);
    v.terms = terms;
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

// Labels from the file's color lines, converted to class orientation.
inline BoundaryColoring boundary_from_colors(const GluedComplex3& cx, const RepTheory& R) {
    BoundaryColoring b;
    for (const auto& c : cx.colors) {
        if (c.label >= R.count()) fail(ErrorKind::InadmissibleBoundary, "unknown irrep label " + std::to_string(c.label));
        int s = edge_slot(c.a, c.b), cls = cx.edge_class[c.tet][s];
        if (!cx.boundary_edge[cls]) fail(ErrorKind::InadmissibleBoundary, "colored edge is not on the boundary");
        int along = cx.edge_sign[c.tet][s] * (c.a < c.b ? 1 : -1);
        int lab = along > 0 ? c.label : R.dual(c.label);
        auto [it, fresh] = b.emplace(cls, lab);
        if (!fresh && it->second != lab) fail(ErrorKind::InadmissibleBoundary, "conflicting colors on one edge");
    }
    return b;
}

// Sum over interior labels with weights
// d^(-V_int - V_bd/2) prod_int d_j prod_bd d_j^(1/2) prod_tets {6j}.
inline TVValue tv_boundary(const GluedComplex3& cx, const RepTheory& R, const FSymbolTable& T, const BoundaryColoring& bc,
                           const StateSumOptions& opt = {}) {
    auto t0 = std::chrono::steady_clock::now();
    // every boundary edge must sit on exactly two boundary triangles
    std::vector<int> bdeg(cx.nedges, 0);
    for (int f = 0; f < cx.nfaces; ++f) {
        if (!cx.boundary_face[f]) continue;
        auto [t, k] = cx.face_rep[f];
        auto v = face_vertices(k);
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) ++bdeg[cx.edge_class[t][edge_slot(v[a], v[b])]];
    }
    for (int e = 0; e < cx.nedges; ++e)
        if (cx.boundary_edge[e] && bdeg[e] != 2) fail(ErrorKind::StructureUnsupported, "boundary surface is not closed");
    std::vector<int> j(cx.nedges, 0), interior;
    for (int e = 0; e < cx.nedges; ++e) {
        if (!cx.boundary_edge[e]) {
            interior.push_back(e);
            continue;
        }
        auto it = bc.find(e);
        if (it == bc.end()) fail(ErrorKind::InadmissibleBoundary, "boundary edge " + std::to_string(e) + " has no label");
        if (it->second < 0 || it->second >= R.count()) fail(ErrorKind::InadmissibleBoundary, "label out of range");
        j[e] = it->second;
    }
    for (int f = 0; f < cx.nfaces; ++f)
        if (cx.boundary_face[f] && !detail::face_admissible(cx, R, j, f))
            fail(ErrorKind::InadmissibleBoundary, "boundary triangle " + std::to_string(f) + " is not admissible");
    detail::check_budget(R.count(), interior.size(), opt.budget, "tv");
    detail::Enumerator en(cx, R.count(), interior, [&](const std::vector<int>& jj, int f) { return detail::face_admissible(cx, R, jj, f); });
    auto [s, terms] = en.sum<cplx>(j, opt.threads, [&] {
        return [&](const std::vector<int>& jj) {
            cplx w = 1;
            for (int e : interior) w *= static_cast<double>(R.dim(jj[e]));
            for (int t = 0; t < cx.ntet() && w != 0.0; ++t) w *= detail::tet_symbol(cx, R, T, jj, t);
            return w;
        };
    });
    double bw = 1;
    for (int e = 0; e < cx.nedges; ++e)
        if (cx.boundary_edge[e]) bw *= std::sqrt(static_cast<double>(R.dim(j[e])));
    int vb = cx.boundary_vertex_count(), vi = cx.nvertices - vb;
    TVValue v;
    v.value = s * bw / std::pow(static_cast<double>(T.d_total), vi + 0.5 * vb);
    v.terms = terms;
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return v;
}

// #{flat G-colorings of the edge classes} / |G|^V; a triangle is flat when
// g_ab g_bc = g_ac along its vertex order.
inline double dw_value(const GluedComplex3& cx, const FiniteGroup& G, const StateSumOptions& opt = {}) {
    if (!cx.closed()) fail(ErrorKind::HasBoundary, "complex has boundary faces");
    detail::check_budget(G.order, cx.nedges, opt.budget, "dw");
    auto oriented = [&](const std::vector<int>& g, int t, int a, int b) {
        int s = edge_slot(a, b);
        int x = cx.edge_sign[t][s] > 0 ? g[cx.edge_class[t][s]] : G.inverse(g[cx.edge_class[t][s]]);
        return a < b ? x : G.inverse(x);
    };
    std::vector<int> all(cx.nedges);
    std::iota(all.begin(), all.end(), 0);
    detail::Enumerator en(cx, G.order, all, [&](const std::vector<int>& g, int f) {
        auto [t, k] = cx.face_rep[f];
        auto v = face_vertices(k);
        return G.mul(oriented(g, t, v[0], v[1]), oriented(g, t, v[1], v[2])) == oriented(g, t, v[0], v[2]);
    });
    auto [count, terms] = en.sum<std::uint64_t>(std::vector<int>(cx.nedges, 0), opt.threads,
                                                [] { return [](const std::vector<int>&) { return std::uint64_t(1); }; });
    (void)terms;
    return static_cast<double>(count) / std::pow(static_cast<double>(G.order), cx.nvertices);
}

// Surface x [0,1] over the dual triangulation: one prism per honeycomb vertex,
// cut into three tetrahedra along the vertex order (rank(p), level).
struct CylinderComplex {
    GluedComplex3 cx;
    std::vector<int> order;                  // plaquettes by rank
    std::vector<int> bottom_class, top_class; // per honeycomb edge
    std::vector<int> bottom_sign, top_sign;   // +1 if the class runs along e* (right face to left face)
    std::vector<int> vertical_class;          // per plaquette
    std::vector<std::array<int, 3>> prism;    // plaquettes around each honeycomb vertex, by rank
};

inline CylinderComplex build_cylinder_complex(const HoneycombLattice& lat, const std::vector<int>& plaquette_order) {
    const int P = lat.np();
    std::vector<int> rank(P, -1);
    if (static_cast<int>(plaquette_order.size()) != P) fail(ErrorKind::InvalidParameter, "plaquette order has the wrong length");
    for (int i = 0; i < P; ++i) {
        int p = plaquette_order[i];
        if (p < 0 || p >= P || rank[p] >= 0) fail(ErrorKind::InvalidParameter, "plaquette order is not a permutation");
        rank[p] = i;
    }
    auto key = [&](int p, int level) { return 2 * rank[p] + level; };
    struct Tet {
        int v;                  // honeycomb vertex (prism)
        std::array<int, 4> key; // increasing
        std::array<int, 4> plaq;
    };
    std::vector<Tet> tets;
    std::vector<std::array<int, 3>> prisms;
    for (int v = 0; v < lat.nv; ++v) {
        std::vector<int> ps;
        for (int e : lat.inc[v])
            for (int f : lat.faces_of_edge[e])
                if (std::find(ps.begin(), ps.end(), f) == ps.end()) ps.push_back(f);
        if (ps.size() != 3) fail(ErrorKind::InvalidGeometry, "vertex does not touch three distinct plaquettes");
        std::sort(ps.begin(), ps.end(), [&](int a, int b) { return rank[a] < rank[b]; });
        const int a = ps[0], b = ps[1], c = ps[2];
        prisms.push_back({a, b, c});
        // lift a, then b, then c: diagonals run from the lower-ranked bottom
        // corner to the higher-ranked top corner
        tets.push_back({v, {key(a, 0), key(a, 1), key(b, 1), key(c, 1)}, {a, a, b, c}});
        tets.push_back({v, {key(a, 0), key(b, 0), key(b, 1), key(c, 1)}, {a, b, b, c}});
        tets.push_back({v, {key(a, 0), key(b, 0), key(c, 0), key(c, 1)}, {a, b, c, c}});
    }
    const int T = static_cast<int>(tets.size());
    // faces keyed by their vertex keys plus the honeycomb edge (square faces)
    // or vertex (faces inside a prism)
    std::map<std::pair<std::array<int, 3>, int>, std::vector<std::array<int, 2>>> faces;
    auto edge_for = [&](int v, int p, int q) {
        for (int e : lat.inc[v]) {
            const auto& f = lat.faces_of_edge[e];
            if ((f[0] == p && f[1] == q) || (f[0] == q && f[1] == p)) return e;
        }
        fail(ErrorKind::InvalidGeometry, "no edge between plaquettes");
    };
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            std::array<int, 3> ks{}, pl{}, lv{};
            auto fv = face_vertices(k);
            for (int i = 0; i < 3; ++i) ks[i] = tets[t].key[fv[i]], pl[i] = tets[t].plaq[fv[i]], lv[i] = ks[i] % 2;
            if (lv[0] == lv[1] && lv[1] == lv[2]) continue; // top or bottom
            int tag;
            if (pl[0] == pl[1] || pl[1] == pl[2] || pl[0] == pl[2]) {
                int p = pl[0], q = pl[0] == pl[1] ? pl[2] : pl[1];
                tag = edge_for(tets[t].v, p, q);
            } else {
                tag = lat.ne() + tets[t].v;
            }
            faces[{ks, tag}].push_back({t, k});
        }
    std::vector<std::array<FaceGluing, 4>> glue(T);
    for (const auto& [id, mem] : faces) {
        if (mem.size() != 2) fail(ErrorKind::InvalidGeometry, "cylinder face without a partner");
        for (int s = 0; s < 2; ++s) {
            auto [t, k] = mem[s];
            auto [t2, k2] = mem[1 - s];
            FaceGluing g;
            g.tet = t2;
            for (int m = 0; m < 4; ++m) {
                if (m == k) {
                    g.perm[m] = k2;
                    continue;
                }
                int want = tets[t].key[m];
                g.perm[m] = static_cast<int>(std::find(tets[t2].key.begin(), tets[t2].key.end(), want) - tets[t2].key.begin());
            }
            glue[t][k] = g;
        }
    }
    CylinderComplex cyl;
    cyl.cx = make_complex(std::move(glue));
    cyl.order = plaquette_order;
    cyl.prism = std::move(prisms);
    cyl.bottom_class.assign(lat.ne(), -1), cyl.top_class.assign(lat.ne(), -1);
    cyl.bottom_sign.assign(lat.ne(), 0), cyl.top_sign.assign(lat.ne(), 0);
    cyl.vertical_class.assign(P, -1);
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < 6; ++s) {
            int a = kEdgeSlots[s][0], b = kEdgeSlots[s][1];
            int ka = tets[t].key[a], kb = tets[t].key[b], pa = tets[t].plaq[a], pb = tets[t].plaq[b];
            int cls = cyl.cx.edge_class[t][s], sg = cyl.cx.edge_sign[t][s];
            if (pa == pb) {
                cyl.vertical_class[pa] = cls;
                continue;
            }
            if (ka % 2 != kb % 2) continue; // diagonal
            int e = edge_for(tets[t].v, pa, pb);
            // slot runs pa -> pb; e* runs right -> left
            int along = lat.faces_of_edge[e][1] == pa ? sg : -sg;
            auto& cl = ka % 2 ? cyl.top_class : cyl.bottom_class;
            auto& sn = ka % 2 ? cyl.top_sign : cyl.bottom_sign;
            cl[e] = cls, sn[e] = along;
        }
    return cyl;
}

// Bottom carries S0, top carries S1 (labels on primal edges).
inline BoundaryColoring cylinder_boundary(const CylinderComplex& cyl, const RepTheory& R, const std::vector<int>& S0,
                                          const std::vector<int>& S1) {
    BoundaryColoring b;
    for (std::size_t e = 0; e < S0.size(); ++e) {
        b[cyl.bottom_class[e]] = cyl.bottom_sign[e] > 0 ? S0[e] : R.dual(S0[e]);
        b[cyl.top_class[e]] = cyl.top_sign[e] > 0 ? S1[e] : R.dual(S1[e]);
    }
    return b;
}

// The boundary triangles of the cylinder carry the face tensors of their
// tetrahedra, while the string-net basis uses the vertex tensor at each
// honeycomb vertex. Both span the same line; this is the product of the
// relative phases, bottom faces entering linearly and top faces conjugated.
inline cplx cylinder_boundary_phase(const CylinderComplex& cyl, const HoneycombLattice& lat, const RepTheory& R,
                                    const std::vector<int>& S0, const std::vector<int>& S1) {
    std::vector<int> j(cyl.cx.nedges, 0);
    for (const auto& [cls, lab] : cylinder_boundary(cyl, R, S0, S1)) j[cls] = lab;
    auto phase = [&](int v, bool top, const std::vector<int>& S) {
        const auto& ps = cyl.prism[v];
        const int t = top ? 3 * v : 3 * v + 2, k = top ? 0 : 3;
        auto la = detail::face_labels(cyl.cx, R, j, t, k);
        std::array<int, 3> q{};
        for (int i = 0; i < 3; ++i) {
            q[i] = -1;
            for (int e : lat.inc[v]) {
                const auto& f = lat.faces_of_edge[e];
                if ((f[0] == ps[i] && f[1] == ps[(i + 1) % 3]) || (f[1] == ps[i] && f[0] == ps[(i + 1) % 3])) q[i] = lat.slot_of(v, e);
            }
        }
        // face cycle running with the counterclockwise order sees dual labels
        const bool with = (q[1] - q[0] + 3) % 3 == 1;
        auto vl = vertex_labels(lat, R.duals(), S, v);
        for (int i = 0; i < 3; ++i)
            if (la[i] != (with ? R.dual(vl[q[i]]) : vl[q[i]]))
                fail(ErrorKind::NumericalInconsistency, "boundary labels do not match the string-net vertex");
        const Tensor3& F = R.vertex_tensor(la[0], la[1], la[2]);
        const Tensor3& V = R.vertex_tensor(vl[0], vl[1], vl[2]);
        cplx e = 0;
        std::array<int, 3> idx{}, vi{};
        for (idx[0] = 0; idx[0] < F.dims[0]; ++idx[0])
            for (idx[1] = 0; idx[1] < F.dims[1]; ++idx[1])
                for (idx[2] = 0; idx[2] < F.dims[2]; ++idx[2]) {
                    for (int i = 0; i < 3; ++i) vi[q[i]] = idx[i];
                    cplx c = V.at(vi[0], vi[1], vi[2]);
                    e += (with ? c : std::conj(c)) * F.at(idx[0], idx[1], idx[2]);
                }
        return e;
    };
    cplx w = 1;
    for (int v = 0; v < lat.nv; ++v) w *= std::conj(phase(v, false, S0)) * phase(v, true, S1);
    return w;
}

// Z_TV[cylinder; S0, S1] in the string-net basis.
inline cplx cylinder_amplitude(const CylinderComplex& cyl, const HoneycombLattice& lat, const RepTheory& R, const FSymbolTable& T,
                               const std::vector<int>& S0, const std::vector<int>& S1, const StateSumOptions& opt = {}) {
    cplx z = tv_boundary(cyl.cx, R, T, cylinder_boundary(cyl, R, S0, S1), opt).value;
    return z == 0.0 ? z : z * cylinder_boundary_phase(cyl, lat, R, S0, S1);
}

struct ProjectorComparison {
    double max_dev = 0;
    int pairs = 0;
    int nonzero_pairs = 0;
};

// max |<S1| prod_p B_p |S0> - Z_TV[cylinder; S0, S1]| over admissible pairs;
// samples <= 0 means all pairs.
inline ProjectorComparison compare_projector(const HoneycombLattice& lat, const RepTheory& R, const FSymbolTable& T,
                                             const std::vector<int>& plaquette_order, int samples, std::uint64_t seed = 3,
                                             const StateSumOptions& opt = {}) {
    auto cyl = build_cylinder_complex(lat, plaquette_order);
    auto cols = admissible_colorings(lat, R);
    Codec c(T.n, lat.ne());
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (samples <= 0) {
        for (std::size_t a = 0; a < cols.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) pairs.push_back({a, b});
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, cols.size() - 1);
        for (int s = 0; s < samples; ++s) pairs.push_back({pick(rng), pick(rng)});
    }
    std::map<std::size_t, StateVector> images;
    ProjectorComparison r;
    for (auto [a, b] : pairs) {
        auto it = images.find(a);
        if (it == images.end())
            it = images.emplace(a, apply_Bp_product(T, lat, plaquette_order, basis_state(Basis::Spin, c, c.encode(cols[a])))).first;
        cplx sn = it->second.get(c.encode(cols[b]));
        cplx tv = cylinder_amplitude(cyl, lat, R, T, cols[a], cols[b], opt);
        r.max_dev = std::max(r.max_dev, std::abs(sn - tv));
        ++r.pairs;
        r.nonzero_pairs += std::abs(sn) > 1e-12;
    }
    return r;
}

} // namespace topoforge
