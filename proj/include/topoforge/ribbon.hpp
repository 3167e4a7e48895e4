#pragma once

#include <map>
#include <memory>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "kitaev.hpp"
#include "lattice.hpp"
#include "string_net.hpp"

namespace topoforge {

// Binary composition tree over elementary triangles.
struct RibbonNode {
    Triangle tri;
    std::shared_ptr<const RibbonNode> a, b;
    bool leaf() const { return !a; }
};

// One outcome of acting with W^{(h,g)} on a basis coloring: the operator is
// nonzero only for the listed g, sending the key to `key` with weight `coef`.
struct RibbonTerm {
    int g;
    Key key;
    cplx coef;
};

struct RibbonOperator {
    const FiniteGroup* G = nullptr;
    const HoneycombLattice* lat = nullptr;
    Codec codec;
    RibbonStrip strip;
    std::map<std::pair<int, int>, cplx> coefficients; // (h, g) -> amplitude
    std::shared_ptr<const RibbonNode> tree;

    std::set<int> edges() const {
        std::set<int> s;
        for (const auto& t : strip.triangles) s.insert(t.edge);
        return s;
    }

    // W^{(h,g)} for every g at once.
    void act_all(const RibbonNode& n, int h, Key k, std::vector<RibbonTerm>& out) const {
        out.clear();
        if (n.leaf()) {
            const Triangle& t = n.tri;
            if (t.kind == TriangleKind::Direct) {
                int x = codec.digit(k, t.edge);
                out.push_back({0, codec.with(k, t.edge, left_action(*G, *lat, h, t.edge, t.from.vertex, x)), 1.0});
            } else {
                int x = codec.digit(k, t.edge);
                out.push_back({lat->points_into(t.edge, t.from.vertex) ? x : G->inverse(x), k, 1.0});
            }
            return;
        }
        // comultiplication: sum_g1 W_a^{(h,g1)} W_b^{(g1^-1 h g1, g1^-1 g)}; a and b
        // touch disjoint edges, so they commute and a may act first
        std::vector<RibbonTerm> first, second;
        act_all(*n.a, h, k, first);
        for (const auto& ta : first) {
            int h2 = G->conj(G->inverse(ta.g), h);
            act_all(*n.b, h2, ta.key, second);
            for (const auto& tb : second) out.push_back({G->mul(ta.g, tb.g), tb.key, ta.coef * tb.coef});
        }
    }

    template <class Emit>
    void terms(Key k, Emit emit) const {
        std::vector<RibbonTerm> buf;
        std::map<int, std::vector<RibbonTerm>> by_h;
        for (const auto& [hg, c] : coefficients) {
            auto it = by_h.find(hg.first);
            if (it == by_h.end()) {
                act_all(*tree, hg.first, k, buf);
                it = by_h.emplace(hg.first, buf).first;
            }
            for (const auto& t : it->second)
                if (t.g == hg.second) emit(t.key, c * t.coef);
        }
    }
};

inline void check_triangle(const HoneycombLattice& lat, const Triangle& t) {
    auto bad = [](const char* why) { fail(ErrorKind::InvalidGeometry, why); };
    if (t.edge < 0 || t.edge >= lat.ne()) bad("edge out of range");
    if (t.kind == TriangleKind::Dual) {
        if (t.from.plaquette != t.to.plaquette) bad("dual triangle must stay on one plaquette");
        if (t.from.vertex == t.to.vertex || !lat.incident(t.edge, t.from.vertex) || !lat.incident(t.edge, t.to.vertex))
            bad("dual triangle must run along its edge");
        const auto& f = lat.faces_of_edge[t.edge];
        if (f[0] != t.from.plaquette && f[1] != t.from.plaquette) bad("edge is not on the plaquette");
    } else {
        if (t.from.vertex != t.to.vertex) bad("direct triangle must keep its vertex");
        if (!lat.incident(t.edge, t.from.vertex)) bad("edge does not touch the vertex");
        const auto& f = lat.faces_of_edge[t.edge];
        if (!((f[0] == t.from.plaquette && f[1] == t.to.plaquette) || (f[1] == t.from.plaquette && f[0] == t.to.plaquette)))
            bad("direct triangle must cross its edge");
    }
}

// Direct: delta_{g,1} L^h(edge, vertex). Dual: projector onto edge value g read
// from the start vertex (g_e if the edge points into it, g_e^-1 otherwise).
inline RibbonOperator elementary_ribbon(const FiniteGroup& G, const HoneycombLattice& lat, const Triangle& t, int h, int g) {
    check_triangle(lat, t);
    if (h < 0 || h >= G.order || g < 0 || g >= G.order) fail(ErrorKind::InvalidParameter, "group label out of range");
    RibbonOperator r;
    r.G = &G, r.lat = &lat, r.codec = group_codec(G, lat);
    r.strip.triangles = {t};
    r.strip.start = t.from, r.strip.end = t.to;
    r.coefficients[{h, g}] = 1.0;
    auto n = std::make_shared<RibbonNode>();
    n->tri = t;
    r.tree = n;
    return r;
}

inline RibbonOperator compose(const RibbonOperator& a, const RibbonOperator& b, int h, int g) {
    if (a.G != b.G || a.lat != b.lat) fail(ErrorKind::NotConcatenable, "ribbons live on different models");
    if (!(a.strip.end == b.strip.start)) fail(ErrorKind::NotConcatenable, "first ribbon does not end where the second starts");
    auto ea = a.edges();
    for (int e : b.edges())
        if (ea.count(e)) fail(ErrorKind::CrossingUnsupported, "ribbons share edge " + std::to_string(e));
    RibbonOperator r;
    r.G = a.G, r.lat = a.lat, r.codec = a.codec;
    r.strip.triangles = a.strip.triangles;
    r.strip.triangles.insert(r.strip.triangles.end(), b.strip.triangles.begin(), b.strip.triangles.end());
    r.strip.start = a.strip.start, r.strip.end = b.strip.end;
    r.coefficients[{h, g}] = 1.0;
    auto n = std::make_shared<RibbonNode>();
    n->a = a.tree, n->b = b.tree;
    r.tree = n;
    return r;
}

// Left-nested composition along a strip with the given coefficient table.
inline RibbonOperator ribbon_operator(const FiniteGroup& G, const HoneycombLattice& lat, const RibbonStrip& strip,
                                      std::map<std::pair<int, int>, cplx> coefficients) {
    if (strip.triangles.empty()) fail(ErrorKind::InvalidGeometry, "empty strip");
    RibbonOperator r = elementary_ribbon(G, lat, strip.triangles[0], 0, 0);
    for (std::size_t k = 1; k < strip.triangles.size(); ++k)
        r = compose(r, elementary_ribbon(G, lat, strip.triangles[k], 0, 0), 0, 0);
    r.coefficients = std::move(coefficients);
    return r;
}

inline StateVector apply_ribbon(const RibbonOperator& W, const StateVector& s) { return apply(W, s); }

// <S'|B_g(p)|S> from the closed dual ribbon around p against
// (1/|G|) sum_j conj(chi_j(g)) <S'|B_p^j|S>, maximized over g and pairs.
inline PairDeviation closed_ribbon_identity_check(const SpinBasis& B, const FSymbolTable& T, const HoneycombLattice& lat,
                                                  int p, int trials, std::uint64_t seed = 11) {
    const auto& R = B.network().reps();
    const auto& G = R.group();
    const auto& fix = B.gauge();
    auto loop = ribbon_operator(G, lat, plaquette_loop(lat, p), {{{0, 0}, 1.0}});
    const int anchor = lat.plaquettes[p].base;
    auto cols = admissible_colorings(lat, R);
    Codec c(T.n, lat.ne());
    Codec gc = group_codec(G, lat);
    std::map<std::vector<int>, std::vector<StateVector>> cache;
    PairDeviation r;
    std::vector<int> g(lat.ne());
    std::vector<RibbonTerm> buf;
    for (const auto& [S2, S] : sample_pairs(T, lat, cols, p, trials, seed)) {
        auto it = cache.find(S);
        if (it == cache.end()) {
            std::vector<StateVector> img;
            for (int s = 0; s < R.count(); ++s) img.push_back(apply_Bp_s(T, lat, s, p, basis_state(Basis::Spin, c, c.encode(S))));
            it = cache.emplace(S, std::move(img)).first;
        }
        // Kitaev side for every g: states are gauge invariant, so average B_g over
        // transformations at the base vertex
        std::vector<cplx> kt(G.order, 0.0);
        const auto& fa = B.fixed_amplitudes(S2);
        const auto& fb = B.fixed_amplitudes(S);
        for (Key x = 0; x < fix.configs; ++x) {
            if (fa[x] == 0.0 || fb[x] == 0.0) continue;
            fix.coloring(x, g);
            Key k = gc.encode(g);
            cplx w = std::conj(fa[x]) * fb[x] * fix.weight / static_cast<double>(G.order);
            for (int t = 0; t < G.order; ++t) {
                loop.act_all(*loop.tree, 0, GaugeOp{&G, &lat, gc, t, anchor}.act(k), buf);
                for (const auto& term : buf) kt[term.g] += w * term.coef;
            }
        }
        bool nonzero = false;
        for (int h = 0; h < G.order; ++h) {
            cplx sn = 0;
            for (int s = 0; s < R.count(); ++s) sn += std::conj(R.irrep(s).character[h]) * it->second[s].get(c.encode(S2));
            sn /= static_cast<double>(G.order);
            r.max_dev = std::max(r.max_dev, std::abs(sn - kt[h]));
            nonzero = nonzero || std::abs(kt[h]) > 1e-12;
        }
        ++r.pairs;
        r.nonzero_pairs += nonzero;
    }
    return r;
}

struct LocalityReport {
    ExcitationReport found;
    std::vector<int> end_vertices, end_plaquettes;
    bool ok = false;    // violations only at end sites
    bool exact = false; // and every distinct end site is violated
};

// Expected for Z2: a strip whose ends differ in vertex and plaquette leaves
// exactly those two vertices and two plaquettes excited.
inline LocalityReport endpoint_locality_check(const RibbonOperator& W, const StateVector& ground) {
    auto out = apply(W, ground);
    if (out.norm2() < 1e-20) fail(ErrorKind::ZeroResult, "ribbon annihilates the state");
    out.normalize();
    LocalityReport r;
    r.found = excitation_sites(*W.G, *W.lat, out);
    const auto& s = W.strip;
    r.end_vertices = {s.start.vertex};
    if (s.end.vertex != s.start.vertex) r.end_vertices.push_back(s.end.vertex);
    r.end_plaquettes = {s.start.plaquette};
    if (s.end.plaquette != s.start.plaquette) r.end_plaquettes.push_back(s.end.plaquette);
    auto within = [](const std::vector<int>& xs, const std::vector<int>& allowed) {
        for (int x : xs)
            if (std::find(allowed.begin(), allowed.end(), x) == allowed.end()) return false;
        return true;
    };
    r.ok = within(r.found.vertices, r.end_vertices) && within(r.found.plaquettes, r.end_plaquettes);
    auto sorted = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    r.exact = r.ok && (s.start.vertex == s.end.vertex || sorted(r.found.vertices) == sorted(r.end_vertices)) &&
              (s.start.plaquette == s.end.plaquette || sorted(r.found.plaquettes) == sorted(r.end_plaquettes));
    return r;
}

// Random walk over sites that never reuses an edge; open and with distinct end
// vertices and plaquettes.
inline RibbonStrip random_open_strip(const HoneycombLattice& lat, int steps, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::uniform_int_distribution<int> pp(0, lat.np() - 1), six(0, 5);
        int p = pp(rng);
        RibbonStrip r;
        r.start = {p, lat.plaquettes[p].walk[six(rng)].vertex};
        Site cur = r.start;
        std::set<int> used;
        for (int k = 0; k < steps; ++k) {
            std::vector<Triangle> moves;
            for (int e : lat.inc[cur.vertex]) {
                if (used.count(e)) continue;
                const auto& f = lat.faces_of_edge[e];
                if (f[0] != cur.plaquette && f[1] != cur.plaquette) continue;
                moves.push_back({TriangleKind::Dual, e, cur, {cur.plaquette, lat.other(e, cur.vertex)}});
                moves.push_back({TriangleKind::Direct, e, cur, {f[0] == cur.plaquette ? f[1] : f[0], cur.vertex}});
            }
            if (moves.empty()) break;
            const Triangle t = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
            used.insert(t.edge);
            r.triangles.push_back(t);
            cur = t.to;
        }
        r.end = cur;
        if (r.triangles.size() < 2 || r.start.vertex == r.end.vertex || r.start.plaquette == r.end.plaquette) continue;
        return r;
    }
    fail(ErrorKind::InvalidGeometry, "could not draw an open strip");
}

} // namespace topoforge
