#pragma once

#include <deque>
#include <functional>
#include <random>
#include <unordered_set>
#include <vector>

#include "group.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "state_vector.hpp"

namespace topoforge {

inline Codec group_codec(const FiniteGroup& G, const Graph& g) { return Codec(G.order, g.ne()); }

// Oriented product around p, counterclockwise from the base site. Later slots
// multiply on the left; reversed slots contribute the inverse.
inline int holonomy(const HoneycombLattice& lat, const FiniteGroup& G, int p, const Codec& c, Key k) {
    int h = 0;
    for (const auto& s : lat.plaquettes[p].walk) {
        int x = c.digit(k, s.edge);
        h = G.mul(s.forward ? x : G.inverse(x), h);
    }
    return h;
}

// L^g(i,v): g_i -> g g_i if i points into v, g_i -> g_i g^-1 otherwise.
inline int left_action(const FiniteGroup& G, const Graph& gr, int g, int e, int v, int x) {
    return gr.points_into(e, v) ? G.mul(g, x) : G.mul(x, G.inverse(g));
}

struct LOp {
    const FiniteGroup* G;
    const Graph* gr;
    Codec codec;
    int g, edge, vertex;
    template <class Emit>
    void terms(Key k, Emit emit) const {
        emit(codec.with(k, edge, left_action(*G, *gr, g, edge, vertex, codec.digit(k, edge))), 1.0);
    }
};

// A_g(v): product of L^g over the edges at v.
struct GaugeOp {
    const FiniteGroup* G;
    const Graph* gr;
    Codec codec;
    int g, vertex;
    Key act(Key k) const {
        for (int e : gr->inc[vertex]) k = codec.with(k, e, left_action(*G, *gr, g, e, vertex, codec.digit(k, e)));
        return k;
    }
    template <class Emit>
    void terms(Key k, Emit emit) const { emit(act(k), 1.0); }
};

struct ElectricOp {
    const FiniteGroup* G;
    const Graph* gr;
    Codec codec;
    int vertex;
    template <class Emit>
    void terms(Key k, Emit emit) const {
        const double w = 1.0 / G->order;
        for (int g = 0; g < G->order; ++g) emit(GaugeOp{G, gr, codec, g, vertex}.act(k), w);
    }
};

// B_g(p): keeps colorings whose holonomy at the base site equals g.
struct MagneticOp {
    const FiniteGroup* G;
    const HoneycombLattice* lat;
    Codec codec;
    int g, plaquette;
    template <class Emit>
    void terms(Key k, Emit emit) const {
        if (holonomy(*lat, *G, plaquette, codec, k) == g) emit(k, 1.0);
    }
};

inline void check_incident(const Graph& gr, int e, int v) {
    if (e < 0 || e >= gr.ne() || v < 0 || v >= gr.nv || !gr.incident(e, v))
        fail(ErrorKind::NotIncident, "edge " + std::to_string(e) + " does not touch vertex " + std::to_string(v));
}

inline StateVector apply_L(const FiniteGroup& G, const Graph& gr, int g, int e, int v, const StateVector& s) {
    check_incident(gr, e, v);
    return apply(LOp{&G, &gr, s.codec, g, e, v}, s);
}

inline StateVector apply_gauge(const FiniteGroup& G, const Graph& gr, int g, int v, const StateVector& s) {
    return apply(GaugeOp{&G, &gr, s.codec, g, v}, s);
}

inline StateVector apply_electric_A(const FiniteGroup& G, const Graph& gr, int v, const StateVector& s) {
    return apply(ElectricOp{&G, &gr, s.codec, v}, s);
}

inline StateVector apply_magnetic_B(const FiniteGroup& G, const HoneycombLattice& lat, int g, int p, const StateVector& s) {
    return apply(MagneticOp{&G, &lat, s.codec, g, p}, s);
}

// prod_v A(v) prod_p B_1(p)
inline StateVector apply_ground_projector(const FiniteGroup& G, const HoneycombLattice& lat, StateVector s) {
    for (int p = 0; p < lat.np(); ++p) s = apply_magnetic_B(G, lat, 0, p, s);
    for (int v = 0; v < lat.nv; ++v) s = apply_electric_A(G, lat, v, s);
    return s;
}

// Breadth-first spanning tree from vertex 0; tree[e] marks tree edges.
struct SpanningTree {
    std::vector<int> order;  // vertices in BFS order
    std::vector<int> parent_edge; // edge to parent, -1 at the root
    std::vector<char> tree;
};

inline SpanningTree spanning_tree(const Graph& gr) {
    SpanningTree t;
    t.parent_edge.assign(gr.nv, -2);
    t.tree.assign(gr.ne(), 0);
    t.parent_edge[0] = -1;
    std::deque<int> q{0};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        t.order.push_back(v);
        for (int e : gr.inc[v]) {
            int w = gr.other(e, v);
            if (t.parent_edge[w] != -2) continue;
            t.parent_edge[w] = e;
            t.tree[e] = 1;
            q.push_back(w);
        }
    }
    if (static_cast<int>(t.order.size()) != gr.nv) fail(ErrorKind::InvalidParameter, "graph is not connected");
    return t;
}

// Number of gauge transformations fixing coloring k. A choice at the root
// propagates along the tree; the remaining edges are checked.
inline int stabilizer_size(const FiniteGroup& G, const Graph& gr, const SpanningTree& t, const Codec& c, Key k,
                           std::vector<int>& kv) {
    int count = 0;
    kv.assign(gr.nv, 0);
    for (int root = 0; root < G.order; ++root) {
        kv[t.order[0]] = root;
        for (std::size_t i = 1; i < t.order.size(); ++i) {
            int w = t.order[i], e = t.parent_edge[w];
            int u = gr.other(e, w), x = c.digit(k, e);
            // fixed iff k_tgt = x k_src x^-1
            kv[w] = gr.tgt(e) == w ? G.mul(G.mul(x, kv[u]), G.inverse(x)) : G.mul(G.mul(G.inverse(x), kv[u]), x);
        }
        bool ok = true;
        for (int e = 0; e < gr.ne() && ok; ++e) {
            if (t.tree[e]) continue;
            int x = c.digit(k, e);
            ok = kv[gr.tgt(e)] == G.mul(G.mul(x, kv[gr.src(e)]), G.inverse(x));
        }
        count += ok;
    }
    return count;
}

inline bool is_flat(const FiniteGroup& G, const HoneycombLattice& lat, const Codec& c, Key k) {
    for (int p = 0; p < lat.np(); ++p)
        if (holonomy(lat, G, p, c, k) != 0) return false;
    return true;
}

struct GroundDimOptions {
    std::uint64_t budget = std::uint64_t(1) << 21;
    int threads = 0;
    int chunks = 64;
    bool randomized = false;
    std::uint64_t seed = 12345;
    int patience = 400;              // consecutive flat samples without a new direction
    std::uint64_t max_samples = 50'000'000;
};

struct GroundDimResult {
    long dimension = 0;
    double trace = 0;          // exact mode: float trace of P
    bool randomized = false;
    std::uint64_t samples = 0; // randomized mode: basis samples drawn
};

// Smallest key in the gauge orbit of k among the colorings trivial on the tree.
// Fixing the root element r leaves one transformation making every tree edge the
// identity; the minimum over r removes the leftover global conjugation.
inline Key orbit_representative(const FiniteGroup& G, const Graph& gr, const SpanningTree& t, const Codec& c, Key k,
                                std::vector<int>& kv, std::vector<int>& g) {
    c.decode(k, g);
    Key best = ~Key(0);
    kv.assign(gr.nv, 0);
    for (int root = 0; root < G.order; ++root) {
        kv[t.order[0]] = root;
        for (std::size_t i = 1; i < t.order.size(); ++i) {
            int w = t.order[i], e = t.parent_edge[w], u = gr.other(e, w);
            // edge becomes k_tgt g k_src^-1
            kv[w] = gr.tgt(e) == w ? G.mul(kv[u], G.inverse(g[e])) : G.mul(kv[u], g[e]);
        }
        Key y = 0;
        for (int e = gr.ne() - 1; e >= 0; --e)
            y = y * G.order + static_cast<Key>(G.mul(G.mul(kv[gr.tgt(e)], g[e]), G.inverse(kv[gr.src(e)])));
        best = std::min(best, y);
    }
    return best;
}

// Exact: tr P = sum over flat colorings of |Stab|/|G|^V, a sum over the full basis.
// Randomized: sample basis colorings x; P|x> is the uniform superposition over the
// gauge orbit of x when x is flat, so x adds a new direction exactly when its
// orbit has not been seen. Orbits are compared through orbit_representative.
inline GroundDimResult ground_space_dimension(const HoneycombLattice& lat, const FiniteGroup& G,
                                              const GroundDimOptions& opt = {}) {
    Codec c = group_codec(G, lat);
    SpanningTree t = spanning_tree(lat);
    GroundDimResult r;
    if (!opt.randomized) {
        if (c.size() > opt.budget)
            fail(ErrorKind::BudgetExceeded, "|G|^E = " + std::to_string(c.size()) + " exceeds budget " +
                                                std::to_string(opt.budget));
        std::uint64_t total = parallel_reduce<std::uint64_t>(
            0, c.size(), resolve_threads(opt.threads), opt.chunks, 0,
            [&](std::uint64_t lo, std::uint64_t hi) {
                std::uint64_t s = 0;
                std::vector<int> kv;
                for (Key k = lo; k < hi; ++k)
                    if (is_flat(G, lat, c, k)) s += stabilizer_size(G, lat, t, c, k, kv);
                return s;
            },
            [](std::uint64_t a, std::uint64_t b) { return a + b; });
        r.trace = static_cast<double>(total) / std::pow(static_cast<double>(G.order), lat.nv);
        r.dimension = std::lround(r.trace);
        if (std::abs(r.trace - r.dimension) > 1e-6) fail(ErrorKind::NumericalInconsistency, "trace is not an integer");
        return r;
    }
    r.randomized = true;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<Key> pick(0, c.size() - 1);
    std::unordered_set<Key> found; // canonical representatives of the orbits seen
    std::vector<int> kv(lat.nv), g;
    int quiet = 0;
    while (quiet < opt.patience) {
        if (r.samples++ >= opt.max_samples) fail(ErrorKind::BudgetExceeded, "randomized rank did not converge");
        Key k = pick(rng);
        if (!is_flat(G, lat, c, k)) continue;
        if (found.insert(orbit_representative(G, lat, t, c, k, kv, g)).second) {
            ++r.dimension;
            quiet = 0;
        } else {
            ++quiet;
        }
    }
    r.trace = static_cast<double>(r.dimension);
    return r;
}

struct AlgebraReport {
    double commutator = 0;   // max |[X, Y] x| over operator pairs
    double idempotence = 0;  // max |X X x - X x|
    double adjointness = 0;  // max |<y, X x> - <X y, x>|
    int operators = 0;
};

// Electric and magnetic constraints checked on random dense vectors.
inline AlgebraReport check_constraint_algebra(const FiniteGroup& G, const HoneycombLattice& lat, int vectors = 2,
                                              std::uint64_t seed = 5, std::uint64_t budget = std::uint64_t(1) << 21) {
    Codec c = group_codec(G, lat);
    if (c.size() > budget) fail(ErrorKind::BudgetExceeded, "dense vectors exceed budget");
    std::vector<std::function<DenseVector(const DenseVector&)>> ops;
    for (int v = 0; v < lat.nv; ++v)
        ops.push_back([&, v](const DenseVector& x) { return topoforge::apply(ElectricOp{&G, &lat, c, v}, x); });
    for (int p = 0; p < lat.np(); ++p)
        ops.push_back([&, p](const DenseVector& x) { return topoforge::apply(MagneticOp{&G, &lat, c, 0, p}, x); });
    AlgebraReport r;
    r.operators = static_cast<int>(ops.size());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    auto random_vector = [&] {
        DenseVector x(c.size());
        double n = 0;
        for (auto& a : x) a = cplx(nd(rng), nd(rng)), n += std::norm(a);
        for (auto& a : x) a /= std::sqrt(n);
        return x;
    };
    auto dot = [](const DenseVector& a, const DenseVector& b) {
        cplx s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
        return s;
    };
    for (int t = 0; t < vectors; ++t) {
        DenseVector x = random_vector(), y = random_vector();
        std::vector<DenseVector> once;
        for (auto& op : ops) once.push_back(op(x));
        for (std::size_t a = 0; a < ops.size(); ++a) {
            r.idempotence = std::max(r.idempotence, max_abs_diff(ops[a](once[a]), once[a]));
            r.adjointness = std::max(r.adjointness, std::abs(dot(y, once[a]) - dot(ops[a](y), x)));
            for (std::size_t b = a + 1; b < ops.size(); ++b)
                r.commutator = std::max(r.commutator, max_abs_diff(ops[a](once[b]), ops[b](once[a])));
        }
    }
    return r;
}

struct ExcitationReport {
    std::vector<int> vertices;
    std::vector<int> plaquettes;
    bool empty() const { return vertices.empty() && plaquettes.empty(); }
};

inline ExcitationReport excitation_sites(const FiniteGroup& G, const HoneycombLattice& lat, const StateVector& s) {
    double n2 = s.norm2();
    if (n2 < 1e-300) fail(ErrorKind::ZeroState, "state has zero norm");
    ExcitationReport r;
    for (int v = 0; v < lat.nv; ++v)
        if (std::real(inner(s, apply_electric_A(G, lat, v, s))) / n2 < 1 - 1e-9) r.vertices.push_back(v);
    for (int p = 0; p < lat.np(); ++p)
        if (std::real(inner(s, apply_magnetic_B(G, lat, 0, p, s))) / n2 < 1 - 1e-9) r.plaquettes.push_back(p);
    return r;
}

// Ground state grown from the all-identity coloring.
inline StateVector trivial_ground_state(const FiniteGroup& G, const HoneycombLattice& lat) {
    Codec c = group_codec(G, lat);
    return apply_ground_projector(G, lat, basis_state(Basis::Group, c, 0)).normalize();
}

} // namespace topoforge
