#pragma once

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <tuple>
#include <vector>

#include "state_space.hpp"

namespace topoforge {

inline bool check_vertex(const Graph& gr, const FSymbolTable& T, const std::vector<int>& j, int v) {
    auto l = vertex_labels(gr, T.dual, j, v);
    return T.fusion(l[0], l[1], l[2]) == 1;
}

namespace detail {

// Per-vertex data of a plaquette: hatted outer label and slot indices.
struct PlaquetteFrame {
    std::array<int, 6> outer{};  // b-hat at v_k
    std::array<int, 6> inner{};  // hatted inner labels along the walk
};

inline PlaquetteFrame plaquette_frame(const HoneycombLattice& lat, const FSymbolTable& T, int p, const std::vector<int>& col) {
    PlaquetteFrame f;
    const auto& w = lat.plaquettes[p].walk;
    for (int k = 0; k < 6; ++k) {
        int v = w[k].vertex;
        int prev = w[(k + 5) % 6].edge;
        int outer = -1;
        for (int e : lat.inc[v])
            if (e != w[k].edge && e != prev) outer = e;
        f.outer[k] = lat.points_into(outer, v) ? col[outer] : T.dual[col[outer]];
        f.inner[k] = w[k].forward ? col[w[k].edge] : T.dual[col[w[k].edge]];
    }
    return f;
}

} // namespace detail

// B_p^s on spin-network states. Vertex k of the walk contributes
// F^{b g* h}_{s* h' g'*} sqrt(d_h / d_g'), g the outgoing and h the incoming
// inner label, all hatted along the counterclockwise walk.
inline StateVector apply_Bp_s(const FSymbolTable& T, const HoneycombLattice& lat, int s, int p, const StateVector& in) {
    if (in.basis != Basis::Spin) fail(ErrorKind::InvalidParameter, "B_p^s acts on spin-network states");
    const int n = T.n;
    const auto& du = T.dual;
    const auto& w = lat.plaquettes[p].walk;
    StateVector out(Basis::Spin, in.codec);
    std::vector<int> col;
    std::array<int, 6> nh{};
    for (const auto& [key, amp] : in.amp) {
        in.codec.decode(key, col);
        auto fr = detail::plaquette_frame(lat, T, p, col);
        auto factor = [&](int k) -> cplx {
            int g = fr.inner[k], h = fr.inner[(k + 5) % 6];
            int g2 = nh[k], h2 = nh[(k + 5) % 6];
            cplx f = T(fr.outer[k], du[g], h, du[s], h2, du[g2]);
            if (f == 0.0) return 0.0;
            return f * std::sqrt(static_cast<double>(T.dim[h]) / T.dim[g2]);
        };
        std::function<void(int, cplx)> rec = [&](int k, cplx a) {
            if (k == 6) {
                a *= factor(0);
                if (a == 0.0) return;
                Key out_key = key;
                for (int q = 0; q < 6; ++q) out_key = in.codec.with(out_key, w[q].edge, w[q].forward ? nh[q] : du[nh[q]]);
                out.add(out_key, a * amp);
                return;
            }
            for (int x = 0; x < n; ++x) {
                nh[k] = x;
                cplx b = k == 0 ? a : a * factor(k);
                if (b != 0.0) rec(k + 1, b);
            }
        };
        rec(0, 1.0);
    }
    return out.prune();
}

// B_p = (1/d) sum_s d_s B_p^s with d = sum_s d_s^2
inline StateVector apply_Bp(const FSymbolTable& T, const HoneycombLattice& lat, int p, const StateVector& in) {
    StateVector out(Basis::Spin, in.codec);
    for (int s = 0; s < T.n; ++s) out = axpy(T.dim[s] / T.d_total, apply_Bp_s(T, lat, s, p, in), std::move(out));
    return out.prune();
}

// Plaquettes applied in the given order.
inline StateVector apply_Bp_product(const FSymbolTable& T, const HoneycombLattice& lat, const std::vector<int>& order,
                                    StateVector s) {
    for (int p : order) s = apply_Bp(T, lat, p, s);
    return s;
}

// Group-basis matrix element <S'|W|S> for a diagonal W, evaluated by gauge fixing.
// W need not be gauge invariant: it is averaged over transformations at `anchor`.
template <class Diag>
cplx kitaev_matrix_element(const SpinBasis& B, const std::vector<int>& out, const std::vector<int>& in, int anchor, Diag w) {
    const auto& gr = B.network().graph();
    const auto& G = B.network().reps().group();
    const auto& fix = B.gauge();
    Codec c = group_codec(G, gr);
    const auto& fa = B.fixed_amplitudes(out);
    const auto& fb = B.fixed_amplitudes(in);
    std::vector<int> g(gr.ne());
    cplx s = 0;
    for (Key x = 0; x < fix.configs; ++x) {
        if (fa[x] == 0.0 || fb[x] == 0.0) continue;
        fix.coloring(x, g);
        Key k = c.encode(g);
        double avg = 0;
        if (anchor < 0) {
            avg = w(k);
        } else {
            for (int h = 0; h < G.order; ++h) avg += w(GaugeOp{&G, &gr, c, h, anchor}.act(k));
            avg /= G.order;
        }
        s += std::conj(fa[x]) * fb[x] * avg;
    }
    return s * fix.weight;
}

struct PairDeviation {
    double max_dev = 0;
    int pairs = 0;
    int nonzero_pairs = 0;
};

// Pairs (S', S): S' runs over the support of B_p|S> plus `extra` random colorings.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> sample_pairs(
    const FSymbolTable& T, const HoneycombLattice& lat, const std::vector<std::vector<int>>& cols, int p, int trials,
    std::uint64_t seed) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> pairs;
    Codec c(T.n, lat.ne());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cols.size() - 1);
    const bool exhaustive = trials <= 0;
    std::size_t nin = exhaustive ? cols.size() : static_cast<std::size_t>(trials);
    for (std::size_t t = 0; t < nin; ++t) {
        const auto& S = exhaustive ? cols[t] : cols[pick(rng)];
        if (exhaustive) {
            for (const auto& S2 : cols) pairs.push_back({S2, S});
            continue;
        }
        auto img = apply_Bp(T, lat, p, basis_state(Basis::Spin, c, c.encode(S)));
        for (const auto& [k, v] : img.amp) pairs.push_back({c.decode(k), S});
        pairs.push_back({cols[pick(rng)], S});
    }
    return pairs;
}

// max |<S'|B_1(p)|S>_Kitaev - <S'|B_p|S>_string-net| over sampled pairs;
// trials <= 0 means every admissible pair.
inline PairDeviation duality_compare_Bp(const SpinBasis& B, const FSymbolTable& T, const HoneycombLattice& lat, int p,
                                        int trials, std::uint64_t seed = 7) {
    const auto& G = B.network().reps().group();
    auto cols = admissible_colorings(lat, B.network().reps());
    Codec c(T.n, lat.ne());
    Codec gc = group_codec(G, lat);
    PairDeviation r;
    std::map<std::vector<int>, StateVector> cache;
    for (const auto& [S2, S] : sample_pairs(T, lat, cols, p, trials, seed)) {
        auto it = cache.find(S);
        if (it == cache.end()) it = cache.emplace(S, apply_Bp(T, lat, p, basis_state(Basis::Spin, c, c.encode(S)))).first;
        cplx sn = it->second.get(c.encode(S2));
        cplx kt = kitaev_matrix_element(B, S2, S, -1, [&](Key k) { return holonomy(lat, G, p, gc, k) == 0 ? 1.0 : 0.0; });
        r.max_dev = std::max(r.max_dev, std::abs(sn - kt));
        ++r.pairs;
        r.nonzero_pairs += std::abs(kt) > 1e-12;
    }
    return r;
}

// Caller-supplied matrices Omega^{i'}_{s s' i}, all of size dim x dim.
struct OmegaData {
    int dim = 1;
    std::map<std::array<int, 4>, std::vector<cplx>> m;

    static OmegaData identity(int labels) {
        OmegaData o;
        for (int a = 0; a < labels; ++a)
            for (int b = 0; b < labels; ++b)
                for (int c = 0; c < labels; ++c)
                    for (int d = 0; d < labels; ++d) o.m[{a, b, c, d}] = {1.0};
        return o;
    }
    std::vector<cplx> get(int ip, int s, int s2, int i) const {
        auto it = m.find({ip, s, s2, i});
        if (it == m.end()) return std::vector<cplx>(static_cast<std::size_t>(dim) * dim, 0.0);
        return it->second;
    }
};

// Text form: `dim D`, then lines `omega i' s s' i` followed by D*D `re im` pairs, row-major.
inline OmegaData parse_omega(const std::string& text) {
    OmegaData o;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_dim = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "dim") {
            if (!(ls >> o.dim) || o.dim < 1) fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad dim");
            have_dim = true;
        } else if (word == "omega") {
            std::array<int, 4> idx{};
            for (auto& x : idx)
                if (!(ls >> x)) fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 4 labels");
            std::vector<cplx> mat;
            double re, im;
            while (ls >> re >> im) mat.emplace_back(re, im);
            if (!have_dim || static_cast<int>(mat.size()) != o.dim * o.dim)
                fail(ErrorKind::ShapeMismatch, "line " + std::to_string(lineno) + ": matrix size does not match dim");
            o.m[idx] = std::move(mat);
        } else {
            fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": unknown keyword '" + word + "'");
        }
    }
    return o;
}

struct StringPath {
    std::vector<int> vertices; // v_0 .. v_M; closed when v_M == v_0
    bool closed() const { return vertices.size() > 2 && vertices.front() == vertices.back(); }
};

namespace detail {
inline int edge_between(const Graph& gr, int a, int b) {
    for (int e : gr.inc[a])
        if (gr.other(e, a) == b) return e;
    fail(ErrorKind::NotAPath, "vertices " + std::to_string(a) + " and " + std::to_string(b) + " are not adjacent");
}
} // namespace detail

// String operator along a path: turn-dependent F factors at inner vertices, Omega
// factors on edges where the turning direction changes, and the trace of the
// Omega product (or its (row, col) entry when end_index is given, for open paths).
// Vertex factors carry the same sqrt(d) normalization as apply_Bp_s, so a
// counterclockwise hexagon with one type s reproduces B_p^s.
inline StateVector apply_string_operator(const FSymbolTable& T, const HoneycombLattice& lat, const StringPath& path,
                                         const std::vector<int>& types, const OmegaData& omega, const StateVector& in,
                                         std::optional<std::pair<int, int>> end_index = std::nullopt) {
    if (path.vertices.size() < 2) fail(ErrorKind::NotAPath, "path needs at least two vertices");
    for (const auto& [k, mat] : omega.m)
        if (static_cast<int>(mat.size()) != omega.dim * omega.dim) fail(ErrorKind::ShapeMismatch, "omega matrix size");
    const auto& du = T.dual;
    const bool closed = path.closed();
    const int M = static_cast<int>(path.vertices.size()) - 1;
    std::vector<int> edges(M);
    std::vector<char> fwd(M);
    std::set<int> seen;
    for (int k = 0; k < M; ++k) {
        edges[k] = detail::edge_between(lat, path.vertices[k], path.vertices[k + 1]);
        fwd[k] = lat.src(edges[k]) == path.vertices[k];
        if (!seen.insert(edges[k]).second) fail(ErrorKind::NotAPath, "path reuses an edge");
    }
    // F vertices: index into path.vertices with incoming and outgoing path edge
    struct Turn {
        int vertex, in, out, outer;
        bool left;
    };
    std::vector<Turn> turns;
    for (int k = closed ? 0 : 1; k < M; ++k) {
        int in_e = k == 0 ? M - 1 : k - 1;
        int v = path.vertices[k];
        int po = lat.slot_of(v, edges[k]), pi = lat.slot_of(v, edges[in_e]);
        int outer = lat.inc[v][3 - po - pi];
        turns.push_back({v, in_e, k, outer, (po + 1) % 3 == pi});
    }
    const int D = omega.dim;
    if (end_index && (end_index->first < 0 || end_index->first >= D || end_index->second < 0 || end_index->second >= D))
        fail(ErrorKind::ShapeMismatch, "end index outside omega matrices");
    StateVector out(Basis::Spin, in.codec);
    std::vector<int> col, hat(M), nh(M), st(turns.size());
    for (const auto& [key, amp] : in.amp) {
        in.codec.decode(key, col);
        for (int k = 0; k < M; ++k) hat[k] = fwd[k] ? col[edges[k]] : du[col[edges[k]]];
        std::vector<int> odo(M + turns.size(), 0);
        const int labels = T.n, ntypes = static_cast<int>(types.size());
        while (true) {
            for (int k = 0; k < M; ++k) nh[k] = odo[k];
            for (std::size_t t = 0; t < turns.size(); ++t) st[t] = types[odo[M + t]];
            cplx a = 1.0;
            for (std::size_t t = 0; t < turns.size() && a != 0.0; ++t) {
                const auto& tr = turns[t];
                int b = lat.points_into(tr.outer, tr.vertex) ? col[tr.outer] : du[col[tr.outer]];
                int g = hat[tr.out], h = hat[tr.in], g2 = nh[tr.out], h2 = nh[tr.in];
                // a right turn is a left turn of the reversed path, whose type is s*
                if (tr.left)
                    a *= T(b, du[g], h, du[st[t]], h2, du[g2]) * std::sqrt(static_cast<double>(T.dim[h]) / T.dim[g2]);
                else
                    a *= T(b, h, du[g], st[t], du[g2], h2) * std::sqrt(static_cast<double>(T.dim[g]) / T.dim[h2]);
            }
            if (a != 0.0) {
                // Omega product over consecutive F vertices
                std::vector<cplx> prod(static_cast<std::size_t>(D) * D, 0.0);
                for (int i = 0; i < D; ++i) prod[i * D + i] = 1.0;
                std::size_t nt = turns.size();
                std::size_t links = closed ? nt : (nt ? nt - 1 : 0);
                for (std::size_t t = 0; t < links && a != 0.0; ++t) {
                    const auto& t1 = turns[t];
                    const auto& t2 = turns[(t + 1) % nt];
                    int e = t1.out; // edge between them
                    std::vector<cplx> m(static_cast<std::size_t>(D) * D, 0.0);
                    if (!t1.left && t2.left) {
                        m = omega.get(nh[e], st[t], st[(t + 1) % nt], hat[e]);
                        for (auto& x : m) x *= T.v[hat[e]] * T.v[st[t]] / T.v[nh[e]];
                    } else if (t1.left && !t2.left) {
                        m = omega.get(nh[e], st[t], st[(t + 1) % nt], hat[e]);
                        for (auto& x : m) x = std::conj(x) * T.v[hat[e]] * T.v[st[t]] / T.v[nh[e]];
                    } else if (st[t] == st[(t + 1) % nt]) {
                        for (int i = 0; i < D; ++i) m[i * D + i] = 1.0;
                    }
                    std::vector<cplx> next(static_cast<std::size_t>(D) * D, 0.0);
                    for (int i = 0; i < D; ++i)
                        for (int q = 0; q < D; ++q)
                            for (int r = 0; r < D; ++r) next[i * D + r] += prod[i * D + q] * m[q * D + r];
                    prod.swap(next);
                }
                cplx tr = 0;
                if (end_index) tr = prod[end_index->first * D + end_index->second];
                else
                    for (int i = 0; i < D; ++i) tr += prod[i * D + i];
                a *= tr;
                if (a != 0.0) {
                    Key k2 = key;
                    for (int k = 0; k < M; ++k) k2 = in.codec.with(k2, edges[k], fwd[k] ? nh[k] : du[nh[k]]);
                    out.add(k2, a * amp);
                }
            }
            std::size_t q = 0;
            while (q < odo.size()) {
                int lim = q < static_cast<std::size_t>(M) ? labels : ntypes;
                if (++odo[q] < lim) break;
                odo[q++] = 0;
            }
            if (q == odo.size()) break;
        }
    }
    return out.prune();
}

} // namespace topoforge
