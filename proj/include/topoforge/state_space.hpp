#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "kitaev.hpp"
#include "rep_theory.hpp"

namespace topoforge {

inline Codec spin_codec(int labels, const Graph& g) { return Codec(labels, g.ne()); }

// Labels seen from v: j for edges pointing into v, j* for edges leaving it.
inline std::array<int, 3> vertex_labels(const Graph& gr, const std::vector<int>& dual, const std::vector<int>& j, int v) {
    std::array<int, 3> out{};
    for (int k = 0; k < 3; ++k) {
        int e = gr.inc[v][k];
        out[k] = gr.points_into(e, v) ? j[e] : dual[j[e]];
    }
    return out;
}

inline bool vertex_admissible(const Graph& gr, const RepTheory& R, const std::vector<int>& j, int v) {
    auto l = vertex_labels(gr, R.duals(), j, v);
    return R.fusion_coefficient(l[0], l[1], l[2]) == 1;
}

inline bool coloring_admissible(const Graph& gr, const RepTheory& R, const std::vector<int>& j) {
    for (int v = 0; v < gr.nv; ++v)
        if (!vertex_admissible(gr, R, j, v)) return false;
    return true;
}

// All admissible colorings in lexicographic order (edge 0 most significant).
inline std::vector<std::vector<int>> admissible_colorings(const Graph& gr, const RepTheory& R) {
    const int n = R.count(), E = gr.ne();
    // a vertex can be checked once its last incident edge is assigned
    std::vector<std::vector<int>> ready(E);
    for (int v = 0; v < gr.nv; ++v) ready[*std::max_element(gr.inc[v].begin(), gr.inc[v].end())].push_back(v);
    std::vector<std::vector<int>> out;
    std::vector<int> j(E, 0);
    std::function<void(int)> rec = [&](int e) {
        if (e == E) {
            out.push_back(j);
            return;
        }
        for (int x = 0; x < n; ++x) {
            j[e] = x;
            bool ok = true;
            for (int v : ready[e]) ok = ok && vertex_admissible(gr, R, j, v);
            if (ok) rec(e + 1);
        }
        j[e] = 0;
    };
    rec(0);
    return out;
}

// Gauge-invariant sums: sum over G^E of f equals |G|^(V-1) times the sum with
// tree edges set to the identity.
struct GaugeFixing {
    SpanningTree tree;
    std::vector<int> free_edges;
    Key configs = 1;
    double weight = 1; // |G|^(V-1)
    int order = 1;

    GaugeFixing(const Graph& gr, const FiniteGroup& G) : tree(spanning_tree(gr)), order(G.order) {
        for (int e = 0; e < gr.ne(); ++e)
            if (!tree.tree[e]) free_edges.push_back(e);
        for (std::size_t i = 0; i < free_edges.size(); ++i) configs *= G.order;
        weight = std::pow(static_cast<double>(G.order), gr.nv - 1);
    }
    // coloring for config index x
    void coloring(Key x, std::vector<int>& g) const {
        std::fill(g.begin(), g.end(), 0);
        for (int e : free_edges) {
            g[e] = static_cast<int>(x % order);
            x /= order;
        }
    }
};

// Evaluates the spin-network function Psi_S(g) = contraction of D^{j_e}(g_e)_{ab}
// (a at the target, b at the source) with vertex tensors, vertex by vertex.
class SpinNetwork {
public:
    SpinNetwork(const Graph& gr, const RepTheory& R) : gr_(&gr), R_(&R), tree_(spanning_tree(gr)) {}

    const Graph& graph() const { return *gr_; }
    const RepTheory& reps() const { return *R_; }

    cplx amplitude(const std::vector<int>& j, const std::vector<int>& g) const {
        const Graph& gr = *gr_;
        std::vector<int> legs;  // open edges
        std::vector<int> dims;
        std::vector<cplx> data{1.0};
        std::vector<int> nlegs, ndims;
        std::vector<cplx> ndata;
        for (int v : tree_.order) {
            auto lab = vertex_labels(gr, R_->duals(), j, v);
            if (R_->fusion_coefficient(lab[0], lab[1], lab[2]) != 1) return 0.0;
            const Tensor3& T = R_->vertex_tensor(lab[0], lab[1], lab[2]);
            std::array<int, 3> pos{-1, -1, -1}; // frontier position of closing legs
            for (int k = 0; k < 3; ++k)
                for (std::size_t q = 0; q < legs.size(); ++q)
                    if (legs[q] == gr.inc[v][k]) pos[k] = static_cast<int>(q);
            nlegs.clear(), ndims.clear();
            std::vector<int> keep; // old positions that survive
            for (std::size_t q = 0; q < legs.size(); ++q)
                if (legs[q] != gr.inc[v][0] && legs[q] != gr.inc[v][1] && legs[q] != gr.inc[v][2]) {
                    keep.push_back(static_cast<int>(q));
                    nlegs.push_back(legs[q]);
                    ndims.push_back(dims[q]);
                }
            std::vector<int> opening;
            for (int k = 0; k < 3; ++k)
                if (pos[k] < 0) {
                    opening.push_back(k);
                    nlegs.push_back(gr.inc[v][k]);
                    ndims.push_back(T.dims[k]);
                }
            std::size_t nsize = 1;
            for (int d : ndims) nsize *= d;
            ndata.assign(nsize, 0.0);
            std::vector<int> idx(legs.size());
            for (std::size_t x = 0; x < data.size(); ++x) {
                if (data[x] == 0.0) continue;
                std::size_t r = x;
                for (int q = static_cast<int>(legs.size()) - 1; q >= 0; --q) idx[q] = static_cast<int>(r % dims[q]), r /= dims[q];
                std::size_t base = 0;
                for (int q : keep) base = base * dims[q] + idx[q];
                for (int a = 0; a < T.dims[0]; ++a) {
                    if (pos[0] >= 0 && idx[pos[0]] != a) continue;
                    for (int b = 0; b < T.dims[1]; ++b) {
                        if (pos[1] >= 0 && idx[pos[1]] != b) continue;
                        for (int c = 0; c < T.dims[2]; ++c) {
                            if (pos[2] >= 0 && idx[pos[2]] != c) continue;
                            cplx t = T.at(a, b, c);
                            if (t == 0.0) continue;
                            std::array<int, 3> vi{a, b, c};
                            accumulate_open(v, j, g, opening, vi, 0, base, data[x] * t, ndata);
                        }
                    }
                }
            }
            legs.swap(nlegs), dims.swap(ndims), data.swap(ndata);
        }
        return data[0];
    }

    // sum_g |Psi_S(g)|^2 by gauge fixing
    double norm2(const std::vector<int>& j, const GaugeFixing& fix) const {
        std::vector<int> g(gr_->ne());
        double s = 0;
        for (Key x = 0; x < fix.configs; ++x) {
            fix.coloring(x, g);
            s += std::norm(amplitude(j, g));
        }
        return s * fix.weight;
    }

    // |G|^E / prod_e d_{j_e} for unit-norm vertex tensors
    double analytic_norm2(const std::vector<int>& j) const {
        double s = 1;
        for (int x : j) s *= static_cast<double>(R_->group().order) / R_->dim(x);
        return s;
    }

private:
    const Graph* gr_;
    const RepTheory* R_;
    SpanningTree tree_;

    void accumulate_open(int v, const std::vector<int>& j, const std::vector<int>& g, const std::vector<int>& opening,
                         const std::array<int, 3>& vi, std::size_t q, std::size_t flat, cplx w, std::vector<cplx>& out) const {
        if (q == opening.size()) {
            out[flat] += w;
            return;
        }
        int k = opening[q], e = gr_->inc[v][k];
        const Irrep& ir = R_->irrep(j[e]);
        for (int f = 0; f < ir.dim; ++f) {
            cplx d = gr_->points_into(e, v) ? ir.at(g[e], vi[k], f) : ir.at(g[e], f, vi[k]);
            if (d == 0.0) continue;
            accumulate_open(v, j, g, opening, vi, q + 1, flat * ir.dim + f, w * d, out);
        }
    }
};

// Normalized spin-network amplitudes with the norm cached per coloring.
class SpinBasis {
public:
    SpinBasis(const Graph& gr, const RepTheory& R) : net_(gr, R), fix_(gr, R.group()) {}

    const SpinNetwork& network() const { return net_; }
    const GaugeFixing& gauge() const { return fix_; }

    double norm(const std::vector<int>& j) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = norms_.find(j);
        if (it != norms_.end()) return it->second;
        double n = std::sqrt(net_.norm2(j, fix_));
        norms_.emplace(j, n);
        return n;
    }

    // normalized amplitudes on every gauge-fixed configuration, cached
    const std::vector<cplx>& fixed_amplitudes(const std::vector<int>& j) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = amps_.find(j);
            if (it != amps_.end()) return *it->second;
        }
        auto out = std::make_shared<std::vector<cplx>>(fix_.configs);
        std::vector<int> g(net_.graph().ne());
        double n = norm(j);
        for (Key x = 0; x < fix_.configs; ++x) {
            fix_.coloring(x, g);
            (*out)[x] = net_.amplitude(j, g) / n;
        }
        std::lock_guard<std::mutex> lock(mu_);
        return *amps_.emplace(j, std::move(out)).first->second;
    }

    // <S|S'> of normalized states
    cplx overlap(const std::vector<int>& a, const std::vector<int>& b) const {
        const auto& fa = fixed_amplitudes(a);
        const auto& fb = fixed_amplitudes(b);
        cplx s = 0;
        for (Key x = 0; x < fix_.configs; ++x) s += std::conj(fa[x]) * fb[x];
        return s * fix_.weight;
    }

private:
    SpinNetwork net_;
    GaugeFixing fix_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<int>, double> norms_;
    mutable std::map<std::vector<int>, std::shared_ptr<std::vector<cplx>>> amps_;
};

inline cplx fourier_overlap(const SpinBasis& B, const std::vector<int>& j, const std::vector<int>& g) {
    if (!coloring_admissible(B.network().graph(), B.network().reps(), j))
        fail(ErrorKind::NotAdmissible, "spin coloring is not admissible");
    return B.network().amplitude(j, g) / B.norm(j);
}

inline bool gauge_invariant(const FiniteGroup& G, const Graph& gr, const StateVector& s, double tol = 1e-10) {
    for (int v = 0; v < gr.nv; ++v)
        if (distance(apply_electric_A(G, gr, v, s), s) > tol) return false;
    return true;
}

inline StateVector to_spin_basis(const SpinBasis& B, const StateVector& s) {
    const auto& gr = B.network().graph();
    const auto& R = B.network().reps();
    if (s.basis != Basis::Group) fail(ErrorKind::InvalidParameter, "expected a group-basis state");
    if (!gauge_invariant(R.group(), gr, s)) fail(ErrorKind::NotGaugeInvariant, "state is not gauge invariant");
    StateVector out(Basis::Spin, spin_codec(R.count(), gr));
    std::vector<int> g;
    for (const auto& j : admissible_colorings(gr, R)) {
        double n = B.norm(j);
        cplx c = 0;
        for (const auto& [k, v] : s.amp) {
            s.codec.decode(k, g);
            c += std::conj(B.network().amplitude(j, g)) * v;
        }
        out.add(out.codec.encode(j), c / n);
    }
    return out.prune(1e-13);
}

inline StateVector to_group_basis(const SpinBasis& B, const StateVector& s, std::uint64_t budget = std::uint64_t(1) << 21) {
    const auto& gr = B.network().graph();
    const auto& R = B.network().reps();
    if (s.basis != Basis::Spin) fail(ErrorKind::InvalidParameter, "expected a spin-network state");
    Codec c = group_codec(R.group(), gr);
    if (c.size() > budget) fail(ErrorKind::BudgetExceeded, "group basis exceeds budget");
    StateVector out(Basis::Group, c);
    std::vector<int> g, j;
    for (const auto& [k, a] : s.amp) {
        s.codec.decode(k, j);
        double n = B.norm(j);
        for (Key x = 0; x < c.size(); ++x) {
            c.decode(x, g);
            cplx v = B.network().amplitude(j, g);
            if (v != 0.0) out.add(x, a * v / n);
        }
    }
    return out.prune(1e-13);
}

} // namespace topoforge
