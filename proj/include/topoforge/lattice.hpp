#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace topoforge {

// Trivalent oriented graph. inc[v] lists the three incident edges counterclockwise.
struct Graph {
    int nv = 0;
    std::vector<std::array<int, 2>> edges; // (source, target)
    std::vector<std::array<int, 3>> inc;

    int ne() const { return static_cast<int>(edges.size()); }
    int src(int e) const { return edges[e][0]; }
    int tgt(int e) const { return edges[e][1]; }
    bool points_into(int e, int v) const { return edges[e][1] == v; }
    bool incident(int e, int v) const { return edges[e][0] == v || edges[e][1] == v; }
    int other(int e, int v) const { return edges[e][0] == v ? edges[e][1] : edges[e][0]; }
    // position of e in inc[v], or -1
    int slot_of(int v, int e) const {
        for (int k = 0; k < 3; ++k)
            if (inc[v][k] == e) return k;
        return -1;
    }
};

// One step of a plaquette walk: leave `vertex` along `edge`.
struct Slot {
    int vertex = 0;
    int edge = 0;
    bool forward = true; // edge orientation agrees with the counterclockwise walk
};

struct Plaquette {
    std::array<Slot, 6> walk{};
    int base = 0; // smallest vertex on the boundary; walk starts there
};

struct HoneycombLattice : Graph {
    int L1 = 0, L2 = 0;
    std::vector<Plaquette> plaquettes;
    std::vector<std::array<int, 2>> faces_of_edge; // (left, right) of each oriented edge

    int np() const { return static_cast<int>(plaquettes.size()); }
    int cell(int x, int y) const { return ((x % L1 + L1) % L1) + L1 * ((y % L2 + L2) % L2); }
    int vertex_a(int x, int y) const { return 2 * cell(x, y); }
    int vertex_b(int x, int y) const { return 2 * cell(x, y) + 1; }
    int edge_id(int x, int y, int type) const { return 3 * cell(x, y) + type; }

    bool on_boundary(int p, int v) const {
        for (const auto& s : plaquettes[p].walk)
            if (s.vertex == v) return true;
        return false;
    }
};

// Honeycomb on an L1 x L2 torus. Unit cell (x,y) holds A = 2c and B = 2c+1 and
// three edges A(x,y) -> B(x,y), B(x,y-1), B(x+1,y-1), all pointing A to B.
inline HoneycombLattice honeycomb_torus(int L1, int L2) {
    if (L1 < 2 || L2 < 2) fail(ErrorKind::InvalidParameter, "torus needs L1, L2 >= 2");
    HoneycombLattice lat;
    lat.L1 = L1, lat.L2 = L2;
    lat.nv = 2 * L1 * L2;
    lat.edges.resize(3 * L1 * L2);
    lat.inc.assign(lat.nv, {-1, -1, -1});
    for (int y = 0; y < L2; ++y)
        for (int x = 0; x < L1; ++x) {
            int a = lat.vertex_a(x, y);
            std::array<int, 3> tg{lat.vertex_b(x, y), lat.vertex_b(x, y - 1), lat.vertex_b(x + 1, y - 1)};
            for (int t = 0; t < 3; ++t) {
                int e = lat.edge_id(x, y, t);
                lat.edges[e] = {a, tg[t]};
                lat.inc[a][t] = e;
                lat.inc[tg[t]][t] = e;
            }
        }
    lat.faces_of_edge.assign(lat.ne(), {-1, -1});
    for (int y = 0; y < L2; ++y)
        for (int x = 0; x < L1; ++x) {
            std::array<Slot, 6> w{{
                {lat.vertex_a(x, y), lat.edge_id(x, y, 2), true},
                {lat.vertex_b(x + 1, y - 1), lat.edge_id(x + 1, y, 1), false},
                {lat.vertex_a(x + 1, y), lat.edge_id(x + 1, y, 0), true},
                {lat.vertex_b(x + 1, y), lat.edge_id(x, y + 1, 2), false},
                {lat.vertex_a(x, y + 1), lat.edge_id(x, y + 1, 1), true},
                {lat.vertex_b(x, y), lat.edge_id(x, y, 0), false},
            }};
            int k0 = 0;
            for (int k = 1; k < 6; ++k)
                if (w[k].vertex < w[k0].vertex) k0 = k;
            Plaquette p;
            for (int k = 0; k < 6; ++k) p.walk[k] = w[(k0 + k) % 6];
            p.base = p.walk[0].vertex;
            int pid = static_cast<int>(lat.plaquettes.size());
            for (const auto& s : p.walk) lat.faces_of_edge[s.edge][s.forward ? 0 : 1] = pid;
            lat.plaquettes.push_back(p);
        }
    return lat;
}

// Two vertices joined by three edges, all oriented 0 -> 1.
inline Graph theta_graph() {
    Graph g;
    g.nv = 2;
    g.edges = {{0, 1}, {0, 1}, {0, 1}};
    g.inc = {{0, 1, 2}, {2, 1, 0}}; // planar embedding: order reverses at the far vertex
    return g;
}

inline const std::array<Slot, 6>& plaquette_boundary(const HoneycombLattice& lat, int p) {
    if (p < 0 || p >= lat.np()) fail(ErrorKind::InvalidParameter, "plaquette index out of range");
    return lat.plaquettes[p].walk;
}

// Triangle of the dual graph around primal vertex v. Dual edge e* runs from the
// plaquette right of e to the one left of it.
struct DualTriangle {
    int vertex = 0;
    std::array<int, 3> edges{};      // primal = dual edge ids, in inc[v] order
    std::array<int, 3> plaquettes{}; // plaquettes[k] lies between edges[k] and edges[k+1]
};

struct DualGraph {
    std::vector<DualTriangle> triangles;
    std::vector<std::array<int, 2>> dual_edges; // (from, to) plaquettes
};

inline DualGraph dual_triangulation(const HoneycombLattice& lat) {
    DualGraph d;
    d.dual_edges.resize(lat.ne());
    for (int e = 0; e < lat.ne(); ++e) d.dual_edges[e] = {lat.faces_of_edge[e][1], lat.faces_of_edge[e][0]};
    for (int v = 0; v < lat.nv; ++v) {
        DualTriangle t;
        t.vertex = v;
        t.edges = lat.inc[v];
        for (int k = 0; k < 3; ++k) {
            int e1 = t.edges[k], e2 = t.edges[(k + 1) % 3];
            int found = -1;
            for (int f : lat.faces_of_edge[e1])
                for (int g : lat.faces_of_edge[e2])
                    if (f == g && lat.on_boundary(f, v)) found = f;
            t.plaquettes[k] = found;
        }
        d.triangles.push_back(t);
    }
    return d;
}

struct Site {
    int plaquette = 0;
    int vertex = 0;
    bool operator==(const Site& o) const { return plaquette == o.plaquette && vertex == o.vertex; }
};

enum class TriangleKind { Direct, Dual };

// Direct: sites share a vertex, plaquettes on either side of `edge`.
// Dual: sites share a plaquette, vertices at the ends of `edge`.
struct Triangle {
    TriangleKind kind = TriangleKind::Dual;
    int edge = 0;
    Site from, to;
};

struct RibbonStrip {
    std::vector<Triangle> triangles;
    Site start, end;
    bool closed() const { return !triangles.empty() && start == end; }
};

inline Triangle site_step(const HoneycombLattice& lat, const Site& a, const Site& b) {
    if (a.plaquette == b.plaquette && a.vertex != b.vertex) {
        for (const auto& s : lat.plaquettes[a.plaquette].walk)
            if (lat.incident(s.edge, a.vertex) && lat.incident(s.edge, b.vertex))
                return {TriangleKind::Dual, s.edge, a, b};
    }
    if (a.vertex == b.vertex && a.plaquette != b.plaquette) {
        for (int e : lat.inc[a.vertex]) {
            const auto& f = lat.faces_of_edge[e];
            if ((f[0] == a.plaquette && f[1] == b.plaquette) || (f[1] == a.plaquette && f[0] == b.plaquette))
                return {TriangleKind::Direct, e, a, b};
        }
    }
    fail(ErrorKind::NotAPath, "sites (" + std::to_string(a.plaquette) + ":" + std::to_string(a.vertex) + ") and (" +
                                  std::to_string(b.plaquette) + ":" + std::to_string(b.vertex) + ") are not adjacent");
}

inline RibbonStrip ribbon_strip(const HoneycombLattice& lat, const std::vector<Site>& sites) {
    if (sites.size() < 2) fail(ErrorKind::NotAPath, "a strip needs at least two sites");
    for (const auto& s : sites) {
        if (s.plaquette < 0 || s.plaquette >= lat.np() || s.vertex < 0 || s.vertex >= lat.nv ||
            !lat.on_boundary(s.plaquette, s.vertex))
            fail(ErrorKind::NotAPath, "site vertex is not on its plaquette");
    }
    RibbonStrip r;
    for (std::size_t k = 0; k + 1 < sites.size(); ++k) r.triangles.push_back(site_step(lat, sites[k], sites[k + 1]));
    r.start = sites.front();
    r.end = sites.back();
    return r;
}

// Six dual triangles running clockwise around p from its base site.
inline RibbonStrip plaquette_loop(const HoneycombLattice& lat, int p) {
    const auto& w = lat.plaquettes[p].walk;
    std::vector<Site> sites;
    for (int k = 0; k <= 6; ++k) sites.push_back({p, w[(6 - k) % 6].vertex});
    return ribbon_strip(lat, sites);
}

} // namespace topoforge
