#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace topoforge {

// Face k of a tetrahedron (opposite vertex k) glued to face perm[k] of `tet`,
// vertex m going to perm[m]. tet < 0 marks a boundary face.
struct FaceGluing {
    int tet = -1;
    std::array<int, 4> perm{0, 1, 2, 3};
    bool boundary() const { return tet < 0; }
};

// Edge slots of a tetrahedron: 01 02 03 12 13 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeSlots{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

inline int edge_slot(int a, int b) {
    if (a > b) std::swap(a, b);
    for (int s = 0; s < 6; ++s)
        if (kEdgeSlots[s][0] == a && kEdgeSlots[s][1] == b) return s;
    fail(ErrorKind::InvalidParameter, "not an edge of a tetrahedron");
}

inline std::array<int, 3> face_vertices(int k) {
    std::array<int, 3> f{};
    for (int m = 0, i = 0; m < 4; ++m)
        if (m != k) f[i++] = m;
    return f;
}

inline int permutation_sign(const std::array<int, 4>& p) {
    int s = 1;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (p[i] > p[j]) s = -s;
    return s;
}

// `color t.ab label`: label on edge a -> b of tet t.
struct EdgeColorSpec {
    int tet = 0, a = 0, b = 1;
    int label = 0;
};

struct GluedComplex3 {
    std::vector<std::array<FaceGluing, 4>> glue;
    std::vector<EdgeColorSpec> colors;

    // derived
    int nvertices = 0, nedges = 0, nfaces = 0;
    std::vector<std::array<int, 4>> vertex_class;
    std::vector<std::array<int, 6>> edge_class;
    std::vector<std::array<int, 6>> edge_sign; // +1 if slot a->b (a<b) matches the class orientation
    std::vector<std::array<int, 4>> face_class;
    std::vector<std::array<int, 2>> face_rep;  // lowest (tet, face) of each face class
    std::vector<char> boundary_vertex, boundary_edge, boundary_face;
    std::vector<int> tet_sign;
    bool orientable = false;

    int ntet() const { return static_cast<int>(glue.size()); }
    bool closed() const { return std::none_of(boundary_face.begin(), boundary_face.end(), [](char c) { return c; }); }
    int boundary_vertex_count() const { return static_cast<int>(std::count(boundary_vertex.begin(), boundary_vertex.end(), 1)); }
    int euler_characteristic() const { return nvertices - nedges + nfaces - ntet(); }
};

namespace detail {

// Union-find tracking the relative orientation of each element to its root.
struct ParityUnionFind {
    std::vector<int> parent, parity;
    explicit ParityUnionFind(int n) : parent(n), parity(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
    std::pair<int, int> find(int x) {
        int p = 0, r = x;
        while (parent[r] != r) p ^= parity[r], r = parent[r];
        // compress
        int q = 0;
        while (parent[x] != x) {
            int nx = parent[x], nq = q ^ parity[x];
            parent[x] = r, parity[x] = p ^ q;
            x = nx, q = nq;
        }
        return {r, p};
    }
    // join with relation parity(a) ^ parity(b) == rel; false on contradiction
    bool join(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent[ra] = rb, parity[ra] = pa ^ pb ^ rel;
        return true;
    }
};

} // namespace detail

// Validates the gluing table and derives vertex, edge and face classes.
inline GluedComplex3 make_complex(std::vector<std::array<FaceGluing, 4>> glue, std::vector<EdgeColorSpec> colors = {}) {
    GluedComplex3 cx;
    cx.glue = std::move(glue);
    cx.colors = std::move(colors);
    const int T = cx.ntet();
    if (T == 0) fail(ErrorKind::GluingInconsistent, "no tetrahedra");
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            const auto& g = cx.glue[t][k];
            if (g.boundary()) continue;
            auto p = g.perm;
            auto sorted = p;
            std::sort(sorted.begin(), sorted.end());
            if (g.tet >= T || sorted != std::array<int, 4>{0, 1, 2, 3})
                fail(ErrorKind::GluingInconsistent, "tet " + std::to_string(t) + " face " + std::to_string(k) + ": bad target");
            if (g.tet == t && p[k] == k)
                fail(ErrorKind::GluingInconsistent, "tet " + std::to_string(t) + " face " + std::to_string(k) + " glued to itself");
            const auto& back = cx.glue[g.tet][p[k]];
            bool inverse = back.tet == t;
            for (int m = 0; m < 4 && inverse; ++m) inverse = back.perm[p[m]] == m;
            if (!inverse)
                fail(ErrorKind::GluingInconsistent,
                     "tet " + std::to_string(t) + " face " + std::to_string(k) + ": gluing is not involutive");
        }

    detail::ParityUnionFind vuf(4 * T), euf(6 * T), fuf(4 * T);
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            const auto& g = cx.glue[t][k];
            if (g.boundary()) continue;
            const auto& p = g.perm;
            fuf.join(4 * t + k, 4 * g.tet + p[k], 0);
            auto f = face_vertices(k);
            for (int m : f) vuf.join(4 * t + m, 4 * g.tet + p[m], 0);
            for (int i = 0; i < 3; ++i)
                for (int j = i + 1; j < 3; ++j) {
                    int a = f[i], b = f[j];
                    int rel = p[a] < p[b] ? 0 : 1;
                    if (!euf.join(6 * t + edge_slot(a, b), 6 * g.tet + edge_slot(p[a], p[b]), rel))
                        fail(ErrorKind::NonManifoldEdge, "edge of tet " + std::to_string(t) + " is identified with its reverse");
                }
        }

    // number classes by first appearance
    auto number = [&](detail::ParityUnionFind& uf, int per, auto& out, int& count) {
        std::map<int, int> id;
        out.assign(T, {});
        for (int t = 0; t < T; ++t)
            for (int s = 0; s < per; ++s) {
                int r = uf.find(per * t + s).first;
                auto it = id.find(r);
                if (it == id.end()) it = id.emplace(r, count++).first;
                out[t][s] = it->second;
            }
    };
    number(vuf, 4, cx.vertex_class, cx.nvertices);
    number(euf, 6, cx.edge_class, cx.nedges);
    number(fuf, 4, cx.face_class, cx.nfaces);

    // orientation relative to the first slot of each class
    std::vector<int> rep_parity(cx.nedges, -1);
    cx.edge_sign.assign(T, {});
    for (int t = 0; t < T; ++t)
        for (int s = 0; s < 6; ++s) {
            int c = cx.edge_class[t][s], par = euf.find(6 * t + s).second;
            if (rep_parity[c] < 0) rep_parity[c] = par;
            cx.edge_sign[t][s] = par == rep_parity[c] ? 1 : -1;
        }

    cx.face_rep.assign(cx.nfaces, {-1, -1});
    std::vector<int> members(cx.nfaces, 0);
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            int f = cx.face_class[t][k];
            if (cx.face_rep[f][0] < 0) cx.face_rep[f] = {t, k};
            ++members[f];
        }
    cx.boundary_face.assign(cx.nfaces, 0);
    cx.boundary_edge.assign(cx.nedges, 0);
    cx.boundary_vertex.assign(cx.nvertices, 0);
    for (int t = 0; t < T; ++t)
        for (int k = 0; k < 4; ++k) {
            if (!cx.glue[t][k].boundary()) continue;
            cx.boundary_face[cx.face_class[t][k]] = 1;
            auto f = face_vertices(k);
            for (int i = 0; i < 3; ++i) {
                cx.boundary_vertex[cx.vertex_class[t][f[i]]] = 1;
                for (int j = i + 1; j < 3; ++j) cx.boundary_edge[cx.edge_class[t][edge_slot(f[i], f[j])]] = 1;
            }
        }

    // orientable iff every gluing reverses orientation for some choice of tet signs
    cx.tet_sign.assign(T, 0);
    cx.orientable = true;
    for (int start = 0; start < T; ++start) {
        if (cx.tet_sign[start]) continue;
        cx.tet_sign[start] = 1;
        std::deque<int> q{start};
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            for (int k = 0; k < 4; ++k) {
                const auto& g = cx.glue[t][k];
                if (g.boundary()) continue;
                int want = -cx.tet_sign[t] * permutation_sign(g.perm);
                if (!cx.tet_sign[g.tet]) {
                    cx.tet_sign[g.tet] = want;
                    q.push_back(g.tet);
                } else if (cx.tet_sign[g.tet] != want) {
                    cx.orientable = false;
                }
            }
        }
    }
    return cx;
}

// Line format:
//   tetrahedra N
//   tet i g0 g1 g2 g3        gk = '-' or t:p0p1p2p3
//   color t.ab label
inline GluedComplex3 parse_complex(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0, count = -1;
    std::vector<std::array<FaceGluing, 4>> glue;
    std::vector<char> seen;
    std::vector<EdgeColorSpec> colors;
    auto err = [&](std::size_t col, const std::string& what) {
        fail(ErrorKind::ParseError, "line " + std::to_string(lineno) + ", column " + std::to_string(col + 1) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        // tokens with their columns
        std::vector<std::pair<std::string, std::size_t>> tok;
        for (std::size_t i = 0; i < line.size();) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            tok.emplace_back(line.substr(i, j - i), i);
            i = j;
        }
        if (tok.empty()) continue;
        auto integer = [&](const std::pair<std::string, std::size_t>& t) {
            const auto& s = t.first;
            if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
                s.size() > 9)
                err(t.second, "expected a non-negative integer, got '" + s + "'");
            return std::stoi(s);
        };
        const auto& key = tok[0].first;
        if (count < 0) {
            if (key != "tetrahedra" || tok.size() != 2) err(tok[0].second, "expected 'tetrahedra <N>'");
            count = integer(tok[1]);
            if (count == 0) err(tok[1].second, "need at least one tetrahedron");
            glue.assign(count, {});
            seen.assign(count, 0);
        } else if (key == "tet") {
            if (tok.size() != 6) err(tok[0].second, "expected 'tet <i> g0 g1 g2 g3'");
            int t = integer(tok[1]);
            if (t >= count) err(tok[1].second, "tetrahedron index out of range");
            if (seen[t]) err(tok[1].second, "tetrahedron listed twice");
            seen[t] = 1;
            for (int k = 0; k < 4; ++k) {
                const auto& [s, col] = tok[2 + k];
                if (s == "-") continue;
                auto colon = s.find(':');
                if (colon == std::string::npos || s.size() != colon + 5) err(col, "expected '-' or '<tet>:<p0p1p2p3>'");
                FaceGluing g;
                g.tet = integer({s.substr(0, colon), col});
                if (g.tet >= count) err(col, "target tetrahedron out of range");
                std::array<int, 4> sorted{};
                for (int m = 0; m < 4; ++m) {
                    char c = s[colon + 1 + m];
                    if (c < '0' || c > '3') err(col + colon + 1 + m, "permutation digits must be 0-3");
                    g.perm[m] = sorted[m] = c - '0';
                }
                std::sort(sorted.begin(), sorted.end());
                if (sorted != std::array<int, 4>{0, 1, 2, 3}) err(col + colon + 1, "not a permutation");
                glue[t][k] = g;
            }
        } else if (key == "color") {
            if (tok.size() != 3) err(tok[0].second, "expected 'color <t>.<ab> <label>'");
            const auto& [s, col] = tok[1];
            auto dot = s.find('.');
            if (dot == std::string::npos || s.size() != dot + 3) err(col, "expected '<t>.<ab>'");
            EdgeColorSpec c;
            c.tet = integer({s.substr(0, dot), col});
            c.a = s[dot + 1] - '0', c.b = s[dot + 2] - '0';
            if (c.tet >= count) err(col, "tetrahedron index out of range");
            if (c.a < 0 || c.a > 3 || c.b < 0 || c.b > 3 || c.a == c.b) err(col + dot + 1, "bad edge");
            c.label = integer(tok[2]);
            colors.push_back(c);
        } else {
            err(tok[0].second, "unknown directive '" + key + "'");
        }
    }
    if (count < 0) fail(ErrorKind::ParseError, "missing 'tetrahedra' header");
    for (int t = 0; t < count; ++t)
        if (!seen[t]) fail(ErrorKind::ParseError, "tetrahedron " + std::to_string(t) + " not listed");
    return make_complex(std::move(glue), std::move(colors));
}

inline std::string format_complex(const GluedComplex3& cx) {
    std::ostringstream o;
    o << "tetrahedra " << cx.ntet() << "\n";
    for (int t = 0; t < cx.ntet(); ++t) {
        o << "tet " << t;
        for (const auto& g : cx.glue[t]) {
            if (g.boundary()) {
                o << " -";
                continue;
            }
            o << ' ' << g.tet << ':';
            for (int m : g.perm) o << m;
        }
        o << "\n";
    }
    for (const auto& c : cx.colors) o << "color " << c.tet << '.' << c.a << c.b << ' ' << c.label << "\n";
    return o.str();
}

} // namespace topoforge
