#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace topoforge {

// Explicit multiplication table. Element 0 is the identity.
struct FiniteGroup {
    std::string name;
    int order = 0;
    std::vector<int> mult; // order*order, mult[a*order+b] = ab
    std::vector<int> inv;

    int mul(int a, int b) const { return mult[static_cast<std::size_t>(a) * order + b]; }
    int inverse(int a) const { return inv[a]; }
    int conj(int k, int g) const { return mul(mul(k, g), inv[k]); } // k g k^-1
    bool abelian() const {
        for (int a = 0; a < order; ++a)
            for (int b = 0; b < order; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }
};

struct ConjugacyClass {
    int representative = 0;
    std::vector<int> members;
};

namespace detail {

inline void validate(FiniteGroup& G) {
    const int n = G.order;
    for (int g = 0; g < n; ++g)
        if (G.mul(0, g) != g || G.mul(g, 0) != g)
            fail(ErrorKind::NumericalInconsistency, G.name + ": element 0 is not the identity");
    G.inv.assign(n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (G.mul(a, b) == 0) G.inv[a] = b;
    for (int a = 0; a < n; ++a)
        if (G.inv[a] < 0 || G.mul(G.inv[a], a) != 0)
            fail(ErrorKind::NumericalInconsistency, G.name + ": missing inverse");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (G.mul(G.mul(a, b), c) != G.mul(a, G.mul(b, c)))
                    fail(ErrorKind::NumericalInconsistency, G.name + ": not associative");
}

// BFS closure of permutation generators; element order is the BFS order from the identity.
inline FiniteGroup permutation_group(std::string name, const std::vector<std::vector<int>>& gens,
                                     std::vector<std::vector<int>>* elements_out = nullptr) {
    const std::size_t deg = gens.front().size();
    std::vector<int> id(deg);
    for (std::size_t i = 0; i < deg; ++i) id[i] = static_cast<int>(i);
    std::vector<std::vector<int>> elems{id};
    std::map<std::vector<int>, int> index{{id, 0}};
    std::deque<int> queue{0};
    while (!queue.empty()) {
        const auto a = elems[queue.front()];
        queue.pop_front();
        for (const auto& g : gens) {
            std::vector<int> c(deg);
            for (std::size_t i = 0; i < deg; ++i) c[i] = g[a[i]]; // g o a
            if (index.emplace(c, static_cast<int>(elems.size())).second) {
                queue.push_back(static_cast<int>(elems.size()));
                elems.push_back(c);
            }
        }
    }
    FiniteGroup G;
    G.name = std::move(name);
    G.order = static_cast<int>(elems.size());
    G.mult.resize(elems.size() * elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (std::size_t j = 0; j < elems.size(); ++j) {
            std::vector<int> c(deg);
            for (std::size_t k = 0; k < deg; ++k) c[k] = elems[i][elems[j][k]];
            G.mult[i * elems.size() + j] = index.at(c);
        }
    if (elements_out) *elements_out = elems;
    return G;
}

} // namespace detail

inline constexpr int kMaxCyclicOrder = 48;

inline FiniteGroup build_group(std::string_view spec) {
    if (spec == "S3") {
        auto G = detail::permutation_group("S3", {{1, 2, 0}, {1, 0, 2}});
        detail::validate(G);
        return G;
    }
    if (spec == "D4") {
        auto G = detail::permutation_group("D4", {{1, 2, 3, 0}, {0, 3, 2, 1}});
        detail::validate(G);
        return G;
    }
    if (spec.size() >= 2 && spec[0] == 'Z') {
        int n = 0;
        auto digits = spec.substr(1);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec == std::errc() && ptr == digits.data() + digits.size()) {
            if (n < 2) fail(ErrorKind::InvalidParameter, "cyclic group needs n >= 2, got " + std::string(spec));
            if (n > kMaxCyclicOrder) fail(ErrorKind::UnknownGroup, "Z_n supported up to n = 48, got " + std::string(spec));
            FiniteGroup G;
            G.name = std::string(spec);
            G.order = n;
            G.mult.resize(static_cast<std::size_t>(n) * n);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) G.mult[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
            detail::validate(G);
            return G;
        }
    }
    fail(ErrorKind::UnknownGroup, "unsupported group '" + std::string(spec) + "' (expected Z<n>, S3, D4)");
}

inline std::vector<ConjugacyClass> conjugacy_classes(const FiniteGroup& G) {
    std::vector<int> seen(G.order, 0);
    std::vector<ConjugacyClass> out;
    for (int g = 0; g < G.order; ++g) {
        if (seen[g]) continue;
        ConjugacyClass c;
        c.representative = g;
        for (int k = 0; k < G.order; ++k) {
            int x = G.conj(k, g);
            if (!seen[x]) {
                seen[x] = 1;
                c.members.push_back(x);
            }
        }
        std::sort(c.members.begin(), c.members.end());
        out.push_back(std::move(c));
    }
    return out;
}

// Orbits of commuting pairs under simultaneous conjugation; equals the number of
// anyon types of the quantum double and the torus ground-space dimension.
inline int commuting_pair_orbit_count(const FiniteGroup& G) {
    const int n = G.order;
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    int orbits = 0;
    for (int g = 0; g < n; ++g)
        for (int h = 0; h < n; ++h) {
            if (G.mul(g, h) != G.mul(h, g) || seen[g * n + h]) continue;
            ++orbits;
            for (int k = 0; k < n; ++k) seen[G.conj(k, g) * n + G.conj(k, h)] = 1;
        }
    return orbits;
}

} // namespace topoforge
