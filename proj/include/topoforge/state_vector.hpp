#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "errors.hpp"

namespace topoforge {

using cplx = std::complex<double>;
using Key = std::uint64_t;

// Mixed-radix packing of an edge coloring: key = sum_e color_e * base^e.
class Codec {
public:
    Codec() = default;
    Codec(int base, int length) : base_(base), len_(length), stride_(length + 1, 1) {
        for (int e = 0; e < length; ++e) {
            if (stride_[e] > UINT64_MAX / static_cast<Key>(base)) fail(ErrorKind::BudgetExceeded, "coloring does not fit in 64 bits");
            stride_[e + 1] = stride_[e] * static_cast<Key>(base);
        }
    }
    int base() const { return base_; }
    int length() const { return len_; }
    Key size() const { return stride_[len_]; }
    Key stride(int e) const { return stride_[e]; }
    int digit(Key k, int e) const { return static_cast<int>((k / stride_[e]) % static_cast<Key>(base_)); }
    Key with(Key k, int e, int value) const { return k + (static_cast<Key>(value) - digit(k, e)) * stride_[e]; }
    Key encode(const std::vector<int>& c) const {
        Key k = 0;
        for (int e = len_ - 1; e >= 0; --e) k = k * base_ + static_cast<Key>(c[e]);
        return k;
    }
    void decode(Key k, std::vector<int>& c) const {
        c.resize(len_);
        for (int e = 0; e < len_; ++e, k /= base_) c[e] = static_cast<int>(k % base_);
    }
    std::vector<int> decode(Key k) const {
        std::vector<int> c;
        decode(k, c);
        return c;
    }

private:
    int base_ = 1, len_ = 0;
    std::vector<Key> stride_{1};
};

enum class Basis { Group, Spin };

// Sparse amplitudes over packed colorings.
struct StateVector {
    Basis basis = Basis::Group;
    Codec codec;
    std::unordered_map<Key, cplx> amp;

    StateVector() = default;
    StateVector(Basis b, Codec c) : basis(b), codec(c) {}

    void add(Key k, cplx v) { amp[k] += v; }
    cplx get(Key k) const {
        auto it = amp.find(k);
        return it == amp.end() ? cplx(0) : it->second;
    }
    StateVector& prune(double eps = 1e-14) {
        for (auto it = amp.begin(); it != amp.end();)
            it = std::abs(it->second) < eps ? amp.erase(it) : std::next(it);
        return *this;
    }
    double norm2() const {
        double s = 0;
        for (const auto& [k, v] : amp) s += std::norm(v);
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }
    StateVector& scale(cplx c) {
        for (auto& [k, v] : amp) v *= c;
        return *this;
    }
    StateVector& normalize() {
        double n = norm();
        if (n < 1e-300) fail(ErrorKind::ZeroState, "cannot normalize the zero vector");
        return scale(1.0 / n);
    }
};

inline cplx inner(const StateVector& a, const StateVector& b) {
    const auto& small = a.amp.size() <= b.amp.size() ? a : b;
    const auto& big = &small == &a ? b : a;
    cplx s = 0;
    for (const auto& [k, v] : small.amp) {
        auto it = big.amp.find(k);
        if (it == big.amp.end()) continue;
        s += &small == &a ? std::conj(v) * it->second : std::conj(it->second) * v;
    }
    return s;
}

inline double distance(const StateVector& a, const StateVector& b) {
    double s = 0;
    for (const auto& [k, v] : a.amp) s += std::norm(v - b.get(k));
    for (const auto& [k, v] : b.amp)
        if (!a.amp.count(k)) s += std::norm(v);
    return std::sqrt(s);
}

inline StateVector axpy(cplx alpha, const StateVector& x, StateVector y) {
    for (const auto& [k, v] : x.amp) y.add(k, alpha * v);
    return y;
}

inline StateVector basis_state(Basis b, const Codec& c, Key k) {
    StateVector s(b, c);
    s.amp[k] = 1.0;
    return s;
}

// An operator exposes terms(key, emit) with emit(key', coefficient).
template <class Op>
StateVector apply(const Op& op, const StateVector& in) {
    StateVector out(in.basis, in.codec);
    out.amp.reserve(in.amp.size());
    for (const auto& [k, v] : in.amp) op.terms(k, [&](Key k2, cplx c) { out.add(k2, c * v); });
    return out.prune();
}

using DenseVector = std::vector<cplx>;

template <class Op>
DenseVector apply(const Op& op, const DenseVector& in) {
    DenseVector out(in.size(), 0.0);
    for (Key k = 0; k < in.size(); ++k) {
        if (in[k] == 0.0) continue;
        op.terms(k, [&](Key k2, cplx c) { out[k2] += c * in[k]; });
    }
    return out;
}

inline double max_abs_diff(const DenseVector& a, const DenseVector& b) {
    double w = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
    return w;
}

} // namespace topoforge
