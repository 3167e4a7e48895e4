#pragma once

#include <cmath>
#include <complex>
#include <deque>
#include <numbers>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace topoforge {

using cplx = std::complex<double>;

struct Irrep {
    int label = 0;
    int dim = 1;
    std::vector<cplx> mats; // per element, row-major dim x dim
    std::vector<cplx> character;

    const cplx* matrix(int g) const { return mats.data() + static_cast<std::size_t>(g) * dim * dim; }
    cplx at(int g, int r, int c) const { return mats[(static_cast<std::size_t>(g) * dim + r) * dim + c]; }
};

// Invariant tensor on three irreps, legs in the order given.
struct Tensor3 {
    std::array<int, 3> labels{};
    std::array<int, 3> dims{};
    std::vector<cplx> v;

    cplx at(int a, int b, int c) const { return v[(static_cast<std::size_t>(a) * dims[1] + b) * dims[2] + c]; }
    double norm() const {
        double s = 0;
        for (auto x : v) s += std::norm(x);
        return std::sqrt(s);
    }
};

// Dense F-symbol table plus the fusion data its consumers need.
struct FSymbolTable {
    int n = 0;
    std::vector<int> dim;
    std::vector<int> dual;
    std::vector<int> N; // n^3
    std::vector<cplx> F; // n^6
    std::vector<double> v; // v_j = sqrt(d_j)
    double d_total = 0;

    std::size_t index(int i, int j, int m, int k, int l, int nn) const {
        return (((((static_cast<std::size_t>(i) * n + j) * n + m) * n + k) * n + l) * n) + nn;
    }
    cplx operator()(int i, int j, int m, int k, int l, int nn) const { return F[index(i, j, m, k, l, nn)]; }
    cplx& at(int i, int j, int m, int k, int l, int nn) { return F[index(i, j, m, k, l, nn)]; }
    int fusion(int a, int b, int c) const { return N[(static_cast<std::size_t>(a) * n + b) * n + c]; }
    int star(int a) const { return dual[a]; }
};

inline constexpr int kMaxDenseLabels = 12;

class RepTheory {
public:
    explicit RepTheory(FiniteGroup G) : G_(std::move(G)) {
        build_irreps();
        check_irreps();
        build_fusion();
    }

    const FiniteGroup& group() const { return G_; }
    const std::vector<Irrep>& irreps() const { return irr_; }
    const Irrep& irrep(int j) const { return irr_[j]; }
    int count() const { return static_cast<int>(irr_.size()); }
    int dim(int j) const { return irr_[j].dim; }
    int dual(int j) const { return dual_[j]; }
    const std::vector<int>& duals() const { return dual_; }

    // N_ijk = (1/|G|) sum_g chi_i chi_j chi_k
    int fusion_coefficient(int i, int j, int k) const {
        check_label(i), check_label(j), check_label(k);
        return N_[(static_cast<std::size_t>(i) * count() + j) * count() + k];
    }
    bool admissible(int i, int j, int k) const { return fusion_coefficient(i, j, k) == 1; }

    // Unit-norm invariant tensor; first nonzero entry real positive.
    const Tensor3& intertwiner(int i, int j, int k) const {
        const auto& t = raw_[slot(i, j, k)];
        if (!t) {
            int Nijk = fusion_coefficient(i, j, k);
            if (Nijk == 0) fail(ErrorKind::NotAdmissible, "N = 0 for triple");
            fail(ErrorKind::MultiplicityUnsupported, "fusion multiplicity > 1");
        }
        return *t;
    }

    // Vertex tensor: the intertwiner of the lexicographically smallest rotation of
    // (i,j,k), with legs rotated back. Rotating the labels rotates the tensor.
    const Tensor3& vertex_tensor(int i, int j, int k) const {
        const auto& t = cyc_[slot(i, j, k)];
        if (!t) intertwiner(i, j, k); // throws with the right kind
        return *t;
    }

    // max over g of |sum I[abc] D^i(g)_{aa'} D^j(g)_{bb'} D^k(g)_{cc'} - I[a'b'c']|
    double invariance_residual(const Tensor3& t) const {
        double worst = 0;
        const auto& A = irr_[t.labels[0]];
        const auto& B = irr_[t.labels[1]];
        const auto& C = irr_[t.labels[2]];
        for (int g = 0; g < G_.order; ++g)
            for (int a2 = 0; a2 < t.dims[0]; ++a2)
                for (int b2 = 0; b2 < t.dims[1]; ++b2)
                    for (int c2 = 0; c2 < t.dims[2]; ++c2) {
                        cplx s = 0;
                        for (int a = 0; a < t.dims[0]; ++a)
                            for (int b = 0; b < t.dims[1]; ++b)
                                for (int c = 0; c < t.dims[2]; ++c)
                                    s += t.at(a, b, c) * A.at(g, a, a2) * B.at(g, b, b2) * C.at(g, c, c2);
                        worst = std::max(worst, std::abs(s - t.at(a2, b2, c2)));
                    }
        return worst;
    }

    FSymbolTable f_symbols() const;

private:
    FiniteGroup G_;
    std::vector<Irrep> irr_;
    std::vector<int> dual_;
    std::vector<int> N_;
    std::vector<std::optional<Tensor3>> raw_, cyc_;

    std::size_t slot(int i, int j, int k) const {
        check_label(i), check_label(j), check_label(k);
        return (static_cast<std::size_t>(i) * count() + j) * count() + k;
    }
    void check_label(int j) const {
        if (j < 0 || j >= count()) fail(ErrorKind::InvalidParameter, "irrep label out of range");
    }

    void build_irreps();
    void check_irreps() const;
    void build_fusion();
    Tensor3 project_invariant(int i, int j, int k) const;
};

namespace detail {

// Images of the two generators (elements 1 and 2 of the BFS table) in each irrep.
using GenImages = std::vector<std::array<std::vector<cplx>, 2>>;

inline GenImages s3_generators() {
    const double c = std::cos(2 * std::numbers::pi / 3), s = std::sin(2 * std::numbers::pi / 3);
    return {
        {{{1.0}, {1.0}}},
        {{{1.0}, {-1.0}}},
        {{{c, -s, s, c}, {1.0, 0.0, 0.0, -1.0}}},
    };
}

inline GenImages d4_generators() {
    return {
        {{{1.0}, {1.0}}},
        {{{1.0}, {-1.0}}},
        {{{-1.0}, {1.0}}},
        {{{-1.0}, {-1.0}}},
        {{{0.0, -1.0, 1.0, 0.0}, {1.0, 0.0, 0.0, -1.0}}},
    };
}

inline std::vector<cplx> matmul(const std::vector<cplx>& a, const cplx* b, int d) {
    std::vector<cplx> c(static_cast<std::size_t>(d) * d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) c[i * d + j] += a[i * d + k] * b[k * d + j];
    return c;
}

} // namespace detail

inline void RepTheory::build_irreps() {
    const int order = G_.order;
    if (G_.name == "S3" || G_.name == "D4") {
        auto gens = G_.name == "S3" ? detail::s3_generators() : detail::d4_generators();
        for (std::size_t r = 0; r < gens.size(); ++r) {
            Irrep ir;
            ir.label = static_cast<int>(r);
            ir.dim = gens[r][0].size() == 1 ? 1 : 2;
            const int d = ir.dim;
            ir.mats.assign(static_cast<std::size_t>(order) * d * d, 0.0);
            std::vector<char> done(order, 0);
            for (int i = 0; i < d; ++i) ir.mats[i * d + i] = 1.0;
            done[0] = 1;
            std::deque<int> q{0};
            while (!q.empty()) {
                int a = q.front();
                q.pop_front();
                for (int k = 0; k < 2; ++k) {
                    int c = G_.mul(k + 1, a);
                    if (done[c]) continue;
                    auto m = detail::matmul(gens[r][k], ir.matrix(a), d);
                    std::copy(m.begin(), m.end(), ir.mats.begin() + static_cast<std::ptrdiff_t>(c) * d * d);
                    done[c] = 1;
                    q.push_back(c);
                }
            }
            irr_.push_back(std::move(ir));
        }
    } else {
        for (int k = 0; k < order; ++k) {
            Irrep ir;
            ir.label = k;
            for (int m = 0; m < order; ++m)
                ir.mats.push_back(std::polar(1.0, 2 * std::numbers::pi * k * m / order));
            irr_.push_back(std::move(ir));
        }
    }
    for (auto& ir : irr_) {
        ir.character.assign(order, 0.0);
        for (int g = 0; g < order; ++g)
            for (int i = 0; i < ir.dim; ++i) ir.character[g] += ir.at(g, i, i);
    }
    const int n = count();
    dual_.assign(n, -1);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (irr_[k].dim != irr_[j].dim) continue;
            bool same = true;
            for (std::size_t x = 0; x < irr_[j].mats.size() && same; ++x)
                same = std::abs(std::conj(irr_[j].mats[x]) - irr_[k].mats[x]) < 1e-12;
            if (same) dual_[j] = k;
        }
    for (int j = 0; j < n; ++j)
        if (dual_[j] < 0) fail(ErrorKind::NumericalInconsistency, "conjugate irrep is not in the list");
}

inline void RepTheory::check_irreps() const {
    const int order = G_.order;
    for (const auto& ir : irr_) {
        const int d = ir.dim;
        for (int a = 0; a < order; ++a) {
            for (int b = 0; b < order; ++b) {
                auto ab = detail::matmul(std::vector<cplx>(ir.matrix(a), ir.matrix(a) + d * d), ir.matrix(b), d);
                const cplx* c = ir.matrix(G_.mul(a, b));
                for (int x = 0; x < d * d; ++x)
                    if (std::abs(ab[x] - c[x]) > 1e-12)
                        fail(ErrorKind::NumericalInconsistency, "irrep is not a homomorphism");
            }
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    cplx s = 0;
                    for (int k = 0; k < d; ++k) s += ir.at(a, i, k) * std::conj(ir.at(a, j, k));
                    if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12)
                        fail(ErrorKind::NumericalInconsistency, "irrep is not unitary");
                }
        }
    }
}

inline void RepTheory::build_fusion() {
    const int n = count();
    const int order = G_.order;
    N_.assign(static_cast<std::size_t>(n) * n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cplx s = 0;
                for (int g = 0; g < order; ++g) s += irr_[i].character[g] * irr_[j].character[g] * irr_[k].character[g];
                s /= static_cast<double>(order);
                double r = std::round(s.real());
                if (std::abs(s - r) > 1e-9) fail(ErrorKind::NumericalInconsistency, "character sum is not an integer");
                N_[(static_cast<std::size_t>(i) * n + j) * n + k] = static_cast<int>(r);
            }
    raw_.assign(N_.size(), std::nullopt);
    cyc_.assign(N_.size(), std::nullopt);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (N_[(static_cast<std::size_t>(i) * n + j) * n + k] == 1) raw_[slot(i, j, k)] = project_invariant(i, j, k);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (!raw_[slot(i, j, k)]) continue;
                std::array<std::array<int, 3>, 3> rots{{{i, j, k}, {j, k, i}, {k, i, j}}};
                int best = 0;
                for (int r = 1; r < 3; ++r)
                    if (rots[r] < rots[best]) best = r;
                const Tensor3& rep = *raw_[slot(rots[best][0], rots[best][1], rots[best][2])];
                Tensor3 t;
                t.labels = {i, j, k};
                t.dims = {irr_[i].dim, irr_[j].dim, irr_[k].dim};
                t.v.resize(rep.v.size());
                for (int a = 0; a < t.dims[0]; ++a)
                    for (int b = 0; b < t.dims[1]; ++b)
                        for (int c = 0; c < t.dims[2]; ++c) {
                            std::array<int, 3> idx{a, b, c};
                            // rep legs are (i,j,k) rotated left by best
                            int x = idx[best % 3], y = idx[(best + 1) % 3], z = idx[(best + 2) % 3];
                            t.v[(static_cast<std::size_t>(a) * t.dims[1] + b) * t.dims[2] + c] = rep.at(x, y, z);
                        }
                cyc_[slot(i, j, k)] = std::move(t);
            }
}

inline Tensor3 RepTheory::project_invariant(int i, int j, int k) const {
    const auto &A = irr_[i], &B = irr_[j], &C = irr_[k];
    const int da = A.dim, db = B.dim, dc = C.dim, D = da * db * dc;
    std::vector<cplx> P(static_cast<std::size_t>(D) * D, 0.0);
    for (int g = 0; g < G_.order; ++g)
        for (int r = 0; r < D; ++r) {
            int a = r / (db * dc), b = (r / dc) % db, c = r % dc;
            for (int col = 0; col < D; ++col) {
                int a2 = col / (db * dc), b2 = (col / dc) % db, c2 = col % dc;
                P[r * D + col] += A.at(g, a2, a) * B.at(g, b2, b) * C.at(g, c2, c);
            }
        }
    for (auto& x : P) x /= static_cast<double>(G_.order);
    int best = 0;
    double bestn = -1;
    for (int col = 0; col < D; ++col) {
        double s = 0;
        for (int r = 0; r < D; ++r) s += std::norm(P[r * D + col]);
        if (s > bestn + 1e-12) bestn = s, best = col;
    }
    if (bestn < 1e-12) fail(ErrorKind::NumericalInconsistency, "no invariant vector found");
    Tensor3 t;
    t.labels = {i, j, k};
    t.dims = {da, db, dc};
    t.v.resize(D);
    double nrm = std::sqrt(bestn);
    for (int r = 0; r < D; ++r) t.v[r] = P[r * D + best] / nrm;
    for (int r = 0; r < D; ++r)
        if (std::abs(t.v[r]) > 1e-10) {
            cplx ph = std::conj(t.v[r]) / std::abs(t.v[r]);
            for (auto& x : t.v) x *= ph;
            break;
        }
    for (auto& x : t.v) {
        if (std::abs(x.real()) < 1e-15) x.real(0.0);
        if (std::abs(x.imag()) < 1e-15) x.imag(0.0);
    }
    return t;
}

// F^{ijm}_{kln}: overlap of the m-channel tree I(i,j,m) I(m*,k,l) with the
// n-channel tree I(i,n,l) I(n*,j,k), divided by the n-channel norm.
inline FSymbolTable RepTheory::f_symbols() const {
    const int n = count();
    if (n > kMaxDenseLabels) fail(ErrorKind::BudgetExceeded, "F table limited to 12 irreps");
    FSymbolTable T;
    T.n = n;
    T.dual = dual_;
    T.N = N_;
    T.d_total = G_.order;
    for (const auto& ir : irr_) {
        T.dim.push_back(ir.dim);
        T.v.push_back(std::sqrt(static_cast<double>(ir.dim)));
    }
    T.F.assign(static_cast<std::size_t>(n) * n * n * n * n * n, 0.0);
    auto adm = [&](int a, int b, int c) { return N_[(static_cast<std::size_t>(a) * n + b) * n + c] == 1; };
    std::vector<cplx> X, Y;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m) {
                if (!adm(i, j, m)) continue;
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        if (!adm(dual_[m], k, l)) continue;
                        const Tensor3& A = vertex_tensor(i, j, m);
                        const Tensor3& B = vertex_tensor(dual_[m], k, l);
                        const int di = dim(i), dj = dim(j), dk = dim(k), dl = dim(l);
                        X.assign(static_cast<std::size_t>(di) * dj * dk * dl, 0.0);
                        for (int a = 0; a < di; ++a)
                            for (int b = 0; b < dj; ++b)
                                for (int u = 0; u < dim(m); ++u)
                                    for (int c = 0; c < dk; ++c)
                                        for (int d = 0; d < dl; ++d)
                                            X[((a * dj + b) * dk + c) * dl + d] += A.at(a, b, u) * B.at(u, c, d);
                        for (int nn = 0; nn < n; ++nn) {
                            if (!adm(i, nn, l) || !adm(dual_[nn], j, k)) continue;
                            const Tensor3& C = vertex_tensor(i, nn, l);
                            const Tensor3& D = vertex_tensor(dual_[nn], j, k);
                            Y.assign(X.size(), 0.0);
                            for (int a = 0; a < di; ++a)
                                for (int w = 0; w < dim(nn); ++w)
                                    for (int b = 0; b < dj; ++b)
                                        for (int c = 0; c < dk; ++c)
                                            for (int d = 0; d < dl; ++d)
                                                Y[((a * dj + b) * dk + c) * dl + d] += C.at(a, w, d) * D.at(w, b, c);
                            cplx num = 0;
                            double den = 0;
                            for (std::size_t x = 0; x < X.size(); ++x) {
                                num += std::conj(Y[x]) * X[x];
                                den += std::norm(Y[x]);
                            }
                            if (den < 1e-12) fail(ErrorKind::NumericalInconsistency, "singular channel norm");
                            cplx f = num / den;
                            if (std::abs(f.imag()) < 1e-15) f.imag(0.0);
                            T.at(i, j, m, k, l, nn) = f;
                        }
                    }
            }
    return T;
}

// Max |LHS - RHS| of the pentagon identity over all label assignments.
inline double verify_pentagon(const FSymbolTable& T) {
    const int n = T.n;
    const auto& s = T.dual;
    double worst = 0;
    for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l)
            for (int q = 0; q < n; ++q)
                for (int k = 0; k < n; ++k)
                    for (int p = 0; p < n; ++p)
                        for (int j = 0; j < n; ++j)
                            for (int i = 0; i < n; ++i)
                                for (int ss = 0; ss < n; ++ss)
                                    for (int r = 0; r < n; ++r) {
                                        cplx lhs = 0;
                                        for (int nn = 0; nn < n; ++nn) {
                                            cplx a = T(m, l, q, k, s[p], nn);
                                            if (a == 0.0) continue;
                                            cplx b = T(j, i, p, m, nn, s[ss]);
                                            if (b == 0.0) continue;
                                            lhs += a * b * T(j, s[ss], nn, l, k, s[r]);
                                        }
                                        cplx rhs = T(j, i, p, s[q], k, s[r]) * T(r, i, s[q], m, l, s[ss]);
                                        worst = std::max(worst, std::abs(lhs - rhs));
                                    }
    return worst;
}

} // namespace topoforge
