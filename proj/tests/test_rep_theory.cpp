#include <topoforge/rep_theory.hpp>

#include <gtest/gtest.h>

#include <chrono>

using namespace topoforge;

namespace {

class Reps : public ::testing::TestWithParam<const char*> {};

cplx char_sum(const FiniteGroup& G, const RepTheory& R, int i, int j, int k) {
    cplx s = 0;
    for (int g = 0; g < G.order; ++g) s += R.irrep(i).character[g] * R.irrep(j).character[g] * R.irrep(k).character[g];
    return s / static_cast<double>(G.order);
}

} // namespace

TEST_P(Reps, HomomorphismAndUnitarity) {
    RepTheory R(build_group(GetParam()));
    const auto& G = R.group();
    int sum_d2 = 0;
    for (const auto& r : R.irreps()) {
        const int d = r.dim;
        sum_d2 += d * d;
        for (int a = 0; a < G.order; ++a) {
            for (int b = 0; b < G.order; ++b)
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) {
                        cplx s = 0;
                        for (int k = 0; k < d; ++k) s += r.at(a, i, k) * r.at(b, k, j);
                        ASSERT_LT(std::abs(s - r.at(G.mul(a, b), i, j)), 1e-12);
                    }
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    cplx s = 0;
                    for (int k = 0; k < d; ++k) s += r.at(a, i, k) * std::conj(r.at(a, j, k));
                    ASSERT_LT(std::abs(s - (i == j ? 1.0 : 0.0)), 1e-12);
                }
        }
    }
    EXPECT_EQ(sum_d2, G.order);
    EXPECT_EQ(R.count(), static_cast<int>(conjugacy_classes(G).size()));
}

TEST_P(Reps, PeterWeylOrthogonality) {
    RepTheory R(build_group(GetParam()));
    const auto& G = R.group();
    for (int j = 0; j < R.count(); ++j)
        for (int k = 0; k < R.count(); ++k) {
            const auto &A = R.irrep(j), &B = R.irrep(k);
            for (int m = 0; m < A.dim; ++m)
                for (int n = 0; n < A.dim; ++n)
                    for (int p = 0; p < B.dim; ++p)
                        for (int q = 0; q < B.dim; ++q) {
                            cplx s = 0;
                            for (int g = 0; g < G.order; ++g) s += A.at(g, m, n) * std::conj(B.at(g, p, q));
                            double want = (j == k && m == p && n == q) ? double(G.order) / A.dim : 0.0;
                            ASSERT_LT(std::abs(s - want), 1e-10);
                        }
        }
}

TEST_P(Reps, FusionFromCharacters) {
    RepTheory R(build_group(GetParam()));
    const int n = R.count();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // N_{0jk} = delta_{j,k*}
            EXPECT_EQ(R.fusion_coefficient(0, j, i), R.dual(j) == i ? 1 : 0);
            for (int k = 0; k < n; ++k) {
                cplx s = char_sum(R.group(), R, i, j, k);
                EXPECT_NEAR(s.real(), R.fusion_coefficient(i, j, k), 1e-9);
                EXPECT_NEAR(s.imag(), 0, 1e-9);
                EXPECT_EQ(R.fusion_coefficient(i, j, k), R.fusion_coefficient(j, k, i));
                EXPECT_LE(R.fusion_coefficient(i, j, k), 1);
            }
        }
}

TEST_P(Reps, IntertwinersInvariantAndNormalized) {
    RepTheory R(build_group(GetParam()));
    const int n = R.count();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (!R.admissible(i, j, k)) {
                    EXPECT_THROW(R.intertwiner(i, j, k), Error);
                    continue;
                }
                const auto& t = R.intertwiner(i, j, k);
                EXPECT_NEAR(t.norm(), 1.0, 1e-12);
                EXPECT_LT(R.invariance_residual(t), 1e-10);
                EXPECT_LT(R.invariance_residual(R.vertex_tensor(i, j, k)), 1e-10);
            }
}

TEST_P(Reps, Pentagon) {
    RepTheory R(build_group(GetParam()));
    auto t0 = std::chrono::steady_clock::now();
    auto T = R.f_symbols();
    EXPECT_LT(verify_pentagon(T), 1e-9);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 10.0);
}

TEST_P(Reps, FVanishesOffFusion) {
    RepTheory R(build_group(GetParam()));
    auto T = R.f_symbols();
    const int n = T.n;
    const auto& s = T.dual;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int m = 0; m < n; ++m)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l)
                        for (int nn = 0; nn < n; ++nn)
                            if (!R.admissible(i, j, m) || !R.admissible(s[m], k, l) || !R.admissible(i, nn, l) ||
                                !R.admissible(s[nn], j, k)) {
                                ASSERT_EQ(T(i, j, m, k, l, nn), 0.0);
                            }
}

TEST_P(Reps, CorruptedTableBreaksPentagon) {
    RepTheory R(build_group(GetParam()));
    auto T = R.f_symbols();
    std::size_t idx = 0;
    while (std::abs(T.F[idx]) == 0) ++idx;
    T.F[idx] += 0.1;
    EXPECT_GT(verify_pentagon(T), 1e-3);
}

INSTANTIATE_TEST_SUITE_P(Supported, Reps, ::testing::Values("Z2", "Z3", "Z4", "S3", "D4"));

TEST(RepTheory, Dimensions) {
    auto dims = [](const char* g) {
        RepTheory R(build_group(g));
        std::vector<int> d;
        for (const auto& r : R.irreps()) d.push_back(r.dim);
        std::sort(d.begin(), d.end());
        return d;
    };
    EXPECT_EQ(dims("Z2"), (std::vector<int>{1, 1}));
    EXPECT_EQ(dims("S3"), (std::vector<int>{1, 1, 2}));
    EXPECT_EQ(dims("D4"), (std::vector<int>{1, 1, 1, 1, 2}));
}

TEST(RepTheory, Z2Characters) {
    RepTheory R(build_group("Z2"));
    EXPECT_NEAR(std::abs(R.irrep(0).character[1] - 1.0), 0, 1e-15);
    EXPECT_NEAR(std::abs(R.irrep(1).character[1] + 1.0), 0, 1e-15);
}

TEST(RepTheory, AbelianFIsAPhase) {
    for (const char* g : {"Z2", "Z3", "Z4", "Z5"}) {
        RepTheory R(build_group(g));
        auto T = R.f_symbols();
        for (auto f : T.F)
            if (f != 0.0) {
                ASSERT_NEAR(std::abs(f), 1.0, 1e-12) << g;
            }
    }
}

TEST(RepTheory, S3StandardRepSquares) {
    // 2 x 2 = 0 + 1 + 2 in S3
    RepTheory R(build_group("S3"));
    int two = -1;
    for (int j = 0; j < R.count(); ++j)
        if (R.dim(j) == 2) two = j;
    ASSERT_GE(two, 0);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(R.fusion_coefficient(two, two, k), 1);
}
