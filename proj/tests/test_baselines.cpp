// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "abslsq/baselines.hpp"
#include "abslsq/testgen.hpp"
#include "oracle.hpp"

using namespace abslsq;

namespace {

DenseMatrix diag_matrix(const DenseMatrix& U, const std::vector<double>& s, const DenseMatrix& V)
{
    DenseMatrix US = U;
    for (std::size_t j = 1; j <= s.size(); ++j) {
        for (double& x : US.column(j)) {
            x *= s[j - 1];
        }
    }
    return matmul(US, V.transposed());
}

double orthogonality_defect(const DenseMatrix& Q)
{
    return max_abs(matmul(Q.transposed(), Q) - DenseMatrix::identity(Q.cols()));
}

const DenseMatrix kRankOne = DenseMatrix::from_rows({{1, 2}, {2, 4}, {3, 6}});

}  // namespace

TEST(Qr, SmallExamples)
{
    EXPECT_LE(norm_inf(qr_least_squares(DenseMatrix::identity(3), Vector{1, 2, 3}).x - Vector{1, 2, 3}),
              1e-15);
    const SolveResult r = qr_least_squares(DenseMatrix::from_rows({{1}, {1}}), Vector{0, 2});
    EXPECT_NEAR(r.x(1), 1.0, 1e-15);
    EXPECT_EQ(r.rank_detected, 1u);
}

TEST(Qr, ZeroColumnIsSingular)
{
    const DenseMatrix A = DenseMatrix::from_rows({{1, 0}, {2, 0}, {3, 0}});
    EXPECT_THROW(qr_least_squares(A, Vector{1, 2, 3}), SingularMatrixError);
}

TEST(Qr, FactorsReproduceMatrix)
{
    const DenseMatrix A = oracle::random_matrix(9, 4, 3);
    const QrFactorization f = householder_qr(A);
    EXPECT_LE(orthogonality_defect(f.q()), 1e-12);
    EXPECT_LE(max_abs(matmul(f.q(), f.r()) - A), 1e-13);
    EXPECT_EQ(f.rank, 4u);
}

TEST(Qr, RandomMatchesOracle)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const DenseMatrix A = oracle::random_matrix(9, 4, seed);
        const Vector b = oracle::random_vector(9, seed + 20);
        const Vector ref = oracle::least_squares(A, b);
        EXPECT_LE(oracle::rel_diff(qr_least_squares(A, b).x, ref), 1e-9);
        EXPECT_LE(oracle::rel_diff(svd_least_squares(A, b, default_rcond(9, 4)).x, ref), 1e-9);
        EXPECT_LE(oracle::rel_diff(pivoted_qr_least_squares(A, b, default_rcond(9, 4)).x, ref), 1e-9);
    }
}

TEST(PivotedQr, RankOne)
{
    const QrFactorization f = pivoted_qr(kRankOne, default_rcond(3, 2));
    EXPECT_EQ(f.rank, 1u);
    EXPECT_EQ(f.perm.front(), 2u);  // larger column first
    const SolveResult r = pivoted_qr_least_squares(kRankOne, Vector{1, 2, 3}, default_rcond(3, 2));
    EXPECT_EQ(r.rank_detected, 1u);
    EXPECT_EQ(r.status, SolveStatus::rank_deficient_completed);
    // basic solution: the non-pivot unknown stays zero
    EXPECT_EQ(r.x(1), 0.0);
    EXPECT_NEAR(r.x(2), 0.5, 1e-15);
}

TEST(PivotedQr, Idf2RankThree)
{
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{40, 30}, {105, 95}}) {
        Rng rng(1);
        const DenseMatrix A = generate_matrix(Family::IDF2, m, n, rng);
        EXPECT_EQ(pivoted_qr(A, default_rcond(m, n)).rank, 3u);
    }
}

TEST(PivotedQr, FullRankMatchesQr)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DenseMatrix A = oracle::random_matrix(15, 6, seed);
        const Vector b = oracle::random_vector(15, seed + 7);
        const SolveResult g = pivoted_qr_least_squares(A, b, default_rcond(15, 6));
        EXPECT_EQ(g.rank_detected, 6u);
        EXPECT_LE(oracle::rel_diff(g.x, qr_least_squares(A, b).x), 1e-10);
    }
}

TEST(Svd, DiagonalExample)
{
    const DenseMatrix A = DenseMatrix::from_rows({{3, 0}, {0, 1}, {0, 0}});
    const SvdFactorization f = jacobi_svd(A, default_rcond(3, 2));
    ASSERT_EQ(f.sigma.size(), 2u);
    EXPECT_DOUBLE_EQ(f.sigma[0], 3.0);
    EXPECT_DOUBLE_EQ(f.sigma[1], 1.0);
    EXPECT_DOUBLE_EQ(f.condition_number(), 3.0);
    EXPECT_EQ(f.rank, 2u);
}

TEST(Svd, RankOneMinimumNorm)
{
    // A = c r^T with c = (1,2,3), r = (1,2): A^+ b = r c^T b / (|c|^2 |r|^2)
    const Vector b{1, -1, 2};
    const double ctb = 1 - 2 + 6;
    const Vector expect{ctb / 70.0, 2 * ctb / 70.0};
    const SolveResult r = svd_least_squares(kRankOne, b, default_rcond(3, 2));
    EXPECT_EQ(r.rank_detected, 1u);
    EXPECT_LE(norm_inf(r.x - expect), 1e-15);
    EXPECT_TRUE(std::isinf(jacobi_svd(kRankOne, default_rcond(3, 2)).condition_number()));
}

TEST(Svd, ReconstructionAndOrthogonality)
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const DenseMatrix A = oracle::random_matrix(8, 5, seed);
        const SvdFactorization f = jacobi_svd(A, default_rcond(8, 5));
        EXPECT_LE(frobenius_norm(diag_matrix(f.u, f.sigma, f.v) - A), 1e-10 * frobenius_norm(A));
        EXPECT_LE(orthogonality_defect(f.v), 1e-10);
        EXPECT_LE(orthogonality_defect(f.u), 1e-10);
        EXPECT_TRUE(std::is_sorted(f.sigma.rbegin(), f.sigma.rend()));
    }
}

TEST(Svd, Idf2RankThree)
{
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{40, 30}, {105, 95}, {12, 5}}) {
        Rng rng(1);
        const DenseMatrix A = generate_matrix(Family::IDF2, m, n, rng);
        EXPECT_EQ(jacobi_svd(A, default_rcond(m, n)).rank, 3u);
    }
}

TEST(Svd, PivotedRankAgreesAcrossFamilies)
{
    for (Family f : {Family::IR500, Family::RR100, Family::IDF1, Family::IDF2, Family::IDF3, Family::IR50}) {
        const ProblemInstance p = generate_problem({.family = f, .m = 50, .n = 30, .seed = 2});
        const double rc = default_rcond(50, 30);
        EXPECT_EQ(pivoted_qr(p.a, rc).rank, jacobi_svd(p.a, rc).rank) << to_string(f);
    }
}

TEST(Svd, WideMinimumNorm)
{
    const DenseMatrix A = oracle::random_matrix(5, 12, 4);
    const Vector b = oracle::random_vector(5, 5);
    EXPECT_LE(oracle::rel_diff(min_norm_solution(A, b, default_rcond(5, 12)), oracle::min_norm(A, b)),
              1e-12);
}

TEST(Baselines, ShapeChecks)
{
    EXPECT_THROW(jacobi_svd(DenseMatrix(2, 3), 1e-15), DimensionError);
    EXPECT_THROW(householder_qr(DenseMatrix(2, 3)), DimensionError);
    EXPECT_THROW(qr_least_squares(DenseMatrix::identity(2), Vector{1, 2, 3}), DimensionError);
}
