// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "abslsq/linalg.hpp"
#include "oracle.hpp"

using namespace abslsq;

namespace {
constexpr double eps = std::numeric_limits<double>::epsilon();
}

TEST(Linalg, ContainersRejectEmptyShapes)
{
    EXPECT_THROW(Vector(0), DimensionError);
    EXPECT_THROW(DenseMatrix(0, 3), DimensionError);
    EXPECT_THROW(DenseMatrix(2, 0), DimensionError);
    EXPECT_THROW(LowerTriangular(0), DimensionError);
}

TEST(Linalg, OneBasedCheckedAccess)
{
    DenseMatrix A = DenseMatrix::from_rows({{1, 2}, {3, 4}, {5, 6}});
    EXPECT_EQ(A(1, 1), 1.0);
    EXPECT_EQ(A(3, 2), 6.0);
    EXPECT_THROW(A(0, 1), std::out_of_range);
    EXPECT_THROW(A(4, 1), std::out_of_range);
    EXPECT_THROW(A(1, 3), std::out_of_range);

    // column-major storage
    EXPECT_EQ(A.data()[1], 3.0);
    EXPECT_EQ(A.column(2)[2], 6.0);

    Vector v{7, 8};
    EXPECT_EQ(v(2), 8.0);
    EXPECT_THROW(v(0), std::out_of_range);
    EXPECT_THROW(v(3), std::out_of_range);
}

TEST(Linalg, RaggedRowsRejected)
{
    EXPECT_THROW(DenseMatrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST(Linalg, Matvec)
{
    EXPECT_EQ(matvec(DenseMatrix::identity(2), Vector{3, -1}), (Vector{3, -1}));
    EXPECT_EQ(matvec(DenseMatrix::from_rows({{1, 2}, {3, 4}}), Vector{1, 1}), (Vector{3, 7}));
    EXPECT_EQ(matvec(DenseMatrix(3, 2), Vector{5, -2}), (Vector{0, 0, 0}));
    EXPECT_THROW(matvec(DenseMatrix(3, 2), Vector{1, 2, 3}), DimensionError);
}

TEST(Linalg, MatvecTransposed)
{
    EXPECT_EQ(matvec_transposed(DenseMatrix::identity(2), Vector{3, -1}), (Vector{3, -1}));
    EXPECT_EQ(matvec_transposed(DenseMatrix::from_rows({{1, 2}, {3, 4}}), Vector{1, 1}),
              (Vector{4, 6}));
    EXPECT_THROW(matvec_transposed(DenseMatrix(3, 2), Vector{1, 2}), DimensionError);
}

TEST(Linalg, AdjointIdentity)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const DenseMatrix A = oracle::random_matrix(5, 3, seed);
        const Vector x = oracle::random_vector(3, seed + 100);
        const Vector y = oracle::random_vector(5, seed + 200);
        const double lhs = dot(matvec(A, x), y);
        const double rhs = dot(x, matvec_transposed(A, y));
        EXPECT_LE(std::abs(lhs - rhs), 10 * eps * frobenius_norm(A) * norm2(x) * norm2(y));
    }
}

TEST(Linalg, MatmulAndTranspose)
{
    const DenseMatrix A = DenseMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
    const DenseMatrix At = A.transposed();
    EXPECT_EQ(At.rows(), 3u);
    EXPECT_EQ(At(3, 2), 6.0);
    const DenseMatrix G = matmul(A, At);
    EXPECT_EQ(G, DenseMatrix::from_rows({{14, 32}, {32, 77}}));
    EXPECT_THROW(matmul(A, A), DimensionError);
}

TEST(Linalg, Norms)
{
    EXPECT_DOUBLE_EQ(norm2(Vector{3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(norm_inf(Vector{-7, 4}), 7.0);
    EXPECT_DOUBLE_EQ(frobenius_norm(DenseMatrix::from_rows({{1, 2}, {2, 4}})), 5.0);
    // no overflow in the scaled 2-norm
    EXPECT_DOUBLE_EQ(norm2(Vector{3e200, 4e200}), 5e200);
    EXPECT_DOUBLE_EQ(norm2(Vector{3e-200, 4e-200}), 5e-200);
}

TEST(Linalg, LowerTriangularPacked)
{
    LowerTriangular L(3);
    L.at(1, 1) = 1;
    L.at(2, 1) = 2;
    L.at(3, 1) = 3;
    L.at(2, 2) = 4;
    L.at(3, 2) = 5;
    L.at(3, 3) = 6;
    EXPECT_EQ(L(1, 2), 0.0);
    EXPECT_THROW(L.at(1, 2), std::out_of_range);
    EXPECT_EQ(L.column(2).size(), 2u);
    EXPECT_EQ(L.column(2)[1], 5.0);
    EXPECT_EQ(L.to_dense(), DenseMatrix::from_rows({{1, 0, 0}, {2, 4, 0}, {3, 5, 6}}));
}

TEST(Linalg, BackSubstituteIdentity)
{
    LowerTriangular L(3);
    for (std::size_t i = 1; i <= 3; ++i) {
        L.at(i, i) = 1.0;
    }
    EXPECT_EQ(back_substitute(L, Vector{1, 2, 3}), (Vector{1, 2, 3}));
}

TEST(Linalg, BackSubstituteHandCase)
{
    LowerTriangular L(2);
    L.at(1, 1) = 2;
    L.at(2, 1) = 1;
    L.at(2, 2) = 1;
    EXPECT_EQ(back_substitute(L, Vector{4, 2}), (Vector{1, 2}));
}

TEST(Linalg, BackSubstituteZeroDiagonal)
{
    LowerTriangular L(3);
    L.at(1, 1) = 1;
    L.at(3, 3) = 1;
    try {
        back_substitute(L, Vector{1, 1, 1});
        FAIL() << "expected SingularTriangularError";
    } catch (const SingularTriangularError& e) {
        EXPECT_EQ(e.index(), 2u);
    }
}

TEST(Linalg, BackSubstituteResidualBound)
{
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t n = 12;
        const DenseMatrix R = oracle::random_matrix(n, n, seed);
        LowerTriangular L(n);
        for (std::size_t j = 1; j <= n; ++j) {
            for (std::size_t i = j; i <= n; ++i) {
                L.at(i, j) = R(i, j) + (i == j ? 4.0 : 0.0);
            }
        }
        const Vector c = oracle::random_vector(n, seed + 50);
        const Vector x = back_substitute(L, c);
        const Vector ltx = matvec_transposed(L.to_dense(), x);
        double linf = 0.0;
        for (std::size_t i = 1; i <= n; ++i) {
            double row = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                row += std::abs(L(i, j));
            }
            linf = std::max(linf, row);
        }
        EXPECT_LE(norm_inf(ltx - c), 100 * eps * linf * norm_inf(x));
    }
}

TEST(Linalg, VectorArithmetic)
{
    const Vector x{1, 2};
    const Vector y{3, 5};
    EXPECT_EQ(x + y, (Vector{4, 7}));
    EXPECT_EQ(y - x, (Vector{2, 3}));
    EXPECT_EQ(2.0 * x, (Vector{2, 4}));
    EXPECT_THROW((x + Vector{1, 2, 3}), DimensionError);
    EXPECT_EQ(Vector::unit(3, 2), (Vector{0, 1, 0}));
}
