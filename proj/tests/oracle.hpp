// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference solvers in long double. They share no code with the
// library beyond the container types.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "abslsq/linalg.hpp"
#include "abslsq/testgen.hpp"

namespace oracle {

using LMat = std::vector<std::vector<long double>>;  // row-major
using LVec = std::vector<long double>;

inline LMat to_long(const abslsq::DenseMatrix& A)
{
    LMat M(A.rows(), LVec(A.cols()));
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
            M[i][j] = A(i + 1, j + 1);
        }
    }
    return M;
}

inline LVec to_long(const abslsq::Vector& v)
{
    return LVec(v.begin(), v.end());
}

inline abslsq::Vector to_vector(const LVec& v)
{
    abslsq::Vector out(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        out[k] = static_cast<double>(v[k]);
    }
    return out;
}

// Gaussian elimination with partial pivoting.
inline LVec lu_solve(LMat M, LVec rhs)
{
    const std::size_t n = M.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::fabs(M[i][k]) > std::fabs(M[piv][k])) {
                piv = i;
            }
        }
        if (M[piv][k] == 0.0L) {
            throw std::runtime_error("oracle: singular matrix");
        }
        std::swap(M[k], M[piv]);
        std::swap(rhs[k], rhs[piv]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double f = M[i][k] / M[k][k];
            for (std::size_t j = k; j < n; ++j) {
                M[i][j] -= f * M[k][j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    LVec x(n);
    for (std::size_t k = n; k-- > 0;) {
        long double s = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            s -= M[k][j] * x[j];
        }
        x[k] = s / M[k][k];
    }
    return x;
}

inline abslsq::Vector solve_square(const abslsq::DenseMatrix& A, const abslsq::Vector& b)
{
    return to_vector(lu_solve(to_long(A), to_long(b)));
}

// Least squares through the normal equations A^T A x = A^T b.
inline abslsq::Vector least_squares(const abslsq::DenseMatrix& A, const abslsq::Vector& b)
{
    const LMat M = to_long(A);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    LMat N(n, LVec(n, 0.0L));
    LVec c(n, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            c[j] += M[i][j] * b[i];
            for (std::size_t k = 0; k < n; ++k) {
                N[j][k] += M[i][j] * M[i][k];
            }
        }
    }
    return to_vector(lu_solve(N, c));
}

// Minimum-norm solution of a full-row-rank system: x = A^T (A A^T)^{-1} b.
inline abslsq::Vector min_norm(const abslsq::DenseMatrix& A, const abslsq::Vector& b)
{
    const LMat M = to_long(A);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    LMat G(m, LVec(m, 0.0L));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                G[i][k] += M[i][j] * M[k][j];
            }
        }
    }
    const LVec y = lu_solve(G, to_long(b));
    LVec x(n, 0.0L);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            x[j] += M[i][j] * y[i];
        }
    }
    return to_vector(x);
}

inline abslsq::DenseMatrix random_matrix(std::size_t m, std::size_t n, std::uint64_t seed,
                                         double lo = -1.0, double hi = 1.0)
{
    abslsq::Rng rng(seed);
    abslsq::DenseMatrix A(m, n);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= m; ++i) {
            A(i, j) = rng.uniform_real(lo, hi);
        }
    }
    return A;
}

inline abslsq::Vector random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0,
                                    double hi = 1.0)
{
    abslsq::Rng rng(seed);
    abslsq::Vector v(n);
    for (double& x : v) {
        x = rng.uniform_real(lo, hi);
    }
    return v;
}

inline double rel_diff(const abslsq::Vector& x, const abslsq::Vector& ref)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        num = std::max(num, std::abs(x[k] - ref[k]));
        den = std::max(den, std::abs(ref[k]));
    }
    return den > 0.0 ? num / den : num;
}

}  // namespace oracle
