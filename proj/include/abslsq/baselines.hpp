// SPDX-License-Identifier: Apache-2.0
//
// Reference least-squares solvers standing in for the usual LAPACK drivers:
// Householder QR (no pivoting), column-pivoted Householder QR with a
// numerical rank, and a one-sided Jacobi SVD. The SVD solver doubles as the
// verification oracle for the ABS solvers.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "abslsq/linalg.hpp"
#include "abslsq/solvers.hpp"

namespace abslsq {

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SvdConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Householder QR in LAPACK layout: R on and above the diagonal of `packed`,
/// reflector tails below it (leading 1 implicit), scalar factors in `tau`.
struct QrFactorization {
    DenseMatrix packed;
    std::vector<double> tau;
    /// 1-based column permutation: column k of A*Pi is column perm[k-1] of A.
    std::vector<std::size_t> perm;
    std::size_t rank = 0;

    std::size_t rows() const { return packed.rows(); }
    std::size_t cols() const { return packed.cols(); }

    DenseMatrix r() const;
    /// Thin Q (m x n).
    DenseMatrix q() const;
    /// y <- Q^T y
    void apply_qt(Vector& y) const;
};

/// Householder QR without pivoting; rank is reported as n.
QrFactorization householder_qr(const DenseMatrix& A);
/// Businger-Golub column pivoting; rank = #{k : |R_kk| > rcond |R_11|}.
QrFactorization pivoted_qr(const DenseMatrix& A, double rcond);

struct SvdFactorization {
    DenseMatrix u;              // m x n, columns with sigma = 0 are zero
    std::vector<double> sigma;  // descending
    DenseMatrix v;              // n x n
    std::size_t rank = 0;

    /// sigma_1 / sigma_min (infinite for an exactly singular matrix).
    double condition_number() const;
    /// sigma_1 / sigma_rank.
    double rank_condition() const;
};

/// One-sided Jacobi SVD of an m x n matrix with m >= n.
SvdFactorization jacobi_svd(const DenseMatrix& A, double rcond, std::size_t max_sweeps = 80);

/// Default rcond shared with the ABS tolerance: eps * max(m, n).
double default_rcond(std::size_t m, std::size_t n);

SolveResult qr_least_squares(const DenseMatrix& A, const Vector& b);
SolveResult pivoted_qr_least_squares(const DenseMatrix& A, const Vector& b, double rcond);
SolveResult svd_least_squares(const DenseMatrix& A, const Vector& b, double rcond);

/// Minimum-norm least-squares solution for any shape; wide matrices are
/// factored through their transpose.
Vector min_norm_solution(const DenseMatrix& A, const Vector& b, double rcond);

/// x = sum over retained sigma_k of (u_k^T b / sigma_k) v_k.
Vector svd_solve(const SvdFactorization& f, const Vector& b);

}  // namespace abslsq
