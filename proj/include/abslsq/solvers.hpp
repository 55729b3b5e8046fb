// SPDX-License-Identifier: Apache-2.0
//
// The named ABS solvers: Huang and modified Huang for compatible systems
// (explicit Abaffian or projection form), implicit QR, and the two
// least-squares Huang variants that sweep the columns of A.

#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "abslsq/linalg.hpp"

namespace abslsq {

enum class SolveStatus { converged, rank_deficient_completed, breakdown, incompatible };

std::string_view to_string(SolveStatus status);

struct SolveResult {
    Vector x;
    std::size_t rank_detected = 0;
    std::size_t steps_taken = 0;
    SolveStatus status = SolveStatus::converged;
    double wall_time = 0.0;  // seconds, solver body only
};

enum class SolverKind {
    huang1,                   // explicit H
    huang2,                   // H = I - P D^{-1} P^T
    modified_huang1,
    modified_huang2,
    implicit_qr,
    ls_huang_stored_l,        // huang6
    ls_huang_no_l,            // huang7
    modified_ls_huang_stored_l,
    modified_ls_huang_no_l,
};

enum class HuangForm { explicit_matrix, projection };

/// Huang (modified = false) or modified Huang, p_i = H_i (H_i a_i), from
/// x_1 = 0. For a compatible system the result is the minimum-norm solution.
/// A row whose d_i = a_i^T p_i is at most tol ||a_i||^2 is skipped when its
/// residual component satisfies |a_i^T x_i - b_i| <= tol ||b||; otherwise
/// the run stops with status incompatible.
SolveResult huang_solve(const DenseMatrix& A, const Vector& b, bool modified, HuangForm form,
                        double tol);

/// Diagnostic output of implicit_qr_solve.
struct ImplicitQrTrace {
    std::vector<Vector> v;  // v_i = A p_i of the accepted steps
    std::vector<Vector> p;
};

/// Implicit QR (v_i = A p_i, z_i = w_i = e_i) for m >= n, at most n steps.
/// Only the (i-1)(n-i+1) live entries of H_i are touched per step. A step
/// with v_i^T v_i <= tol ||A||_F^2 ||p_i||^2 is skipped when s_i = H_i A^T v_i
/// is itself negligible and reported as a breakdown otherwise.
SolveResult implicit_qr_solve(const DenseMatrix& A, const Vector& b, double tol,
                              ImplicitQrTrace* trace = nullptr);

/// Least-squares Huang over the columns of A (m >= n). store_l = true builds
/// the lower-triangular L = A^T P and finishes with back substitution;
/// store_l = false runs the reverse recurrence on f_i instead. Columns with
/// d_i <= tol ||a~_i||^2 are treated as dependent and get x_i = 0.
SolveResult ls_huang_solve(const DenseMatrix& A, const Vector& b, bool modified, bool store_l,
                           double tol);

SolveResult solve(SolverKind kind, const DenseMatrix& A, const Vector& b, double tol);

/// Per-column orthogonality defects of the least-squares Huang sweep. For
/// column i, with P taken from the modified run, reports
/// ||A_{i-1}^T p_plain|| and ||A_{i-1}^T p_modified|| where A_{i-1} holds the
/// previously accepted columns.
struct DirectionDefect {
    std::size_t column;
    double plain;
    double modified;
    double norm_p;
};
std::vector<DirectionDefect> huang_direction_defects(const DenseMatrix& A, double tol);

}  // namespace abslsq
