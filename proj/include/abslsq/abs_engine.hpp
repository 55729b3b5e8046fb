// SPDX-License-Identifier: Apache-2.0
//
// Generic scaled ABS iteration. Given choice functions for the scaling
// vector v_i, the search parameter z_i and the update parameter w_i, each
// step either accepts an equation (moves x along p_i = H_i^T z_i and rank-one
// updates the Abaffian H_i), skips it as dependent, or stops.
//
// The named solvers in solvers.hpp are direct specializations; this engine is
// the reference route they are checked against.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "abslsq/linalg.hpp"

namespace abslsq {

/// Abaffian held as an explicit n x n matrix.
struct ExplicitAbaffian {
    DenseMatrix h;
};

/// Abaffian held as H = I - P D^{-1} P^T, with P = [p_1 .. p_k] and
/// D = diag(d_1 .. d_k). Only meaningful for Huang-type parameter choices.
struct ProjectionAbaffian {
    std::size_t order = 0;
    std::vector<Vector> p;
    std::vector<double> d;
};

using AbaffianRep = std::variant<ExplicitAbaffian, ProjectionAbaffian>;

enum class Representation { explicit_matrix, projection };

Vector apply_abaffian(const AbaffianRep& h, const Vector& y);
Vector apply_abaffian_transposed(const AbaffianRep& h, const Vector& y);
DenseMatrix to_dense(const AbaffianRep& h);

struct StepRecord {
    std::size_t index;  // equation index i of the accepted step
    Vector p;
    Vector v;
    Vector w;
    double d;           // pivot w^T H A^T v
};

struct AbsState {
    std::size_t iter = 1;
    Vector x;
    AbaffianRep abaffian;
    /// r_i = A x_i - b; absent for basic-class runs.
    std::optional<Vector> residual;
    std::size_t rank_detected = 0;
    std::optional<std::vector<StepRecord>> history;
};

struct AbsParameters {
    using VChoice = std::function<Vector(const AbsState&, const DenseMatrix&, const Vector&)>;
    using Choice = std::function<Vector(const AbsState&, const DenseMatrix&)>;

    /// Empty selects the basic class, v_i = e_i, where only the i-th residual
    /// component is ever formed.
    VChoice choose_v;
    Choice choose_z;
    Choice choose_w;
    DenseMatrix h1;
    Vector x1;
    Representation representation = Representation::explicit_matrix;

    bool basic_class() const { return !choose_v; }
};

/// Huang parameters: H_1 = I, v_i = e_i, z_i = w_i = a_i, x_1 = 0.
AbsParameters huang_parameters(std::size_t n, Representation rep = Representation::explicit_matrix);
/// Implicit QR parameters: H_1 = I, v_i = A H_i^T e_i, z_i = w_i = e_i, x_1 = 0.
AbsParameters implicit_qr_parameters(std::size_t n);

enum class StepKind { accepted, skipped, incompatible, solved };

struct StepOutcome {
    StepKind kind;
    AbsState state;
};

enum class TerminationStatus { solved, completed, incompatible };

/// Pivot w_i^T H_i A^T v_i vanished while s_i = H_i A^T v_i did not.
class BreakdownError : public std::runtime_error {
public:
    BreakdownError(std::size_t step, const std::string& what)
        : std::runtime_error(what), step_(step)
    {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Machine epsilon times max(m, n).
double default_tolerance(std::size_t m, std::size_t n);

AbsState initial_state(const DenseMatrix& A, const Vector& b, const AbsParameters& params,
                       bool keep_history = false);

/// One pass of steps (B)-(E). Zero tests: s_i is zero when
/// ||s_i|| <= tol ||A||_F ||v_i||, r_i^T v_i is zero when
/// |r_i^T v_i| <= tol ||b|| ||v_i||, and the pivot is zero when
/// |w_i^T s_i| <= tol ||w_i|| ||s_i||. Throws BreakdownError on a vanishing
/// pivot with s_i != 0.
StepOutcome abs_step(AbsState state, const DenseMatrix& A, const Vector& b,
                     const AbsParameters& params, double tol);

/// Runs abs_step until solved, incompatible, or max_steps steps (or all m
/// equations) have been processed. max_steps = 0 means m.
std::pair<AbsState, TerminationStatus> run_abs(const DenseMatrix& A, const Vector& b,
                                               const AbsParameters& params, double tol,
                                               std::size_t max_steps = 0,
                                               bool keep_history = false);

/// x_i + H_i^T q: a solution of the scaled subsystem processed so far.
Vector general_solution_point(const AbsState& state, const Vector& q);

/// Largest strictly-upper entry of V^T A P over the accepted steps; the
/// implicit factorization makes this lower triangular. Throws if history was
/// not kept or a diagonal entry is zero.
double implicit_factorization_check(const AbsState& state, const DenseMatrix& A);

}  // namespace abslsq
