// SPDX-License-Identifier: Apache-2.0

#include "abslsq/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <fmt/format.h>

namespace abslsq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_system(const DenseMatrix& A, const Vector& b, double tol)
{
    if (b.size() != A.rows()) {
        throw DimensionError(fmt::format("right-hand side has length {}, matrix has {} rows",
                                         b.size(), A.rows()));
    }
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("tolerance must be nonnegative");
    }
}

SolveStatus completed_status(std::size_t rank, std::size_t full)
{
    return rank == full ? SolveStatus::converged : SolveStatus::rank_deficient_completed;
}

// Projection onto the complement of span(P) in the D-metric: y - P D^{-1} P^T y,
// with all coefficients formed from the incoming y.
void project_out(const std::vector<Vector>& P, const std::vector<double>& D, Vector& y,
                 std::vector<double>* coeff_out = nullptr)
{
    std::vector<double> g(P.size());
    for (std::size_t k = 0; k < P.size(); ++k) {
        g[k] = dot(P[k], y);
    }
    for (std::size_t k = 0; k < P.size(); ++k) {
        axpy(-g[k] / D[k], P[k].span(), y.span());
    }
    if (coeff_out != nullptr) {
        *coeff_out = std::move(g);
    }
}

}  // namespace

std::string_view to_string(SolveStatus status)
{
    switch (status) {
    case SolveStatus::converged:
        return "converged";
    case SolveStatus::rank_deficient_completed:
        return "rank_deficient";
    case SolveStatus::breakdown:
        return "breakdown";
    case SolveStatus::incompatible:
        return "incompatible";
    }
    return "unknown";
}

/*------------------------------------------------------------------------------
 *      Huang and modified Huang (row sweep)
 *----------------------------------------------------------------------------*/
SolveResult huang_solve(const DenseMatrix& A, const Vector& b, bool modified, HuangForm form,
                        double tol)
{
    check_system(A, b, tol);
    const auto start = Clock::now();
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    const double norm_b = norm2(b);

    SolveResult result{.x = Vector(n)};
    std::optional<DenseMatrix> H;
    std::vector<Vector> P;
    std::vector<double> D;
    if (form == HuangForm::explicit_matrix) {
        H = DenseMatrix::identity(n);
    }

    for (std::size_t i = 1; i <= m; ++i) {
        const Vector a = A.row_vector(i);
        Vector p = a;
        if (H) {
            p = matvec(*H, a);
            if (modified) {
                p = matvec(*H, p);
            }
        } else {
            project_out(P, D, p);
            if (modified) {
                project_out(P, D, p);
            }
        }
        const double d = dot(a, p);
        const double rho = dot(a, result.x) - b(i);
        ++result.steps_taken;

        if (d <= tol * dot(a, a)) {
            if (std::abs(rho) <= tol * norm_b) {
                continue;
            }
            result.status = SolveStatus::incompatible;
            result.wall_time = seconds_since(start);
            return result;
        }

        axpy(-rho / d, p.span(), result.x.span());
        ++result.rank_detected;

        if (i < m) {
            if (H) {
                double* h = H->data();
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::size_t k = 0; k < n; ++k) {
                        h[j * n + k] -= p[k] * p[j] / d;
                    }
                }
            } else {
                P.push_back(std::move(p));
                D.push_back(d);
            }
        }
    }

    result.status = completed_status(result.rank_detected, std::min(m, n));
    result.wall_time = seconds_since(start);
    return result;
}

/*------------------------------------------------------------------------------
 *      Implicit QR
 *----------------------------------------------------------------------------*/
SolveResult implicit_qr_solve(const DenseMatrix& A, const Vector& b, double tol,
                              ImplicitQrTrace* trace)
{
    check_system(A, b, tol);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (m < n) {
        throw DimensionError(fmt::format("implicit QR needs m >= n, got {}x{}", m, n));
    }
    const auto start = Clock::now();
    const double norm_a = frobenius_norm(A);
    const double norm_b = norm2(b);

    // H_i = [0 0; X_i I]: rows above i are zero (or frozen after a skip) and
    // only the block X_i in rows i..n, columns 1..i-1 carries information.
    DenseMatrix H = DenseMatrix::identity(n);
    double* h = H.data();
    auto hat = [&](std::size_t row, std::size_t col) -> double& { return h[col * n + row]; };

    SolveResult result{.x = Vector(n)};
    Vector r = -1.0 * b;
    std::vector<double> p(n, 0.0);
    std::vector<double> at_v(n, 0.0);
    std::vector<double> s(n, 0.0);
    Vector v(m);

    for (std::size_t k = 0; k < n; ++k) {
        ++result.steps_taken;

        // p_i = H_i^T e_i is row i of H_i
        for (std::size_t c = 0; c < k; ++c) {
            p[c] = hat(k, c);
        }
        p[k] = 1.0;

        std::fill(v.begin(), v.end(), 0.0);
        for (std::size_t c = 0; c <= k; ++c) {
            if (p[c] != 0.0) {
                axpy(p[c], A.column(c + 1), v.span());
            }
        }
        const double pivot = dot(v, v);
        const double norm_p2 = dot(std::span<const double>(p.data(), k + 1),
                                   std::span<const double>(p.data(), k + 1));

        for (std::size_t j = 0; j < n; ++j) {
            at_v[j] = dot(A.column(j + 1), v.span());
        }
        double norm_s2 = 0.0;
        for (std::size_t row = k; row < n; ++row) {
            double acc = at_v[row];
            for (std::size_t c = 0; c < k; ++c) {
                acc += hat(row, c) * at_v[c];
            }
            s[row] = acc;
            norm_s2 += acc * acc;
        }
        const double r_v = dot(r, v);

        if (pivot <= tol * norm_a * norm_a * norm_p2) {
            const double norm_v = std::sqrt(pivot);
            if (std::sqrt(norm_s2) <= tol * norm_a * norm_v) {
                if (std::abs(r_v) <= tol * norm_b * norm_v) {
                    continue;  // row k of H stays frozen, x_k stays 0
                }
                result.status = SolveStatus::incompatible;
            } else {
                result.status = SolveStatus::breakdown;
            }
            result.wall_time = seconds_since(start);
            return result;
        }

        const double alpha = r_v / pivot;
        for (std::size_t c = 0; c <= k; ++c) {
            result.x[c] -= alpha * p[c];
        }
        axpy(-alpha, v.span(), r.span());

        for (std::size_t c = 0; c <= k; ++c) {
            const double pc = p[c] / pivot;
            if (pc == 0.0) {
                continue;
            }
            for (std::size_t row = k + 1; row < n; ++row) {
                hat(row, c) -= s[row] * pc;
            }
            hat(k, c) = 0.0;
        }
        ++result.rank_detected;

        if (trace != nullptr) {
            trace->v.push_back(v);
            Vector pv(n);
            std::copy(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k) + 1, pv.begin());
            trace->p.push_back(std::move(pv));
        }
    }

    result.status = completed_status(result.rank_detected, n);
    result.wall_time = seconds_since(start);
    return result;
}

/*------------------------------------------------------------------------------
 *      Least-squares Huang (column sweep)
 *----------------------------------------------------------------------------*/
SolveResult ls_huang_solve(const DenseMatrix& A, const Vector& b, bool modified, bool store_l,
                           double tol)
{
    check_system(A, b, tol);
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    if (m < n) {
        throw DimensionError(fmt::format("least-squares Huang needs m >= n, got {}x{}", m, n));
    }
    const auto start = Clock::now();

    std::vector<Vector> P;
    std::vector<double> D;
    std::vector<std::size_t> accepted;      // 1-based column indices
    std::vector<std::vector<double>> l_rows;  // g_i = P_{i-1}^T a~_i
    std::vector<double> b_tilde;

    SolveResult result{.x = Vector(n)};
    for (std::size_t i = 1; i <= n; ++i) {
        const auto col = A.column(i);
        Vector p(std::vector<double>(col.begin(), col.end()));
        std::vector<double> g;
        project_out(P, D, p, &g);
        if (modified) {
            project_out(P, D, p);
        }
        const double d = dot(col, p.span());
        ++result.steps_taken;
        if (d <= tol * dot(col, col)) {
            continue;
        }
        if (store_l) {
            l_rows.push_back(std::move(g));
            b_tilde.push_back(dot(b, p));
        }
        accepted.push_back(i);
        P.push_back(std::move(p));
        D.push_back(d);
    }

    const std::size_t rank = accepted.size();
    result.rank_detected = rank;
    if (rank > 0) {
        if (store_l) {
            LowerTriangular L(rank);
            for (std::size_t k = 1; k <= rank; ++k) {
                L.at(k, k) = D[k - 1];
                for (std::size_t j = 1; j < k; ++j) {
                    L.at(k, j) = l_rows[k - 1][j - 1];
                }
            }
            const Vector xs = back_substitute(L, Vector(b_tilde));
            for (std::size_t k = 0; k < rank; ++k) {
                result.x(accepted[k]) = xs[k];
            }
        } else {
            Vector f = b;
            for (std::size_t k = rank; k >= 1; --k) {
                const double xk = dot(P[k - 1], f) / D[k - 1];
                result.x(accepted[k - 1]) = xk;
                if (k > 1) {
                    axpy(-xk, A.column(accepted[k - 1]), f.span());
                }
            }
        }
    }

    result.status = completed_status(rank, n);
    result.wall_time = seconds_since(start);
    return result;
}

std::vector<DirectionDefect> huang_direction_defects(const DenseMatrix& A, double tol)
{
    const std::size_t n = A.cols();
    std::vector<Vector> P;
    std::vector<double> D;
    std::vector<std::size_t> accepted;
    std::vector<DirectionDefect> out;

    auto defect = [&](const Vector& p) {
        double ss = 0.0;
        for (std::size_t j : accepted) {
            const double t = dot(A.column(j), p.span());
            ss += t * t;
        }
        return std::sqrt(ss);
    };

    for (std::size_t i = 1; i <= n; ++i) {
        const auto col = A.column(i);
        Vector plain(std::vector<double>(col.begin(), col.end()));
        project_out(P, D, plain);
        Vector mod = plain;
        project_out(P, D, mod);
        if (!accepted.empty()) {
            out.push_back({.column = i, .plain = defect(plain), .modified = defect(mod),
                           .norm_p = norm2(mod)});
        }
        const double d = dot(col, mod.span());
        if (d <= tol * dot(col, col)) {
            continue;
        }
        accepted.push_back(i);
        P.push_back(std::move(mod));
        D.push_back(d);
    }
    return out;
}

SolveResult solve(SolverKind kind, const DenseMatrix& A, const Vector& b, double tol)
{
    switch (kind) {
    case SolverKind::huang1:
        return huang_solve(A, b, false, HuangForm::explicit_matrix, tol);
    case SolverKind::huang2:
        return huang_solve(A, b, false, HuangForm::projection, tol);
    case SolverKind::modified_huang1:
        return huang_solve(A, b, true, HuangForm::explicit_matrix, tol);
    case SolverKind::modified_huang2:
        return huang_solve(A, b, true, HuangForm::projection, tol);
    case SolverKind::implicit_qr:
        return implicit_qr_solve(A, b, tol);
    case SolverKind::ls_huang_stored_l:
        return ls_huang_solve(A, b, false, true, tol);
    case SolverKind::ls_huang_no_l:
        return ls_huang_solve(A, b, false, false, tol);
    case SolverKind::modified_ls_huang_stored_l:
        return ls_huang_solve(A, b, true, true, tol);
    case SolverKind::modified_ls_huang_no_l:
        return ls_huang_solve(A, b, true, false, tol);
    }
    throw std::invalid_argument("unknown solver kind");
}

}  // namespace abslsq
