// SPDX-License-Identifier: Apache-2.0

#include "abslsq/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

namespace abslsq {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kEps = std::numeric_limits<double>::epsilon();

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_tall(const DenseMatrix& A, const char* who)
{
    if (A.rows() < A.cols()) {
        throw DimensionError(fmt::format("{} needs m >= n, got {}x{}", who, A.rows(), A.cols()));
    }
}

void require_rhs(const DenseMatrix& A, const Vector& b)
{
    if (b.size() != A.rows()) {
        throw DimensionError(fmt::format("right-hand side has length {}, matrix has {} rows",
                                         b.size(), A.rows()));
    }
}

// Generates the reflector for packed(k.., k) in place and applies it to the
// trailing columns. Returns tau.
double reflect_column(DenseMatrix& W, std::size_t k)
{
    const std::size_t m = W.rows();
    const std::size_t n = W.cols();
    auto x = W.column(k + 1).subspan(k);
    const double alpha = x[0];
    const double xnorm = norm2(x.subspan(1));
    if (xnorm == 0.0) {
        return 0.0;
    }
    const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
    const double tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < x.size(); ++i) {
        x[i] *= scale;
    }
    x[0] = beta;

    for (std::size_t j = k + 1; j < n; ++j) {
        auto y = W.column(j + 1).subspan(k);
        double w = y[0];
        for (std::size_t i = 1; i < m - k; ++i) {
            w += x[i] * y[i];
        }
        w *= tau;
        y[0] -= w;
        for (std::size_t i = 1; i < m - k; ++i) {
            y[i] -= w * x[i];
        }
    }
    return tau;
}

// Solves R(1:r,1:r) z = y(1:r).
std::vector<double> solve_upper(const DenseMatrix& packed, const Vector& y, std::size_t r)
{
    std::vector<double> z(r);
    for (std::size_t k = r; k >= 1; --k) {
        double s = y(k);
        for (std::size_t j = k + 1; j <= r; ++j) {
            s -= packed(k, j) * z[j - 1];
        }
        z[k - 1] = s / packed(k, k);
    }
    return z;
}

}  // namespace

double default_rcond(std::size_t m, std::size_t n)
{
    return kEps * static_cast<double>(std::max(m, n));
}

/*------------------------------------------------------------------------------
 *      QR
 *----------------------------------------------------------------------------*/
DenseMatrix QrFactorization::r() const
{
    const std::size_t n = cols();
    DenseMatrix R(n, n);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 1; i <= j; ++i) {
            R(i, j) = packed(i, j);
        }
    }
    return R;
}

void QrFactorization::apply_qt(Vector& y) const
{
    const std::size_t m = rows();
    if (y.size() != m) {
        throw DimensionError("apply_qt: vector length does not match the factorization");
    }
    for (std::size_t k = 0; k < cols(); ++k) {
        if (tau[k] == 0.0) {
            continue;
        }
        auto v = packed.column(k + 1);
        double w = y[k];
        for (std::size_t i = k + 1; i < m; ++i) {
            w += v[i] * y[i];
        }
        w *= tau[k];
        y[k] -= w;
        for (std::size_t i = k + 1; i < m; ++i) {
            y[i] -= w * v[i];
        }
    }
}

DenseMatrix QrFactorization::q() const
{
    const std::size_t m = rows();
    const std::size_t n = cols();
    DenseMatrix Q(m, n);
    for (std::size_t j = 1; j <= n; ++j) {
        Q(j, j) = 1.0;
    }
    // Q = H_1 ... H_n applied to the leading columns of I, innermost first.
    for (std::size_t kk = n; kk >= 1; --kk) {
        const std::size_t k = kk - 1;
        if (tau[k] == 0.0) {
            continue;
        }
        auto v = packed.column(k + 1);
        for (std::size_t j = 1; j <= n; ++j) {
            auto qj = Q.column(j);
            double w = qj[k];
            for (std::size_t i = k + 1; i < m; ++i) {
                w += v[i] * qj[i];
            }
            w *= tau[k];
            qj[k] -= w;
            for (std::size_t i = k + 1; i < m; ++i) {
                qj[i] -= w * v[i];
            }
        }
    }
    return Q;
}

QrFactorization householder_qr(const DenseMatrix& A)
{
    require_tall(A, "householder_qr");
    const std::size_t n = A.cols();
    QrFactorization f{.packed = A, .tau = std::vector<double>(n), .perm = {}, .rank = n};
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{1});
    for (std::size_t k = 0; k < n; ++k) {
        f.tau[k] = reflect_column(f.packed, k);
    }
    return f;
}

QrFactorization pivoted_qr(const DenseMatrix& A, double rcond)
{
    require_tall(A, "pivoted_qr");
    if (!(rcond >= 0.0)) {
        throw std::invalid_argument("rcond must be nonnegative");
    }
    const std::size_t m = A.rows();
    const std::size_t n = A.cols();
    QrFactorization f{.packed = A, .tau = std::vector<double>(n), .perm = {}, .rank = 0};
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{1});

    // partial column norms with the usual downdating safeguard
    std::vector<double> vn1(n);
    std::vector<double> vn2(n);
    for (std::size_t j = 0; j < n; ++j) {
        vn1[j] = vn2[j] = norm2(A.column(j + 1));
    }
    const double tol3z = std::sqrt(kEps);

    for (std::size_t k = 0; k < n; ++k) {
        const auto best = std::max_element(vn1.begin() + static_cast<std::ptrdiff_t>(k), vn1.end());
        const std::size_t pvt = static_cast<std::size_t>(best - vn1.begin());
        if (pvt != k) {
            auto a = f.packed.column(pvt + 1);
            auto b = f.packed.column(k + 1);
            std::swap_ranges(a.begin(), a.end(), b.begin());
            std::swap(f.perm[pvt], f.perm[k]);
            std::swap(vn1[pvt], vn1[k]);
            std::swap(vn2[pvt], vn2[k]);
        }
        f.tau[k] = reflect_column(f.packed, k);

        for (std::size_t j = k + 1; j < n; ++j) {
            if (vn1[j] == 0.0) {
                continue;
            }
            double temp = std::abs(f.packed(k + 1, j + 1)) / vn1[j];
            temp = std::max(0.0, 1.0 - temp * temp);
            const double ratio = vn1[j] / vn2[j];
            if (temp * ratio * ratio <= tol3z) {
                vn1[j] = (k + 1 < m) ? norm2(f.packed.column(j + 1).subspan(k + 1)) : 0.0;
                vn2[j] = vn1[j];
            } else {
                vn1[j] *= std::sqrt(temp);
            }
        }
    }

    const double r11 = std::abs(f.packed(1, 1));
    while (f.rank < n && r11 > 0.0 &&
           std::abs(f.packed(f.rank + 1, f.rank + 1)) > rcond * r11) {
        ++f.rank;
    }
    return f;
}

SolveResult qr_least_squares(const DenseMatrix& A, const Vector& b)
{
    require_rhs(A, b);
    const auto start = Clock::now();
    const QrFactorization f = householder_qr(A);
    const std::size_t n = A.cols();
    for (std::size_t k = 1; k <= n; ++k) {
        if (f.packed(k, k) == 0.0) {
            throw SingularMatrixError(fmt::format("qr_least_squares: R({0},{0}) is exactly zero", k));
        }
    }
    Vector y = b;
    f.apply_qt(y);
    SolveResult result{.x = Vector(solve_upper(f.packed, y, n)), .rank_detected = n,
                       .steps_taken = n, .status = SolveStatus::converged};
    result.wall_time = seconds_since(start);
    return result;
}

SolveResult pivoted_qr_least_squares(const DenseMatrix& A, const Vector& b, double rcond)
{
    require_rhs(A, b);
    const auto start = Clock::now();
    const QrFactorization f = pivoted_qr(A, rcond);
    const std::size_t n = A.cols();
    Vector y = b;
    f.apply_qt(y);
    SolveResult result{.x = Vector(n), .rank_detected = f.rank, .steps_taken = n};
    // basic solution: free variables of the truncated problem are zero
    const auto z = solve_upper(f.packed, y, f.rank);
    for (std::size_t k = 0; k < f.rank; ++k) {
        result.x(f.perm[k]) = z[k];
    }
    result.status = f.rank == n ? SolveStatus::converged : SolveStatus::rank_deficient_completed;
    result.wall_time = seconds_since(start);
    return result;
}

/*------------------------------------------------------------------------------
 *      SVD
 *----------------------------------------------------------------------------*/
double SvdFactorization::condition_number() const
{
    const double smin = sigma.back();
    if (smin == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return sigma.front() / smin;
}

double SvdFactorization::rank_condition() const
{
    if (rank == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return sigma.front() / sigma[rank - 1];
}

SvdFactorization jacobi_svd(const DenseMatrix& A, double rcond, std::size_t max_sweeps)
{
    require_tall(A, "jacobi_svd");
    const std::size_t n = A.cols();
    DenseMatrix U = A;
    DenseMatrix V = DenseMatrix::identity(n);

    auto rotate = [](std::span<double> x, std::span<double> y, double c, double s) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            const double yi = y[i];
            x[i] = c * xi - s * yi;
            y[i] = s * xi + c * yi;
        }
    };

    bool converged = false;
    for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 1; p < n; ++p) {
            for (std::size_t q = p + 1; q <= n; ++q) {
                auto up = U.column(p);
                auto uq = U.column(q);
                const double alpha = dot(up, up);
                const double beta = dot(uq, uq);
                const double gamma = dot(up, uq);
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) {
                    continue;
                }
                converged = false;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                double t;
                if (std::abs(zeta) > 1e150) {
                    t = 0.5 / zeta;
                } else {
                    t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate(up, uq, c, s);
                rotate(V.column(p), V.column(q), c, s);
            }
        }
    }
    if (!converged) {
        throw SvdConvergenceError(
            fmt::format("jacobi_svd: no convergence after {} sweeps", max_sweeps));
    }

    std::vector<double> sig(n);
    for (std::size_t j = 0; j < n; ++j) {
        sig[j] = norm2(U.column(j + 1));
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sig[a] > sig[b]; });

    SvdFactorization f{.u = DenseMatrix(A.rows(), n), .sigma = std::vector<double>(n),
                       .v = DenseMatrix(n, n), .rank = 0};
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = order[k];
        f.sigma[k] = sig[src];
        auto from = U.column(src + 1);
        auto to = f.u.column(k + 1);
        if (sig[src] > 0.0) {
            for (std::size_t i = 0; i < from.size(); ++i) {
                to[i] = from[i] / sig[src];
            }
        }
        auto vfrom = V.column(src + 1);
        std::copy(vfrom.begin(), vfrom.end(), f.v.column(k + 1).begin());
    }
    while (f.rank < n && f.sigma[0] > 0.0 && f.sigma[f.rank] > rcond * f.sigma[0]) {
        ++f.rank;
    }
    return f;
}

Vector svd_solve(const SvdFactorization& f, const Vector& b)
{
    if (b.size() != f.u.rows()) {
        throw DimensionError("svd_solve: right-hand side does not match the factorization");
    }
    Vector x(f.v.rows());
    for (std::size_t k = 1; k <= f.rank; ++k) {
        const double coeff = dot(f.u.column(k), b.span()) / f.sigma[k - 1];
        axpy(coeff, f.v.column(k), x.span());
    }
    return x;
}

SolveResult svd_least_squares(const DenseMatrix& A, const Vector& b, double rcond)
{
    require_rhs(A, b);
    if (!(rcond >= 0.0)) {
        throw std::invalid_argument("rcond must be nonnegative");
    }
    const auto start = Clock::now();
    const SvdFactorization f = jacobi_svd(A, rcond);
    SolveResult result{.x = svd_solve(f, b), .rank_detected = f.rank, .steps_taken = A.cols()};
    result.status = f.rank == A.cols() ? SolveStatus::converged
                                        : SolveStatus::rank_deficient_completed;
    result.wall_time = seconds_since(start);
    return result;
}

Vector min_norm_solution(const DenseMatrix& A, const Vector& b, double rcond)
{
    require_rhs(A, b);
    if (A.rows() >= A.cols()) {
        return svd_solve(jacobi_svd(A, rcond), b);
    }
    // A^T = U S V^T, so A^+ b = U S^+ V^T b.
    const SvdFactorization f = jacobi_svd(A.transposed(), rcond);
    const Vector c = matvec_transposed(f.v, b);
    Vector x(A.cols());
    for (std::size_t k = 0; k < f.rank; ++k) {
        axpy(c[k] / f.sigma[k], f.u.column(k + 1), x.span());
    }
    return x;
}

}  // namespace abslsq
