// SPDX-License-Identifier: Apache-2.0

#include "abslsq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <stdexcept>

namespace abslsq {

namespace {

void require_nonempty(std::size_t n, const char* what)
{
    if (n == 0) {
        throw DimensionError(fmt::format("{} must have at least one entry", what));
    }
}

}  // namespace

/*------------------------------------------------------------------------------
 *      Vector
 *----------------------------------------------------------------------------*/
Vector::Vector(std::size_t len, double fill) : data_(len, fill)
{
    require_nonempty(len, "vector");
}

Vector::Vector(std::initializer_list<double> values) : data_(values)
{
    require_nonempty(data_.size(), "vector");
}

Vector::Vector(std::vector<double> values) : data_(std::move(values))
{
    require_nonempty(data_.size(), "vector");
}

Vector Vector::unit(std::size_t len, std::size_t i)
{
    Vector e(len);
    e(i) = 1.0;
    return e;
}

double& Vector::operator()(std::size_t i)
{
    if (i < 1 || i > data_.size()) {
        throw std::out_of_range(fmt::format("vector index {} outside 1..{}", i, data_.size()));
    }
    return data_[i - 1];
}

double Vector::operator()(std::size_t i) const
{
    return const_cast<Vector&>(*this)(i);
}

/*------------------------------------------------------------------------------
 *      DenseMatrix
 *----------------------------------------------------------------------------*/
DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill)
{
    if (rows == 0 || cols == 0) {
        throw DimensionError(fmt::format("matrix shape {}x{} is empty", rows, cols));
    }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows)
{
    std::vector<std::vector<double>> copy;
    for (const auto& r : rows) {
        copy.emplace_back(r);
    }
    return from_rows(copy);
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty()) {
        throw DimensionError("matrix needs at least one row");
    }
    DenseMatrix A(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != A.cols_) {
            throw DimensionError(fmt::format("row {} has {} entries, expected {}",
                                             i + 1, rows[i].size(), A.cols_));
        }
        for (std::size_t j = 0; j < A.cols_; ++j) {
            A.data_[j * A.rows_ + i] = rows[i][j];
        }
    }
    return A;
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix I(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        I.data_[k * n + k] = 1.0;
    }
    return I;
}

void DenseMatrix::check_index(std::size_t i, std::size_t j) const
{
    if (i < 1 || i > rows_ || j < 1 || j > cols_) {
        throw std::out_of_range(
            fmt::format("matrix index ({}, {}) outside {}x{}", i, j, rows_, cols_));
    }
}

double& DenseMatrix::operator()(std::size_t i, std::size_t j)
{
    check_index(i, j);
    return data_[(j - 1) * rows_ + (i - 1)];
}

double DenseMatrix::operator()(std::size_t i, std::size_t j) const
{
    check_index(i, j);
    return data_[(j - 1) * rows_ + (i - 1)];
}

std::span<double> DenseMatrix::column(std::size_t j)
{
    check_index(1, j);
    return {data_.data() + (j - 1) * rows_, rows_};
}

std::span<const double> DenseMatrix::column(std::size_t j) const
{
    check_index(1, j);
    return {data_.data() + (j - 1) * rows_, rows_};
}

Vector DenseMatrix::column_vector(std::size_t j) const
{
    auto c = column(j);
    return Vector(std::vector<double>(c.begin(), c.end()));
}

Vector DenseMatrix::row_vector(std::size_t i) const
{
    check_index(i, 1);
    Vector r(cols_);
    for (std::size_t j = 0; j < cols_; ++j) {
        r[j] = data_[j * rows_ + (i - 1)];
    }
    return r;
}

DenseMatrix DenseMatrix::transposed() const
{
    DenseMatrix T(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t i = 0; i < rows_; ++i) {
            T.data_[i * cols_ + j] = data_[j * rows_ + i];
        }
    }
    return T;
}

/*------------------------------------------------------------------------------
 *      LowerTriangular
 *----------------------------------------------------------------------------*/
LowerTriangular::LowerTriangular(std::size_t order)
    : order_(order), data_(order * (order + 1) / 2, 0.0)
{
    require_nonempty(order, "triangular matrix");
}

std::size_t LowerTriangular::offset(std::size_t i, std::size_t j) const
{
    // column j (0-based) starts after j columns of lengths n, n-1, ...
    const std::size_t jj = j - 1;
    return jj * order_ - jj * (jj - 1) / 2 + (i - j);
}

double LowerTriangular::operator()(std::size_t i, std::size_t j) const
{
    if (i < 1 || i > order_ || j < 1 || j > order_) {
        throw std::out_of_range(
            fmt::format("triangular index ({}, {}) outside order {}", i, j, order_));
    }
    if (i < j) {
        return 0.0;
    }
    return data_[offset(i, j)];
}

double& LowerTriangular::at(std::size_t i, std::size_t j)
{
    if (i < 1 || i > order_ || j < 1 || j > i) {
        throw std::out_of_range(
            fmt::format("({}, {}) is not a stored entry of a lower-triangular matrix of order {}",
                        i, j, order_));
    }
    return data_[offset(i, j)];
}

std::span<const double> LowerTriangular::column(std::size_t j) const
{
    if (j < 1 || j > order_) {
        throw std::out_of_range(fmt::format("column {} outside order {}", j, order_));
    }
    return {data_.data() + offset(j, j), order_ - j + 1};
}

DenseMatrix LowerTriangular::to_dense() const
{
    DenseMatrix L(order_, order_);
    for (std::size_t j = 1; j <= order_; ++j) {
        for (std::size_t i = j; i <= order_; ++i) {
            L(i, j) = data_[offset(i, j)];
        }
    }
    return L;
}

/*------------------------------------------------------------------------------
 *      Kernels
 *----------------------------------------------------------------------------*/
double dot(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw DimensionError(fmt::format("dot: lengths {} and {} differ", x.size(), y.size()));
    }
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += x[k] * y[k];
    }
    return s;
}

double dot(const Vector& x, const Vector& y)
{
    return dot(x.span(), y.span());
}

double norm2(std::span<const double> x)
{
    // scaled accumulation so that entries near the overflow threshold survive
    double scale = 0.0;
    double ssq = 1.0;
    for (double v : x) {
        if (v != 0.0) {
            const double a = std::abs(v);
            if (scale < a) {
                ssq = 1.0 + ssq * (scale / a) * (scale / a);
                scale = a;
            } else {
                ssq += (a / scale) * (a / scale);
            }
        }
    }
    return scale * std::sqrt(ssq);
}

double norm2(const Vector& x)
{
    return norm2(x.span());
}

double norm_inf(const Vector& x)
{
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double frobenius_norm(const DenseMatrix& A)
{
    return norm2(std::span<const double>(A.data(), A.rows() * A.cols()));
}

double max_abs(const DenseMatrix& A)
{
    double m = 0.0;
    const double* a = A.data();
    for (std::size_t k = 0; k < A.rows() * A.cols(); ++k) {
        m = std::max(m, std::abs(a[k]));
    }
    return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
    if (x.size() != y.size()) {
        throw DimensionError(fmt::format("axpy: lengths {} and {} differ", x.size(), y.size()));
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        y[k] += alpha * x[k];
    }
}

Vector matvec(const DenseMatrix& A, const Vector& x)
{
    if (A.cols() != x.size()) {
        throw DimensionError(fmt::format("matvec: {}x{} matrix times vector of length {}",
                                         A.rows(), A.cols(), x.size()));
    }
    Vector y(A.rows());
    for (std::size_t j = 1; j <= A.cols(); ++j) {
        const double xj = x[j - 1];
        if (xj != 0.0) {
            axpy(xj, A.column(j), y.span());
        }
    }
    return y;
}

Vector matvec_transposed(const DenseMatrix& A, const Vector& y)
{
    if (A.rows() != y.size()) {
        throw DimensionError(fmt::format("matvec_transposed: {}x{} matrix with vector of length {}",
                                         A.rows(), A.cols(), y.size()));
    }
    Vector x(A.cols());
    for (std::size_t j = 1; j <= A.cols(); ++j) {
        x[j - 1] = dot(A.column(j), y.span());
    }
    return x;
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B)
{
    if (A.cols() != B.rows()) {
        throw DimensionError(fmt::format("matmul: {}x{} times {}x{}",
                                         A.rows(), A.cols(), B.rows(), B.cols()));
    }
    DenseMatrix C(A.rows(), B.cols());
    for (std::size_t j = 1; j <= B.cols(); ++j) {
        auto cj = C.column(j);
        for (std::size_t k = 1; k <= A.cols(); ++k) {
            const double bkj = B(k, j);
            if (bkj != 0.0) {
                axpy(bkj, A.column(k), cj);
            }
        }
    }
    return C;
}

Vector back_substitute(const LowerTriangular& L, const Vector& c)
{
    const std::size_t n = L.order();
    if (c.size() != n) {
        throw DimensionError(fmt::format("back_substitute: order {} with right-hand side of length {}",
                                         n, c.size()));
    }
    // Row i of L^T is column i of L, so x_i only depends on x_{i+1..n}.
    Vector x = c;
    for (std::size_t i = n; i >= 1; --i) {
        auto col = L.column(i);
        double s = x[i - 1];
        for (std::size_t k = 1; k < col.size(); ++k) {
            s -= col[k] * x[i - 1 + k];
        }
        if (col[0] == 0.0) {
            throw SingularTriangularError(
                i, fmt::format("back_substitute: zero diagonal entry at index {}", i));
        }
        x[i - 1] = s / col[0];
    }
    return x;
}

Vector operator+(const Vector& x, const Vector& y)
{
    if (x.size() != y.size()) {
        throw DimensionError("vector sum: lengths differ");
    }
    Vector z = x;
    axpy(1.0, y.span(), z.span());
    return z;
}

Vector operator-(const Vector& x, const Vector& y)
{
    if (x.size() != y.size()) {
        throw DimensionError("vector difference: lengths differ");
    }
    Vector z = x;
    axpy(-1.0, y.span(), z.span());
    return z;
}

Vector operator*(double alpha, const Vector& x)
{
    Vector z = x;
    for (double& v : z) {
        v *= alpha;
    }
    return z;
}

DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B)
{
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw DimensionError("matrix difference: shapes differ");
    }
    DenseMatrix C = A;
    double* c = C.data();
    const double* b = B.data();
    for (std::size_t k = 0; k < A.rows() * A.cols(); ++k) {
        c[k] -= b[k];
    }
    return C;
}

}  // namespace abslsq
