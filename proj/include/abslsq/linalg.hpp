// SPDX-License-Identifier: Apache-2.0
//
// Dense matrix and vector containers plus the handful of kernels the ABS
// solvers, baselines and generators are built from.
//
// Public element access is 1-based and bounds-checked: A(i, j) with
// 1 <= i <= rows, 1 <= j <= cols. Storage is column-major so that a column
// is a contiguous span. Kernels that need speed work on data()/column()
// directly.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace abslsq {

/// Thrown when operand shapes do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by back_substitute when a diagonal entry is exactly zero.
class SingularTriangularError : public std::runtime_error {
public:
    SingularTriangularError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index)
    {}

    /// 1-based index of the offending diagonal entry.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class Vector {
public:
    explicit Vector(std::size_t len, double fill = 0.0);
    Vector(std::initializer_list<double> values);
    explicit Vector(std::vector<double> values);

    static Vector unit(std::size_t len, std::size_t i);

    std::size_t size() const noexcept { return data_.size(); }

    // 1-based, checked
    double& operator()(std::size_t i);
    double operator()(std::size_t i) const;

    // 0-based, unchecked
    double& operator[](std::size_t k) noexcept { return data_[k]; }
    double operator[](std::size_t k) const noexcept { return data_[k]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    const std::vector<double>& values() const noexcept { return data_; }

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    /// Builds a matrix from a list of rows, e.g. {{1, 2}, {3, 4}}.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    // 1-based, checked
    double& operator()(std::size_t i, std::size_t j);
    double operator()(std::size_t i, std::size_t j) const;

    /// Contiguous view of column j (1-based).
    std::span<double> column(std::size_t j);
    std::span<const double> column(std::size_t j) const;

    Vector column_vector(std::size_t j) const;
    Vector row_vector(std::size_t i) const;

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix&) const = default;

private:
    void check_index(std::size_t i, std::size_t j) const;

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

/// Lower-triangular matrix in packed column-major storage. Strictly upper
/// entries are not stored and read as zero.
class LowerTriangular {
public:
    explicit LowerTriangular(std::size_t order);

    std::size_t order() const noexcept { return order_; }

    /// Returns 0 for i < j.
    double operator()(std::size_t i, std::size_t j) const;
    /// Mutable access; throws std::out_of_range for i < j.
    double& at(std::size_t i, std::size_t j);

    /// Packed entries (j..order, j) of column j.
    std::span<const double> column(std::size_t j) const;

    DenseMatrix to_dense() const;

private:
    std::size_t offset(std::size_t i, std::size_t j) const;

    std::size_t order_;
    std::vector<double> data_;
};

Vector matvec(const DenseMatrix& A, const Vector& x);
Vector matvec_transposed(const DenseMatrix& A, const Vector& y);
DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);

/// Solves L^T x = c by back substitution.
Vector back_substitute(const LowerTriangular& L, const Vector& c);

double dot(std::span<const double> x, std::span<const double> y);
double dot(const Vector& x, const Vector& y);
double norm2(std::span<const double> x);
double norm2(const Vector& x);
double norm_inf(const Vector& x);
double frobenius_norm(const DenseMatrix& A);
double max_abs(const DenseMatrix& A);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

Vector operator+(const Vector& x, const Vector& y);
Vector operator-(const Vector& x, const Vector& y);
Vector operator*(double alpha, const Vector& x);
DenseMatrix operator-(const DenseMatrix& A, const DenseMatrix& B);

}  // namespace abslsq
