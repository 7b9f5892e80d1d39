#ifndef ROUNDREACH_LINALG_HPP
#define ROUNDREACH_LINALG_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "roundreach/numerics.hpp"

namespace roundreach {

using RationalVector = std::vector<Rational>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    explicit Matrix(const std::vector<RationalVector>& rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<RationalVector> to_rows() const;
    RationalVector column(std::size_t c) const;

    Matrix operator*(const Matrix& other) const;
    RationalVector operator*(const RationalVector& v) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix scaled(const Rational& s) const;
    friend bool operator==(const Matrix&, const Matrix&) = default;

    Matrix inverse() const;
    std::size_t rank() const;
    /// Basis of the right null space.
    std::vector<RationalVector> kernel() const;
    /// Coefficients c_0..c_n (monic, c_n = 1) of det(xI - M).
    RationalVector characteristic_polynomial() const;
    /// Maximum absolute row sum.
    Rational row_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Rows of (column, value) pairs with nonzero values, columns ascending.
class RowSparseMatrix {
public:
    RowSparseMatrix() = default;
    explicit RowSparseMatrix(std::size_t n) : n_(n), rows_(n) {}
    static RowSparseMatrix from_dense(const Matrix& m);

    std::size_t size() const noexcept { return n_; }
    const std::vector<std::pair<std::size_t, Rational>>& row(std::size_t r) const { return rows_[r]; }
    void set(std::size_t r, std::size_t c, const Rational& value);
    Rational get(std::size_t r, std::size_t c) const;

    Matrix to_dense() const;
    RationalVector operator*(const RationalVector& v) const;
    RowSparseMatrix scaled(const Rational& s) const;
    std::size_t nonzeros() const;

private:
    std::size_t n_ = 0;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> rows_;
};

} // namespace roundreach

#endif
