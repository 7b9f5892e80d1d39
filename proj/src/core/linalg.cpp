#include "roundreach/linalg.hpp"

#include <algorithm>

namespace roundreach {

Matrix::Matrix(const std::vector<RationalVector>& rows)
    : rows_(rows.size()), cols_(rows.empty() ? 0 : rows.front().size())
{
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            fail(ErrorCode::InvalidArgument, "ragged matrix rows");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

std::vector<RationalVector> Matrix::to_rows() const
{
    std::vector<RationalVector> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r].assign(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    }
    return out;
}

RationalVector Matrix::column(std::size_t c) const
{
    RationalVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const
{
    if (cols_ != other.rows_) {
        fail(ErrorCode::InvalidArgument, "matrix dimensions do not agree");
    }
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (sgn(a) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < other.cols_; ++j) {
                if (sgn(other(k, j)) != 0) {
                    out(i, j) += a * other(k, j);
                }
            }
        }
    }
    return out;
}

RationalVector Matrix::operator*(const RationalVector& v) const
{
    if (cols_ != v.size()) {
        fail(ErrorCode::InvalidArgument, "matrix and vector dimensions do not agree");
    }
    RationalVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            if (sgn((*this)(i, k)) != 0 && sgn(v[k]) != 0) {
                out[i] += (*this)(i, k) * v[k];
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const
{
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        fail(ErrorCode::InvalidArgument, "matrix dimensions do not agree");
    }
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] += other.data_[i];
    }
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const
{
    return *this + other.scaled(-1);
}

Matrix Matrix::scaled(const Rational& s) const
{
    Matrix out = *this;
    for (auto& x : out.data_) {
        x *= s;
    }
    return out;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m)
{
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && sgn(m(p, col)) == 0) {
            ++p;
        }
        if (p == m.rows()) {
            continue;
        }
        if (p != row) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                std::swap(m(p, c), m(row, c));
            }
        }
        const Rational inv = 1 / m(row, col);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            m(row, c) *= inv;
        }
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == row || sgn(m(r, col)) == 0) {
                continue;
            }
            const Rational f = m(r, col);
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (sgn(m(row, c)) != 0) {
                    m(r, c) -= f * m(row, c);
                }
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

Matrix Matrix::inverse() const
{
    if (!is_square()) {
        fail(ErrorCode::InvalidArgument, "inverse of a non-square matrix");
    }
    const std::size_t n = rows_;
    Matrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            aug(i, j) = (*this)(i, j);
        }
        aug(i, n + i) = 1;
    }
    const auto pivots = rref(aug);
    if (pivots.size() < n || pivots[n - 1] != n - 1) {
        fail(ErrorCode::Singular, "matrix is singular");
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out(i, j) = aug(i, n + j);
        }
    }
    return out;
}

std::size_t Matrix::rank() const
{
    Matrix copy = *this;
    return rref(copy).size();
}

std::vector<RationalVector> Matrix::kernel() const
{
    Matrix copy = *this;
    const auto pivots = rref(copy);
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<RationalVector> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        RationalVector v(cols_);
        v[free] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            v[pivots[i]] = -copy(i, free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

RationalVector Matrix::characteristic_polynomial() const
{
    if (!is_square()) {
        fail(ErrorCode::InvalidArgument, "characteristic polynomial of a non-square matrix");
    }
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
    const std::size_t n = rows_;
    RationalVector c(n + 1);
    c[n] = 1;
    Matrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix next = *this * mk;
        for (std::size_t i = 0; i < n; ++i) {
            next(i, i) += c[n - k + 1];
        }
        mk = std::move(next);
        const Matrix am = *this * mk;
        Rational trace = 0;
        for (std::size_t i = 0; i < n; ++i) {
            trace += am(i, i);
        }
        c[n - k] = -trace / static_cast<long>(k);
    }
    return c;
}

Rational Matrix::row_norm() const
{
    Rational best = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
        Rational sum = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            sum += abs_of((*this)(r, c));
        }
        best = std::max(best, sum);
    }
    return best;
}

RowSparseMatrix RowSparseMatrix::from_dense(const Matrix& m)
{
    if (!m.is_square()) {
        fail(ErrorCode::InvalidArgument, "system matrix must be square");
    }
    RowSparseMatrix out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (sgn(m(r, c)) != 0) {
                out.rows_[r].emplace_back(c, m(r, c));
            }
        }
    }
    return out;
}

void RowSparseMatrix::set(std::size_t r, std::size_t c, const Rational& value)
{
    if (r >= n_ || c >= n_) {
        fail(ErrorCode::InvalidArgument, "matrix index out of range");
    }
    auto& row = rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& entry, std::size_t col) { return entry.first < col; });
    if (it != row.end() && it->first == c) {
        if (sgn(value) == 0) {
            row.erase(it);
        } else {
            it->second = value;
        }
    } else if (sgn(value) != 0) {
        row.insert(it, {c, value});
    }
}

Rational RowSparseMatrix::get(std::size_t r, std::size_t c) const
{
    for (const auto& [col, value] : rows_[r]) {
        if (col == c) {
            return value;
        }
    }
    return 0;
}

Matrix RowSparseMatrix::to_dense() const
{
    Matrix out(n_, n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (const auto& [c, value] : rows_[r]) {
            out(r, c) = value;
        }
    }
    return out;
}

RationalVector RowSparseMatrix::operator*(const RationalVector& v) const
{
    if (v.size() != n_) {
        fail(ErrorCode::InvalidArgument, "matrix and vector dimensions do not agree");
    }
    RationalVector out(n_);
    for (std::size_t r = 0; r < n_; ++r) {
        for (const auto& [c, value] : rows_[r]) {
            if (sgn(v[c]) != 0) {
                out[r] += value * v[c];
            }
        }
    }
    return out;
}

RowSparseMatrix RowSparseMatrix::scaled(const Rational& s) const
{
    RowSparseMatrix out = *this;
    for (auto& row : out.rows_) {
        for (auto& entry : row) {
            entry.second *= s;
        }
    }
    return out;
}

std::size_t RowSparseMatrix::nonzeros() const
{
    std::size_t total = 0;
    for (const auto& row : rows_) {
        total += row.size();
    }
    return total;
}

} // namespace roundreach
