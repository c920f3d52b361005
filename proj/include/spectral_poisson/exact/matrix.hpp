#ifndef SPECTRAL_POISSON_EXACT_MATRIX_HPP
#define SPECTRAL_POISSON_EXACT_MATRIX_HPP

#include "spectral_poisson/exact/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sp::exact {

using RatVector = std::vector<Rational>;

/// Dense row-major matrix over Q.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static RatMatrix from_rows(const std::vector<RatVector>& rows, std::size_t cols) {
        RatMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw std::invalid_argument("from_rows: ragged input");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    /// Builds a matrix whose columns are the given vectors.
    static RatMatrix from_columns(const std::vector<RatVector>& cols, std::size_t rows) {
        RatMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("from_columns: ragged input");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static RatMatrix from_ints(std::initializer_list<std::initializer_list<long>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.begin()->size() : 0;
        RatMatrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) throw std::invalid_argument("from_ints: ragged input");
            std::size_t j = 0;
            for (long v : row) m(i, j++) = v;
            ++i;
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVector row(std::size_t i) const {
        return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                         data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    RatVector column(std::size_t j) const {
        RatVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Rational& q) { return q == 0; });
    }

    RatMatrix transpose() const {
        RatMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    RatVector apply(std::span<const Rational> x) const {
        if (x.size() != cols_) throw std::invalid_argument("apply: dimension mismatch");
        RatVector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && x[j] != 0) y[i] += (*this)(i, j) * x[j];
        return y;
    }

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
        RatMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Rational& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend RatMatrix operator*(const Rational& s, RatMatrix a) {
        for (auto& q : a.data_) q *= s;
        return a;
    }
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Rows x cols array of rational strings.
    std::vector<std::vector<std::string>> to_strings() const {
        std::vector<std::vector<std::string>> out(rows_, std::vector<std::string>(cols_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).get_str();
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

struct Echelon {
    RatMatrix reduced;                 // reduced row echelon form, zero rows dropped
    std::vector<std::size_t> pivots;   // pivot column of each row
};

/// Reduced row echelon form by exact Gauss-Jordan elimination (first nonzero pivot).
inline Echelon rref(RatMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t lead_row = 0;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t c = 0; c < cols && lead_row < rows; ++c) {
        std::size_t p = lead_row;
        while (p < rows && m(p, c) == 0) ++p;
        if (p == rows) continue;
        if (p != lead_row)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(p, j), m(lead_row, j));
        const Rational inv = Rational(1) / m(lead_row, c);
        for (std::size_t j = c; j < cols; ++j) m(lead_row, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == lead_row || m(i, c) == 0) continue;
            const Rational f = m(i, c);
            for (std::size_t j = c; j < cols; ++j)
                if (m(lead_row, j) != 0) m(i, j) -= f * m(lead_row, j);
        }
        pivots.push_back(c);
        ++lead_row;
    }
    RatMatrix reduced(pivots.size(), cols);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) reduced(i, j) = m(i, j);
    return {std::move(reduced), std::move(pivots)};
}

inline std::size_t rank(const RatMatrix& m) { return rref(m).pivots.size(); }

/// Basis of {x : m x = 0}; one vector per free column, in increasing column order.
inline std::vector<RatVector> kernel_basis(const RatMatrix& m) {
    const Echelon e = rref(m);
    const std::size_t cols = m.cols();
    std::vector<bool> is_pivot(cols, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector v(cols);
        v[f] = 1;
        for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.reduced(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some x with m x = b, or nullopt when b is outside the column space.
inline std::optional<RatVector> solve(const RatMatrix& m, std::span<const Rational> b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: dimension mismatch");
    RatMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
        aug(i, m.cols()) = b[i];
    }
    const Echelon e = rref(std::move(aug));
    RatVector x(m.cols());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == m.cols()) return std::nullopt;
        x[e.pivots[i]] = e.reduced(i, m.cols());
    }
    return x;
}

inline Rational determinant(RatMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    Rational det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            det = -det;
        }
        det *= m(c, c);
        const Rational inv = Rational(1) / m(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c) == 0) continue;
            const Rational f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j)
                if (m(c, j) != 0) m(i, j) -= f * m(c, j);
        }
    }
    return det;
}

inline std::optional<RatMatrix> inverse(const RatMatrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1;
    }
    const Echelon e = rref(std::move(aug));
    if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1)) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
    return inv;
}

/**
 * Representatives of a basis of Q^space_dim / span(subspace).
 *
 * The representatives are the standard unit vectors e_i for the non-pivot
 * columns of the echelon form of the subspace, so they come out in increasing
 * coordinate order.
 */
inline std::vector<RatVector> quotient_basis(std::size_t space_dim, const std::vector<RatVector>& subspace) {
    for (const auto& v : subspace)
        if (v.size() != space_dim) throw std::invalid_argument("quotient_basis: vector outside ambient space");
    const Echelon e = rref(RatMatrix::from_rows(subspace, space_dim));
    std::vector<bool> is_pivot(space_dim, false);
    for (auto p : e.pivots) is_pivot[p] = true;
    std::vector<RatVector> reps;
    for (std::size_t i = 0; i < space_dim; ++i) {
        if (is_pivot[i]) continue;
        RatVector v(space_dim);
        v[i] = 1;
        reps.push_back(std::move(v));
    }
    return reps;
}

/**
 * Incremental sparse row echelon form.
 *
 * Used for rank and span-membership questions on the large, very sparse
 * matrices of windowed cochain complexes, where dense elimination is wasteful.
 */
class SparseEchelon {
public:
    using Row = std::map<std::size_t, Rational>;

    /// Reduces row against the stored pivots; returns the remainder.
    Row reduce(Row row) const {
        auto it = row.begin();
        while (it != row.end()) {
            auto piv = pivots_.find(it->first);
            if (piv == pivots_.end()) {
                ++it;
                continue;
            }
            const Rational f = it->second;  // pivot rows are normalised to leading 1
            const std::size_t col = it->first;
            for (const auto& [c, v] : piv->second) {
                auto [pos, inserted] = row.try_emplace(c, -f * v);
                if (!inserted) {
                    pos->second -= f * v;
                    if (pos->second == 0) row.erase(pos);
                }
            }
            it = row.upper_bound(col);
        }
        return row;
    }

    /// Adds a row; returns true iff it was independent of the rows seen so far.
    bool insert(Row row) {
        Row rem = reduce(std::move(row));
        if (rem.empty()) return false;
        const Rational inv = Rational(1) / rem.begin()->second;
        for (auto& [c, v] : rem) v *= inv;
        const std::size_t lead = rem.begin()->first;
        pivots_.emplace(lead, std::move(rem));
        return true;
    }

    bool contains(Row row) const { return reduce(std::move(row)).empty(); }

    std::size_t rank() const noexcept { return pivots_.size(); }

private:
    std::map<std::size_t, Row> pivots_;  // keyed by leading column
};

inline SparseEchelon::Row to_sparse(std::span<const Rational> v) {
    SparseEchelon::Row r;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) r.emplace(i, v[i]);
    return r;
}

}  // namespace sp::exact

#endif
