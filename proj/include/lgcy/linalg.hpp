#pragma once

#include "lgcy/rational.hpp"

#include <optional>
#include <vector>

namespace lgcy {

// Dense row-major matrix over Q.
struct Matrix {
    size_t rows = 0, cols = 0;
    std::vector<Rational> a;

    Matrix() = default;
    Matrix(size_t r, size_t c) : rows(r), cols(c), a(r * c) {}

    Rational& operator()(size_t i, size_t j) { return a[i * cols + j]; }
    const Rational& operator()(size_t i, size_t j) const { return a[i * cols + j]; }

    bool is_zero() const {
        for (auto& v : a)
            if (v != 0) return false;
        return true;
    }
};

inline Matrix matmul(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul shape mismatch");
    Matrix z(x.rows, y.cols);
    for (size_t i = 0; i < x.rows; ++i)
        for (size_t k = 0; k < x.cols; ++k) {
            const Rational& v = x(i, k);
            if (v == 0) continue;
            for (size_t j = 0; j < y.cols; ++j)
                if (y(k, j) != 0) z(i, j) += v * y(k, j);
        }
    return z;
}

struct Echelon {
    Matrix r;                  // reduced row echelon form, zero rows dropped
    std::vector<size_t> pivots;  // pivot column of each row
};

// Gauss-Jordan elimination. Pivots are chosen left to right, so the
// non-pivot columns are the lexicographically last independent set.
inline Echelon rref(Matrix m) {
    Echelon e;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t piv = row;
        while (piv < m.rows && m(piv, col) == 0) ++piv;
        if (piv == m.rows) continue;
        if (piv != row)
            for (size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(row, j));
        Rational inv = 1 / m(row, col);
        for (size_t j = col; j < m.cols; ++j)
            if (m(row, j) != 0) m(row, j) *= inv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || m(i, col) == 0) continue;
            Rational f = m(i, col);
            for (size_t j = col; j < m.cols; ++j)
                if (m(row, j) != 0) m(i, j) -= f * m(row, j);
        }
        e.pivots.push_back(col);
        ++row;
    }
    e.r = Matrix(row, m.cols);
    for (size_t i = 0; i < row; ++i)
        for (size_t j = 0; j < m.cols; ++j) e.r(i, j) = std::move(m(i, j));
    return e;
}

inline size_t rank(const Matrix& m) {
    if (m.rows == 0 || m.cols == 0) return 0;
    return rref(m).pivots.size();
}

// Solves m x = b; nullopt when inconsistent.
inline std::optional<std::vector<Rational>> solve(const Matrix& m, const std::vector<Rational>& b) {
    Matrix aug(m.rows, m.cols + 1);
    for (size_t i = 0; i < m.rows; ++i) {
        for (size_t j = 0; j < m.cols; ++j) aug(i, j) = m(i, j);
        aug(i, m.cols) = b[i];
    }
    Echelon e = rref(aug);
    std::vector<Rational> x(m.cols);
    for (size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == m.cols) return std::nullopt;
        x[e.pivots[i]] = e.r(i, m.cols);
    }
    return x;
}

}  // namespace lgcy
