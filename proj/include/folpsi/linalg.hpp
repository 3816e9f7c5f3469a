#pragma once

#include "folpsi/rational.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

namespace folpsi::linalg {

/// Zero test and pivot score for the two scalar fields used in module
/// computations: exact Q(i) and floating complex.
template <class F>
struct Field;

template <>
struct Field<GaussRational> {
    static bool is_zero(const GaussRational& v, double) { return v.is_zero(); }
    static double score(const GaussRational&) { return 1.0; }
    static constexpr bool exact = true;
};

template <>
struct Field<std::complex<double>> {
    static bool is_zero(const std::complex<double>& v, double tol) { return std::abs(v) <= tol; }
    static double score(const std::complex<double>& v) { return std::abs(v); }
    static constexpr bool exact = false;
};

template <class F>
using Matrix = std::vector<std::vector<F>>;

template <class F>
struct Echelon {
    Matrix<F> rows;           // reduced row echelon form, zero rows removed
    std::vector<int> pivots;  // pivot column of each row
    double tol = 0.0;
};

/// Gauss-Jordan elimination. Exact fields pivot on the first nonzero entry;
/// floating fields use partial pivoting with an absolute threshold of
/// rel_tol * max|entry|.
template <class F>
Echelon<F> rref(Matrix<F> m, std::size_t cols, double rel_tol = 1e-10) {
    double scale = 0.0;
    if constexpr (!Field<F>::exact) {
        for (const auto& r : m)
            for (const auto& v : r) scale = std::max(scale, std::abs(v));
    }
    const double tol = rel_tol * scale;
    std::size_t rank = 0;
    std::vector<int> pivots;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        std::size_t best = m.size();
        double best_score = 0.0;
        for (std::size_t r = rank; r < m.size(); ++r) {
            if (Field<F>::is_zero(m[r][c], tol)) continue;
            double s = Field<F>::score(m[r][c]);
            if (best == m.size() || (!Field<F>::exact && s > best_score)) {
                best = r;
                best_score = s;
                if constexpr (Field<F>::exact) break;
            }
        }
        if (best == m.size()) continue;
        std::swap(m[rank], m[best]);
        F inv = F(1) / m[rank][c];
        for (auto& v : m[rank]) v = v * inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == rank || Field<F>::is_zero(m[r][c], 0.0)) continue;
            F f = m[r][c];
            for (std::size_t k = 0; k < cols; ++k) m[r][k] = m[r][k] - f * m[rank][k];
        }
        pivots.push_back(static_cast<int>(c));
        ++rank;
    }
    m.resize(rank);
    return {std::move(m), std::move(pivots), tol};
}

/// Basis of {v : m v = 0}.
template <class F>
Matrix<F> nullspace(const Matrix<F>& m, std::size_t cols, double rel_tol = 1e-10) {
    Echelon<F> e = rref(m, cols, rel_tol);
    std::vector<bool> is_pivot(cols, false);
    for (int p : e.pivots) is_pivot[p] = true;
    Matrix<F> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<F> v(cols, F(0));
        v[free] = F(1);
        for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = F(0) - e.rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// A solution of m v = b with free variables set to zero, if consistent.
template <class F>
std::optional<std::vector<F>> solve(const Matrix<F>& m, const std::vector<F>& b, std::size_t cols,
                                    double rel_tol = 1e-10) {
    Matrix<F> aug = m;
    for (std::size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
    Echelon<F> e = rref(aug, cols + 1, rel_tol);
    for (int p : e.pivots)
        if (p == static_cast<int>(cols)) return std::nullopt;
    std::vector<F> v(cols, F(0));
    for (std::size_t r = 0; r < e.rows.size(); ++r) v[e.pivots[r]] = e.rows[r][cols];
    return v;
}

/// Remainder of b after reduction by the row space of `rows`: zero exactly
/// when b lies in that span, and otherwise vanishes at every pivot column.
template <class F>
std::vector<F> reduce(const Matrix<F>& rows, std::vector<F> b, std::size_t cols) {
    Echelon<F> e = rref(rows, cols);
    for (std::size_t r = 0; r < e.rows.size(); ++r) {
        F f = b[e.pivots[r]];
        if (Field<F>::is_zero(f, 0.0)) continue;
        for (std::size_t k = 0; k < cols; ++k) b[k] = b[k] - f * e.rows[r][k];
    }
    return b;
}

template <class F>
std::size_t rank(const Matrix<F>& m, std::size_t cols, double rel_tol = 1e-10) {
    return rref(m, cols, rel_tol).rows.size();
}

}  // namespace folpsi::linalg
