#pragma once

#include <commrep/matrix.hpp>

#include <gmpxx.h>

#include <cassert>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace commrep {

/// Reduced row echelon form together with the pivot columns (0-based).
template <ExactField F>
struct RowEchelon {
    Matrix<F> reduced;
    std::vector<std::size_t> pivot_cols;

    std::size_t rank() const noexcept { return pivot_cols.size(); }
};

namespace detail {

using IntRows = std::vector<std::vector<mpz_class>>;

// Scaling a row by a nonzero constant changes neither rank nor row space, so
// clearing denominators row by row turns a rational matrix into an integer one.
inline IntRows clear_denominators(const Matrix<Rationals>& a) {
    IntRows rows(a.rows(), std::vector<mpz_class>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < a.cols(); ++j) rows[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
    }
    return rows;
}

inline std::optional<std::size_t> find_pivot_row(const IntRows& m, std::size_t from, std::size_t col) {
    for (std::size_t i = from; i < m.size(); ++i)
        if (sgn(m[i][col]) != 0) return i;
    return std::nullopt;
}

// Fraction-free Gauss-Jordan. Every update is divided exactly by the previous
// pivot; on exit each pivot row carries the same pivot value `d` in its pivot
// column and zeros in every other pivot column.
struct FractionFreeResult {
    IntRows m;
    std::vector<std::size_t> pivot_cols;
    mpz_class d = 1;
};

inline FractionFreeResult fraction_free_gauss_jordan(IntRows m, bool jordan) {
    FractionFreeResult out;
    if (m.empty()) return out;
    const std::size_t rows = m.size(), cols = m.front().size();
    mpz_class prev = 1;
    std::size_t r = 0;
    mpz_class t;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        auto p = find_pivot_row(m, r, c);
        if (!p) continue;
        std::swap(m[r], m[*p]);
        const mpz_class pivot = m[r][c];
        for (std::size_t i = jordan ? 0 : r + 1; i < rows; ++i) {
            if (i == r) continue;
            const mpz_class factor = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) {
                if (j == c) continue;
                t = pivot * m[i][j] - factor * m[r][j];
                assert(mpz_divisible_p(t.get_mpz_t(), prev.get_mpz_t()));
                mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            m[i][c] = 0;
        }
        out.pivot_cols.push_back(c);
        prev = pivot;
        ++r;
    }
    out.d = prev;
    out.m = std::move(m);
    return out;
}

template <ExactField F>
RowEchelon<F> gauss_jordan_field(const Matrix<F>& a) {
    const auto& f = a.field();
    Matrix<F> m = a;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t p = r;
        while (p < m.rows() && f.is_zero(m(p, c))) ++p;
        if (p == m.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        const auto inv = f.inv(m(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = f.mul(inv, m(r, j));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f.is_zero(m(i, c))) continue;
            const auto factor = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(m), std::move(pivots)};
}

}  // namespace detail

/// Reduced row echelon form. Over Q the elimination runs fraction-free on
/// integers (Bareiss-style) and divides by the common pivot only at the end.
template <ExactField F>
RowEchelon<F> row_echelon(const Matrix<F>& a) {
    if constexpr (std::is_same_v<F, Rationals>) {
        auto ff = detail::fraction_free_gauss_jordan(detail::clear_denominators(a), true);
        Matrix<Rationals> reduced(a.field(), a.rows(), a.cols());
        for (std::size_t i = 0; i < ff.pivot_cols.size(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) reduced(i, j) = Rationals{}.make(ff.m[i][j], ff.d);
        return {std::move(reduced), std::move(ff.pivot_cols)};
    } else {
        return detail::gauss_jordan_field(a);
    }
}

template <ExactField F>
std::size_t rank(const Matrix<F>& a) {
    if constexpr (std::is_same_v<F, Rationals>) {
        return detail::fraction_free_gauss_jordan(detail::clear_denominators(a), false).pivot_cols.size();
    } else {
        return detail::gauss_jordan_field(a).rank();
    }
}

/// Basis of the right null space as column vectors, one per free column, with
/// a 1 in that free coordinate. Empty iff the matrix has full column rank.
template <ExactField F>
std::vector<Matrix<F>> kernel_basis(const Matrix<F>& a) {
    const auto& f = a.field();
    auto ech = row_echelon(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : ech.pivot_cols) is_pivot[c] = true;
    std::vector<Matrix<F>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) continue;
        Matrix<F> v(f, a.cols(), 1);
        v(free, 0) = f.one();
        for (std::size_t i = 0; i < ech.pivot_cols.size(); ++i) v(ech.pivot_cols[i], 0) = f.neg(ech.reduced(i, free));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Dimension of the span of the given vectors, each read in row-major order.
template <ExactField F>
std::size_t span_rank(std::span<const Matrix<F>> vectors) {
    if (vectors.empty()) throw InvalidArgument("span_rank needs at least one vector");
    const auto len = vectors.front().rows() * vectors.front().cols();
    std::vector<typename F::value_type> stacked;
    stacked.reserve(len * vectors.size());
    for (const auto& v : vectors) {
        if (!(v.field() == vectors.front().field())) throw InvalidArgument("field mismatch in span_rank");
        if (v.rows() * v.cols() != len) throw InvalidArgument("span_rank vectors have different lengths");
        auto e = v.entries();
        stacked.insert(stacked.end(), e.begin(), e.end());
    }
    return rank(Matrix<F>(vectors.front().field(), vectors.size(), len, std::move(stacked)));
}

template <ExactField F>
std::size_t span_rank(const std::vector<Matrix<F>>& vectors) {
    return span_rank(std::span<const Matrix<F>>(vectors));
}

template <ExactField F>
bool is_invertible(const Matrix<F>& a) {
    return a.is_square() && rank(a) == a.rows();
}

template <ExactField F>
Matrix<F> inverse(const Matrix<F>& a) {
    if (!a.is_square()) throw InvalidArgument("inverse of non-square matrix " + a.shape());
    const auto n = a.rows();
    Matrix<F> aug(a.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = a.field().one();
    }
    auto ech = row_echelon(aug);
    if (ech.rank() < n || ech.pivot_cols[n - 1] != n - 1) throw InvalidArgument("matrix is singular");
    Matrix<F> inv(a.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = ech.reduced(i, n + j);
    return inv;
}

}  // namespace commrep
