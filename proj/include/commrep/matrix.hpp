#pragma once

#include <commrep/errors.hpp>
#include <commrep/field.hpp>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace commrep {

/// Dense row-major matrix over an exact field. Element access through
/// operator() is 0-based; the mathematical constructors (elementary_matrix,
/// graph vertices) use 1-based indices.
template <ExactField F>
class Matrix {
public:
    using field_type = F;
    using value_type = typename F::value_type;

    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, field_.zero()) {
        if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
    }

    Matrix(F field, std::size_t rows, std::size_t cols, std::vector<value_type> entries)
        : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
        if (entries_.size() != rows * cols)
            throw InvalidArgument("expected " + std::to_string(rows * cols) + " entries, got " +
                                  std::to_string(entries_.size()));
    }

    static Matrix column(F field, std::vector<value_type> entries) {
        auto n = entries.size();
        return Matrix(std::move(field), n, 1, std::move(entries));
    }

    static Matrix row(F field, std::vector<value_type> entries) {
        auto n = entries.size();
        return Matrix(std::move(field), 1, n, std::move(entries));
    }

    const F& field() const noexcept { return field_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    value_type& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    const value_type& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const value_type> entries() const noexcept { return entries_; }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (!field_.is_zero(e)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix scaled(const value_type& c) const {
        Matrix out = *this;
        for (auto& e : out.entries_)
            if (!field_.is_zero(e)) e = field_.mul(c, e);
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        require_same_shape(o, "+");
        for (std::size_t k = 0; k < entries_.size(); ++k)
            if (!field_.is_zero(o.entries_[k])) entries_[k] = field_.add(entries_[k], o.entries_[k]);
        return *this;
    }

    Matrix& operator-=(const Matrix& o) {
        require_same_shape(o, "-");
        for (std::size_t k = 0; k < entries_.size(); ++k)
            if (!field_.is_zero(o.entries_[k])) entries_[k] = field_.sub(entries_[k], o.entries_[k]);
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (!(a.field_ == b.field_)) throw InvalidArgument("field mismatch in product");
        if (a.cols_ != b.rows_)
            throw InvalidArgument("cannot multiply " + a.shape() + " by " + b.shape());
        const auto& f = a.field_;
        Matrix c(f, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const auto& aik = a(i, k);
                if (f.is_zero(aik)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const auto& bkj = b(k, j);
                    if (!f.is_zero(bkj)) f.add_mul(c(i, j), aik, bkj);
                }
            }
        }
        return c;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (!(a.field_ == b.field_) || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        for (std::size_t k = 0; k < a.entries_.size(); ++k)
            if (!a.field_.equal(a.entries_[k], b.entries_[k])) return false;
        return true;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void require_same_shape(const Matrix& o, const char* op) const {
        if (!(field_ == o.field_)) throw InvalidArgument(std::string("field mismatch in ") + op);
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw InvalidArgument(std::string("shape mismatch in ") + op + ": " + shape() + " vs " + o.shape());
    }

    F field_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<value_type> entries_;
};

template <ExactField F>
Matrix<F> identity(std::size_t r, const F& field) {
    Matrix<F> m(field, r, r);
    for (std::size_t i = 0; i < r; ++i) m(i, i) = field.one();
    return m;
}

template <ExactField F>
Matrix<F> zero_matrix(std::size_t rows, std::size_t cols, const F& field) {
    return Matrix<F>(field, rows, cols);
}

/// E_{i,j} in M_r(k); i and j are 1-based.
template <ExactField F>
Matrix<F> elementary_matrix(std::size_t r, std::size_t i, std::size_t j, const F& field) {
    if (r == 0) throw InvalidArgument("dimension must be positive");
    if (i < 1 || i > r || j < 1 || j > r)
        throw InvalidArgument("elementary matrix index (" + std::to_string(i) + "," + std::to_string(j) +
                              ") out of range for dimension " + std::to_string(r));
    Matrix<F> m(field, r, r);
    m(i - 1, j - 1) = field.one();
    return m;
}

template <ExactField F>
Matrix<F> commutator(const Matrix<F>& a, const Matrix<F>& b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw InvalidArgument("commutator needs square matrices of one size, got " + a.shape() + " and " + b.shape());
    if (!(a.field() == b.field())) throw InvalidArgument("field mismatch in commutator");
    const auto& f = a.field();
    auto c = a * b;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t k = 0; k < b.cols(); ++k) {
            if (f.is_zero(b(i, k))) continue;
            const auto minus_bik = f.neg(b(i, k));
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (!f.is_zero(a(k, j))) f.add_mul(c(i, j), minus_bik, a(k, j));
        }
    return c;
}

template <ExactField F>
Matrix<F> block_diagonal(std::span<const Matrix<F>> blocks) {
    if (blocks.empty()) throw InvalidArgument("block_diagonal needs at least one block");
    std::size_t total = 0;
    for (const auto& b : blocks) {
        if (!b.is_square()) throw InvalidArgument("block_diagonal blocks must be square, got " + b.shape());
        if (!(b.field() == blocks.front().field())) throw InvalidArgument("field mismatch in block_diagonal");
        total += b.rows();
    }
    Matrix<F> out(blocks.front().field(), total, total);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) out(offset + i, offset + j) = b(i, j);
        offset += b.rows();
    }
    return out;
}

template <ExactField F>
Matrix<F> block_diagonal(std::initializer_list<Matrix<F>> blocks) {
    std::vector<Matrix<F>> v(blocks);
    return block_diagonal<F>(std::span<const Matrix<F>>(v));
}

/// Row vector holding the entries of m in row-major order.
template <ExactField F>
Matrix<F> flatten(const Matrix<F>& m) {
    auto e = m.entries();
    return Matrix<F>::row(m.field(), std::vector<typename F::value_type>(e.begin(), e.end()));
}

}  // namespace commrep
