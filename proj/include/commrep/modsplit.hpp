#pragma once

#include <commrep/linalg.hpp>

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace commrep {

using FpMatrix = Matrix<PrimeField>;

/// A finite-dimensional module over F_p given by invertible generator matrices.
class ModuleSpec {
public:
    ModuleSpec(PrimeField field, std::vector<FpMatrix> generators)
        : field_(std::move(field)), generators_(std::move(generators)) {
        if (generators_.empty()) throw InvalidArgument("module needs at least one generator");
        dim_ = generators_.front().rows();
        for (std::size_t k = 0; k < generators_.size(); ++k) {
            const auto& g = generators_[k];
            const auto tag = "generator " + std::to_string(k + 1);
            if (!(g.field() == field_)) throw InvalidArgument(tag + " has a different field");
            if (!g.is_square() || g.rows() != dim_) throw InvalidArgument(tag + " is " + g.shape() + ", expected square of dimension " + std::to_string(dim_));
            if (!is_invertible(g)) throw InvalidArgument(tag + " is not invertible");
        }
    }

    const PrimeField& field() const noexcept { return field_; }
    std::size_t dim() const noexcept { return dim_; }
    const std::vector<FpMatrix>& generators() const noexcept { return generators_; }

private:
    PrimeField field_;
    std::size_t dim_ = 0;
    std::vector<FpMatrix> generators_;
};

/// Largest p^dim for which subspace searches enumerate every vector. Admits
/// dim <= 6 over F_2 and dim <= 4 over F_3.
inline constexpr std::uint64_t kEnumerationLimit = 81;

inline void check_enumeration_guard(std::uint64_t p, std::size_t dim) {
    std::uint64_t size = 1;
    for (std::size_t k = 0; k < dim; ++k) {
        size *= p;
        if (size > kEnumerationLimit)
            throw GuardViolation("F_" + std::to_string(p) + "^" + std::to_string(dim) + " is too large to enumerate (limit " +
                                 std::to_string(kEnumerationLimit) + " vectors)");
    }
}

namespace detail {

inline bool in_span(const std::vector<FpMatrix>& basis, const FpMatrix& v) {
    if (basis.empty()) return v.is_zero();
    auto with = basis;
    with.push_back(v);
    return span_rank(with) == basis.size();
}

inline std::vector<FpMatrix> spin_with(const std::vector<FpMatrix>& gens, const FpMatrix& v) {
    std::vector<FpMatrix> basis{v};
    for (std::size_t k = 0; k < basis.size(); ++k)
        for (const auto& g : gens) {
            auto image = g * basis[k];
            if (!in_span(basis, image)) basis.push_back(std::move(image));
        }
    return basis;
}

// k-th vector of F_p^dim in base-p order, first coordinate most significant.
inline FpMatrix enumerate_vector(const PrimeField& f, std::size_t dim, std::uint64_t k) {
    FpMatrix v(f, dim, 1);
    const auto p = f.characteristic();
    for (std::size_t i = dim; i-- > 0;) {
        v(i, 0) = k % p;
        k /= p;
    }
    return v;
}

struct Split {
    std::vector<std::size_t> dims;
    FpMatrix flag;  // columns: adapted basis
};

}  // namespace detail

/// Smallest subspace containing v and closed under every generator. The basis
/// is v followed by the new images, in the order they were found.
inline std::vector<FpMatrix> spin(const FpMatrix& v, const ModuleSpec& spec) {
    if (v.rows() != spec.dim() || v.cols() != 1) throw InvalidArgument("spin vector must be a column of length " + std::to_string(spec.dim()));
    if (!(v.field() == spec.field())) throw InvalidArgument("spin vector has a different field");
    if (v.is_zero()) throw InvalidArgument("cannot spin the zero vector");
    return detail::spin_with(spec.generators(), v);
}

struct MinimalSubspace {
    bool irreducible = false;
    std::vector<FpMatrix> basis;  // empty when irreducible
};

/// Every minimal submodule is cyclic, so spinning each nonzero vector and
/// keeping the smallest proper result finds one. Ties go to the first vector
/// in base-p order.
inline MinimalSubspace minimal_invariant_subspace(const ModuleSpec& spec) {
    const auto p = spec.field().characteristic();
    check_enumeration_guard(p, spec.dim());
    std::uint64_t total = 1;
    for (std::size_t k = 0; k < spec.dim(); ++k) total *= p;

    MinimalSubspace best{true, {}};
    for (std::uint64_t k = 1; k < total; ++k) {
        auto s = detail::spin_with(spec.generators(), detail::enumerate_vector(spec.field(), spec.dim(), k));
        if (s.size() < spec.dim() && (best.irreducible || s.size() < best.basis.size())) {
            best = {false, std::move(s)};
            if (best.basis.size() == 1) break;
        }
    }
    return best;
}

namespace detail {

inline Split split_recursive(const PrimeField& f, std::size_t dim, const std::vector<FpMatrix>& gens) {
    ModuleSpec spec(f, gens);
    auto sub = minimal_invariant_subspace(spec);
    if (sub.irreducible) return {{dim}, identity(dim, f)};

    // Adapted basis: the submodule first, then standard vectors completing it.
    auto cols = sub.basis;
    for (std::size_t j = 0; j < dim && cols.size() < dim; ++j) {
        FpMatrix e(f, dim, 1);
        e(j, 0) = f.one();
        if (!in_span(cols, e)) cols.push_back(std::move(e));
    }
    FpMatrix basis(f, dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) basis(i, j) = cols[j](i, 0);
    const auto basis_inv = inverse(basis);

    const auto k = sub.basis.size();
    const auto rest = dim - k;
    std::vector<FpMatrix> quotient_gens;
    for (const auto& g : gens) {
        auto conj = basis_inv * g * basis;
        FpMatrix q(f, rest, rest);
        for (std::size_t i = 0; i < rest; ++i)
            for (std::size_t j = 0; j < rest; ++j) q(i, j) = conj(k + i, k + j);
        quotient_gens.push_back(std::move(q));
    }
    auto tail = split_recursive(f, rest, quotient_gens);

    Split out{{k}, block_diagonal({identity(k, f), tail.flag})};
    out.dims.insert(out.dims.end(), tail.dims.begin(), tail.dims.end());
    out.flag = basis * out.flag;
    return out;
}

}  // namespace detail

/// Dimensions of a composition series over the base field F_p (not its
/// algebraic closure), bottom factor first.
struct CompositionReport {
    std::vector<std::size_t> factor_dims;
    std::vector<std::size_t> series;  // 0 = d_0 < d_1 < ... < d_s = dim
    FpMatrix flag_basis;              // columns adapted to the series
    bool base_field_only = true;
};

/// True iff m is zero below the diagonal blocks whose sizes are `blocks`.
inline bool is_block_upper_triangular(const FpMatrix& m, const std::vector<std::size_t>& blocks) {
    std::size_t start = 0;
    for (auto b : blocks) {
        for (std::size_t i = start + b; i < m.rows(); ++i)
            for (std::size_t j = start; j < start + b; ++j)
                if (m(i, j) != 0) return false;
        start += b;
    }
    return start == m.rows();
}

inline CompositionReport composition_factor_dims(const ModuleSpec& spec) {
    check_enumeration_guard(spec.field().characteristic(), spec.dim());
    auto split = detail::split_recursive(spec.field(), spec.dim(), spec.generators());
    CompositionReport rep{split.dims, {0}, std::move(split.flag), true};
    for (auto d : rep.factor_dims) rep.series.push_back(rep.series.back() + d);

    const auto inv = inverse(rep.flag_basis);
    for (const auto& g : spec.generators())
        if (!is_block_upper_triangular(inv * g * rep.flag_basis, rep.factor_dims))
            throw std::logic_error("flag basis does not block-triangularize a generator");
    return rep;
}

/// Simultaneously upper triangularizable over F_p: all composition factors
/// are one-dimensional. On success the flag basis of the report conjugates
/// every generator to upper triangular form.
inline bool is_triangularizable(const ModuleSpec& spec) {
    auto rep = composition_factor_dims(spec);
    for (auto d : rep.factor_dims)
        if (d != 1) return false;
    return true;
}

/// Outcome of checking the dimension-counting chain
///   sum_j prod_i d_ji >= sum_j 2^|S_j| >= sum_j 2|S_j| >= 2n,
/// where S_j = { i : d_ji >= 2 }.
struct CountCheck {
    enum class Verdict { Satisfied, PreconditionFailed };

    Verdict verdict = Verdict::Satisfied;
    std::size_t t = 0;
    std::size_t n = 0;
    std::vector<std::vector<std::size_t>> sets;     // S_j, 1-based column indices
    std::vector<std::size_t> uncovered_columns;     // 1-based
    mpz_class sum_of_products;
    mpz_class sum_of_powers;
    mpz_class sum_of_twice_sizes;
    mpz_class two_n;
    bool products_ge_powers = false;
    bool powers_ge_twice = false;
    bool twice_ge_two_n = false;
};

inline const char* to_string(CountCheck::Verdict v) {
    return v == CountCheck::Verdict::Satisfied ? "satisfied" : "precondition_failed";
}

/// dims[j][i] is the dimension of factor i's constituent in composition
/// factor j. Every column must reach 2 somewhere; a column of ones is the
/// triangularizable (solvable) case and fails the precondition.
inline CountCheck theorem3_count_check(const std::vector<std::vector<std::uint64_t>>& dims) {
    if (dims.empty() || dims.front().empty()) throw InvalidArgument("dims table must be non-empty");
    CountCheck out;
    out.t = dims.size();
    out.n = dims.front().size();
    std::vector<bool> covered(out.n, false);
    for (std::size_t j = 0; j < out.t; ++j) {
        if (dims[j].size() != out.n)
            throw InvalidArgument("row " + std::to_string(j + 1) + " has " + std::to_string(dims[j].size()) +
                                  " entries, expected " + std::to_string(out.n));
        mpz_class prod = 1;
        std::vector<std::size_t> s;
        for (std::size_t i = 0; i < out.n; ++i) {
            const auto d = dims[j][i];
            if (d < 1)
                throw InvalidArgument("entry (" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ") must be positive");
            prod *= mpz_class(static_cast<unsigned long>(d));
            if (d >= 2) {
                s.push_back(i + 1);
                covered[i] = true;
            }
        }
        mpz_class pow;
        mpz_ui_pow_ui(pow.get_mpz_t(), 2, s.size());
        out.sum_of_products += prod;
        out.sum_of_powers += pow;
        out.sum_of_twice_sizes += 2 * static_cast<unsigned long>(s.size());
        out.sets.push_back(std::move(s));
    }
    out.two_n = 2 * static_cast<unsigned long>(out.n);
    for (std::size_t i = 0; i < out.n; ++i)
        if (!covered[i]) out.uncovered_columns.push_back(i + 1);

    out.products_ge_powers = out.sum_of_products >= out.sum_of_powers;
    out.powers_ge_twice = out.sum_of_powers >= out.sum_of_twice_sizes;
    out.twice_ge_two_n = out.sum_of_twice_sizes >= out.two_n;
    out.verdict = out.uncovered_columns.empty() ? CountCheck::Verdict::Satisfied : CountCheck::Verdict::PreconditionFailed;
    if (out.verdict == CountCheck::Verdict::Satisfied &&
        !(out.products_ge_powers && out.powers_ge_twice && out.twice_ge_two_n))
        throw std::logic_error("counting chain fails on a table satisfying the precondition");
    return out;
}

}  // namespace commrep
