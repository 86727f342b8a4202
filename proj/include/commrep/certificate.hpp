#pragma once

#include <commrep/commgraph.hpp>
#include <commrep/linalg.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace commrep {

template <ExactField F>
using MatrixPair = std::pair<Matrix<F>, Matrix<F>>;

/// Witness that a tuple (a_1, b_1, ..., a_n, b_n) of r x r matrices whose only
/// non-commuting pairs are {a_i, b_i} forces r >= n + 1.
///
/// The chain it records: a vector v with z_i v != 0 for every commutator
/// z_i = [a_i, b_i]; a covector alpha with alpha(v) != 0 and alpha(z_i v) != 0;
/// the Gram matrix of beta(x, y) = alpha([x, y] v) on (a_1..a_n, b_1..b_n),
/// which is alternating and non-degenerate; and the rank of
/// {v, a_1 v, ..., b_n v}. Since the kernel of X -> Xv on
/// span{I, a_i, b_i} plus kI is isotropic for beta, that rank is at least n + 1.
template <ExactField F>
struct LowerBoundCertificate {
    F field;
    std::size_t n = 0;
    std::size_t r = 0;
    Matrix<F> v;                 // r x 1
    Matrix<F> alpha;             // 1 x r
    std::vector<Matrix<F>> z;    // n commutators, r x r
    Matrix<F> gram;              // 2n x 2n
    std::size_t image_rank = 0;
    std::size_t bound = 0;

    friend bool operator==(const LowerBoundCertificate&, const LowerBoundCertificate&) = default;
};

/// Lexicographically first v with entries in {0, 1, ..., c} (c = number of
/// constraints) such that M v != 0 for every constraint M.
///
/// A proper affine condition on one coordinate removes at most (c+1)^(r-1)
/// grid points, so c constraints cannot cover the grid. The search fixes one
/// coordinate at a time and keeps the smallest value for which no constraint
/// is already forced to zero; by the same counting a completion always
/// exists, so the greedy choice is the lexicographic minimum.
template <ExactField F>
Matrix<F> find_avoiding_vector(const std::vector<Matrix<F>>& constraints, std::size_t dim, const F& field) {
    if (dim == 0) throw InvalidArgument("dimension must be positive");
    const std::size_t c = constraints.size();
    for (std::size_t k = 0; k < c; ++k) {
        if (constraints[k].cols() != dim)
            throw InvalidArgument("constraint " + std::to_string(k + 1) + " has " + std::to_string(constraints[k].cols()) +
                                  " columns, expected " + std::to_string(dim));
        if (!(constraints[k].field() == field)) throw InvalidArgument("constraint field mismatch");
        if (constraints[k].is_zero()) throw InvalidArgument("constraint " + std::to_string(k + 1) + " is the zero matrix");
    }
    if (const auto p = field.spec().characteristic(); p != 0 && p <= c)
        throw FieldTooSmall("F_" + std::to_string(p) + " needs p > " + std::to_string(c) +
                            " for the avoiding-vector grid");

    // last_col[k]: index of the last nonzero column of constraint k.
    std::vector<std::size_t> last_col(c, 0);
    std::vector<Matrix<F>> partial;
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t i = 0; i < constraints[k].rows(); ++i)
                if (!field.is_zero(constraints[k](i, j))) last_col[k] = j;
        partial.emplace_back(field, constraints[k].rows(), 1);
    }

    Matrix<F> v(field, dim, 1);
    for (std::size_t pos = 0; pos < dim; ++pos) {
        bool placed = false;
        for (std::size_t val = 0; val <= c && !placed; ++val) {
            const auto x = field.from_int(static_cast<long>(val));
            std::vector<Matrix<F>> next = partial;
            bool feasible = true;
            for (std::size_t k = 0; k < c; ++k) {
                for (std::size_t i = 0; i < constraints[k].rows(); ++i)
                    field.add_mul(next[k](i, 0), constraints[k](i, pos), x);
                if (last_col[k] <= pos && next[k].is_zero()) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                v(pos, 0) = x;
                partial = std::move(next);
                placed = true;
            }
        }
        if (!placed) throw std::logic_error("avoiding-vector grid exhausted; counting bound violated");
    }
    return v;
}

namespace detail {

template <ExactField F>
void check_pairs_shape(const std::vector<MatrixPair<F>>& pairs) {
    if (pairs.empty()) throw InvalidArgument("need at least one (a_i, b_i) pair");
    const auto& ref = pairs.front().first;
    for (const auto& [a, b] : pairs) {
        for (const auto* m : {&a, &b}) {
            if (!m->is_square() || m->rows() != ref.rows())
                throw InvalidArgument("all pair matrices must be square of dimension " + std::to_string(ref.rows()));
            if (!(m->field() == ref.field())) throw InvalidArgument("field mismatch among pair matrices");
        }
    }
}

template <ExactField F>
Assignment<F> pairs_as_assignment(const std::vector<MatrixPair<F>>& pairs) {
    std::vector<Matrix<F>> ms;
    for (const auto& p : pairs) ms.push_back(p.first);
    for (const auto& p : pairs) ms.push_back(p.second);
    return Assignment<F>(std::move(ms));
}

inline std::string vertex_name(std::size_t vertex, std::size_t n) {
    return vertex <= n ? "a_" + std::to_string(vertex) : "b_" + std::to_string(vertex - n);
}

template <ExactField F>
std::string describe(const Violation& bad, std::size_t n) {
    return "{" + vertex_name(bad.u, n) + ", " + vertex_name(bad.v, n) + "} " +
           (bad.is_edge ? "commute but must not" : "do not commute but must");
}

}  // namespace detail

/// Splits an assignment ordered (a_1..a_n, b_1..b_n) into pairs.
template <ExactField F>
std::vector<MatrixPair<F>> pairs_from_assignment(const Assignment<F>& assignment) {
    if (assignment.size() % 2 != 0)
        throw InvalidArgument("assignment has an odd number (" + std::to_string(assignment.size()) + ") of matrices");
    const auto n = assignment.size() / 2;
    std::vector<MatrixPair<F>> pairs;
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(assignment.matrices()[i], assignment.matrices()[n + i]);
    return pairs;
}

/// Throws PatternViolation when the pairs do not realize matching_graph(n) and
/// FieldTooSmall over F_p with p <= 2n + 1.
template <ExactField F>
LowerBoundCertificate<F> build_certificate(const std::vector<MatrixPair<F>>& pairs) {
    detail::check_pairs_shape(pairs);
    const std::size_t n = pairs.size();
    const auto& field = pairs.front().first.field();
    const std::size_t r = pairs.front().first.rows();

    auto check = realizes(detail::pairs_as_assignment(pairs), matching_graph(n));
    if (!check) throw PatternViolation("pair " + detail::describe<F>(check.violations.front(), n));

    if (const auto p = field.spec().characteristic(); p != 0 && p <= 2 * n + 1)
        throw FieldTooSmall("F_" + std::to_string(p) + " is too small for n = " + std::to_string(n) +
                            " pairs (need p > " + std::to_string(2 * n + 1) + ")");

    std::vector<Matrix<F>> z;
    for (const auto& [a, b] : pairs) z.push_back(commutator(a, b));

    auto v = find_avoiding_vector(z, r, field);

    std::vector<Matrix<F>> dual;
    dual.push_back(v.transpose());
    for (const auto& zi : z) dual.push_back((zi * v).transpose());
    auto alpha = find_avoiding_vector(dual, r, field).transpose();

    std::vector<const Matrix<F>*> basis;
    for (const auto& p : pairs) basis.push_back(&p.first);
    for (const auto& p : pairs) basis.push_back(&p.second);

    Matrix<F> gram(field, 2 * n, 2 * n);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i + 1; j < 2 * n; ++j) {
            gram(i, j) = (alpha * commutator(*basis[i], *basis[j]) * v)(0, 0);
            gram(j, i) = field.neg(gram(i, j));
        }

    std::vector<Matrix<F>> image{v};
    for (const auto* x : basis) image.push_back(*x * v);
    const auto image_rank = span_rank(image);
    if (image_rank < n + 1) throw std::logic_error("image rank below n + 1 for a valid input");

    return {field, n, r, std::move(v), std::move(alpha), std::move(z), std::move(gram), image_rank, n + 1};
}

enum class RejectReason {
    FieldMismatch,
    NMismatch,
    RMismatch,
    ShapeMismatch,
    PatternViolation,
    ZMismatch,
    ZZero,
    ZvZero,
    AlphaVZero,
    AlphaZvZero,
    GramMismatch,
    GramNotAlternating,
    GramDegenerate,
    ImageRankMismatch,
    ImageRankTooSmall,
    BoundMismatch,
    BoundExceedsR,
};

inline const char* reason_code(RejectReason r) {
    switch (r) {
        case RejectReason::FieldMismatch: return "field_mismatch";
        case RejectReason::NMismatch: return "n_mismatch";
        case RejectReason::RMismatch: return "r_mismatch";
        case RejectReason::ShapeMismatch: return "shape_mismatch";
        case RejectReason::PatternViolation: return "pattern_violation";
        case RejectReason::ZMismatch: return "z_mismatch";
        case RejectReason::ZZero: return "z_zero";
        case RejectReason::ZvZero: return "zv_zero";
        case RejectReason::AlphaVZero: return "alpha_v_zero";
        case RejectReason::AlphaZvZero: return "alpha_zv_zero";
        case RejectReason::GramMismatch: return "gram_mismatch";
        case RejectReason::GramNotAlternating: return "gram_not_alternating";
        case RejectReason::GramDegenerate: return "gram_degenerate";
        case RejectReason::ImageRankMismatch: return "image_rank_mismatch";
        case RejectReason::ImageRankTooSmall: return "image_rank_too_small";
        case RejectReason::BoundMismatch: return "bound_mismatch";
        case RejectReason::BoundExceedsR: return "bound_exceeds_r";
    }
    return "unknown";
}

struct Rejection {
    RejectReason reason;
    std::string detail;
};

struct VerificationResult {
    std::vector<Rejection> rejections;

    bool valid() const noexcept { return rejections.empty(); }
    explicit operator bool() const noexcept { return valid(); }

    bool has(RejectReason r) const {
        for (const auto& x : rejections)
            if (x.reason == r) return true;
        return false;
    }
};

/// Recomputes everything from the raw pairs. Shares no code with
/// build_certificate beyond matrix arithmetic and rank: commutators are
/// recomputed entry-wise from products, and beta is evaluated through
/// matrix-vector products x_i (x_j v) - x_j (x_i v).
template <ExactField F>
VerificationResult verify_certificate(const LowerBoundCertificate<F>& cert, const std::vector<MatrixPair<F>>& pairs) {
    VerificationResult out;
    auto reject = [&](RejectReason r, std::string detail) { out.rejections.push_back({r, std::move(detail)}); };

    if (pairs.empty()) {
        reject(RejectReason::NMismatch, "no pairs supplied");
        return out;
    }
    try {
        detail::check_pairs_shape(pairs);
    } catch (const InvalidArgument& e) {
        reject(RejectReason::ShapeMismatch, e.what());
        return out;
    }
    const auto& f = cert.field;
    const std::size_t n = pairs.size();
    const std::size_t r = pairs.front().first.rows();

    // Structural checks; anything wrong here makes the numeric checks meaningless.
    if (!(pairs.front().first.field() == f)) reject(RejectReason::FieldMismatch, "certificate and pairs use different fields");
    if (cert.n != n) reject(RejectReason::NMismatch, "certificate n = " + std::to_string(cert.n) + ", pairs give " + std::to_string(n));
    if (cert.r != r) reject(RejectReason::RMismatch, "certificate r = " + std::to_string(cert.r) + ", pairs give " + std::to_string(r));
    auto shape_ok = [&](const Matrix<F>& m, std::size_t rows, std::size_t cols) {
        return m.rows() == rows && m.cols() == cols && m.field() == f;
    };
    if (!shape_ok(cert.v, r, 1)) reject(RejectReason::ShapeMismatch, "v is " + cert.v.shape());
    if (!shape_ok(cert.alpha, 1, r)) reject(RejectReason::ShapeMismatch, "alpha is " + cert.alpha.shape());
    if (!shape_ok(cert.gram, 2 * n, 2 * n)) reject(RejectReason::ShapeMismatch, "gram is " + cert.gram.shape());
    if (cert.z.size() != n) reject(RejectReason::ShapeMismatch, "z has " + std::to_string(cert.z.size()) + " entries");
    for (const auto& zi : cert.z)
        if (!shape_ok(zi, r, r)) {
            reject(RejectReason::ShapeMismatch, "z entry is " + zi.shape());
            break;
        }
    if (!out.valid()) return out;

    std::vector<const Matrix<F>*> basis;
    for (const auto& p : pairs) basis.push_back(&p.first);
    for (const auto& p : pairs) basis.push_back(&p.second);

    // Commutation pattern, pair by pair.
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = i + 1; j < 2 * n; ++j) {
            if (j == i + n) continue;
            if (!(*basis[i] * *basis[j] == *basis[j] * *basis[i]))
                reject(RejectReason::PatternViolation, detail::vertex_name(i + 1, n) + " and " +
                                                           detail::vertex_name(j + 1, n) + " do not commute");
        }

    const auto& v = cert.v;
    const auto& alpha = cert.alpha;
    const auto alpha_v = (alpha * v)(0, 0);
    if (f.is_zero(alpha_v)) reject(RejectReason::AlphaVZero, "alpha(v) = 0");

    for (std::size_t i = 0; i < n; ++i) {
        const auto& [a, b] = pairs[i];
        const auto zi = a * b - b * a;
        const auto tag = "z_" + std::to_string(i + 1);
        if (!(zi == cert.z[i])) reject(RejectReason::ZMismatch, tag + " differs from [a_i, b_i]");
        if (zi.is_zero()) reject(RejectReason::ZZero, tag + " = 0");
        const auto ziv = zi * v;
        if (ziv.is_zero()) reject(RejectReason::ZvZero, tag + " v = 0");
        if (f.is_zero((alpha * ziv)(0, 0))) reject(RejectReason::AlphaZvZero, "alpha(" + tag + " v) = 0");
    }

    std::vector<Matrix<F>> images{v};
    for (const auto* x : basis) images.push_back(*x * v);

    bool gram_ok = true;
    for (std::size_t i = 0; i < 2 * n && gram_ok; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const auto bracket_v = *basis[i] * images[j + 1] - *basis[j] * images[i + 1];
            if (!f.equal((alpha * bracket_v)(0, 0), cert.gram(i, j))) {
                reject(RejectReason::GramMismatch, "gram mismatch at (" + std::to_string(i + 1) + "," +
                                                       std::to_string(j + 1) + ")");
                gram_ok = false;
                break;
            }
        }
    bool alternating = true;
    for (std::size_t i = 0; i < 2 * n; ++i) {
        if (!f.is_zero(cert.gram(i, i))) alternating = false;
        for (std::size_t j = 0; j < i; ++j)
            if (!f.is_zero(f.add(cert.gram(i, j), cert.gram(j, i)))) alternating = false;
    }
    if (!alternating) reject(RejectReason::GramNotAlternating, "gram is not antisymmetric with zero diagonal");
    if (rank(cert.gram) != 2 * n) reject(RejectReason::GramDegenerate, "gram rank below 2n");

    const auto recomputed_rank = span_rank(images);
    if (recomputed_rank != cert.image_rank)
        reject(RejectReason::ImageRankMismatch, "image_rank is " + std::to_string(recomputed_rank) + ", certificate says " +
                                                    std::to_string(cert.image_rank));
    if (recomputed_rank < n + 1) reject(RejectReason::ImageRankTooSmall, "image rank below n + 1");

    if (cert.bound != n + 1) reject(RejectReason::BoundMismatch, "bound must be n + 1 = " + std::to_string(n + 1));
    if (cert.bound > r) reject(RejectReason::BoundExceedsR, "bound exceeds r");
    return out;
}

}  // namespace commrep
