#pragma once

#include <commrep/matrix.hpp>

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace commrep {

/// Simple undirected graph on vertices 1..m. An edge means "these two
/// matrices must not commute"; a non-edge means they must commute.
class CommGraph {
public:
    using Edge = std::pair<std::size_t, std::size_t>;

    explicit CommGraph(std::size_t vertex_count) : m_(vertex_count) {
        if (vertex_count == 0) throw InvalidArgument("graph needs at least one vertex");
    }

    CommGraph(std::size_t vertex_count, const std::vector<Edge>& edges) : CommGraph(vertex_count) {
        for (auto [u, v] : edges) add_edge(u, v);
    }

    void add_edge(std::size_t u, std::size_t v) {
        if (u < 1 || u > m_ || v < 1 || v > m_)
            throw InvalidArgument("edge {" + std::to_string(u) + "," + std::to_string(v) + "} has endpoint outside [1," +
                                  std::to_string(m_) + "]");
        if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
        if (!edges_.insert(normalized(u, v)).second)
            throw InvalidArgument("duplicate edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
    }

    std::size_t vertex_count() const noexcept { return m_; }
    const std::set<Edge>& edges() const noexcept { return edges_; }
    bool has_edge(std::size_t u, std::size_t v) const { return u != v && edges_.count(normalized(u, v)) > 0; }

    std::size_t degree(std::size_t v) const {
        return static_cast<std::size_t>(
            std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.first == v || e.second == v; }));
    }

    /// Every vertex has degree exactly one, i.e. the graph is a relabeled matching graph.
    bool is_perfect_matching() const {
        std::vector<std::size_t> deg(m_ + 1, 0);
        for (auto [u, v] : edges_) ++deg[u], ++deg[v];
        return std::all_of(deg.begin() + 1, deg.end(), [](std::size_t d) { return d == 1; });
    }

    /// The graph with vertex v renamed to perm[v-1] (perm is a permutation of 1..m).
    CommGraph relabeled(const std::vector<std::size_t>& perm) const {
        if (perm.size() != m_) throw InvalidArgument("permutation length differs from vertex count");
        CommGraph g(m_);
        for (auto [u, v] : edges_) g.add_edge(perm[u - 1], perm[v - 1]);
        return g;
    }

    friend bool operator==(const CommGraph&, const CommGraph&) = default;

private:
    static Edge normalized(std::size_t u, std::size_t v) { return u < v ? Edge{u, v} : Edge{v, u}; }

    std::size_t m_;
    std::set<Edge> edges_;
};

/// n disjoint edges {a_i, b_i} on 2n vertices, with a_i at index i and b_i at n+i.
inline CommGraph matching_graph(std::size_t n) {
    if (n == 0) throw InvalidArgument("matching graph needs n >= 1");
    CommGraph g(2 * n);
    for (std::size_t i = 1; i <= n; ++i) g.add_edge(i, n + i);
    return g;
}

/// One square matrix per vertex, all of one size over one field.
template <ExactField F>
class Assignment {
public:
    explicit Assignment(std::vector<Matrix<F>> matrices) : matrices_(std::move(matrices)) {
        if (matrices_.empty()) throw InvalidArgument("assignment needs at least one matrix");
        const auto& first = matrices_.front();
        if (!first.is_square()) throw InvalidArgument("assignment matrices must be square, got " + first.shape());
        for (std::size_t k = 1; k < matrices_.size(); ++k) {
            if (!(matrices_[k].field() == first.field()))
                throw InvalidArgument("assignment matrix " + std::to_string(k + 1) + " has a different field");
            if (matrices_[k].rows() != first.rows() || matrices_[k].cols() != first.cols())
                throw InvalidArgument("assignment matrix " + std::to_string(k + 1) + " is " + matrices_[k].shape() +
                                      ", expected " + first.shape());
        }
    }

    std::size_t size() const noexcept { return matrices_.size(); }
    std::size_t dim() const noexcept { return matrices_.front().rows(); }
    const F& field() const noexcept { return matrices_.front().field(); }
    const std::vector<Matrix<F>>& matrices() const noexcept { return matrices_; }
    /// 1-based vertex lookup.
    const Matrix<F>& at_vertex(std::size_t v) const { return matrices_.at(v - 1); }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<Matrix<F>> matrices_;
};

struct Violation {
    std::size_t u = 0;  // 1-based, u < v
    std::size_t v = 0;
    bool is_edge = false;  // the graph demands non-commutation
    bool commutes = false;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct RealizationCheck {
    bool realizes = true;
    std::vector<Violation> violations;

    explicit operator bool() const noexcept { return realizes; }
};

namespace detail {

// Sparse rows of a square matrix, used so that checking all O(m^2) pairs of a
// sparse assignment stays cheap even for large dimensions.
template <ExactField F>
struct SparseRows {
    std::vector<std::vector<std::pair<std::size_t, typename F::value_type>>> rows;

    explicit SparseRows(const Matrix<F>& m) : rows(m.rows()) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                if (!m.field().is_zero(m(i, j))) rows[i].emplace_back(j, m(i, j));
    }
};

template <ExactField F>
class CommutationTester {
public:
    CommutationTester(F field, std::size_t dim)
        : field_(std::move(field)), ab_(dim, field_.zero()), ba_(dim, field_.zero()), touched_flag_(dim, false) {}

    bool commutes(const SparseRows<F>& a, const SparseRows<F>& b) {
        const auto n = a.rows.size();
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [k, aik] : a.rows[i])
                for (const auto& [j, bkj] : b.rows[k]) field_.add_mul(ab_[touch(j)], aik, bkj);
            for (const auto& [k, bik] : b.rows[i])
                for (const auto& [j, akj] : a.rows[k]) field_.add_mul(ba_[touch(j)], bik, akj);
            bool row_equal = true;
            for (auto j : touched_) {
                if (!field_.equal(ab_[j], ba_[j])) row_equal = false;
                ab_[j] = field_.zero();
                ba_[j] = field_.zero();
                touched_flag_[j] = false;
            }
            touched_.clear();
            if (!row_equal) return false;
        }
        return true;
    }

private:
    std::size_t touch(std::size_t j) {
        if (!touched_flag_[j]) {
            touched_flag_[j] = true;
            touched_.push_back(j);
        }
        return j;
    }

    F field_;
    std::vector<typename F::value_type> ab_, ba_;
    std::vector<bool> touched_flag_;
    std::vector<std::size_t> touched_;
};

}  // namespace detail

/// Checks every pair u < v: the commutator must be nonzero exactly on edges.
/// All violating pairs are reported, in lexicographic order.
template <ExactField F>
RealizationCheck realizes(const Assignment<F>& assignment, const CommGraph& graph) {
    if (assignment.size() != graph.vertex_count())
        throw InvalidArgument("assignment has " + std::to_string(assignment.size()) + " matrices but graph has " +
                              std::to_string(graph.vertex_count()) + " vertices");
    std::vector<detail::SparseRows<F>> sparse;
    sparse.reserve(assignment.size());
    for (const auto& m : assignment.matrices()) sparse.emplace_back(m);
    detail::CommutationTester<F> tester(assignment.field(), assignment.dim());

    RealizationCheck result;
    for (std::size_t u = 1; u <= graph.vertex_count(); ++u) {
        for (std::size_t v = u + 1; v <= graph.vertex_count(); ++v) {
            const bool edge = graph.has_edge(u, v);
            const bool comm = tester.commutes(sparse[u - 1], sparse[v - 1]);
            if (edge == comm) {
                result.realizes = false;
                result.violations.push_back({u, v, edge, comm});
            }
        }
    }
    return result;
}

}  // namespace commrep
