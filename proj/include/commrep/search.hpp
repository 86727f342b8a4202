#pragma once

#include <commrep/commgraph.hpp>
#include <commrep/linalg.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace commrep {

enum class SearchMode { All, InvertibleOnly };

inline const char* to_string(SearchMode m) { return m == SearchMode::All ? "all" : "invertible_only"; }

inline SearchMode parse_search_mode(const std::string& s) {
    if (s == "all") return SearchMode::All;
    if (s == "invertible_only") return SearchMode::InvertibleOnly;
    throw InvalidArgument("unknown search mode '" + s + "' (expected all or invertible_only)");
}

struct ExistsOutcome {
    enum class Kind { Found, None, BudgetExceeded };

    Kind kind = Kind::None;
    std::optional<Assignment<PrimeField>> witness;
    /// Constraint-check nodes, identical for any number of workers. Equals the
    /// budget when the budget was exceeded.
    std::uint64_t nodes = 0;
};

/// Number of r x r matrices over F_p, or nullopt if it does not fit in 63 bits.
inline std::optional<std::uint64_t> candidate_count(std::uint64_t p, std::size_t r) {
    std::uint64_t count = 1;
    for (std::size_t k = 0; k < r * r; ++k) {
        if (count > (std::numeric_limits<std::uint64_t>::max() >> 1) / p) return std::nullopt;
        count *= p;
    }
    return count;
}

namespace detail {

// Depth-first search over vertex-by-vertex matrix choices. Candidates are the
// integers 0..p^(r^2)-1 read as base-p digit strings of the row-major entries,
// most significant first. The search space is split by the candidate of
// vertex 1; partitions are pulled in increasing order and merged in that order,
// so results (including node counts) match a single-threaded run exactly.
class RealizationSearch {
public:
    RealizationSearch(const CommGraph& graph, const PrimeField& field, std::size_t r, SearchMode mode,
                      std::uint64_t budget)
        : field_(field), p_(field.characteristic()), r_(r), m_(graph.vertex_count()), mode_(mode), budget_(budget),
          edge_(m_ * m_, false) {
        for (auto [u, v] : graph.edges()) edge_[(u - 1) * m_ + (v - 1)] = edge_[(v - 1) * m_ + (u - 1)] = true;
        auto count = candidate_count(p_, r_);
        if (!count || *count > budget_)
            throw GuardViolation("p^(r^2) candidates per vertex exceed the budget of " + std::to_string(budget_) +
                                 " nodes (p = " + std::to_string(p_) + ", r = " + std::to_string(r_) + ")");
        count_ = *count;
    }

    ExistsOutcome run(unsigned jobs) {
        jobs = std::max(1u, jobs);
        partitions_ = std::vector<Partition>(count_);
        progress_ = std::vector<std::atomic<std::uint64_t>>(count_);
        next_.store(0);
        best_found_.store(std::numeric_limits<std::uint64_t>::max());

        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < jobs; ++t) pool.emplace_back([this] { worker(); });
            for (auto& t : pool) t.join();
        }
        return merge();
    }

private:
    using Small = std::vector<std::uint32_t>;

    struct Partition {
        enum class State { Pending, Exhausted, Found, Aborted } state = State::Pending;
        std::uint64_t nodes = 0;
        std::vector<std::uint64_t> choice;
    };

    struct Frame {
        std::uint64_t index;
        Small matrix;
    };

    void worker() {
        for (;;) {
            const auto j = next_.fetch_add(1);
            if (j >= count_) return;
            if (best_found_.load() < j) continue;
            partitions_[j] = explore(j);
            if (partitions_[j].state == Partition::State::Found) {
                auto cur = best_found_.load();
                while (j < cur && !best_found_.compare_exchange_weak(cur, j)) {
                }
            }
        }
    }

    // Sum of the recorded progress of partitions 0..j; a lower bound on the
    // nodes a sequential run would have spent on reaching the end of j.
    std::uint64_t prefix_progress(std::uint64_t j) const {
        std::uint64_t s = 0;
        for (std::uint64_t i = 0; i <= j; ++i) s += progress_[i].load(std::memory_order_relaxed);
        return s;
    }

    Partition explore(std::uint64_t first) {
        Partition part;
        std::vector<Frame> stack;
        stack.reserve(m_);
        bool abort = false;

        auto visit = [&](std::size_t depth, std::uint64_t index) -> bool {
            if (part.nodes == budget_) {
                abort = true;
                return false;
            }
            ++part.nodes;
            if ((part.nodes & 0x3ff) == 0) {
                progress_[first].store(part.nodes, std::memory_order_relaxed);
                if (prefix_progress(first) > budget_ || best_found_.load() < first) {
                    abort = true;
                    return false;
                }
            }
            Small cand = decode(index);
            if (mode_ == SearchMode::InvertibleOnly && !invertible(cand)) return false;
            for (std::size_t u = 0; u < depth; ++u)
                if (commutes(cand, stack[u].matrix) == edge_[u * m_ + depth]) return false;
            stack.push_back({index, std::move(cand)});
            return true;
        };

        // Iterative DFS; next_index[d] is the next candidate to try at depth d.
        std::vector<std::uint64_t> next_index(m_, 0);
        if (visit(0, first)) {
            std::size_t depth = 1;
            while (depth >= 1 && !abort) {
                if (depth == m_) {
                    part.state = Partition::State::Found;
                    for (const auto& f : stack) part.choice.push_back(f.index);
                    break;
                }
                if (next_index[depth] == count_) {
                    next_index[depth] = 0;
                    stack.pop_back();
                    --depth;
                    continue;
                }
                if (visit(depth, next_index[depth]++)) ++depth;
            }
        }
        if (part.state != Partition::State::Found)
            part.state = abort ? Partition::State::Aborted : Partition::State::Exhausted;
        progress_[first].store(part.nodes, std::memory_order_relaxed);
        return part;
    }

    ExistsOutcome merge() const {
        ExistsOutcome out;
        std::uint64_t spent = 0;
        for (std::uint64_t j = 0; j < count_; ++j) {
            const auto& part = partitions_[j];
            if (part.state == Partition::State::Aborted || part.state == Partition::State::Pending ||
                spent + part.nodes > budget_) {
                out.kind = ExistsOutcome::Kind::BudgetExceeded;
                out.nodes = budget_;
                return out;
            }
            spent += part.nodes;
            if (part.state == Partition::State::Found) {
                out.kind = ExistsOutcome::Kind::Found;
                out.nodes = spent;
                std::vector<Matrix<PrimeField>> ms;
                for (auto idx : part.choice) ms.push_back(to_matrix(decode(idx)));
                out.witness = Assignment<PrimeField>(std::move(ms));
                return out;
            }
        }
        out.kind = ExistsOutcome::Kind::None;
        out.nodes = spent;
        return out;
    }

    Small decode(std::uint64_t index) const {
        Small m(r_ * r_);
        for (std::size_t k = r_ * r_; k-- > 0;) {
            m[k] = static_cast<std::uint32_t>(index % p_);
            index /= p_;
        }
        return m;
    }

    Matrix<PrimeField> to_matrix(const Small& s) const {
        return Matrix<PrimeField>(field_, r_, r_, std::vector<std::uint64_t>(s.begin(), s.end()));
    }

    bool commutes(const Small& a, const Small& b) const {
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < r_; ++j) {
                std::uint64_t ab = 0, ba = 0;
                for (std::size_t k = 0; k < r_; ++k) {
                    ab += std::uint64_t{a[i * r_ + k]} * b[k * r_ + j];
                    ba += std::uint64_t{b[i * r_ + k]} * a[k * r_ + j];
                }
                if (ab % p_ != ba % p_) return false;
            }
        return true;
    }

    bool invertible(Small a) const {
        for (std::size_t c = 0; c < r_; ++c) {
            std::size_t piv = c;
            while (piv < r_ && a[piv * r_ + c] == 0) ++piv;
            if (piv == r_) return false;
            for (std::size_t j = 0; j < r_; ++j) std::swap(a[piv * r_ + j], a[c * r_ + j]);
            const auto inv = field_.inv(a[c * r_ + c]);
            for (std::size_t i = c + 1; i < r_; ++i) {
                const auto factor = field_.mul(a[i * r_ + c], inv);
                if (factor == 0) continue;
                for (std::size_t j = c; j < r_; ++j)
                    a[i * r_ + j] = static_cast<std::uint32_t>(field_.sub(a[i * r_ + j], field_.mul(factor, a[c * r_ + j])));
            }
        }
        return true;
    }

    PrimeField field_;
    std::uint64_t p_;
    std::size_t r_;
    std::size_t m_;
    SearchMode mode_;
    std::uint64_t budget_;
    std::vector<bool> edge_;
    std::uint64_t count_ = 0;

    std::vector<Partition> partitions_;
    std::vector<std::atomic<std::uint64_t>> progress_;
    std::atomic<std::uint64_t> next_{0};
    std::atomic<std::uint64_t> best_found_{0};
};

}  // namespace detail

/// Decides whether graph is realizable by r x r matrices over F_p, visiting at
/// most `budget` constraint-check nodes. None is a proof of non-existence.
/// Throws GuardViolation when p^(r^2) alone exceeds the budget.
inline ExistsOutcome exists_realization(const CommGraph& graph, const PrimeField& field, std::size_t r, SearchMode mode,
                                        std::uint64_t budget, unsigned jobs = 1) {
    if (r == 0) throw InvalidArgument("dimension must be positive");
    return detail::RealizationSearch(graph, field, r, mode, budget).run(jobs);
}

enum class SearchStatus { Exact, Bracket, ExhaustedBudget };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::Exact: return "exact";
        case SearchStatus::Bracket: return "bracket";
        case SearchStatus::ExhaustedBudget: return "exhausted_budget";
    }
    return "unknown";
}

/// How one dimension was settled during the ascent.
struct LevelOutcome {
    enum class Method { Exhaustive, Theorem2, Found, Infeasible, BudgetExceeded };

    std::size_t r = 0;
    Method method = Method::Exhaustive;
    std::uint64_t nodes = 0;
};

inline const char* to_string(LevelOutcome::Method m) {
    switch (m) {
        case LevelOutcome::Method::Exhaustive: return "exhaustive";
        case LevelOutcome::Method::Theorem2: return "theorem2";
        case LevelOutcome::Method::Found: return "found";
        case LevelOutcome::Method::Infeasible: return "infeasible";
        case LevelOutcome::Method::BudgetExceeded: return "budget_exceeded";
    }
    return "unknown";
}

struct SearchReport {
    CommGraph graph;
    FieldSpec field;
    SearchMode mode = SearchMode::All;
    SearchStatus status = SearchStatus::Bracket;
    std::size_t lower = 1;  // smallest r not excluded
    std::optional<std::size_t> upper;
    std::optional<Assignment<PrimeField>> witness;
    bool witness_from_hint = false;
    std::vector<LevelOutcome> levels;
    std::uint64_t nodes_explored = 0;
    std::uint64_t budget = 0;
};

struct SearchOptions {
    std::size_t r_max = 4;
    SearchMode mode = SearchMode::All;
    std::uint64_t budget = 10'000'000;
    std::optional<Assignment<PrimeField>> hint;
    unsigned jobs = 1;
};

/// Ascends r = 1, 2, ... up to r_max (or the hint's dimension), excluding each
/// level by exhaustive search when it fits the remaining budget and, for
/// perfect matchings on 2n vertices, by the analytic bound r >= n + 1.
inline SearchReport min_realization_dim(const CommGraph& graph, const PrimeField& field, const SearchOptions& opts) {
    if (opts.r_max == 0) throw InvalidArgument("r_max must be at least 1");
    SearchReport rep{graph, field.spec(), opts.mode, SearchStatus::Bracket, 1, std::nullopt, std::nullopt, false, {}, 0, opts.budget};

    if (opts.hint) {
        const auto& hint = *opts.hint;
        if (!(hint.field() == field)) throw InvalidArgument("invalid hint: field differs from the search field");
        auto check = realizes(hint, graph);
        if (!check) {
            const auto& bad = check.violations.front();
            throw InvalidArgument("invalid hint: vertices " + std::to_string(bad.u) + " and " + std::to_string(bad.v) +
                                  (bad.is_edge ? " commute but are adjacent" : " do not commute but are not adjacent"));
        }
        if (opts.mode == SearchMode::InvertibleOnly)
            for (const auto& m : hint.matrices())
                if (!is_invertible(m)) throw InvalidArgument("invalid hint: singular matrix in invertible_only mode");
        rep.upper = hint.dim();
        rep.witness = hint;
        rep.witness_from_hint = true;
    }

    const bool matching = graph.is_perfect_matching();
    const std::size_t analytic_floor = matching ? graph.vertex_count() / 2 + 1 : 1;
    bool budget_hit = false;
    std::size_t excluded_through = 0;

    for (std::size_t r = 1; r <= opts.r_max; ++r) {
        if (rep.upper && r >= *rep.upper) break;
        const auto remaining = opts.budget - rep.nodes_explored;
        const auto count = candidate_count(field.characteristic(), r);
        LevelOutcome level{r};
        bool excluded = false;
        if (count && *count <= remaining) {
            auto res = exists_realization(graph, field, r, opts.mode, remaining, opts.jobs);
            rep.nodes_explored += res.nodes;
            level.nodes = res.nodes;
            if (res.kind == ExistsOutcome::Kind::Found) {
                level.method = LevelOutcome::Method::Found;
                rep.levels.push_back(level);
                rep.upper = r;
                rep.witness = std::move(res.witness);
                rep.witness_from_hint = false;
                break;
            }
            if (res.kind == ExistsOutcome::Kind::None) {
                level.method = LevelOutcome::Method::Exhaustive;
                excluded = true;
            } else {
                level.method = LevelOutcome::Method::BudgetExceeded;
                budget_hit = true;
            }
        } else {
            level.method = LevelOutcome::Method::Infeasible;
        }
        if (!excluded && r < analytic_floor) {
            level.method = LevelOutcome::Method::Theorem2;
            excluded = true;
        }
        rep.levels.push_back(level);
        if (!excluded) break;
        excluded_through = r;
    }

    rep.lower = excluded_through + 1;
    if (rep.upper && rep.lower == *rep.upper)
        rep.status = SearchStatus::Exact;
    else
        rep.status = budget_hit ? SearchStatus::ExhaustedBudget : SearchStatus::Bracket;
    return rep;
}

}  // namespace commrep
