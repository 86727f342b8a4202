#pragma once

#include <commrep/commgraph.hpp>
#include <commrep/linalg.hpp>

#include <vector>

namespace commrep {

/// The (n+1)-dimensional realization of matching_graph(n):
///   a_i = I + E_{1,i+1},  b_i = I - lambda * E_{i+1,i+1},
/// returned in the order a_1..a_n, b_1..b_n. Then [a_i, b_i] = -lambda E_{1,i+1}
/// and every other pair commutes.
template <ExactField F>
Assignment<F> sharp_witness(std::size_t n, const typename F::value_type& lambda, const F& field) {
    if (n == 0) throw InvalidArgument("sharp witness needs n >= 1");
    if (field.is_zero(lambda)) throw InvalidArgument("lambda must be nonzero");
    const std::size_t r = n + 1;
    const auto id = identity(r, field);
    std::vector<Matrix<F>> out;
    out.reserve(2 * n);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(id);
        out.back()(0, i) = field.one();
    }
    const auto diagonal = field.sub(field.one(), lambda);
    for (std::size_t i = 1; i <= n; ++i) {
        out.push_back(id);
        out.back()(i, i) = diagonal;
    }
    return Assignment<F>(std::move(out));
}

/// True iff every matrix of sharp_witness(n, lambda) is invertible. Decided by
/// rank, not by the closed form lambda != 1, so tests can compare the two.
template <ExactField F>
bool witness_invertibility(std::size_t n, const typename F::value_type& lambda, const F& field) {
    auto w = sharp_witness(n, lambda, field);
    for (const auto& m : w.matrices())
        if (!is_invertible(m)) return false;
    return true;
}

/// Places the generators of factor i into the i-th diagonal block, with
/// identity blocks elsewhere. Output is flat, factor by factor, generator by
/// generator. Images of different factors commute.
template <ExactField F>
std::vector<Matrix<F>> product_block_embedding(const std::vector<std::vector<Matrix<F>>>& factors) {
    if (factors.empty()) throw InvalidArgument("product_block_embedding needs at least one factor");
    std::vector<Matrix<F>> identities;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& gens = factors[i];
        if (gens.empty()) throw InvalidArgument("factor " + std::to_string(i + 1) + " has no generators");
        for (const auto& g : gens) {
            if (!g.is_square() || g.rows() != gens.front().rows())
                throw InvalidArgument("factor " + std::to_string(i + 1) + " generators must be square of one size");
            if (!(g.field() == factors.front().front().field()))
                throw InvalidArgument("field mismatch in factor " + std::to_string(i + 1));
        }
        identities.push_back(identity(gens.front().rows(), gens.front().field()));
    }
    std::vector<Matrix<F>> images;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        for (const auto& g : factors[i]) {
            auto blocks = identities;
            blocks[i] = g;
            images.push_back(block_diagonal<F>(std::span<const Matrix<F>>(blocks)));
        }
    }
    return images;
}

}  // namespace commrep
