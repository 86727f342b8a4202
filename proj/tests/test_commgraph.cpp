#include "test_support.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace commrep;
using namespace commrep::testing;

TEST(CommGraph, RejectsMalformedEdges) {
    CommGraph g(3);
    EXPECT_THROW(g.add_edge(1, 1), InvalidArgument);
    EXPECT_THROW(g.add_edge(0, 2), InvalidArgument);
    EXPECT_THROW(g.add_edge(2, 4), InvalidArgument);
    g.add_edge(2, 1);
    EXPECT_THROW(g.add_edge(1, 2), InvalidArgument);
    EXPECT_TRUE(g.has_edge(1, 2));
    EXPECT_TRUE(g.has_edge(2, 1));
    EXPECT_FALSE(g.has_edge(1, 3));
    EXPECT_THROW(CommGraph(0), InvalidArgument);
}

TEST(MatchingGraph, Indexing) {
    auto g1 = matching_graph(1);
    EXPECT_EQ(g1.vertex_count(), 2u);
    EXPECT_EQ(g1.edges(), (std::set<CommGraph::Edge>{{1, 2}}));
    auto g2 = matching_graph(2);
    EXPECT_EQ(g2.vertex_count(), 4u);
    EXPECT_EQ(g2.edges(), (std::set<CommGraph::Edge>{{1, 3}, {2, 4}}));
    auto g3 = matching_graph(3);
    EXPECT_EQ(g3.edges().size(), 3u);
    for (std::size_t v = 1; v <= 6; ++v) EXPECT_LE(g3.degree(v), 1u);
    EXPECT_TRUE(g3.is_perfect_matching());
    EXPECT_FALSE(CommGraph(3, {{1, 2}, {2, 3}}).is_perfect_matching());
}

TEST(Realizes, TransposePairOverF2) {
    PrimeField f2(2);
    Assignment<PrimeField> a({elementary_matrix(2, 1, 2, f2), elementary_matrix(2, 2, 1, f2)});
    EXPECT_TRUE(realizes(a, matching_graph(1)));
}

TEST(Realizes, IdentityAssignmentViolatesEveryEdge) {
    Q q;
    CommGraph g(3, {{1, 2}, {2, 3}});
    Assignment<Rationals> a(std::vector<QMatrix>(3, identity(2, q)));
    auto res = realizes(a, g);
    EXPECT_FALSE(res.realizes);
    ASSERT_EQ(res.violations.size(), 2u);
    EXPECT_EQ(res.violations[0], (Violation{1, 2, true, true}));
    EXPECT_EQ(res.violations[1], (Violation{2, 3, true, true}));
}

TEST(Realizes, ReportsNonEdgesThatFailToCommute) {
    Q q;
    Assignment<Rationals> a({elementary_matrix(2, 1, 2, q), elementary_matrix(2, 2, 1, q), identity(2, q)});
    auto res = realizes(a, CommGraph(3));
    ASSERT_EQ(res.violations.size(), 1u);
    EXPECT_EQ(res.violations[0], (Violation{1, 2, false, false}));
}

TEST(Realizes, EdgelessGraphByZeroMatrices) {
    Q q;
    Assignment<Rationals> a(std::vector<QMatrix>(5, zero_matrix(1, 1, q)));
    EXPECT_TRUE(realizes(a, CommGraph(5)));
}

TEST(Realizes, LengthMismatch) {
    Q q;
    Assignment<Rationals> a(std::vector<QMatrix>(2, identity(2, q)));
    EXPECT_THROW(realizes(a, CommGraph(3)), InvalidArgument);
}

TEST(Assignment, RequiresUniformShapeAndField) {
    Q q;
    EXPECT_THROW(Assignment<Rationals>({identity(2, q), identity(3, q)}), InvalidArgument);
    EXPECT_THROW(Assignment<PrimeField>({identity(2, PrimeField(2)), identity(2, PrimeField(3))}), InvalidArgument);
    EXPECT_THROW(Assignment<Rationals>({qmat(1, 2, {1, 2})}), InvalidArgument);
}

// Sparse commutation testing inside realizes against dense commutators.
TEST(Realizes, AgreesWithDenseCommutators) {
    std::mt19937_64 rng(21);
    PrimeField f(3);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<FpMatrix> ms;
        for (int k = 0; k < 4; ++k) {
            // mostly-commuting family: polynomials in one matrix, plus one random
            auto base = random_fp(rng, f, 3, 3);
            ms.push_back(trial % 2 ? base : base * base + identity(3, f));
        }
        CommGraph g(4);
        for (std::size_t u = 1; u <= 4; ++u)
            for (std::size_t v = u + 1; v <= 4; ++v)
                if (!commutator(ms[u - 1], ms[v - 1]).is_zero()) g.add_edge(u, v);
        EXPECT_TRUE(realizes(Assignment<PrimeField>(ms), g));
    }
}

TEST(Realizes, InvariantUnderRelabeling) {
    std::mt19937_64 rng(22);
    PrimeField f(2);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<FpMatrix> ms;
        for (int k = 0; k < 5; ++k) ms.push_back(random_fp(rng, f, 2, 2));
        CommGraph g(5);
        for (std::size_t u = 1; u <= 5; ++u)
            for (std::size_t v = u + 1; v <= 5; ++v)
                if (rng() % 2) g.add_edge(u, v);
        std::vector<std::size_t> perm(5);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<FpMatrix> permuted(ms);
        for (std::size_t v = 0; v < 5; ++v) permuted[perm[v] - 1] = ms[v];
        EXPECT_EQ(realizes(Assignment<PrimeField>(ms), g).realizes,
                  realizes(Assignment<PrimeField>(permuted), g.relabeled(perm)).realizes);
    }
}

TEST(Realizes, InvariantUnderConjugation) {
    std::mt19937_64 rng(23);
    PrimeField f(5);
    auto witness = sharp_witness(3, f.from_int(2), f);
    for (int trial = 0; trial < 20; ++trial) {
        auto c = random_invertible(rng, f, 4);
        auto ci = inverse(c);
        std::vector<FpMatrix> conj;
        for (const auto& m : witness.matrices()) conj.push_back(ci * m * c);
        EXPECT_TRUE(realizes(Assignment<PrimeField>(conj), matching_graph(3)));
        // a non-realizing assignment stays non-realizing
        std::vector<FpMatrix> bad(conj);
        bad[0] = identity(4, f);
        EXPECT_FALSE(realizes(Assignment<PrimeField>(bad), matching_graph(3)));
    }
}
