#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "guardlang/index_domain.hpp"
#include "guardlang/pretty.hpp"
#include "oracles.hpp"

namespace guardlang {
namespace {

using testing::ctx_of;
using testing::ix;

TEST(SortOf, DeclaredVariable) { EXPECT_EQ(sort_of(ctx_of("a : int"), ix("a*2 + 1")), IndexSort::Int); }

TEST(SortOf, Literal) { EXPECT_EQ(sort_of(Context{}, ix("7")), IndexSort::Int); }

TEST(SortOf, UnboundVariable) {
    try {
        sort_of(Context{}, ix("a"));
        FAIL() << "expected UnboundIndexVariable";
    } catch (const UnboundIndexVariable& e) {
        EXPECT_EQ(e.name(), "a");
    }
}

TEST(SortOf, MetavariablesNeedTheStore) {
    MetaStore metas;
    int m = metas.fresh(IndexSort::Int, {}, "b");
    EXPECT_EQ(sort_of(Context{}, IndexExpr::meta(m), &metas), IndexSort::Int);
    EXPECT_THROW(sort_of(Context{}, IndexExpr::meta(m)), UnboundIndexVariable);
}

TEST(Normalize, Examples) {
    LinearForm f = normalize(ix("a*2 + 1 - a"));
    EXPECT_EQ(f.coeffs.size(), 1u);
    EXPECT_EQ(f.coeff("a"), 1);
    EXPECT_EQ(f.constant, 1);

    LinearForm g = normalize(ix("3"));
    EXPECT_TRUE(g.is_constant());
    EXPECT_EQ(g.constant, 3);

    LinearForm h = normalize(ix("(a + b) - (b + a)"));
    EXPECT_TRUE(h.is_constant());
    EXPECT_EQ(h.constant, 0);
}

TEST(Normalize, NoZeroCoefficients) {
    LinearForm f = normalize(ix("a*3 - a*3 + b"));
    EXPECT_EQ(f.coeffs.count("a"), 0u);
    EXPECT_EQ(f.coeff("b"), 1);
}

TEST(Entails, AlgebraicIdentity) {
    EXPECT_TRUE(entails(ctx_of("a : int"), {}, IndexProp::eq(ix("a*2"), ix("a + a"))));
}

TEST(Entails, FromHypothesis) {
    Context c = ctx_of("a : int, b : int");
    IndexProp hyp = IndexProp::eq(ix("a"), ix("b + 1"));
    IndexProp goal = IndexProp::eq(ix("a + 1"), ix("b + 2"));
    EXPECT_TRUE(entails(c, {hyp}, goal));
    EXPECT_FALSE(testing::box_counterexample({"a", "b"}, {hyp}, goal, -5, 5).has_value());
}

TEST(Entails, NotValid) { EXPECT_FALSE(entails(ctx_of("a : int"), {}, IndexProp::eq(ix("a"), ix("3")))); }

TEST(Entails, StrictInequalityOverIntegers) {
    Context c = ctx_of("a : int, b : int");
    // a < b entails a + 1 <= b over the integers.
    EXPECT_TRUE(entails(c, {IndexProp::lt(ix("a"), ix("b"))}, IndexProp::le(ix("a + 1"), ix("b"))));
    EXPECT_FALSE(entails(c, {IndexProp::le(ix("a"), ix("b"))}, IndexProp::lt(ix("a"), ix("b"))));
}

TEST(Entails, InconsistentHypotheses) {
    Context c = ctx_of("a : int");
    EXPECT_TRUE(entails(c, {IndexProp::lt(ix("a"), ix("a"))}, IndexProp::eq(ix("a"), ix("7"))));
}

TEST(SolveMeta, CoefficientDividesEverything) {
    Context c = ctx_of("a : int");
    MetaStore metas;
    int b = metas.fresh(IndexSort::Int, {"a"}, "b");
    auto out = solve_meta(c, metas, IndexProp::eq(IndexExpr::mul(2, IndexExpr::meta(b)), ix("a*2")));
    ASSERT_TRUE(out.solution.has_value()) << out.reason;
    EXPECT_EQ(out.solution->meta, b);
    EXPECT_TRUE(testing::index_identical(out.solution->value, ix("a")));
}

TEST(SolveMeta, UnitCoefficient) {
    Context c = ctx_of("a : int");
    MetaStore metas;
    int b = metas.fresh(IndexSort::Int, {"a"}, "b");
    auto out = solve_meta(c, metas, IndexProp::eq(IndexExpr::meta(b), ix("a*2")));
    ASSERT_TRUE(out.solution.has_value());
    EXPECT_TRUE(testing::index_identical(out.solution->value, ix("a*2")));
}

TEST(SolveMeta, NoIntegerSolution) {
    Context c = ctx_of("a : int");
    MetaStore metas;
    int b = metas.fresh(IndexSort::Int, {"a"}, "b");
    auto out = solve_meta(c, metas, IndexProp::eq(IndexExpr::mul(2, IndexExpr::meta(b)), ix("a")));
    EXPECT_FALSE(out.solution.has_value());
    EXPECT_FALSE(out.reason.empty());
}

TEST(SolveMeta, ScopeViolation) {
    // The metavariable was introduced before c came into scope.
    Context ctx = ctx_of("a : int, c : int");
    MetaStore metas;
    int b = metas.fresh(IndexSort::Int, {"a"}, "b");
    auto out = solve_meta(ctx, metas, IndexProp::eq(IndexExpr::meta(b), ix("c + a")));
    EXPECT_FALSE(out.solution.has_value());
}

TEST(MetaStore, RestoreUndoesAssignments) {
    MetaStore metas;
    int m = metas.fresh(IndexSort::Int, {}, "b");
    auto snap = metas.snapshot();
    metas.assign(m, ix("3"));
    EXPECT_TRUE(metas.solved(m));
    metas.restore(snap);
    EXPECT_FALSE(metas.solved(m));
    int later = metas.fresh(IndexSort::Int, {}, "c");
    metas.restore(snap);
    EXPECT_EQ(metas.unsolved_from(0), std::vector<int>{m});
    (void)later;
}

// --- properties ---------------------------------------------------------------

class IndexProperties : public ::testing::TestWithParam<int> {};

TEST_P(IndexProperties, NormalizePreservesMeaning) {
    testing::Rng rng(static_cast<unsigned>(GetParam()));
    std::uniform_int_distribution<int> val(-10, 10);
    for (int round = 0; round < 300; ++round) {
        IndexExpr i = testing::gen_index(rng, {"a", "b", "c"}, 4);
        IndexExpr n = normalize(i).to_expr();
        for (int k = 0; k < 10; ++k) {
            testing::Assignment env{{"a", val(rng)}, {"b", val(rng)}, {"c", val(rng)}};
            ASSERT_EQ(testing::eval_index(i, env), testing::eval_index(n, env)) << pretty(i) << " vs " << pretty(n);
        }
        ASSERT_EQ(normalize(n), normalize(i));  // idempotent
    }
}

TEST_P(IndexProperties, EntailsIsReflexiveAndMonotone) {
    testing::Rng rng(static_cast<unsigned>(GetParam()) + 50);
    Context c = ctx_of("a : int, b : int, c : int");
    for (int round = 0; round < 200; ++round) {
        auto q = testing::gen_entailment(rng);
        for (const auto& h : q.hyps)
            ASSERT_TRUE(entails(c, q.hyps, h)) << pretty(h);
        if (entails(c, q.hyps, q.goal)) {
            auto more = q.hyps;
            more.push_back(testing::gen_entailment(rng).goal);
            ASSERT_TRUE(entails(c, more, q.goal));
        }
    }
}

TEST_P(IndexProperties, EntailsIsSoundAgainstBruteForce) {
    testing::Rng rng(static_cast<unsigned>(GetParam()) + 100);
    Context c = ctx_of("a : int, b : int, c : int");
    for (int round = 0; round < 300; ++round) {
        auto q = testing::gen_entailment(rng);
        if (entails(c, q.hyps, q.goal)) {
            ASSERT_FALSE(testing::box_counterexample(q.vars, q.hyps, q.goal, -5, 5)) << pretty(q.goal);
        }
    }
}

TEST_P(IndexProperties, SolveMetaSolutionsSatisfyTheConstraint) {
    testing::Rng rng(static_cast<unsigned>(GetParam()) + 150);
    std::uniform_int_distribution<int> coeff(-3, 3);
    Context c = ctx_of("a : int, b : int");
    int solved = 0;
    for (int round = 0; round < 300; ++round) {
        MetaStore metas;
        int m = metas.fresh(IndexSort::Int, {"a", "b"}, "n");
        int k = coeff(rng);
        if (k == 0)
            k = 2;
        IndexExpr lhs = IndexExpr::add(IndexExpr::mul(k, IndexExpr::meta(m)), testing::gen_index(rng, {"a", "b"}, 2));
        IndexExpr rhs = testing::gen_index(rng, {"a", "b"}, 2);
        auto out = solve_meta(c, metas, IndexProp::eq(lhs, rhs));
        if (!out.solution)
            continue;
        ++solved;
        metas.assign(out.solution->meta, out.solution->value);
        IndexProp back = IndexProp::eq(metas.zonk(lhs), metas.zonk(rhs));
        ASSERT_TRUE(entails(c, {}, back)) << pretty(back);
        ASSERT_TRUE(testing::index_identical(back.lhs, back.rhs));
    }
    EXPECT_GT(solved, 50);
}

INSTANTIATE_TEST_SUITE_P(Seeds, IndexProperties, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace guardlang
