#include <gtest/gtest.h>

#include "assignment.hpp"
#include "fixtures.hpp"
#include "guardlang/pretty.hpp"
#include "guardlang/typecheck.hpp"
#include "oracles.hpp"

// The oracles stand in for ground truth, so they get their own checks.
namespace guardlang {
namespace {

using testing::ix;
using testing::std_sig;
using testing::tm;
using testing::ty;

TEST(OracleIndex, Evaluation) {
    EXPECT_EQ(testing::eval_index(ix("a*3 - (b + 2)"), {{"a", 2}, {"b", -1}}), 5);
    EXPECT_THROW(testing::eval_index(ix("c"), {}), std::exception);
    EXPECT_TRUE(testing::holds(IndexProp::lt(ix("a"), ix("a + 1")), {{"a", 0}}));
}

TEST(OracleIndex, BoxCounterexample) {
    auto cex = testing::box_counterexample({"a"}, {}, IndexProp::eq(ix("a"), ix("3")));
    ASSERT_TRUE(cex.has_value());
    EXPECT_NE(cex->at("a"), 3);
    EXPECT_FALSE(testing::box_counterexample({"a"}, {IndexProp::eq(ix("a"), ix("3"))},
                                             IndexProp::eq(ix("a*2"), ix("6"))));
}

TEST(OracleIndex, Identity) {
    EXPECT_TRUE(testing::index_identical(ix("a*2"), ix("a + a")));
    EXPECT_TRUE(testing::index_identical(ix("(a + b) - b"), ix("a")));
    EXPECT_FALSE(testing::index_identical(ix("a*2"), ix("a")));
    EXPECT_FALSE(testing::index_identical(ix("a"), ix("b")));
}

TEST(OracleLattice, Closure) {
    EXPECT_TRUE(testing::lattice_leq(std_sig(), "odd", "bits"));
    EXPECT_TRUE(testing::lattice_leq(std_sig(), "odd", "odd"));
    EXPECT_FALSE(testing::lattice_leq(std_sig(), "odd", "even"));
}

TEST(OracleSubtype, Examples) {
    EXPECT_TRUE(testing::naive_subtype(std_sig(), ty("(odd -> even) /\\ (even -> odd)"), ty("even -> odd")));
    EXPECT_TRUE(testing::naive_subtype(std_sig(), ty("bits -> odd"), ty("odd -> bits")));
    EXPECT_FALSE(testing::naive_subtype(std_sig(), ty("odd -> bits"), ty("bits -> odd")));
    EXPECT_TRUE(testing::naive_subtype(std_sig(), ty("list(a*2)"), ty("list(a + a)")));
    EXPECT_THROW(testing::naive_subtype(std_sig(), ty("Pi a : int . list(a)"), ty("list(1)")), std::exception);
}

TEST(OracleTypes, MatchUpToIndexIdentity) {
    EXPECT_TRUE(testing::types_match(ty("Pi a : int . list(a*2)"), ty("Pi b : int . list(b + b)")));
    EXPECT_FALSE(testing::types_match(ty("list(a)"), ty("list(b)")));
}

TEST(OracleSubst, AvoidsCapture) {
    Type t = testing::naive_subst(ix("b"), "a", ty("Pi b : int . list(a + b)"));
    EXPECT_TRUE(testing::types_match(t, ty("Pi c : int . list(b + c)")));
}

TEST(OracleReplay, RejectsForgedDerivations) {
    auto forged = std::make_shared<Derivation>();
    forged->rule = "sub-atom";
    forged->judgment = Judgment::Subtype;
    forged->lhs = ty("bits");
    forged->rhs = ty("odd");
    EXPECT_FALSE(testing::replay(std_sig(), forged).empty());

    auto wrong_arity = std::make_shared<Derivation>();
    wrong_arity->rule = "sub-arr";
    wrong_arity->judgment = Judgment::Subtype;
    wrong_arity->lhs = ty("odd -> odd");
    wrong_arity->rhs = ty("odd -> bits");
    EXPECT_FALSE(testing::replay(std_sig(), wrong_arity).empty());

    auto unknown = std::make_shared<Derivation>();
    unknown->rule = "sub-magic";
    unknown->judgment = Judgment::Subtype;
    unknown->lhs = ty("odd");
    unknown->rhs = ty("even");
    EXPECT_FALSE(testing::replay(std_sig(), unknown).empty());
}

TEST(OracleReplay, AcceptsHandBuiltDerivation) {
    auto leaf = std::make_shared<Derivation>();
    leaf->rule = "sub-atom";
    leaf->judgment = Judgment::Subtype;
    leaf->lhs = ty("odd");
    leaf->rhs = ty("bits");
    EXPECT_TRUE(testing::replay(std_sig(), leaf).empty());
}

TEST(OracleAssignment, TypesRedexesTheCheckerCannot) {
    std::vector<Type> pool = {ty("unit"), ty("odd"), ty("even"), ty("unit -> unit")};
    Term redex = tm("(fn x => x) ()");
    EXPECT_FALSE(check(std_sig(), Context{}, redex, ty("unit")).derivation);
    EXPECT_TRUE(testing::assignable(std_sig(), Context{}, redex, ty("unit"), pool));
    EXPECT_TRUE(testing::assignable(std_sig(), Context{}, tm("(fn f => f ()) (fn y => y)"), ty("unit"), pool));
    EXPECT_TRUE(testing::assignable(std_sig(), Context{}, tm("(fn y => snoc1 y) b1"), ty("even"), pool));
}

TEST(OracleAssignment, RejectsIllTypedTerms) {
    std::vector<Type> pool = {ty("unit"), ty("odd"), ty("even"), ty("bits"), ty("unit -> unit")};
    EXPECT_FALSE(testing::assignable(std_sig(), Context{}, tm("(fn x => x) ()"), ty("odd"), pool));
    EXPECT_FALSE(testing::assignable(std_sig(), Context{}, tm("(fn y => snoc1 y) b1"), ty("odd"), pool));
    EXPECT_FALSE(testing::assignable(std_sig(), Context{}, tm("(fn y => snoc1 y) ()"), ty("bits"), pool));
    EXPECT_FALSE(testing::assignable(std_sig(), Context{}, tm("(fn y => y) b1"), ty("odd /\\ even"), pool));
}

TEST(OracleAssignment, FreeIndexVariablesAreExistential) {
    std::vector<Type> pool = {ty("list(a*2)")};
    Term body = tm("fn x => (x : list(a*2))");
    EXPECT_TRUE(testing::assignable(std_sig(), Context{}, body, ty("Pi c : int . list(c*2) -> list(c*2)"), pool));
    EXPECT_FALSE(testing::assignable(std_sig(), Context{}, body, ty("Pi c : int . list(c*2+1) -> list(c*2+1)"), pool));
}

TEST(OracleAssignment, PoolComesFromTheProgram) {
    Program p = testing::program("val main : odd = (fn x => (x : odd)) b1");
    auto pool = testing::annotation_pool(p);
    bool has_odd = false;
    for (const auto& t : pool)
        has_odd = has_odd || pretty(t) == "odd";
    EXPECT_TRUE(has_odd);
}

}  // namespace
}  // namespace guardlang
