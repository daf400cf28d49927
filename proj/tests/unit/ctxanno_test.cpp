#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "guardlang/ctxanno.hpp"
#include "guardlang/eval.hpp"
#include "guardlang/pretty.hpp"
#include "oracles.hpp"

namespace guardlang {
namespace {

using testing::ctx_of;
using testing::std_sig;
using testing::tm;
using testing::ty;

ContextualTyping typing(const std::string& ctx, const std::string& goal) {
    return ContextualTyping{ctx_of(ctx).decls(), ty(goal)};
}

bool contains_ctx_anno(const Term& e) {
    switch (e.kind()) {
    case Term::Kind::CtxAnno: return true;
    case Term::Kind::App:
    case Term::Kind::Merge: return contains_ctx_anno(e.lhs()) || contains_ctx_anno(e.rhs());
    case Term::Kind::Lam:
    case Term::Kind::Anno:
    case Term::Kind::Guard:
    case Term::Kind::Some:
    case Term::Kind::BigLam: return contains_ctx_anno(e.body());
    default: return false;
    }
}

TEST(CtxSubsumes, EmptyInnerContext) {
    auto r = ctx_subsumes(std_sig(), typing("", "even"), ctx_of("x : odd"), ty("even"));
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "ctxsub-empty");
}

TEST(CtxSubsumes, ProgramVariable) {
    auto r = ctx_subsumes(std_sig(), typing("x : odd", "even"), ctx_of("x : odd"), ty("even"));
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "ctxsub-pvar");
    auto problems = testing::replay(std_sig(), r.derivation);
    EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(CtxSubsumes, IndexVariableInstantiated) {
    auto r = ctx_subsumes(std_sig(), typing("a : int, x : list(a*2)", "list(a)"), ctx_of("b : int, x : list(b*2)"),
                          ty("list(b)"));
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "ctxsub-ivar");
    ASSERT_TRUE(r.derivation->witness.has_value());
    EXPECT_TRUE(testing::index_identical(*r.derivation->witness, IndexExpr::var("b")));
    ASSERT_EQ(r.derivation->premises.size(), 1u);
    EXPECT_EQ(r.derivation->premises[0]->rule, "ctxsub-pvar");
    ASSERT_TRUE(r.goal.has_value());
    EXPECT_TRUE(testing::types_match(*r.goal, ty("list(b)")));
    auto problems = testing::replay(std_sig(), r.derivation);
    EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(CtxSubsumes, WeakerContextFails) {
    EXPECT_FALSE(ctx_subsumes(std_sig(), typing("x : even", "odd"), ctx_of("x : odd"), std::nullopt).derivation);
    EXPECT_FALSE(ctx_subsumes(std_sig(), typing("x : even", "odd"), ctx_of("x : odd"), ty("odd")).derivation);
}

TEST(CheckCtxAnno, FirstTyping) {
    auto r = check_ctx_anno(std_sig(), ctx_of("x : odd"), tm("(snoc1 x :: [x : odd |- even ; x : even |- odd])"));
    ASSERT_TRUE(r.derivation);
    ASSERT_TRUE(r.type.has_value());
    EXPECT_TRUE(alpha_eq(*r.type, ty("even")));
    EXPECT_EQ(r.branch, 1);
}

TEST(CheckCtxAnno, SecondTyping) {
    auto r = check_ctx_anno(std_sig(), ctx_of("x : even"), tm("(snoc1 x :: [x : odd |- even ; x : even |- odd])"));
    ASSERT_TRUE(r.derivation);
    EXPECT_TRUE(alpha_eq(*r.type, ty("odd")));
    EXPECT_EQ(r.branch, 2);
    auto problems = testing::replay(std_sig(), r.derivation);
    EXPECT_TRUE(problems.empty()) << problems.front();
}

TEST(CheckCtxAnno, NeitherTypingApplies) {
    auto r = check_ctx_anno(std_sig(), ctx_of("x : bits"), tm("(snoc1 x :: [x : odd |- even ; x : even |- odd])"));
    EXPECT_FALSE(r.derivation);
    EXPECT_FALSE(r.failures.empty());
}

TEST(Encode, UnitUnchanged) { EXPECT_TRUE(alpha_eq(encode(Term::unit()), Term::unit())); }

TEST(Encode, MergeOfGuardedAnnotations) {
    Term out = encode(tm("(snoc1 x :: [x : odd |- even ; x : even |- odd])"));
    EXPECT_TRUE(alpha_eq(out, tm("(where x : odd do (snoc1 x : even)) ,, (where x : even do (snoc1 x : odd))")))
        << pretty(out);
}

TEST(Encode, SingleTypingWithoutGuards) {
    Term out = encode(tm("(() :: [|- unit])"));
    EXPECT_TRUE(alpha_eq(out, tm("(() : unit)"))) << pretty(out);
}

TEST(Encode, IndexSortingsBecomeSomeBinders) {
    Term out = encode(tm("(x :: [a : int, x : list(a) |- list(a)])"));
    EXPECT_TRUE(alpha_eq(out, tm("some a : int in where x : list(a) do (x : list(a))"))) << pretty(out);
}

TEST(Encode, ThreeTypingsNestToTheRight) {
    Term out = encode(tm("(x :: [x : odd |- odd ; x : even |- even ; x : bits |- bits])"));
    ASSERT_TRUE(out.is(Term::Kind::Merge));
    EXPECT_TRUE(out.lhs().is(Term::Kind::Guard));
    ASSERT_TRUE(out.rhs().is(Term::Kind::Merge));
    EXPECT_TRUE(out.rhs().rhs().is(Term::Kind::Guard));
}

TEST(VerifyEncoding, ParityProgram) {
    auto rep = verify_encoding(parse_file(testing::corpus_path("parity_ctx.gl")));
    EXPECT_EQ(rep.original.verdict, Report::Verdict::Accept);
    EXPECT_EQ(rep.encoded.verdict, Report::Verdict::Accept);
    EXPECT_FALSE(rep.gap);
    EXPECT_GT(rep.encoded_size, rep.original_size);
}

TEST(VerifyEncoding, ProgramWithoutAnnotations) {
    Program p = parse_file(testing::corpus_path("parity.gl"));
    auto rep = verify_encoding(p);
    EXPECT_FALSE(rep.gap);
    EXPECT_EQ(rep.encoded.verdict, Report::Verdict::Accept);
    EXPECT_TRUE(alpha_eq(rep.encoded_program.main, p.main));
}

TEST(VerifyEncoding, BranchesCorrespond) {
    // The typing chosen under x : odd is the first; its encoding is the first merge branch.
    auto rep = verify_encoding(parse_file(testing::corpus_path("parity_ctx.gl")));
    ASSERT_TRUE(rep.original.derivation && rep.encoded.derivation);
    std::vector<int> ctx_branches;
    std::vector<int> merge_branches;
    for_each_node(rep.original.derivation, [&](const Derivation& d) {
        if (d.rule == "ctx-anno")
            ctx_branches.push_back(d.branch);
    });
    for_each_node(rep.encoded.derivation, [&](const Derivation& d) {
        if (d.rule == "merge-check1" || d.rule == "merge-check2" || d.rule == "merge-synth1" ||
            d.rule == "merge-synth2")
            merge_branches.push_back(d.branch);
    });
    EXPECT_EQ(ctx_branches, (std::vector<int>{1, 2}));
    EXPECT_EQ(merge_branches, (std::vector<int>{1, 2}));
}

// --- properties ---------------------------------------------------------------

class EncodingProperties : public ::testing::TestWithParam<int> {};

TEST_P(EncodingProperties, IdempotentAndErasurePreserving) {
    testing::Rng rng(static_cast<unsigned>(GetParam()));
    for (int round = 0; round < 100; ++round) {
        Program p = testing::program(testing::gen_ctx_anno_program(rng));
        Term once = encode(p.main);
        ASSERT_FALSE(contains_ctx_anno(once)) << pretty(once);
        ASSERT_TRUE(alpha_eq(encode(once), once));
        ASSERT_TRUE(alpha_eq(erase(once), erase(p.main))) << pretty(p.main);
    }
}

TEST_P(EncodingProperties, NoGapOnGeneratedPrograms) {
    testing::Rng rng(static_cast<unsigned>(GetParam()) + 100);
    int accepted = 0;
    for (int round = 0; round < 60; ++round) {
        Program p = testing::program(testing::gen_ctx_anno_program(rng));
        auto rep = verify_encoding(p);
        ASSERT_FALSE(rep.gap) << pretty(p.main) << "\n" << pretty(rep.encoded_program.main);
        if (rep.original.verdict == Report::Verdict::Accept)
            ++accepted;
    }
    EXPECT_GT(accepted, 10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, EncodingProperties, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace guardlang
