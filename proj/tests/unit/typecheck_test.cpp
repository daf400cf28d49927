#include <gtest/gtest.h>

#include <map>
#include <regex>

#include "fixtures.hpp"
#include "generators.hpp"
#include "guardlang/parser.hpp"
#include "guardlang/pretty.hpp"
#include "guardlang/typecheck.hpp"
#include "oracles.hpp"

namespace guardlang {
namespace {

using testing::ctx_of;
using testing::std_sig;
using testing::tm;
using testing::ty;

const char* kGuardedParity =
    "fn x => ((where x : odd do (snoc1 x : even)) ,, (where x : even do (snoc1 x : odd)))";
const char* kParityGoal = "(odd -> even) /\\ (even -> odd)";

void expect_replays(const DerivPtr& d) {
    ASSERT_TRUE(d);
    auto problems = testing::replay(std_sig(), d);
    EXPECT_TRUE(problems.empty()) << problems.front() << "\n" << pretty(*d, {true});
}

bool any_rule(const DerivPtr& d, const std::string& rule) {
    bool found = false;
    for_each_node(d, [&](const Derivation& n) { found = found || n.rule == rule; });
    return found;
}

TEST(Check, GuardedParity) {
    auto r = check(std_sig(), Context{}, tm(kGuardedParity), ty(kParityGoal));
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "andI");
    EXPECT_EQ(r.derivation->premises.at(0)->rule, "arrI");
    EXPECT_TRUE(any_rule(r.derivation, "merge-check1"));
    EXPECT_TRUE(any_rule(r.derivation, "merge-check2"));
    expect_replays(r.derivation);
}

TEST(Check, Unit) {
    auto r = check(std_sig(), Context{}, Term::unit(), Type::unit());
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "unitI");
}

TEST(Check, UnguardedMergeBacktracks) {
    auto r = check(std_sig(), Context{}, tm("fn x => ((snoc1 x : even) ,, (snoc1 x : odd))"), ty(kParityGoal));
    ASSERT_TRUE(r.derivation);
    EXPECT_GT(r.stats.backtracks, 0u);
    expect_replays(r.derivation);
}

TEST(Check, WrongGuardFails) {
    auto r = check(std_sig(), Context{}, tm("fn x => (where x : even do (snoc1 x : even))"), ty("odd -> even"));
    EXPECT_FALSE(r.derivation);
    bool mentions_guard = false;
    for (const auto& f : r.failures)
        mentions_guard = mentions_guard || f.message.find("guard `x : even`") != std::string::npos;
    EXPECT_TRUE(mentions_guard);
}

TEST(Check, SomeChoosesWitness) {
    auto r = check(std_sig(), Context{}, tm("fn x => some b : int in (where x : list(b*2) do (idcast x))"),
                   ty("Pi a : int . list(a*2) -> list(a*2)"));
    ASSERT_TRUE(r.derivation);
    EXPECT_TRUE(r.unsolved_metas.empty());
    bool saw = false;
    for_each_node(r.derivation, [&](const Derivation& n) {
        if (n.rule == "some-check") {
            saw = true;
            ASSERT_TRUE(n.witness.has_value());
            // The witness is the Pi-introduced variable standing for a.
            ASSERT_TRUE(n.witness->is(IndexExpr::Kind::Var));
            EXPECT_EQ(source_name(n.witness->name()), "a");
        }
    });
    EXPECT_TRUE(saw);
    expect_replays(r.derivation);
}

TEST(Check, PlainLambdaAgainstIntersection) {
    auto r = check(std_sig(), Context{}, tm("fn x => snoc1 x"), ty(kParityGoal));
    ASSERT_TRUE(r.derivation);
    expect_replays(r.derivation);
}

TEST(Synth, Variable) {
    auto alts = synth_all(std_sig(), ctx_of("x : odd"), tm("x"));
    ASSERT_FALSE(alts.empty());
    EXPECT_TRUE(alpha_eq(alts.front().type, ty("odd")));
    EXPECT_EQ(alts.front().derivation->rule, "var");
}

TEST(Synth, AnnotationWithProjections) {
    auto alts = synth_all(std_sig(), Context{}, tm("(fn x => snoc1 x : (odd -> even) /\\ (even -> odd))"));
    auto has = [&](const std::string& t) {
        for (const auto& a : alts)
            if (alpha_eq(a.type, ty(t)))
                return true;
        return false;
    };
    EXPECT_TRUE(has(kParityGoal));
    EXPECT_TRUE(has("odd -> even"));
    EXPECT_TRUE(has("even -> odd"));
    for (const auto& a : alts)
        expect_replays(a.derivation);
}

TEST(Synth, BareLambdaFails) { EXPECT_TRUE(synth_all(std_sig(), Context{}, tm("fn x => x")).empty()); }

TEST(Synth, ApplicationThroughProjection) {
    auto alts = synth_all(std_sig(), Context{}, tm("snoc1 b1"));
    ASSERT_FALSE(alts.empty());
    EXPECT_TRUE(alpha_eq(alts.front().type, ty("even")));
}

TEST(Synth, PiInstantiatedByApplication) {
    auto alts = synth_all(std_sig(), Context{}, tm("double nil"));
    ASSERT_FALSE(alts.empty());
    EXPECT_TRUE(testing::types_match(alts.front().type, ty("list(0)")));
}

TEST(Synth, SomeAroundPiInstantiatedLater) {
    // The instantiation of `half` is solved by the argument, after the
    // `some` body has synthesized.
    Context ctx = ctx_of("a : int, x : list(a*2)");
    Term e = tm("(some b : int in where x : list(b*2) do half) x");
    auto r = check(std_sig(), ctx, e, ty("list(a)"));
    ASSERT_TRUE(r.derivation);
    EXPECT_TRUE(testing::replay(std_sig(), r.derivation).empty());
    EXPECT_FALSE(check(std_sig(), ctx, tm("(some b : int in where x : list(b*2) do half) x"), ty("list(a*2)")).derivation);
}

TEST(CheckGuard, Examples) {
    EXPECT_TRUE(check_guard(std_sig(), ctx_of("x : odd"), Decl::var("x", ty("odd"))).derivation);
    EXPECT_TRUE(check_guard(std_sig(), ctx_of("x : odd"), Decl::var("x", ty("bits"))).derivation);
    auto r = check_guard(std_sig(), ctx_of("x : even"), Decl::var("x", ty("odd")));
    EXPECT_FALSE(r.derivation);
    EXPECT_FALSE(r.failures.empty());
}

TEST(CheckGuard, IndexSorting) {
    auto r = check_guard(std_sig(), ctx_of("a : int"), Decl::index("a", IndexSort::Int));
    ASSERT_TRUE(r.derivation);
    EXPECT_EQ(r.derivation->rule, "guard-ivar");
    EXPECT_FALSE(check_guard(std_sig(), Context{}, Decl::index("a", IndexSort::Int)).derivation);
}

TEST(TypecheckProgram, AcceptsGuardedParity) {
    Report r = typecheck_program(testing::program(std::string("val main : ") + kParityGoal + " = " + kGuardedParity));
    EXPECT_EQ(r.verdict, Report::Verdict::Accept);
    EXPECT_TRUE(r.unsolved_metas.empty());
    EXPECT_GT(r.stats.rule_applications, 0u);
}

TEST(TypecheckProgram, WrongGoalListsBothBranches) {
    Report r = typecheck_program(testing::program(std::string("val main : odd -> odd = ") + kGuardedParity));
    EXPECT_EQ(r.verdict, Report::Verdict::Reject);
    bool first = false;
    bool second = false;
    for (const auto& d : r.diagnostics) {
        first = first || d.message.find("`even`") != std::string::npos;
        second = second || d.message.find("guard `x : even`") != std::string::npos;
    }
    EXPECT_TRUE(first);
    EXPECT_TRUE(second);
}

TEST(TypecheckProgram, UnitDoesNotSynthesize) {
    Report r = typecheck_program(parse_program("val main = ()"));
    EXPECT_EQ(r.verdict, Report::Verdict::Reject);
    EXPECT_FALSE(r.diagnostics.empty());
}

TEST(TypecheckProgram, ExplicitIndexFunction) {
    Report r = typecheck_program(testing::program(
        "val main : (Pi a : int . list(a) -> list(a)) /\\ (unit -> unit) = "
        "(idxfn a : int => fn x => (x : list(a))) ,, fn x => x"));
    EXPECT_EQ(r.verdict, Report::Verdict::Accept);
    EXPECT_TRUE(any_rule(r.derivation, "PiI-explicit"));
}

// --- corpus goldens -----------------------------------------------------------

const std::map<std::string, Report::Verdict>& goldens() {
    static const std::map<std::string, Report::Verdict> g = {
        {"idxfn_merge.gl", Report::Verdict::Accept},        {"idxfn_single_binder.gl", Report::Verdict::Reject},
        {"idxfn_single_plain.gl", Report::Verdict::Reject}, {"loopy.gl", Report::Verdict::Accept},
        {"parity.gl", Report::Verdict::Accept},             {"parity_badguard.gl", Report::Verdict::Reject},
        {"parity_ctx.gl", Report::Verdict::Accept},         {"parity_merge.gl", Report::Verdict::Accept},
        {"parity_plain.gl", Report::Verdict::Accept},       {"parity_run.gl", Report::Verdict::Accept},
        {"some_half.gl", Report::Verdict::Accept},          {"some_idcast.gl", Report::Verdict::Accept},
        {"some_nosolution.gl", Report::Verdict::Reject},    {"unit.gl", Report::Verdict::Accept},
    };
    return g;
}

class Corpus : public ::testing::TestWithParam<std::string> {};

TEST_P(Corpus, MatchesGolden) {
    const std::string& name = GetParam();
    ASSERT_TRUE(goldens().count(name)) << "no golden verdict for " << name;
    Program p = parse_file(testing::corpus_path(name));
    Report r = typecheck_program(p);
    EXPECT_EQ(r.verdict, goldens().at(name)) << (r.diagnostics.empty() ? "" : r.diagnostics.front().message);
    if (r.verdict == Report::Verdict::Accept) {
        auto problems = testing::replay(p.sig, r.derivation);
        EXPECT_TRUE(problems.empty()) << problems.front();
        EXPECT_TRUE(r.unsolved_metas.empty());
    } else {
        ASSERT_FALSE(r.diagnostics.empty());
        for (const auto& d : r.diagnostics) {
            EXPECT_TRUE(d.span.known()) << d.message;
            EXPECT_EQ(d.message.find('#'), std::string::npos) << d.message;
            // Unsolved metavariables show as ?name, never by number.
            EXPECT_FALSE(std::regex_search(d.message, std::regex("\\?[0-9]"))) << d.message;
        }
    }
}

TEST_P(Corpus, MemoizationDoesNotChangeTheVerdict) {
    Program p = parse_file(testing::corpus_path(GetParam()));
    CheckOptions off;
    off.memoize = false;
    EXPECT_EQ(typecheck_program(p).verdict, typecheck_program(p, off).verdict);
}

INSTANTIATE_TEST_SUITE_P(Files, Corpus, ::testing::ValuesIn(testing::corpus_files()),
                         [](const ::testing::TestParamInfo<std::string>& info) {
                             std::string n = info.param.substr(0, info.param.find('.'));
                             return n;
                         });

TEST(CorpusGoldens, EveryGoldenHasAFile) {
    auto files = testing::corpus_files();
    for (const auto& [name, verdict] : goldens())
        EXPECT_NE(std::find(files.begin(), files.end(), name), files.end()) << name;
}

// --- properties ---------------------------------------------------------------

class TypingProperties : public ::testing::TestWithParam<int> {};

TEST_P(TypingProperties, SynthesizedTypesCheck) {
    testing::Rng rng(static_cast<unsigned>(GetParam()));
    Context ctx = ctx_of("x : odd, y : even, z : bits, a : int, b : int");
    int synthesized = 0;
    for (int round = 0; round < 300; ++round) {
        Term e = testing::gen_term(rng, 3);
        auto alts = synth_all(std_sig(), ctx, e);
        for (const auto& alt : alts) {
            ++synthesized;
            auto problems = testing::replay(std_sig(), alt.derivation);
            ASSERT_TRUE(problems.empty()) << pretty(e) << ": " << problems.front();
            ASSERT_TRUE(check(std_sig(), ctx, e, alt.type).derivation) << pretty(e) << " => " << pretty(alt.type);
        }
    }
    EXPECT_GT(synthesized, 20);
}

TEST_P(TypingProperties, GeneratedProgramsReplayAndIgnoreMemo) {
    testing::Rng rng(static_cast<unsigned>(GetParam()) + 100);
    CheckOptions off;
    off.memoize = false;
    int accepted = 0;
    for (int round = 0; round < 60; ++round) {
        Program p = parse_program(std::string(testing::kHeader) + testing::gen_ctx_anno_program(rng));
        Report r = typecheck_program(p);
        ASSERT_EQ(r.verdict, typecheck_program(p, off).verdict) << pretty(p.main);
        if (r.verdict != Report::Verdict::Accept)
            continue;
        ++accepted;
        auto problems = testing::replay(p.sig, r.derivation);
        ASSERT_TRUE(problems.empty()) << pretty(p.main) << ": " << problems.front();
    }
    EXPECT_GT(accepted, 10);
}

INSTANTIATE_TEST_SUITE_P(Seeds, TypingProperties, ::testing::Values(1, 2, 3));

}  // namespace
}  // namespace guardlang
