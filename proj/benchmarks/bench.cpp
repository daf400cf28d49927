#include <benchmark/benchmark.h>

#include "guardlang/ctxanno.hpp"
#include "guardlang/index_domain.hpp"
#include "guardlang/parser.hpp"
#include "guardlang/subtype.hpp"
#include "guardlang/typecheck.hpp"

namespace {

using namespace guardlang;

const char* kHeader = R"(datasort odd <: bits
datasort even <: bits
indexcon list :: int
prim snoc1 : (odd -> even) /\ (even -> odd)
prim idcast : Pi c : int . list(c) -> list(c)
prim half : Pi c : int . list(c*2) -> list(c)
)";

Program with_header(const std::string& body) { return parse_program(std::string(kHeader) + body); }

void BM_CheckGuardedParity(benchmark::State& state) {
    Program p = with_header(
        "val main : (odd -> even) /\\ (even -> odd) = "
        "fn x => ((where x : odd do (snoc1 x : even)) ,, (where x : even do (snoc1 x : odd)))");
    for (auto _ : state)
        benchmark::DoNotOptimize(typecheck_program(p).verdict);
}
BENCHMARK(BM_CheckGuardedParity);

void BM_CheckUnguardedParity(benchmark::State& state) {
    Program p = with_header(
        "val main : (odd -> even) /\\ (even -> odd) = fn x => ((snoc1 x : even) ,, (snoc1 x : odd))");
    for (auto _ : state)
        benchmark::DoNotOptimize(typecheck_program(p).verdict);
}
BENCHMARK(BM_CheckUnguardedParity);

void BM_CheckSome(benchmark::State& state) {
    Program p = with_header(
        "val main : Pi a : int . list(a*2) -> list(a) = "
        "fn x => some b : int in where x : list(b) do half (idcast x : list(b))");
    for (auto _ : state)
        benchmark::DoNotOptimize(typecheck_program(p).verdict);
}
BENCHMARK(BM_CheckSome);

// A conjunction of n arrows checked against its reversal.
void BM_SubtypeWideIntersection(benchmark::State& state) {
    Program p = with_header("val main = ()");
    std::string lhs = "(odd -> even)";
    std::string rhs = "(odd -> bits)";
    for (int k = 1; k < state.range(0); ++k) {
        lhs += k % 2 ? " /\\ (even -> odd)" : " /\\ (odd -> even)";
        rhs = (k % 2 ? "(even -> bits) /\\ " : "(odd -> bits) /\\ ") + rhs;
    }
    Type a = parse_type(lhs, &p.sig);
    Type b = parse_type(rhs, &p.sig);
    for (auto _ : state)
        benchmark::DoNotOptimize(subtype(p.sig, Context{}, a, b).derivation);
}
BENCHMARK(BM_SubtypeWideIntersection)->Arg(2)->Arg(8)->Arg(32);

void BM_Entailment(benchmark::State& state) {
    Context ctx({Decl::index("a", IndexSort::Int), Decl::index("b", IndexSort::Int), Decl::index("c", IndexSort::Int)});
    std::vector<IndexProp> hyps = {IndexProp::eq(parse_index("a"), parse_index("b + 1")),
                                   IndexProp::le(parse_index("b*2"), parse_index("c")),
                                   IndexProp::lt(parse_index("c"), parse_index("a*3 + 4"))};
    IndexProp goal = IndexProp::le(parse_index("b"), parse_index("a*3 + 2"));
    for (auto _ : state)
        benchmark::DoNotOptimize(entails(ctx, hyps, goal));
}
BENCHMARK(BM_Entailment);

void BM_VerifyEncoding(benchmark::State& state) {
    Program p = with_header(
        "val main : (odd -> even) /\\ (even -> odd) = fn x => (snoc1 x :: [x : odd |- even ; x : even |- odd])");
    for (auto _ : state)
        benchmark::DoNotOptimize(verify_encoding(p).gap);
}
BENCHMARK(BM_VerifyEncoding);

}  // namespace

BENCHMARK_MAIN();
