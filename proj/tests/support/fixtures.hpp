#ifndef GUARDLANG_TESTS_FIXTURES_HPP
#define GUARDLANG_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/parser.hpp"

namespace guardlang::testing {

// Header shared by the generated programs and most unit tests: the
// odd/even/bits lattice, one indexed constructor and a few primitives.
inline const char* kHeader = R"(datasort odd <: bits
datasort even <: bits
indexcon list :: int
prim snoc1 : (odd -> even) /\ (even -> odd)
prim idcast : Pi c : int . list(c) -> list(c)
prim half : Pi c : int . list(c*2) -> list(c)
prim double : Pi c : int . list(c) -> list(c*2)
prim b1 : odd
prim b10 : even
prim nil : list(0)
)";

// Signature of kHeader.
const Signature& std_sig();

Type ty(const std::string& text);
Term tm(const std::string& text);
IndexExpr ix(const std::string& text);
Program program(const std::string& body);

// Context from "x : odd, a : int" (empty string for the empty context).
Context ctx_of(const std::string& text);

std::string corpus_path(const std::string& name);
std::vector<std::string> corpus_files();

}  // namespace guardlang::testing

#endif  // GUARDLANG_TESTS_FIXTURES_HPP
