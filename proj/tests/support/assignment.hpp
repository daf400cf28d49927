#ifndef GUARDLANG_TESTS_ASSIGNMENT_HPP
#define GUARDLANG_TESTS_ASSIGNMENT_HPP

#include <vector>

#include "guardlang/ast.hpp"

// Type assignment ctx |- e : A, the undirected system in which
// preservation is stated. Unlike the bidirectional checker it types
// unannotated redexes, guessing argument types from a candidate pool.
// The search is built on the checker, so a positive answer is only as
// sound as the checker's derivations, which replay separately.
namespace guardlang::testing {

// Every type written in the program, its signature and its goal, closed
// under components.
std::vector<Type> annotation_pool(const Program& p);

// Free index variables of e that ctx does not bind are read
// existentially, as the premise of a dropped `some` or `idxfn` does.
bool assignable(const Signature& sig, const Context& ctx, const Term& e, const Type& type,
                const std::vector<Type>& pool, int depth = 6);

}  // namespace guardlang::testing

#endif  // GUARDLANG_TESTS_ASSIGNMENT_HPP
