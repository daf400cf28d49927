#ifndef GUARDLANG_SUBTYPE_HPP
#define GUARDLANG_SUBTYPE_HPP

#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/derivation.hpp"
#include "guardlang/session.hpp"

namespace guardlang {

// Decides ctx |- lhs <: rhs with the session's metavariables. Returns null
// on failure, with the store restored and reasons logged against `span`.
// Metavariable solutions found on success stay in the store.
DerivPtr subtype(Session& session, const Context& ctx, const Type& lhs, const Type& rhs, const SourceSpan& span = {},
                 int depth = 0);

// Structural equality of types with indices compared up to entailed
// equality; unsolved metavariables may be solved on the way.
bool type_equivalent(Session& session, const Context& ctx, const Type& a, const Type& b);

struct SubtypeResult {
    DerivPtr derivation;  // zonked; null on failure
    std::vector<Diagnostic> failures;
    Stats stats;
};

// One-shot query in a private session.
SubtypeResult subtype(const Signature& sig, const Context& ctx, const Type& lhs, const Type& rhs,
                      CheckOptions options = {});

}  // namespace guardlang

#endif  // GUARDLANG_SUBTYPE_HPP
