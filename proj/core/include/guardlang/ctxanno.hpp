#ifndef GUARDLANG_CTXANNO_HPP
#define GUARDLANG_CTXANNO_HPP

#include <optional>
#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/derivation.hpp"
#include "guardlang/session.hpp"
#include "guardlang/typecheck.hpp"

namespace guardlang {

struct Subsumption {
    DerivPtr derivation;
    Type goal;  // the annotation's type after instantiating its index variables
};

// (inner.ctx |- inner.goal) <~ (outer |- outer_goal). Index sortings become
// metavariables solved by the later subtyping premises. Without an outer goal
// the instantiated inner goal is returned as is; with one, the two must agree
// up to index equality. Leaves unsolved metavariables for the caller to judge.
std::optional<Subsumption> ctx_subsumes(Session& session, const ContextualTyping& inner, const Context& outer,
                                        const std::optional<Type>& outer_goal, const SourceSpan& span = {},
                                        int depth = 0);

struct SubsumptionResult {
    DerivPtr derivation;  // zonked; null on failure
    std::optional<Type> goal;
    std::vector<Diagnostic> failures;
};

SubsumptionResult ctx_subsumes(const Signature& sig, const ContextualTyping& inner, const Context& outer,
                               const std::optional<Type>& outer_goal, CheckOptions options = {});

struct CtxAnnoResult {
    DerivPtr derivation;  // zonked; null on failure
    std::optional<Type> type;
    int branch = 0;  // 1-based index of the typing used
    std::vector<Diagnostic> failures;
};

// Synthesizes a type for a term headed by a contextual annotation.
CtxAnnoResult check_ctx_anno(const Signature& sig, const Context& ctx, const Term& e, CheckOptions options = {});

// Replaces every contextual annotation by a merge of guarded
// right-annotations; index sortings become `some` binders.
Term encode(const Term& e);
Program encode(const Program& p);

struct EncodingReport {
    Report original;  // contextual annotations enabled
    Report encoded;   // encoded program, contextual annotations disabled
    Program encoded_program;
    bool gap = false;  // original accepted, encoded rejected
    std::size_t original_size = 0;
    std::size_t encoded_size = 0;
};

EncodingReport verify_encoding(const Program& p, CheckOptions options = {});

}  // namespace guardlang

#endif  // GUARDLANG_CTXANNO_HPP
