#ifndef GUARDLANG_DERIVATION_HPP
#define GUARDLANG_DERIVATION_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "guardlang/ast.hpp"

namespace guardlang {

class MetaStore;

enum class Judgment {
    Subtype,  // ctx |- lhs <= rhs
    Check,    // ctx |- term <= lhs
    Synth,    // ctx |- term => lhs
    Guard,    // ctx supports decl (index sortings only; variables use Check)
    CtxSub,   // (inner.ctx |- inner.goal) <~ (ctx |- lhs)
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// One rule application. Rule names:
//   subtyping  sub-refl sub-atom sub-arr sub-andL1 sub-andL2 sub-andR sub-iLR sub-PiL sub-PiR
//   checking   andI PiI PiI-explicit arrI unitI left-anno-check some-check
//              merge-check1 merge-check2 sub beta-check
//   synthesis  var prim arrE right-anno left-anno-synth merge-synth1 merge-synth2
//              some-synth ctx-anno andE1 andE2 PiE
//   guards     guard-ivar
//   ctx-sub    ctxsub-empty ctxsub-ivar ctxsub-pvar
struct Derivation {
    std::string rule;
    Judgment judgment = Judgment::Check;
    Context ctx;
    std::optional<Term> term;
    std::optional<Type> lhs;
    std::optional<Type> rhs;
    std::optional<Decl> decl;
    std::optional<ContextualTyping> inner;
    std::optional<IndexExpr> witness;  // PiL, PiE, some, ctxsub-ivar
    int branch = 0;                    // merge / andE / ctx-anno branch (1-based)
    std::vector<DerivPtr> premises;
};

// Replaces every solved metavariable in the tree by its solution.
DerivPtr zonk(const DerivPtr& d, const MetaStore& metas);

std::size_t derivation_size(const DerivPtr& d);

// Pre-order walk.
template <class F>
void for_each_node(const DerivPtr& d, F&& f) {
    if (!d)
        return;
    f(*d);
    for (const auto& p : d->premises)
        for_each_node(p, f);
}

}  // namespace guardlang

#endif  // GUARDLANG_DERIVATION_HPP
