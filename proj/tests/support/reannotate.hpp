#ifndef GUARDLANG_TESTS_REANNOTATE_HPP
#define GUARDLANG_TESTS_REANNOTATE_HPP

#include <map>
#include <optional>
#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/derivation.hpp"

namespace guardlang::testing {

// One judgment about a source subterm: the context and type at its
// outermost node in a derivation (checked type in checking position, the
// type its base rule synthesized in synthesis position).
struct Occurrence {
    Context ctx;
    Type type;
};

// Occurrences of every subterm of `root` that the derivation mentions,
// keyed by node identity.
std::map<const void*, std::vector<Occurrence>> occurrences(const DerivPtr& d, const Term& root);

// Copy of root with the subterm identified by `target` replaced.
Term replace_subterm(const Term& root, const void* target, const Term& replacement);

// Mechanical re-annotations of e0 given its occurrences. Index variables
// introduced by the checker (names with '#') are bound by `some`. Where
// occurrences differ, each gets its own guarded branch of a merge.
Term with_right_anno(const Term& e0, const std::vector<Occurrence>& occs);
std::optional<Term> with_guard(const Term& e0, const std::vector<Occurrence>& occs);
Term with_merge(const Term& e0);

}  // namespace guardlang::testing

#endif  // GUARDLANG_TESTS_REANNOTATE_HPP
