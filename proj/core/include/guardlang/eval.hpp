#ifndef GUARDLANG_EVAL_HPP
#define GUARDLANG_EVAL_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "guardlang/ast.hpp"

namespace guardlang {

class MergeMismatch : public std::runtime_error {
public:
    MergeMismatch(Term lhs, Term rhs);
    const Term& lhs() const { return lhs_; }
    const Term& rhs() const { return rhs_; }

private:
    Term lhs_;
    Term rhs_;
};

// Strips annotations, guards, index binders and contextual annotations;
// a merge erases to its left branch when both branches erase alike.
// Throws MergeMismatch otherwise.
Term erase(const Term& e);

// Runtime meaning of primitives. A primitive with a denotation reduces once
// applied to `arity` values; the denotation may decline (stuck). Primitives
// without one are inert constructors.
struct PrimDenotation {
    std::size_t arity = 1;
    std::function<std::optional<Term>(const std::vector<Term>&)> apply;
};

class PrimTable {
public:
    void define(const std::string& name, PrimDenotation d);
    const PrimDenotation* find(const std::string& name) const;

private:
    std::map<std::string, PrimDenotation, std::less<>> table_;
};

// id, idcast, half and double are identities; snoc0/snoc1 append a bit to a
// bitstring constant, written as a primitive named b<bits> (b, b0, b101, ...).
const PrimTable& builtin_prims();

// Values: x | fn x => e | () | (v : A) | where d do v | primitive applications
// that cannot reduce.
bool is_value(const Term& e, const PrimTable& prims = builtin_prims());

struct StepResult {
    enum class Kind { Stepped, Value, Stuck };
    Kind kind = Kind::Value;
    Term term = Term::unit();  // the successor, or the input for Value/Stuck
    std::string rule;          // for Stepped: beta, prim, drop-anno, drop-guard, drop-some, drop-idxfn, drop-ctx-anno, merge1
    std::string reason;        // for Stuck
};

// Call-by-value, left to right. Annotations at the head of the redex are
// dropped first, also around values; Value is reported only for results
// with no annotation at the head.
StepResult step(const Term& e, const PrimTable& prims = builtin_prims());

enum class EvalMode { Erase, Annotated };

struct EvalResult {
    enum class Outcome { Value, Stuck, OutOfFuel, MergeMismatch };
    Outcome outcome = Outcome::Value;
    Term term = Term::unit();
    std::size_t steps = 0;
    std::string reason;
};

std::string_view outcome_name(EvalResult::Outcome o);

EvalResult eval(const Term& e, const PrimTable& prims = builtin_prims(), std::size_t fuel = 100000,
                EvalMode mode = EvalMode::Erase);

struct StepAllResult {
    std::vector<Term> values;      // distinct up to erasure and renaming
    bool precondition = true;      // every merge has branches that erase alike
    bool bound_exceeded = false;
    std::size_t states = 0;
    std::size_t stuck = 0;
};

// Explores both merge reductions wherever a merge is in redex position.
StepAllResult step_all(const Term& e, std::size_t bound, const PrimTable& prims = builtin_prims());

}  // namespace guardlang

#endif  // GUARDLANG_EVAL_HPP
