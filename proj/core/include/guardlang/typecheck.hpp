#ifndef GUARDLANG_TYPECHECK_HPP
#define GUARDLANG_TYPECHECK_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/derivation.hpp"
#include "guardlang/session.hpp"

namespace guardlang {

// Bidirectional checker over one session. check/check_guard return null on
// failure with the metavariable store rewound; reasons go to the session log.
class Typechecker {
public:
    // Receives one synthesized alternative; returning false asks for the next.
    using Continuation = std::function<bool(const Type&, const DerivPtr&)>;

    explicit Typechecker(Session& session) : s_(session) {}

    DerivPtr check(const Context& ctx, const Term& e, const Type& type, int depth = 0);
    bool synth(const Context& ctx, const Term& e, const Continuation& k, int depth = 0);
    DerivPtr check_guard(const Context& ctx, const Decl& d, const SourceSpan& span, int depth = 0);

    Session& session() { return s_; }

private:
    DerivPtr check_rules(const Context& ctx, const Term& e, const Type& type, int depth);
    bool synth_base(const Context& ctx, const Term& e, const Continuation& k, int depth);
    bool synth_closure(const Context& ctx, const Term& e, const Type& type, const DerivPtr& d,
                       const Continuation& k, int depth);
    bool synth_ctx_anno(const Context& ctx, const Term& e, const Continuation& k, int depth);
    DerivPtr sub_rule(const Context& ctx, const Term& e, const Type& type, int depth);
    bool well_formed(const Context& ctx, const Type& type, const SourceSpan& span, int depth);
    bool too_deep(int depth, const SourceSpan& span);

    Session& s_;
    // Keyed by node address; each entry keeps its term alive so the
    // address cannot be reused by another node.
    struct MemoEntry {
        Term term;
        DerivPtr derivation;
    };
    std::map<std::string, MemoEntry> memo_;
};

struct CheckResult {
    DerivPtr derivation;  // zonked; null on failure
    std::vector<Diagnostic> failures;
    Stats stats;
    std::vector<std::string> unsolved_metas;
};

struct SynthAlternative {
    Type type;
    DerivPtr derivation;
};

// One-shot queries in a private session. A successful check leaves no
// unsolved metavariables; synth_all lists every fully solved alternative,
// intersection projections included.
CheckResult check(const Signature& sig, const Context& ctx, const Term& e, const Type& type,
                  CheckOptions options = {});
std::vector<SynthAlternative> synth_all(const Signature& sig, const Context& ctx, const Term& e,
                                        CheckOptions options = {});
CheckResult check_guard(const Signature& sig, const Context& ctx, const Decl& d, CheckOptions options = {});

struct Report {
    enum class Verdict { Accept, Reject, Error };
    Verdict verdict = Verdict::Reject;
    std::vector<Diagnostic> diagnostics;
    Stats stats;
    DerivPtr derivation;
    std::optional<Type> type;  // goal, or the synthesized type
    std::vector<std::string> unsolved_metas;
    double wall_ms = 0;
};

std::string_view verdict_name(Report::Verdict v);

// Checks main against the goal if there is one, otherwise synthesizes.
Report typecheck_program(const Program& p, CheckOptions options = {});

}  // namespace guardlang

#endif  // GUARDLANG_TYPECHECK_HPP
