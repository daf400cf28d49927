#include "guardlang/eval.hpp"

#include <deque>
#include <set>

#include "guardlang/pretty.hpp"

namespace guardlang {

MergeMismatch::MergeMismatch(Term lhs, Term rhs)
    : std::runtime_error("merge branches erase differently: " + pretty(lhs) + " vs " + pretty(rhs)),
      lhs_(std::move(lhs)),
      rhs_(std::move(rhs)) {}

Term erase(const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return e;
    case Term::Kind::Lam: return Term::lam(e.name(), erase(e.body()), e.span());
    case Term::Kind::App: return Term::app(erase(e.lhs()), erase(e.rhs()), e.span());
    case Term::Kind::Anno:
    case Term::Kind::Guard:
    case Term::Kind::Some:
    case Term::Kind::BigLam:
    case Term::Kind::CtxAnno: return erase(e.body());
    case Term::Kind::Merge: {
        Term l = erase(e.lhs());
        Term r = erase(e.rhs());
        if (!alpha_eq(l, r))
            throw MergeMismatch(l, r);
        return l;
    }
    }
    return e;
}

void PrimTable::define(const std::string& name, PrimDenotation d) { table_[name] = std::move(d); }

const PrimDenotation* PrimTable::find(const std::string& name) const {
    auto it = table_.find(name);
    return it == table_.end() ? nullptr : &it->second;
}

namespace {

bool is_bitstring(const Term& e) {
    if (!e.is(Term::Kind::Prim) || e.name().empty() || e.name()[0] != 'b')
        return false;
    return e.name().find_first_not_of("01", 1) == std::string::npos;
}

PrimDenotation identity() {
    return {1, [](const std::vector<Term>& args) -> std::optional<Term> { return args[0]; }};
}

PrimDenotation snoc(char bit) {
    return {1, [bit](const std::vector<Term>& args) -> std::optional<Term> {
                if (!is_bitstring(args[0]))
                    return std::nullopt;
                return Term::prim(args[0].name() + bit);
            }};
}

// Head primitive and arguments of a spine p v1 ... vn.
std::optional<std::pair<Term, std::vector<Term>>> spine(const Term& e) {
    std::vector<Term> args;
    const Term* t = &e;
    while (t->is(Term::Kind::App)) {
        args.insert(args.begin(), t->rhs());
        t = &t->lhs();
    }
    if (!t->is(Term::Kind::Prim))
        return std::nullopt;
    return std::make_pair(*t, std::move(args));
}

// Results of evaluation: no annotation or merge at the head.
bool plain_value(const Term& e, const PrimTable& prims) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Lam:
    case Term::Kind::Prim: return true;
    case Term::Kind::App: {
        auto sp = spine(e);
        if (!sp)
            return false;
        for (const auto& a : sp->second)
            if (!plain_value(a, prims))
                return false;
        const auto* d = prims.find(sp->first.name());
        return !d || sp->second.size() < d->arity;
    }
    default: return false;
    }
}

StepResult stepped(Term t, std::string rule) {
    StepResult r;
    r.kind = StepResult::Kind::Stepped;
    r.term = std::move(t);
    r.rule = std::move(rule);
    return r;
}

StepResult stuck(const Term& t, std::string reason) {
    StepResult r;
    r.kind = StepResult::Kind::Stuck;
    r.term = t;
    r.reason = std::move(reason);
    return r;
}

// Successors of e; `both_merges` adds the second merge reduction.
std::vector<StepResult> successors(const Term& e, const PrimTable& prims, bool both_merges) {
    switch (e.kind()) {
    case Term::Kind::Anno: return {stepped(e.body(), "drop-anno")};
    case Term::Kind::Guard: return {stepped(e.body(), "drop-guard")};
    case Term::Kind::Some: return {stepped(e.body(), "drop-some")};
    case Term::Kind::BigLam: return {stepped(e.body(), "drop-idxfn")};
    case Term::Kind::CtxAnno: return {stepped(e.body(), "drop-ctx-anno")};
    case Term::Kind::Merge:
        if (both_merges)
            return {stepped(e.lhs(), "merge1"), stepped(e.rhs(), "merge2")};
        return {stepped(e.lhs(), "merge1")};
    case Term::Kind::App: {
        const Term& fn = e.lhs();
        const Term& arg = e.rhs();
        if (!plain_value(fn, prims)) {
            auto inner = successors(fn, prims, both_merges);
            for (auto& r : inner)
                if (r.kind == StepResult::Kind::Stepped)
                    r.term = Term::app(r.term, arg, e.span());
            return inner;
        }
        if (!plain_value(arg, prims)) {
            auto inner = successors(arg, prims, both_merges);
            for (auto& r : inner)
                if (r.kind == StepResult::Kind::Stepped)
                    r.term = Term::app(fn, r.term, e.span());
            return inner;
        }
        if (fn.is(Term::Kind::Lam))
            return {stepped(subst_term(arg, fn.name(), fn.body()), "beta")};
        if (auto sp = spine(e)) {
            const auto* d = prims.find(sp->first.name());
            if (!d || sp->second.size() < d->arity)
                break;
            if (auto out = d->apply(sp->second))
                return {stepped(*out, "prim")};
            return {stuck(e, "primitive " + sp->first.name() + " is not defined on " + pretty(arg))};
        }
        if (fn.is(Term::Kind::Var))
            return {stuck(e, "free variable '" + fn.name() + "' in function position")};
        return {stuck(e, "cannot apply " + pretty(fn))};
    }
    default: break;
    }
    StepResult v;
    v.kind = StepResult::Kind::Value;
    v.term = e;
    return {v};
}

}  // namespace

const PrimTable& builtin_prims() {
    static const PrimTable table = [] {
        PrimTable t;
        t.define("id", identity());
        t.define("idcast", identity());
        t.define("half", identity());
        t.define("double", identity());
        t.define("snoc0", snoc('0'));
        t.define("snoc1", snoc('1'));
        return t;
    }();
    return table;
}

bool is_value(const Term& e, const PrimTable& prims) {
    switch (e.kind()) {
    case Term::Kind::Anno:
    case Term::Kind::Guard: return is_value(e.body(), prims);
    default: return plain_value(e, prims);
    }
}

StepResult step(const Term& e, const PrimTable& prims) { return successors(e, prims, false).front(); }

std::string_view outcome_name(EvalResult::Outcome o) {
    switch (o) {
    case EvalResult::Outcome::Value: return "value";
    case EvalResult::Outcome::Stuck: return "stuck";
    case EvalResult::Outcome::OutOfFuel: return "out-of-fuel";
    case EvalResult::Outcome::MergeMismatch: return "merge-mismatch";
    }
    return "value";
}

EvalResult eval(const Term& e, const PrimTable& prims, std::size_t fuel, EvalMode mode) {
    EvalResult r;
    Term t = e;
    if (mode == EvalMode::Erase) {
        try {
            t = erase(e);
        } catch (const MergeMismatch& ex) {
            r.outcome = EvalResult::Outcome::MergeMismatch;
            r.term = e;
            r.reason = ex.what();
            return r;
        }
    }
    for (;;) {
        auto s = step(t, prims);
        if (s.kind == StepResult::Kind::Value) {
            r.outcome = EvalResult::Outcome::Value;
            r.term = t;
            return r;
        }
        if (s.kind == StepResult::Kind::Stuck) {
            r.outcome = EvalResult::Outcome::Stuck;
            r.term = s.term;
            r.reason = s.reason;
            return r;
        }
        if (r.steps >= fuel) {
            r.outcome = EvalResult::Outcome::OutOfFuel;
            r.term = t;
            r.reason = "step budget of " + std::to_string(fuel) + " exhausted";
            return r;
        }
        ++r.steps;
        t = s.term;
    }
}

StepAllResult step_all(const Term& e, std::size_t bound, const PrimTable& prims) {
    StepAllResult r;
    try {
        erase(e);
    } catch (const MergeMismatch&) {
        r.precondition = false;
    }
    std::set<std::string> seen;
    std::deque<Term> todo{e};
    seen.insert(pretty(e));
    auto add_value = [&](const Term& v) {
        Term key = v;
        try {
            key = erase(v);
        } catch (const MergeMismatch&) {
        }
        for (const auto& known : r.values)
            if (alpha_eq(known, key))
                return;
        r.values.push_back(key);
    };
    while (!todo.empty()) {
        if (r.states >= bound) {
            r.bound_exceeded = true;
            break;
        }
        Term t = todo.front();
        todo.pop_front();
        ++r.states;
        for (const auto& s : successors(t, prims, true)) {
            if (s.kind == StepResult::Kind::Value) {
                add_value(s.term);
            } else if (s.kind == StepResult::Kind::Stuck) {
                ++r.stuck;
            } else if (seen.insert(pretty(s.term)).second) {
                todo.push_back(s.term);
            }
        }
    }
    return r;
}

}  // namespace guardlang
