#include "guardlang/ctxanno.hpp"

#include "guardlang/index_domain.hpp"
#include "guardlang/pretty.hpp"
#include "guardlang/subtype.hpp"

namespace guardlang {

namespace {

std::shared_ptr<Derivation> ctx_node(std::string rule, const Context& outer, const std::vector<Decl>& decls, std::size_t from,
                  const Type& inner_goal, const Type& outer_goal) {
    auto d = std::make_shared<Derivation>();
    d->rule = std::move(rule);
    d->judgment = Judgment::CtxSub;
    d->ctx = outer;
    d->inner = ContextualTyping{std::vector<Decl>(decls.begin() + static_cast<std::ptrdiff_t>(from), decls.end()),
                                inner_goal};
    d->lhs = outer_goal;
    return d;
}

bool well_formed(Session& s, const Context& ctx, const Type& t, const SourceSpan& span, int depth) {
    try {
        check_type_indices(ctx, t, &s.metas());
        return true;
    } catch (const UnboundIndexVariable& ex) {
        s.fail(depth, span,
               "contextual typing mentions unbound index variable `" + source_name(ex.name()) + "` in `" +
                   pretty(s.metas().zonk(t)) + "`");
        return false;
    }
}

// Substitutes i for a in decls[from..] and the goal, up to a rebinding of a.
void instantiate(std::vector<Decl>& decls, std::size_t from, Type& goal, const IndexExpr& i, const std::string& a) {
    for (std::size_t k = from; k < decls.size(); ++k) {
        if (decls[k].is_index() && decls[k].name == a)
            return;
        decls[k] = subst_index_in_decl(i, a, decls[k]);
    }
    goal = subst_index_in_type(i, a, goal);
}

}  // namespace

std::optional<Subsumption> ctx_subsumes(Session& session, const ContextualTyping& inner, const Context& outer,
                                        const std::optional<Type>& outer_goal, const SourceSpan& span, int depth) {
    auto& metas = session.metas();
    auto snap = metas.snapshot();
    std::vector<Decl> decls = inner.ctx;
    Type goal = inner.goal;

    // Derivation nodes are assembled back to front after the walk.
    struct Step {
        std::string rule;
        std::vector<Decl> decls;
        Type goal;
        std::optional<IndexExpr> witness;
        DerivPtr sub;
    };
    std::vector<Step> steps;

    auto failed = [&]() -> std::optional<Subsumption> {
        metas.restore(snap);
        return std::nullopt;
    };

    for (std::size_t k = 0; k < decls.size(); ++k) {
        ++session.stats().rule_applications;
        const Decl d = decls[k];
        if (d.is_index()) {
            int m = session.new_meta(outer, d.sort, d.name);
            IndexExpr witness = IndexExpr::meta(m);
            steps.push_back({"ctxsub-ivar", std::vector<Decl>(decls.begin() + static_cast<std::ptrdiff_t>(k), decls.end()),
                             goal, witness, nullptr});
            instantiate(decls, k + 1, goal, witness, d.name);
            continue;
        }
        const Type* actual = outer.lookup_var(d.name);
        if (!actual) {
            session.fail(depth, span, "contextual typing assumes `" + d.name + "`, which is not in scope");
            return failed();
        }
        if (!well_formed(session, outer, *d.type, span, depth))
            return failed();
        auto sub = subtype(session, outer, *actual, *d.type, span, depth + 1);
        if (!sub) {
            session.fail(depth, span,
                         "context does not satisfy `" + pretty(metas.zonk(d)) + "`: `" + d.name + "` has type `" +
                             pretty(*actual) + "`");
            return failed();
        }
        steps.push_back({"ctxsub-pvar", std::vector<Decl>(decls.begin() + static_cast<std::ptrdiff_t>(k), decls.end()),
                         goal, std::nullopt, sub});
    }

    ++session.stats().rule_applications;
    if (!well_formed(session, outer, goal, span, depth))
        return failed();
    Type result = goal;
    if (outer_goal) {
        if (!type_equivalent(session, outer, goal, *outer_goal)) {
            session.fail(depth, span,
                         "contextual typing gives `" + pretty(metas.zonk(goal)) + "`, not `" + pretty(*outer_goal) + "`");
            return failed();
        }
        result = *outer_goal;
    }

    DerivPtr d = ctx_node("ctxsub-empty", outer, {}, 0, result, result);
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        auto n = ctx_node(it->rule, outer, it->decls, 0, it->goal, result);
        n->witness = it->witness;
        if (it->sub)
            n->premises.push_back(it->sub);
        n->premises.push_back(d);
        d = n;
    }
    return Subsumption{d, result};
}

SubsumptionResult ctx_subsumes(const Signature& sig, const ContextualTyping& inner, const Context& outer,
                               const std::optional<Type>& outer_goal, CheckOptions options) {
    Session s(sig, options);
    SubsumptionResult r;
    auto sub = ctx_subsumes(s, inner, outer, outer_goal);
    if (sub && s.metas().unsolved_from(0).empty()) {
        r.derivation = zonk(sub->derivation, s.metas());
        r.goal = s.metas().zonk(sub->goal);
    } else if (sub) {
        s.fail(0, {}, "contextual typing leaves an index variable undetermined");
    }
    r.failures = s.deepest_failures(10);
    return r;
}

CtxAnnoResult check_ctx_anno(const Signature& sig, const Context& ctx, const Term& e, CheckOptions options) {
    CtxAnnoResult r;
    if (!e.is(Term::Kind::CtxAnno)) {
        r.failures.push_back({e.span(), "term is not headed by a contextual annotation", 0});
        return r;
    }
    options.ctx_anno = true;
    Session s(sig, options);
    Typechecker tc(s);
    tc.synth(ctx, e, [&](const Type& t, const DerivPtr& d) {
        if (!s.metas().unsolved_from(0).empty())
            return false;
        r.type = s.metas().zonk(t);
        r.derivation = zonk(d, s.metas());
        r.branch = d->branch;
        return true;
    });
    r.failures = s.deepest_failures(10);
    return r;
}

// --- encoding --------------------------------------------------------------------

namespace {

Term encode_typing(const Term& subject, const ContextualTyping& typing, const SourceSpan& span) {
    std::vector<Decl> decls = typing.ctx;
    Type goal = typing.goal;
    // Index sortings become binders around the subject; rename any that
    // would capture an index variable of the subject or of the typing.
    auto subject_free = free_index_vars(subject);
    for (std::size_t k = 0; k < decls.size(); ++k) {
        if (!decls[k].is_index() || !subject_free.count(decls[k].name))
            continue;
        std::set<std::string> avoid = subject_free;
        for (const auto& d : decls) {
            avoid.insert(d.name);
            if (d.is_var())
                for (const auto& v : free_index_vars(*d.type))
                    avoid.insert(v);
        }
        for (const auto& v : free_index_vars(goal))
            avoid.insert(v);
        std::string old = decls[k].name;
        std::string renamed = prime_away(old, avoid);
        decls[k].name = renamed;
        instantiate(decls, k + 1, goal, IndexExpr::var(renamed), old);
    }
    Term out = Term::anno(subject, goal, span);
    for (auto it = decls.rbegin(); it != decls.rend(); ++it) {
        if (it->is_index())
            out = Term::some(it->name, it->sort, out, span);
        else
            out = Term::guard(*it, out, span);
    }
    return out;
}

}  // namespace

Term encode(const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return e;
    case Term::Kind::Lam: return Term::lam(e.name(), encode(e.body()), e.span());
    case Term::Kind::App: return Term::app(encode(e.lhs()), encode(e.rhs()), e.span());
    case Term::Kind::Anno: return Term::anno(encode(e.body()), e.type(), e.span());
    case Term::Kind::Guard: return Term::guard(e.decl(), encode(e.body()), e.span());
    case Term::Kind::Merge: return Term::merge(encode(e.lhs()), encode(e.rhs()), e.span());
    case Term::Kind::Some: return Term::some(e.name(), e.sort(), encode(e.body()), e.span());
    case Term::Kind::BigLam: return Term::big_lam(e.name(), e.sort(), encode(e.body()), e.span());
    case Term::Kind::CtxAnno: {
        Term subject = encode(e.body());
        const auto& typings = e.typings();
        Term out = encode_typing(subject, typings.back(), e.span());
        for (std::size_t k = typings.size() - 1; k-- > 0;)
            out = Term::merge(encode_typing(subject, typings[k], e.span()), out, e.span());
        return out;
    }
    }
    return e;
}

Program encode(const Program& p) {
    Program out = p;
    out.main = encode(p.main);
    return out;
}

EncodingReport verify_encoding(const Program& p, CheckOptions options) {
    EncodingReport r;
    CheckOptions with = options;
    with.ctx_anno = true;
    CheckOptions without = options;
    without.ctx_anno = false;
    r.original = typecheck_program(p, with);
    r.encoded_program = encode(p);
    r.encoded = typecheck_program(r.encoded_program, without);
    r.original_size = derivation_size(r.original.derivation);
    r.encoded_size = derivation_size(r.encoded.derivation);
    r.gap = r.original.verdict == Report::Verdict::Accept && r.encoded.verdict != Report::Verdict::Accept;
    return r;
}

}  // namespace guardlang
