#include "guardlang/typecheck.hpp"

#include <chrono>

#include "guardlang/ctxanno.hpp"
#include "guardlang/index_domain.hpp"
#include "guardlang/pretty.hpp"
#include "guardlang/subtype.hpp"

namespace guardlang {

namespace {

DerivPtr make(std::string rule, Judgment j, const Context& ctx, const Term& e, const Type& type,
              std::vector<DerivPtr> premises = {}) {
    auto d = std::make_shared<Derivation>();
    d->rule = std::move(rule);
    d->judgment = j;
    d->ctx = ctx;
    d->term = e;
    d->lhs = type;
    d->premises = std::move(premises);
    return d;
}

DerivPtr with_branch(DerivPtr d, int branch) {
    auto out = std::make_shared<Derivation>(*d);
    out->branch = branch;
    return out;
}

DerivPtr with_witness(DerivPtr d, IndexExpr witness) {
    auto out = std::make_shared<Derivation>(*d);
    out->witness = std::move(witness);
    return out;
}

bool context_has_metas(const Context& ctx) {
    for (const auto& d : ctx.decls())
        if (d.is_var() && has_metas(*d.type))
            return true;
    return false;
}

std::optional<std::string> undeclared_name(const Signature& sig, const Type& t) {
    switch (t.kind()) {
    case Type::Kind::Unit: return std::nullopt;
    case Type::Kind::Atom:
        if (!sig.has_atom(t.name()))
            return "unknown datasort `" + t.name() + "`";
        return std::nullopt;
    case Type::Kind::Indexed:
        if (!sig.indexcon_sort(t.name()))
            return "unknown indexed constructor `" + t.name() + "`";
        return std::nullopt;
    case Type::Kind::Arrow:
    case Type::Kind::Sect:
        if (auto r = undeclared_name(sig, t.lhs()))
            return r;
        return undeclared_name(sig, t.rhs());
    case Type::Kind::Pi: return undeclared_name(sig, t.body());
    }
    return std::nullopt;
}

// Source-level rendering for messages: metavariables and generated names
// show as the variables they stand for.
std::string show(const MetaStore& metas, const Type& t) { return pretty(metas.zonk(t)); }

}  // namespace

bool Typechecker::too_deep(int depth, const SourceSpan& span) {
    if (depth <= s_.options().max_depth)
        return false;
    ++s_.stats().depth_exceeded;
    s_.fail(depth, span, "search depth bound exceeded");
    return true;
}

bool Typechecker::well_formed(const Context& ctx, const Type& type, const SourceSpan& span, int depth) {
    if (auto bad = undeclared_name(s_.sig(), type)) {
        s_.fail(depth, span, *bad + " in `" + pretty(type) + "`");
        return false;
    }
    try {
        check_type_indices(ctx, type, &s_.metas());
    } catch (const UnboundIndexVariable& ex) {
        s_.fail(depth, span,
                "type `" + show(s_.metas(), type) + "` mentions unbound index variable `" + source_name(ex.name()) + "`");
        return false;
    }
    return true;
}

DerivPtr Typechecker::check(const Context& ctx, const Term& e, const Type& type, int depth) {
    if (too_deep(depth, e.span()))
        return nullptr;
    bool cacheable = s_.options().memoize && !has_metas(e) && !has_metas(type) && !context_has_metas(ctx);
    std::string key;
    if (cacheable) {
        key = std::to_string(reinterpret_cast<std::uintptr_t>(e.id())) + "|" + pretty(ctx) + "|" + pretty(type);
        if (auto it = memo_.find(key); it != memo_.end()) {
            ++s_.stats().memo_hits;
            return it->second.derivation;
        }
    }
    auto bound_hits = s_.stats().depth_exceeded;
    auto snap = s_.metas().snapshot();
    DerivPtr d = check_rules(ctx, e, type, depth);
    if (!d)
        s_.metas().restore(snap);
    if (cacheable && s_.stats().depth_exceeded == bound_hits)
        memo_.insert_or_assign(key, MemoEntry{e, d ? zonk(d, s_.metas()) : nullptr});
    return d;
}

DerivPtr Typechecker::check_rules(const Context& ctx, const Term& e, const Type& type, int depth) {
    auto& stats = s_.stats();
    auto& metas = s_.metas();
    ++stats.rule_applications;

    auto attempt = [&](auto&& f) -> DerivPtr {
        auto snap = metas.snapshot();
        DerivPtr d = f();
        if (!d) {
            metas.restore(snap);
            ++stats.backtracks;
        }
        return d;
    };

    auto merge_rules = [&]() -> DerivPtr {
        for (int k = 1; k <= 2; ++k) {
            auto d = attempt([&]() -> DerivPtr {
                auto p = check(ctx, k == 1 ? e.lhs() : e.rhs(), type, depth + 1);
                if (!p)
                    return nullptr;
                return with_branch(make(k == 1 ? "merge-check1" : "merge-check2", Judgment::Check, ctx, e, type, {p}),
                                   k);
            });
            if (d)
                return d;
        }
        return nullptr;
    };

    if (type.is(Type::Kind::Sect)) {
        auto d1 = check(ctx, e, type.lhs(), depth + 1);
        if (!d1)
            return nullptr;
        auto d2 = check(ctx, e, type.rhs(), depth + 1);
        if (!d2)
            return nullptr;
        return make("andI", Judgment::Check, ctx, e, type, {d1, d2});
    }

    if (type.is(Type::Kind::Pi)) {
        if (e.is(Term::Kind::BigLam) && e.sort() == type.sort()) {
            auto d = attempt([&]() -> DerivPtr {
                std::string b = e.name();
                Term body = e.body();
                if (ctx.mentions_index_var(b)) {
                    auto avoid = ctx.index_vars();
                    for (const auto& v : free_index_vars(e.body()))
                        avoid.insert(v);
                    for (const auto& v : free_index_vars(type))
                        avoid.insert(v);
                    b = prime_away(b, avoid);
                    body = subst_index_in_term(IndexExpr::var(b), e.name(), e.body());
                }
                Type goal = subst_index_in_type(IndexExpr::var(b), type.name(), type.body());
                auto p = check(ctx.extended(Decl::index(b, e.sort())), body, goal, depth + 1);
                return p ? make("PiI-explicit", Judgment::Check, ctx, e, type, {p}) : nullptr;
            });
            if (d)
                return d;
        }
        if (e.is(Term::Kind::Merge))
            return merge_rules();
        std::string a = s_.names().fresh(source_name(type.name()));
        Type goal = subst_index_in_type(IndexExpr::var(a), type.name(), type.body());
        auto p = check(ctx.extended(Decl::index(a, type.sort())), e, goal, depth + 1);
        return p ? make("PiI", Judgment::Check, ctx, e, type, {p}) : nullptr;
    }

    switch (e.kind()) {
    case Term::Kind::Lam: {
        if (!type.is(Type::Kind::Arrow)) {
            s_.fail(depth, e.span(), "function checked against non-function type `" + show(metas, type) + "`");
            return nullptr;
        }
        auto p = check(ctx.extended(Decl::var(e.name(), type.lhs())), e.body(), type.rhs(), depth + 1);
        return p ? make("arrI", Judgment::Check, ctx, e, type, {p}) : nullptr;
    }
    case Term::Kind::Unit:
        if (type.is(Type::Kind::Unit))
            return make("unitI", Judgment::Check, ctx, e, type);
        s_.fail(depth, e.span(), "`()` has type `unit`, not `" + show(metas, type) + "`");
        return nullptr;
    case Term::Kind::BigLam:
        s_.fail(depth, e.span(),
                "`idxfn " + e.name() + " : " + std::string(sort_name(e.sort())) + "` needs a Pi type over " +
                    std::string(sort_name(e.sort())) + ", not `" + show(metas, type) + "`");
        return nullptr;
    case Term::Kind::Guard: {
        auto g = check_guard(ctx, e.decl(), e.span(), depth + 1);
        if (!g)
            return nullptr;
        auto p = check(ctx, e.body(), type, depth + 1);
        return p ? make("left-anno-check", Judgment::Check, ctx, e, type, {g, p}) : nullptr;
    }
    case Term::Kind::Some: {
        int first = static_cast<int>(metas.size());
        int m = s_.new_meta(ctx, e.sort(), e.name());
        IndexExpr witness = IndexExpr::meta(m);
        auto p = check(ctx, subst_index_in_term(witness, e.name(), e.body()), type, depth + 1);
        if (!p)
            return nullptr;
        if (!metas.unsolved_from(first).empty()) {
            s_.fail(depth, e.span(), "cannot determine the index bound by `some " + e.name() + "`");
            return nullptr;
        }
        return with_witness(make("some-check", Judgment::Check, ctx, e, type, {p}), witness);
    }
    case Term::Kind::Merge: return merge_rules();
    case Term::Kind::App:
        if (s_.options().redex_synthesis && e.lhs().is(Term::Kind::Lam)) {
            const Term& lam = e.lhs();
            int first = static_cast<int>(metas.size());
            DerivPtr result;
            synth(
                ctx, e.rhs(),
                [&](const Type& arg, const DerivPtr& darg) {
                    auto body = check(ctx.extended(Decl::var(lam.name(), arg)), lam.body(), type, depth + 1);
                    if (!body || !metas.unsolved_from(first).empty())
                        return false;
                    result = make("beta-check", Judgment::Check, ctx, e, type, {darg, body});
                    return true;
                },
                depth + 1);
            if (result)
                return result;
        }
        break;
    default: break;
    }
    return sub_rule(ctx, e, type, depth);
}

DerivPtr Typechecker::sub_rule(const Context& ctx, const Term& e, const Type& type, int depth) {
    auto& metas = s_.metas();
    int first = static_cast<int>(metas.size());
    DerivPtr result;
    synth(
        ctx, e,
        [&](const Type& found, const DerivPtr& d) {
            auto ds = subtype(s_, ctx, found, type, e.span(), depth + 1);
            if (!ds)
                return false;
            auto pending = metas.unsolved_from(first);
            if (!pending.empty()) {
                s_.fail(depth, e.span(),
                        "cannot determine index `" + metas.info(pending.front()).origin + "` in `" + show(metas, found) + "`");
                return false;
            }
            result = make("sub", Judgment::Check, ctx, e, type, {d, ds});
            return true;
        },
        depth + 1);
    return result;
}

bool Typechecker::synth(const Context& ctx, const Term& e, const Continuation& k, int depth) {
    if (too_deep(depth, e.span()))
        return false;
    ++s_.stats().rule_applications;
    return synth_base(ctx, e, k, depth);
}

bool Typechecker::synth_closure(const Context& ctx, const Term& e, const Type& type, const DerivPtr& d,
                                const Continuation& k, int depth) {
    auto& metas = s_.metas();
    auto snap = metas.snapshot();
    if (k(type, d))
        return true;
    metas.restore(snap);
    ++s_.stats().backtracks;

    if (type.is(Type::Kind::Sect)) {
        for (int i = 1; i <= 2; ++i) {
            const Type& part = i == 1 ? type.lhs() : type.rhs();
            auto node = with_branch(make(i == 1 ? "andE1" : "andE2", Judgment::Synth, ctx, e, part, {d}), i);
            if (synth_closure(ctx, e, part, node, k, depth))
                return true;
        }
    } else if (type.is(Type::Kind::Pi)) {
        IndexExpr witness = free_index_vars(type.body()).count(type.name())
                                ? IndexExpr::meta(s_.new_meta(ctx, type.sort(), source_name(type.name())))
                                : IndexExpr::lit(0);
        Type inst = subst_index_in_type(witness, type.name(), type.body());
        auto node = with_witness(make("PiE", Judgment::Synth, ctx, e, inst, {d}), witness);
        if (synth_closure(ctx, e, inst, node, k, depth))
            return true;
        metas.restore(snap);
    }
    return false;
}

bool Typechecker::synth_base(const Context& ctx, const Term& e, const Continuation& k, int depth) {
    auto& metas = s_.metas();
    switch (e.kind()) {
    case Term::Kind::Var: {
        const Type* t = ctx.lookup_var(e.name());
        if (!t) {
            s_.fail(depth, e.span(), "unbound variable `" + e.name() + "`");
            return false;
        }
        return synth_closure(ctx, e, *t, make("var", Judgment::Synth, ctx, e, *t), k, depth);
    }
    case Term::Kind::Prim: {
        const Type* t = s_.sig().prim_type(e.name());
        if (!t) {
            s_.fail(depth, e.span(), "undeclared primitive `" + e.name() + "`");
            return false;
        }
        return synth_closure(ctx, e, *t, make("prim", Judgment::Synth, ctx, e, *t), k, depth);
    }
    case Term::Kind::App:
        return synth(
            ctx, e.lhs(),
            [&](const Type& fn, const DerivPtr& dfn) {
                if (!fn.is(Type::Kind::Arrow)) {
                    if (!fn.is(Type::Kind::Sect) && !fn.is(Type::Kind::Pi))
                        s_.fail(depth, e.lhs().span(), "applied term has non-function type `" + show(metas, fn) + "`");
                    return false;
                }
                auto darg = check(ctx, e.rhs(), fn.lhs(), depth + 1);
                if (!darg)
                    return false;
                auto node = make("arrE", Judgment::Synth, ctx, e, fn.rhs(), {dfn, darg});
                return synth_closure(ctx, e, fn.rhs(), node, k, depth);
            },
            depth + 1);
    case Term::Kind::Anno: {
        if (!well_formed(ctx, e.type(), e.span(), depth))
            return false;
        auto d = check(ctx, e.body(), e.type(), depth + 1);
        if (!d)
            return false;
        return synth_closure(ctx, e, e.type(), make("right-anno", Judgment::Synth, ctx, e, e.type(), {d}), k, depth);
    }
    case Term::Kind::Guard: {
        auto g = check_guard(ctx, e.decl(), e.span(), depth + 1);
        if (!g)
            return false;
        return synth(
            ctx, e.body(),
            [&](const Type& t, const DerivPtr& d) {
                return k(t, make("left-anno-synth", Judgment::Synth, ctx, e, t, {g, d}));
            },
            depth + 1);
    }
    case Term::Kind::Merge:
        for (int i = 1; i <= 2; ++i) {
            bool ok = synth(
                ctx, i == 1 ? e.lhs() : e.rhs(),
                [&](const Type& t, const DerivPtr& d) {
                    return k(t, with_branch(make(i == 1 ? "merge-synth1" : "merge-synth2", Judgment::Synth, ctx, e, t, {d}), i));
                },
                depth + 1);
            if (ok)
                return true;
            ++s_.stats().backtracks;
        }
        return false;
    case Term::Kind::Some: {
        int m = s_.new_meta(ctx, e.sort(), e.name());
        IndexExpr witness = IndexExpr::meta(m);
        // Metavariables from instantiations inside the body may still be solved by the
        // caller; only the bound index itself must be known here.
        return synth(
            ctx, subst_index_in_term(witness, e.name(), e.body()),
            [&](const Type& t, const DerivPtr& d) {
                if (!metas.solved(m)) {
                    s_.fail(depth, e.span(), "cannot determine the index bound by `some " + e.name() + "`");
                    return false;
                }
                Type solved = metas.zonk(t);
                return k(solved, with_witness(make("some-synth", Judgment::Synth, ctx, e, solved, {d}), witness));
            },
            depth + 1);
    }
    case Term::Kind::CtxAnno:
        if (!s_.options().ctx_anno) {
            s_.fail(depth, e.span(), "contextual typing annotations are disabled");
            return false;
        }
        return synth_ctx_anno(ctx, e, k, depth);
    case Term::Kind::Lam:
        s_.fail(depth, e.span(), "cannot synthesize a type for `fn`; annotate it");
        return false;
    case Term::Kind::Unit:
        s_.fail(depth, e.span(), "no synthesis rule for `()`; it only checks against `unit`");
        return false;
    case Term::Kind::BigLam:
        s_.fail(depth, e.span(), "cannot synthesize a type for `idxfn`; check it against a Pi type");
        return false;
    }
    return false;
}

bool Typechecker::synth_ctx_anno(const Context& ctx, const Term& e, const Continuation& k, int depth) {
    auto& metas = s_.metas();
    const auto& typings = e.typings();
    for (std::size_t i = 0; i < typings.size(); ++i) {
        auto snap = metas.snapshot();
        int first = static_cast<int>(metas.size());
        auto sub = ctx_subsumes(s_, typings[i], ctx, std::nullopt, e.span(), depth + 1);
        if (sub && !metas.unsolved_from(first).empty()) {
            s_.fail(depth, e.span(), "typing `" + pretty(typings[i]) + "` leaves an index variable undetermined");
            sub.reset();
        }
        if (sub) {
            Type goal = metas.zonk(sub->goal);
            auto d = check(ctx, e.body(), goal, depth + 1);
            if (d) {
                int branch = static_cast<int>(i) + 1;
                auto node = with_branch(make("ctx-anno", Judgment::Synth, ctx, e, goal, {sub->derivation, d}), branch);
                if (synth_closure(ctx, e, goal, node, k, depth))
                    return true;
            }
        }
        metas.restore(snap);
        ++s_.stats().backtracks;
    }
    return false;
}

DerivPtr Typechecker::check_guard(const Context& ctx, const Decl& d, const SourceSpan& span, int depth) {
    auto& metas = s_.metas();
    ++s_.stats().rule_applications;
    if (d.is_index()) {
        auto sort = ctx.lookup_index(d.name);
        if (sort != d.sort) {
            s_.fail(depth, span, "guard `" + pretty(d) + "` is not satisfied: no such index variable in scope");
            return nullptr;
        }
        auto g = std::make_shared<Derivation>();
        g->rule = "guard-ivar";
        g->judgment = Judgment::Guard;
        g->ctx = ctx;
        g->decl = d;
        return g;
    }
    const Type* actual = ctx.lookup_var(d.name);
    if (!actual) {
        s_.fail(depth, span, "guard `" + pretty(metas.zonk(d)) + "` names `" + d.name + "`, which is not in scope");
        return nullptr;
    }
    if (!well_formed(ctx, *d.type, span, depth))
        return nullptr;
    auto g = check(ctx, Term::var(d.name, span), *d.type, depth + 1);
    if (!g)
        s_.fail(depth, span,
                "guard `" + pretty(metas.zonk(d)) + "` is not satisfied: `" + d.name + "` has type `" + show(metas, *actual) + "`");
    return g;
}

// --- one-shot queries -------------------------------------------------------------

namespace {

std::vector<std::string> describe_unsolved(const MetaStore& metas, const std::vector<int>& ids) {
    std::vector<std::string> out;
    for (int id : ids)
        out.push_back(meta_key(id) + " (" + metas.info(id).origin + ")");
    return out;
}

}  // namespace

CheckResult check(const Signature& sig, const Context& ctx, const Term& e, const Type& type, CheckOptions options) {
    Session s(sig, options);
    Typechecker tc(s);
    CheckResult r;
    auto d = tc.check(ctx, e, type);
    if (d) {
        auto pending = s.metas().unsolved_from(0);
        if (!pending.empty()) {
            r.unsolved_metas = describe_unsolved(s.metas(), pending);
            d = nullptr;
        }
    }
    r.derivation = d ? zonk(d, s.metas()) : nullptr;
    r.failures = s.deepest_failures(10);
    r.stats = s.stats();
    return r;
}

std::vector<SynthAlternative> synth_all(const Signature& sig, const Context& ctx, const Term& e,
                                        CheckOptions options) {
    Session s(sig, options);
    Typechecker tc(s);
    std::vector<SynthAlternative> out;
    tc.synth(ctx, e, [&](const Type& t, const DerivPtr& d) {
        if (s.metas().unsolved_from(0).empty())
            out.push_back({s.metas().zonk(t), zonk(d, s.metas())});
        return false;
    });
    return out;
}

CheckResult check_guard(const Signature& sig, const Context& ctx, const Decl& d, CheckOptions options) {
    Session s(sig, options);
    Typechecker tc(s);
    CheckResult r;
    auto g = tc.check_guard(ctx, d, {});
    if (g && !s.metas().unsolved_from(0).empty())
        g = nullptr;
    r.derivation = g ? zonk(g, s.metas()) : nullptr;
    r.failures = s.deepest_failures(10);
    r.stats = s.stats();
    return r;
}

std::string_view verdict_name(Report::Verdict v) {
    switch (v) {
    case Report::Verdict::Accept: return "accept";
    case Report::Verdict::Reject: return "reject";
    case Report::Verdict::Error: return "error";
    }
    return "error";
}

Report typecheck_program(const Program& p, CheckOptions options) {
    auto start = std::chrono::steady_clock::now();
    Session s(p.sig, options);
    Typechecker tc(s);
    Report r;
    DerivPtr d;

    auto finish = [&]() {
        r.stats = s.stats();
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return r;
    };

    if (p.goal) {
        try {
            check_type_indices(Context{}, *p.goal);
        } catch (const UnboundIndexVariable& ex) {
            r.verdict = Report::Verdict::Error;
            r.diagnostics.push_back(
                {p.main.span(), "goal type mentions unbound index variable `" + ex.name() + "`", 0});
            return finish();
        }
        r.type = p.goal;
        d = tc.check(Context{}, p.main, *p.goal);
        if (d) {
            auto pending = s.metas().unsolved_from(0);
            if (!pending.empty()) {
                r.unsolved_metas = describe_unsolved(s.metas(), pending);
                d = nullptr;
            }
        }
    } else {
        tc.synth(Context{}, p.main, [&](const Type& t, const DerivPtr& dt) {
            auto pending = s.metas().unsolved_from(0);
            if (!pending.empty()) {
                r.unsolved_metas = describe_unsolved(s.metas(), pending);
                return false;
            }
            r.unsolved_metas.clear();
            r.type = s.metas().zonk(t);
            d = zonk(dt, s.metas());
            return true;
        });
    }

    if (d) {
        r.verdict = Report::Verdict::Accept;
        r.derivation = zonk(d, s.metas());
        r.unsolved_metas.clear();
    } else {
        r.verdict = Report::Verdict::Reject;
        r.type.reset();
        r.diagnostics = s.deepest_failures(10);
        if (r.diagnostics.empty())
            r.diagnostics.push_back({p.main.span(), "no typing rule applies", 0});
    }
    return finish();
}

}  // namespace guardlang
