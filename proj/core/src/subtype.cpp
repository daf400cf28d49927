#include "guardlang/subtype.hpp"

#include "guardlang/pretty.hpp"

namespace guardlang {

namespace {

std::vector<int> unsolved_in(const MetaStore& metas, const IndexExpr& i) {
    std::vector<int> out;
    for (const auto& [key, c] : normalize(metas.zonk(i)).coeffs)
        if (auto m = meta_from_key(key))
            out.push_back(*m);
    return out;
}

// Decides ctx |- i1 = i2, solving a single unsolved metavariable if one occurs.
bool index_equal(Session& s, const Context& ctx, const IndexExpr& i1, const IndexExpr& i2, std::string& reason) {
    auto& metas = s.metas();
    IndexExpr lhs = metas.zonk(i1);
    IndexExpr rhs = metas.zonk(i2);
    auto pending = unsolved_in(metas, IndexExpr::sub(lhs, rhs));
    if (pending.empty()) {
        ++s.stats().entailment_queries;
        if (entails(ctx, {}, IndexProp::eq(lhs, rhs)))
            return true;
        reason = "cannot show `" + pretty(lhs) + " = " + pretty(rhs) + "`";
        return false;
    }
    if (pending.size() > 1) {
        reason = "cannot solve `" + pretty(lhs) + " = " + pretty(rhs) + "` for more than one unknown index";
        return false;
    }
    auto outcome = solve_meta(ctx, metas, IndexProp::eq(lhs, rhs));
    if (!outcome.solution) {
        reason = "no index solves `" + pretty(lhs) + " = " + pretty(rhs) + "`: " + outcome.reason;
        return false;
    }
    metas.assign(outcome.solution->meta, outcome.solution->value);
    return true;
}

class Subtyper {
public:
    Subtyper(Session& s, const SourceSpan& span) : s_(s), span_(span), budget_(s.options().max_depth) {}

    DerivPtr run(const Context& ctx, const Type& a, const Type& b, int depth) {
        ++s_.stats().subtype_queries;
        auto d = sub(ctx, a, b, depth);
        if (exhausted_) {
            ++s_.stats().depth_exceeded;
            s_.fail(depth, span_, "subtyping search bound exceeded while comparing `" + pretty(a) + "` and `" + pretty(b) + "`");
            return nullptr;
        }
        return d;
    }

private:
    std::shared_ptr<Derivation> node(std::string rule, const Context& ctx, const Type& a, const Type& b,
                  std::vector<DerivPtr> premises = {}) {
        auto d = std::make_shared<Derivation>();
        d->rule = std::move(rule);
        d->judgment = Judgment::Subtype;
        d->ctx = ctx;
        d->lhs = a;
        d->rhs = b;
        d->premises = std::move(premises);
        return d;
    }

    void reject(int depth, const Type& a, const Type& b, const std::string& why = {}) {
        const auto& m = s_.metas();
        std::string msg = "`" + pretty(m.zonk(a)) + "` is not a subtype of `" + pretty(m.zonk(b)) + "`";
        if (!why.empty())
            msg += " (" + why + ")";
        s_.fail(depth, span_, std::move(msg));
    }

    bool spend() {
        if (exhausted_)
            return false;
        if (budget_-- <= 0) {
            exhausted_ = true;
            return false;
        }
        ++s_.stats().rule_applications;
        return true;
    }

    // Tries `attempt`; on failure rewinds the metavariable store.
    template <class F>
    DerivPtr attempt(F&& f) {
        auto snap = s_.metas().snapshot();
        DerivPtr d = f();
        if (!d) {
            s_.metas().restore(snap);
            ++s_.stats().backtracks;
        }
        return d;
    }

    DerivPtr sub(const Context& ctx, const Type& a, const Type& b, int depth) {
        if (!spend())
            return nullptr;

        if (b.is(Type::Kind::Sect)) {
            return attempt([&]() -> DerivPtr {
                auto d1 = sub(ctx, a, b.lhs(), depth + 1);
                if (!d1)
                    return nullptr;
                auto d2 = sub(ctx, a, b.rhs(), depth + 1);
                if (!d2)
                    return nullptr;
                return node("sub-andR", ctx, a, b, {d1, d2});
            });
        }

        if (b.is(Type::Kind::Pi)) {
            auto d = attempt([&]() -> DerivPtr {
                std::string fresh = s_.names().fresh(source_name(b.name()));
                Type body = subst_index_in_type(IndexExpr::var(fresh), b.name(), b.body());
                auto p = sub(ctx.extended(Decl::index(fresh, b.sort())), a, body, depth + 1);
                return p ? node("sub-PiR", ctx, a, b, {p}) : nullptr;
            });
            if (d || exhausted_)
                return d;
        }

        const auto& metas = s_.metas();
        if (alpha_eq(metas.zonk(a), metas.zonk(b)))
            return node("sub-refl", ctx, a, b);

        if (a.is(Type::Kind::Atom) && b.is(Type::Kind::Atom) && s_.sig().subsort(a.name(), b.name()))
            return node("sub-atom", ctx, a, b);

        if (a.is(Type::Kind::Arrow) && b.is(Type::Kind::Arrow)) {
            auto d = attempt([&]() -> DerivPtr {
                auto dom = sub(ctx, b.lhs(), a.lhs(), depth + 1);
                if (!dom)
                    return nullptr;
                auto cod = sub(ctx, a.rhs(), b.rhs(), depth + 1);
                if (!cod)
                    return nullptr;
                return node("sub-arr", ctx, a, b, {dom, cod});
            });
            if (d || exhausted_)
                return d;
        }

        if (a.is(Type::Kind::Indexed) && b.is(Type::Kind::Indexed) && a.name() == b.name()) {
            std::string why;
            auto d = attempt([&]() -> DerivPtr {
                if (!index_equal(s_, ctx, a.index(), b.index(), why))
                    return nullptr;
                return node("sub-iLR", ctx, a, b);
            });
            if (d)
                return d;
            reject(depth, a, b, why);
        }

        if (a.is(Type::Kind::Sect)) {
            for (int k = 1; k <= 2; ++k) {
                auto d = attempt([&]() -> DerivPtr {
                    auto p = sub(ctx, k == 1 ? a.lhs() : a.rhs(), b, depth + 1);
                    return p ? node(k == 1 ? "sub-andL1" : "sub-andL2", ctx, a, b, {p}) : nullptr;
                });
                if (d || exhausted_)
                    return d;
            }
        }

        if (a.is(Type::Kind::Pi)) {
            auto d = attempt([&]() -> DerivPtr {
                int first = static_cast<int>(s_.metas().size());
                // A vacuous binder takes any witness; nothing would solve a metavariable.
                IndexExpr witness = free_index_vars(a.body()).count(a.name())
                                        ? IndexExpr::meta(s_.new_meta(ctx, a.sort(), source_name(a.name())))
                                        : IndexExpr::lit(0);
                auto p = sub(ctx, subst_index_in_type(witness, a.name(), a.body()), b, depth + 1);
                if (!p)
                    return nullptr;
                if (!s_.metas().unsolved_from(first).empty()) {
                    reject(depth, a, b, "no instance of `" + source_name(a.name()) + "` is determined");
                    return nullptr;
                }
                auto n = node("sub-PiL", ctx, a, b, {p});
                n->witness = witness;
                return n;
            });
            if (d || exhausted_)
                return d;
        }

        bool same_indexed = a.is(Type::Kind::Indexed) && b.is(Type::Kind::Indexed) && a.name() == b.name();
        if (!exhausted_ && !same_indexed)
            reject(depth, a, b);
        return nullptr;
    }

    Session& s_;
    SourceSpan span_;
    int budget_;
    bool exhausted_ = false;
};

bool equivalent(Session& s, const Context& ctx, const Type& a, const Type& b) {
    if (a.kind() != b.kind())
        return false;
    std::string why;
    switch (a.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Atom: return a.name() == b.name();
    case Type::Kind::Indexed: return a.name() == b.name() && index_equal(s, ctx, a.index(), b.index(), why);
    case Type::Kind::Arrow:
    case Type::Kind::Sect: return equivalent(s, ctx, a.lhs(), b.lhs()) && equivalent(s, ctx, a.rhs(), b.rhs());
    case Type::Kind::Pi: {
        if (a.sort() != b.sort())
            return false;
        std::string fresh = s.names().fresh(source_name(a.name()));
        IndexExpr v = IndexExpr::var(fresh);
        return equivalent(s, ctx.extended(Decl::index(fresh, a.sort())), subst_index_in_type(v, a.name(), a.body()),
                          subst_index_in_type(v, b.name(), b.body()));
    }
    }
    return false;
}

}  // namespace

DerivPtr subtype(Session& session, const Context& ctx, const Type& lhs, const Type& rhs, const SourceSpan& span,
                 int depth) {
    Subtyper st(session, span);
    return st.run(ctx, lhs, rhs, depth);
}

bool type_equivalent(Session& session, const Context& ctx, const Type& a, const Type& b) {
    auto snap = session.metas().snapshot();
    if (equivalent(session, ctx, a, b))
        return true;
    session.metas().restore(snap);
    return false;
}

SubtypeResult subtype(const Signature& sig, const Context& ctx, const Type& lhs, const Type& rhs,
                      CheckOptions options) {
    Session session(sig, options);
    SubtypeResult r;
    auto d = subtype(session, ctx, lhs, rhs);
    if (d && !session.metas().unsolved_from(0).empty())
        d = nullptr;
    r.derivation = d ? zonk(d, session.metas()) : nullptr;
    r.failures = session.deepest_failures(10);
    r.stats = session.stats();
    return r;
}

}  // namespace guardlang
