#include "guardlang/derivation.hpp"

#include "guardlang/index_domain.hpp"

namespace guardlang {

DerivPtr zonk(const DerivPtr& d, const MetaStore& metas) {
    if (!d)
        return d;
    auto out = std::make_shared<Derivation>(*d);
    out->ctx = metas.zonk(d->ctx);
    if (d->term)
        out->term = metas.zonk(*d->term);
    if (d->lhs)
        out->lhs = metas.zonk(*d->lhs);
    if (d->rhs)
        out->rhs = metas.zonk(*d->rhs);
    if (d->decl)
        out->decl = metas.zonk(*d->decl);
    if (d->inner) {
        ContextualTyping t{{}, metas.zonk(d->inner->goal)};
        for (const auto& decl : d->inner->ctx)
            t.ctx.push_back(metas.zonk(decl));
        out->inner = std::move(t);
    }
    if (d->witness)
        out->witness = metas.zonk(*d->witness);
    for (auto& p : out->premises)
        p = zonk(p, metas);
    return out;
}

std::size_t derivation_size(const DerivPtr& d) {
    std::size_t n = 0;
    for_each_node(d, [&](const Derivation&) { ++n; });
    return n;
}

}  // namespace guardlang
