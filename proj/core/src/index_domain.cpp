#include "guardlang/index_domain.hpp"

#include <algorithm>
#include <limits>

namespace guardlang {

std::string meta_key(int id) { return "?" + std::to_string(id); }

std::optional<int> meta_from_key(const std::string& key) {
    if (key.empty() || key[0] != '?')
        return std::nullopt;
    return std::stoi(key.substr(1));
}

// --- LinearForm ----------------------------------------------------------------------

LinearForm LinearForm::constant_form(Integer c) {
    LinearForm f;
    f.constant = std::move(c);
    return f;
}

LinearForm LinearForm::variable(const std::string& key, Integer coeff) {
    LinearForm f;
    if (coeff != 0)
        f.coeffs.emplace(key, std::move(coeff));
    return f;
}

LinearForm& LinearForm::operator+=(const LinearForm& other) {
    for (const auto& [k, c] : other.coeffs) {
        auto& slot = coeffs[k];
        slot += c;
        if (slot == 0)
            coeffs.erase(k);
    }
    constant += other.constant;
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& other) { return *this += other * Integer(-1); }

LinearForm& LinearForm::operator*=(const Integer& k) {
    if (k == 0) {
        coeffs.clear();
        constant = 0;
        return *this;
    }
    for (auto& [key, c] : coeffs)
        c *= k;
    constant *= k;
    return *this;
}

Integer LinearForm::coeff(const std::string& key) const {
    auto it = coeffs.find(key);
    return it == coeffs.end() ? Integer(0) : it->second;
}

namespace {

std::int64_t to_i64(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("index coefficient does not fit in 64 bits");
    return static_cast<std::int64_t>(v);
}

IndexExpr atom_for(const std::string& key) {
    if (auto m = meta_from_key(key))
        return IndexExpr::meta(*m);
    return IndexExpr::var(key);
}

IndexExpr scaled(const std::string& key, const Integer& c) {
    return c == 1 ? atom_for(key) : IndexExpr::mul(to_i64(c), atom_for(key));
}

}  // namespace

IndexExpr LinearForm::to_expr() const {
    std::optional<IndexExpr> acc;
    for (const auto& [key, c] : coeffs) {
        if (!acc)
            acc = scaled(key, c);
        else if (c < 0)
            acc = IndexExpr::sub(*acc, scaled(key, -c));
        else
            acc = IndexExpr::add(*acc, scaled(key, c));
    }
    if (!acc)
        return IndexExpr::lit(to_i64(constant));
    if (constant > 0)
        return IndexExpr::add(*acc, IndexExpr::lit(to_i64(constant)));
    if (constant < 0)
        return IndexExpr::sub(*acc, IndexExpr::lit(to_i64(-constant)));
    return *acc;
}

LinearForm normalize(const IndexExpr& i) {
    switch (i.kind()) {
    case IndexExpr::Kind::Var: return LinearForm::variable(i.name());
    case IndexExpr::Kind::Meta: return LinearForm::variable(meta_key(i.meta_id()));
    case IndexExpr::Kind::Lit: return LinearForm::constant_form(i.value());
    case IndexExpr::Kind::Add: return normalize(i.lhs()) + normalize(i.rhs());
    case IndexExpr::Kind::Sub: return normalize(i.lhs()) - normalize(i.rhs());
    case IndexExpr::Kind::Mul: return normalize(i.operand()) * Integer(i.value());
    }
    return {};
}

// --- MetaStore ---------------------------------------------------------------------

int MetaStore::fresh(IndexSort sort, std::set<std::string> scope, std::string origin) {
    metas_.push_back(MetaInfo{sort, std::move(scope), std::move(origin), std::nullopt});
    return static_cast<int>(metas_.size()) - 1;
}

void MetaStore::assign(int id, IndexExpr value) {
    auto& m = metas_.at(static_cast<std::size_t>(id));
    if (m.solution)
        throw std::logic_error("metavariable " + meta_key(id) + " is already solved");
    m.solution = std::move(value);
    trail_.push_back(id);
}

void MetaStore::restore(Snapshot s) {
    while (trail_.size() > s.trail) {
        metas_[static_cast<std::size_t>(trail_.back())].solution.reset();
        trail_.pop_back();
    }
    for (std::size_t id = s.count; id < metas_.size(); ++id)
        metas_[id].abandoned = true;
}

std::vector<int> MetaStore::unsolved_from(int first) const {
    std::vector<int> out;
    for (auto id = static_cast<std::size_t>(std::max(first, 0)); id < metas_.size(); ++id)
        if (!metas_[id].solution && !metas_[id].abandoned)
            out.push_back(static_cast<int>(id));
    return out;
}

IndexExpr MetaStore::zonk(const IndexExpr& i) const {
    switch (i.kind()) {
    case IndexExpr::Kind::Meta: {
        const auto& m = info(i.meta_id());
        return m.solution ? zonk(*m.solution) : i;
    }
    case IndexExpr::Kind::Var:
    case IndexExpr::Kind::Lit: return i;
    case IndexExpr::Kind::Add: return IndexExpr::add(zonk(i.lhs()), zonk(i.rhs()));
    case IndexExpr::Kind::Sub: return IndexExpr::sub(zonk(i.lhs()), zonk(i.rhs()));
    case IndexExpr::Kind::Mul: return IndexExpr::mul(i.value(), zonk(i.operand()));
    }
    return i;
}

Type MetaStore::zonk(const Type& t) const {
    if (!has_metas(t))
        return t;
    switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom: return t;
    case Type::Kind::Arrow: return Type::arrow(zonk(t.lhs()), zonk(t.rhs()));
    case Type::Kind::Sect: return Type::sect(zonk(t.lhs()), zonk(t.rhs()));
    case Type::Kind::Indexed: return Type::indexed(t.name(), zonk(t.index()));
    case Type::Kind::Pi: return Type::pi(t.name(), t.sort(), zonk(t.body()));
    }
    return t;
}

Decl MetaStore::zonk(const Decl& d) const {
    if (d.is_var())
        return Decl::var(d.name, zonk(*d.type));
    return d;
}

Context MetaStore::zonk(const Context& ctx) const {
    std::vector<Decl> out;
    out.reserve(ctx.size());
    for (const auto& d : ctx.decls())
        out.push_back(zonk(d));
    return Context(std::move(out));
}

Term MetaStore::zonk(const Term& e) const {
    if (!has_metas(e))
        return e;
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return e;
    case Term::Kind::Lam: return Term::lam(e.name(), zonk(e.body()), e.span());
    case Term::Kind::App: return Term::app(zonk(e.lhs()), zonk(e.rhs()), e.span());
    case Term::Kind::Merge: return Term::merge(zonk(e.lhs()), zonk(e.rhs()), e.span());
    case Term::Kind::Anno: return Term::anno(zonk(e.body()), zonk(e.type()), e.span());
    case Term::Kind::Guard: return Term::guard(zonk(e.decl()), zonk(e.body()), e.span());
    case Term::Kind::Some: return Term::some(e.name(), e.sort(), zonk(e.body()), e.span());
    case Term::Kind::BigLam: return Term::big_lam(e.name(), e.sort(), zonk(e.body()), e.span());
    case Term::Kind::CtxAnno: {
        std::vector<ContextualTyping> typings;
        for (const auto& t : e.typings()) {
            ContextualTyping z{{}, zonk(t.goal)};
            for (const auto& d : t.ctx)
                z.ctx.push_back(zonk(d));
            typings.push_back(std::move(z));
        }
        return Term::ctx_anno(zonk(e.body()), std::move(typings), e.span());
    }
    }
    return e;
}

// --- Sorting --------------------------------------------------------------------------

namespace {

void check_expr(const Context& ctx, const std::set<std::string>& bound, const IndexExpr& i,
                const MetaStore* metas) {
    switch (i.kind()) {
    case IndexExpr::Kind::Var:
        if (bound.count(i.name()))
            return;
        if (ctx.lookup_index(i.name()) != IndexSort::Int)
            throw UnboundIndexVariable(i.name());
        return;
    case IndexExpr::Kind::Meta:
        if (metas && static_cast<std::size_t>(i.meta_id()) < metas->size())
            return;
        throw UnboundIndexVariable(meta_key(i.meta_id()));
    case IndexExpr::Kind::Lit: return;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
        check_expr(ctx, bound, i.lhs(), metas);
        check_expr(ctx, bound, i.rhs(), metas);
        return;
    case IndexExpr::Kind::Mul: check_expr(ctx, bound, i.operand(), metas); return;
    }
}

void check_type(const Context& ctx, std::set<std::string>& bound, const Type& t, const MetaStore* metas) {
    switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom: return;
    case Type::Kind::Arrow:
    case Type::Kind::Sect:
        check_type(ctx, bound, t.lhs(), metas);
        check_type(ctx, bound, t.rhs(), metas);
        return;
    case Type::Kind::Indexed: check_expr(ctx, bound, t.index(), metas); return;
    case Type::Kind::Pi: {
        bool added = bound.insert(t.name()).second;
        check_type(ctx, bound, t.body(), metas);
        if (added)
            bound.erase(t.name());
        return;
    }
    }
}

}  // namespace

IndexSort sort_of(const Context& ctx, const IndexExpr& i, const MetaStore* metas) {
    check_expr(ctx, {}, i, metas);
    return IndexSort::Int;
}

void check_type_indices(const Context& ctx, const Type& type, const MetaStore* metas) {
    std::set<std::string> bound;
    check_type(ctx, bound, type, metas);
}

// --- Entailment (Fourier-Motzkin) ----------------------------------------------------

namespace {

// Each form f stands for the constraint f <= 0.
using System = std::vector<LinearForm>;

constexpr std::size_t kMaxConstraints = 20000;

LinearForm reduce(LinearForm f) {
    Integer g = 0;
    for (const auto& [k, c] : f.coeffs)
        g = gcd(g, abs(c));
    if (g == 0)
        return f;
    g = gcd(g, abs(f.constant));
    if (g > 1) {
        for (auto& [k, c] : f.coeffs)
            c /= g;
        f.constant /= g;
    }
    return f;
}

void add_prop(System& sys, const IndexProp& p) {
    LinearForm d = normalize(p.lhs) - normalize(p.rhs);
    switch (p.rel) {
    case IndexProp::Rel::Eq:
        sys.push_back(d);
        sys.push_back(d * Integer(-1));
        break;
    case IndexProp::Rel::Le: sys.push_back(d); break;
    case IndexProp::Rel::Lt: sys.push_back(d + LinearForm::constant_form(1)); break;
    }
}

// Negation of the goal as a disjunction of single constraints.
std::vector<LinearForm> negate(const IndexProp& p) {
    LinearForm d = normalize(p.lhs) - normalize(p.rhs);
    LinearForm one = LinearForm::constant_form(1);
    switch (p.rel) {
    case IndexProp::Rel::Eq: return {d + one, (d * Integer(-1)) + one};  // l < r  or  r < l
    case IndexProp::Rel::Le: return {(d * Integer(-1)) + one};          // r < l
    case IndexProp::Rel::Lt: return {d * Integer(-1)};                  // r <= l
    }
    return {};
}

// True iff the system has no rational solution. Gives up (returns false)
// when the constraint set explodes, which keeps `entails` sound.
bool unsatisfiable(System sys) {
    for (;;) {
        std::set<LinearForm> uniq;
        std::string pivot;
        for (auto& f : sys) {
            f = reduce(std::move(f));
            if (f.is_constant()) {
                if (f.constant > 0)
                    return true;
                continue;
            }
            if (pivot.empty())
                pivot = f.coeffs.begin()->first;
            uniq.insert(f);
        }
        if (pivot.empty())
            return false;
        System pos, neg, next;
        for (const auto& f : uniq) {
            Integer c = f.coeff(pivot);
            if (c > 0)
                pos.push_back(f);
            else if (c < 0)
                neg.push_back(f);
            else
                next.push_back(f);
        }
        if (pos.size() * neg.size() + next.size() > kMaxConstraints)
            return false;
        for (const auto& p : pos) {
            Integer cp = p.coeff(pivot);
            for (const auto& n : neg) {
                Integer cn = -n.coeff(pivot);
                next.push_back(p * cn + n * cp);
            }
        }
        sys = std::move(next);
    }
}

}  // namespace

bool entails(const Context& /*ctx*/, const std::vector<IndexProp>& hyps, const IndexProp& goal) {
    System base;
    for (const auto& h : hyps)
        add_prop(base, h);
    for (const auto& neg : negate(goal)) {
        System sys = base;
        sys.push_back(neg);
        if (!unsatisfiable(std::move(sys)))
            return false;
    }
    return true;
}

// --- Metavariable solving ------------------------------------------------------------

SolveOutcome solve_meta(const Context& ctx, const MetaStore& metas, const IndexProp& constraint) {
    if (constraint.rel != IndexProp::Rel::Eq)
        return {std::nullopt, "only equalities determine metavariables"};
    LinearForm d = normalize(metas.zonk(constraint.lhs)) - normalize(metas.zonk(constraint.rhs));
    std::optional<int> target;
    for (const auto& [key, c] : d.coeffs) {
        if (auto m = meta_from_key(key)) {
            if (target)
                return {std::nullopt, "more than one unsolved metavariable"};
            target = *m;
        }
    }
    if (!target)
        return {std::nullopt, "no unsolved metavariable"};

    std::string key = meta_key(*target);
    Integer c = d.coeff(key);
    LinearForm rest = d;
    rest.coeffs.erase(key);
    // c*m + rest = 0  =>  m = -rest / c
    Integer magnitude = abs(c);
    for (const auto& [k, v] : rest.coeffs)
        if (v % c != 0)
            return {std::nullopt, magnitude.str() + " does not divide the coefficient " + Integer(abs(v)).str() + " of `" + k + "`"};
    if (rest.constant % c != 0)
        return {std::nullopt, magnitude.str() + " does not divide the constant " + Integer(abs(rest.constant)).str()};
    LinearForm value;
    for (const auto& [k, v] : rest.coeffs)
        value.coeffs.emplace(k, -v / c);
    value.constant = -rest.constant / c;

    const auto& info = metas.info(*target);
    for (const auto& [k, v] : value.coeffs) {
        if (!info.scope.count(k))
            return {std::nullopt, "solution for " + info.origin + " mentions '" + source_name(k) +
                                      "', which is not in scope where it was introduced"};
        if (ctx.lookup_index(k) != info.sort)
            return {std::nullopt, "solution mentions '" + source_name(k) + "' of the wrong sort"};
    }
    return {MetaSolution{*target, value.to_expr()}, {}};
}

}  // namespace guardlang
