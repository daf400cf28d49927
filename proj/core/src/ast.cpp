#include "guardlang/ast.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace guardlang {

std::string_view sort_name(IndexSort sort) {
    switch (sort) {
    case IndexSort::Int: return "int";
    }
    return "?";
}

// --- IndexExpr -------------------------------------------------------------------

struct IndexExpr::Node {
    Kind kind;
    std::string name;
    std::int64_t value = 0;
    int meta = -1;
    std::optional<IndexExpr> a;
    std::optional<IndexExpr> b;
};

IndexExpr IndexExpr::var(std::string name) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Var, std::move(name)}));
}
IndexExpr IndexExpr::lit(std::int64_t value) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Lit, {}, value}));
}
IndexExpr IndexExpr::add(IndexExpr lhs, IndexExpr rhs) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Add, {}, 0, -1, std::move(lhs), std::move(rhs)}));
}
IndexExpr IndexExpr::sub(IndexExpr lhs, IndexExpr rhs) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Sub, {}, 0, -1, std::move(lhs), std::move(rhs)}));
}
IndexExpr IndexExpr::mul(std::int64_t coeff, IndexExpr operand) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Mul, {}, coeff, -1, std::move(operand), {}}));
}
IndexExpr IndexExpr::meta(int id) {
    return IndexExpr(std::make_shared<const Node>(Node{Kind::Meta, {}, 0, id}));
}

IndexExpr::Kind IndexExpr::kind() const { return node_->kind; }
const std::string& IndexExpr::name() const { return node_->name; }
std::int64_t IndexExpr::value() const { return node_->value; }
int IndexExpr::meta_id() const { return node_->meta; }
const IndexExpr& IndexExpr::lhs() const { return *node_->a; }
const IndexExpr& IndexExpr::rhs() const { return *node_->b; }
const IndexExpr& IndexExpr::operand() const { return *node_->a; }

// --- Type ---------------------------------------------------------------------------

struct Type::Node {
    Kind kind;
    std::string name;
    std::optional<IndexExpr> index;
    std::optional<Type> a;
    std::optional<Type> b;
    IndexSort sort = IndexSort::Int;
};

Type Type::unit() {
    static const Type u(std::make_shared<const Node>(Node{Kind::Unit}));
    return u;
}
Type Type::atom(std::string name) {
    return Type(std::make_shared<const Node>(Node{Kind::Atom, std::move(name)}));
}
Type Type::arrow(Type dom, Type cod) {
    return Type(std::make_shared<const Node>(Node{Kind::Arrow, {}, {}, std::move(dom), std::move(cod)}));
}
Type Type::sect(Type lhs, Type rhs) {
    return Type(std::make_shared<const Node>(Node{Kind::Sect, {}, {}, std::move(lhs), std::move(rhs)}));
}
Type Type::indexed(std::string con, IndexExpr index) {
    return Type(std::make_shared<const Node>(Node{Kind::Indexed, std::move(con), std::move(index)}));
}
Type Type::pi(std::string var, IndexSort sort, Type body) {
    return Type(std::make_shared<const Node>(Node{Kind::Pi, std::move(var), {}, std::move(body), {}, sort}));
}

Type::Kind Type::kind() const { return node_->kind; }
const std::string& Type::name() const { return node_->name; }
const IndexExpr& Type::index() const { return *node_->index; }
const Type& Type::lhs() const { return *node_->a; }
const Type& Type::rhs() const { return *node_->b; }
const Type& Type::body() const { return *node_->a; }
IndexSort Type::sort() const { return node_->sort; }

// --- Decl / Context ---------------------------------------------------------------

Decl Decl::var(std::string name, Type type) {
    return Decl{Kind::VarTyping, std::move(name), std::move(type), IndexSort::Int};
}
Decl Decl::index(std::string name, IndexSort sort) {
    return Decl{Kind::IndexSorting, std::move(name), std::nullopt, sort};
}

Context::Context(std::vector<Decl> decls) {
    for (auto& d : decls)
        *this = extended(std::move(d));
}

Context Context::extended(Decl d) const {
    Context out;
    out.decls_.reserve(decls_.size() + 1);
    for (const auto& e : decls_) {
        if (d.is_var() && e.is_var() && e.name == d.name)
            continue;
        out.decls_.push_back(e);
    }
    out.decls_.push_back(std::move(d));
    return out;
}

const Type* Context::lookup_var(std::string_view x) const {
    for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
        if (it->is_var() && it->name == x)
            return &*it->type;
    return nullptr;
}

std::optional<IndexSort> Context::lookup_index(std::string_view a) const {
    for (auto it = decls_.rbegin(); it != decls_.rend(); ++it)
        if (it->is_index() && it->name == a)
            return it->sort;
    return std::nullopt;
}

std::set<std::string> Context::index_vars() const {
    std::set<std::string> out;
    for (const auto& d : decls_)
        if (d.is_index())
            out.insert(d.name);
    return out;
}

bool Context::mentions_index_var(std::string_view a) const {
    for (const auto& d : decls_) {
        if (d.is_index() && d.name == a)
            return true;
        if (d.is_var() && free_index_vars(*d.type).count(std::string(a)))
            return true;
    }
    return false;
}

// --- Term ---------------------------------------------------------------------------

struct Term::Node {
    Kind kind;
    std::string name;
    std::optional<Term> a;
    std::optional<Term> b;
    std::optional<Type> type;
    std::optional<Decl> decl;
    IndexSort sort = IndexSort::Int;
    std::vector<ContextualTyping> typings;
    SourceSpan span;
};

Term Term::var(std::string name, SourceSpan span) {
    Node n{Kind::Var, std::move(name)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::unit(SourceSpan span) {
    Node n{Kind::Unit};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::lam(std::string param, Term body, SourceSpan span) {
    Node n{Kind::Lam, std::move(param), std::move(body)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::app(Term fn, Term arg, SourceSpan span) {
    Node n{Kind::App, {}, std::move(fn), std::move(arg)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::anno(Term subject, Type type, SourceSpan span) {
    Node n{Kind::Anno, {}, std::move(subject), {}, std::move(type)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::guard(Decl decl, Term body, SourceSpan span) {
    Node n{Kind::Guard, {}, std::move(body)};
    n.decl = std::move(decl);
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::merge(Term lhs, Term rhs, SourceSpan span) {
    Node n{Kind::Merge, {}, std::move(lhs), std::move(rhs)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::some(std::string var, IndexSort sort, Term body, SourceSpan span) {
    Node n{Kind::Some, std::move(var), std::move(body)};
    n.sort = sort;
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::big_lam(std::string var, IndexSort sort, Term body, SourceSpan span) {
    Node n{Kind::BigLam, std::move(var), std::move(body)};
    n.sort = sort;
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::ctx_anno(Term subject, std::vector<ContextualTyping> typings, SourceSpan span) {
    if (typings.empty())
        throw std::invalid_argument("contextual annotation needs at least one typing");
    Node n{Kind::CtxAnno, {}, std::move(subject)};
    n.typings = std::move(typings);
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}
Term Term::prim(std::string name, SourceSpan span) {
    Node n{Kind::Prim, std::move(name)};
    n.span = std::move(span);
    return Term(std::make_shared<const Node>(std::move(n)));
}

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::lhs() const { return *node_->a; }
const Term& Term::rhs() const { return *node_->b; }
const Term& Term::body() const { return *node_->a; }
const Type& Term::type() const { return *node_->type; }
const Decl& Term::decl() const { return *node_->decl; }
IndexSort Term::sort() const { return node_->sort; }
const std::vector<ContextualTyping>& Term::typings() const { return node_->typings; }
const SourceSpan& Term::span() const { return node_->span; }

// --- Signature ---------------------------------------------------------------------

void Signature::declare_atom(const std::string& name) {
    if (atoms_.insert(name).second)
        above_[name].insert(name);
}

void Signature::declare_subsort(const std::string& sub, const std::string& super) {
    declare_atom(sub);
    declare_atom(super);
    if (sub != super && above_[super].count(sub))
        throw std::invalid_argument("datasort cycle: " + sub + " <: " + super);
    edges_.emplace_back(sub, super);
    const auto& ups = above_[super];
    for (auto& [below, set] : above_)
        if (set.count(sub))
            set.insert(ups.begin(), ups.end());
}

void Signature::declare_indexcon(const std::string& name, IndexSort sort) { indexcons_[name] = sort; }

void Signature::declare_prim(const std::string& name, Type type) {
    for (auto& [n, t] : prims_) {
        if (n == name) {
            t = std::move(type);
            return;
        }
    }
    prims_.emplace_back(name, std::move(type));
}

bool Signature::has_atom(std::string_view name) const { return atoms_.count(std::string(name)) > 0; }

bool Signature::subsort(std::string_view sub, std::string_view super) const {
    auto it = above_.find(sub);
    return it != above_.end() && it->second.count(std::string(super)) > 0;
}

std::optional<IndexSort> Signature::indexcon_sort(std::string_view name) const {
    auto it = indexcons_.find(name);
    if (it == indexcons_.end())
        return std::nullopt;
    return it->second;
}

const Type* Signature::prim_type(std::string_view name) const {
    for (const auto& [n, t] : prims_)
        if (n == name)
            return &t;
    return nullptr;
}

// --- Names --------------------------------------------------------------------------

std::string FreshNames::fresh(std::string_view base) {
    return source_name(base) + "#" + std::to_string(next_++);
}

std::string source_name(std::string_view name) {
    auto pos = name.find('#');
    return std::string(pos == std::string_view::npos ? name : name.substr(0, pos));
}

std::string prime_away(const std::string& base, const std::set<std::string>& avoid) {
    std::string name = base;
    while (avoid.count(name))
        name += '\'';
    return name;
}

// --- Free variables -----------------------------------------------------------------

namespace {

void collect_fiv(const IndexExpr& i, std::set<std::string>& out) {
    switch (i.kind()) {
    case IndexExpr::Kind::Var: out.insert(i.name()); break;
    case IndexExpr::Kind::Lit:
    case IndexExpr::Kind::Meta: break;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
        collect_fiv(i.lhs(), out);
        collect_fiv(i.rhs(), out);
        break;
    case IndexExpr::Kind::Mul: collect_fiv(i.operand(), out); break;
    }
}

void collect_fiv(const Type& t, std::set<std::string>& out) {
    switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom: break;
    case Type::Kind::Arrow:
    case Type::Kind::Sect:
        collect_fiv(t.lhs(), out);
        collect_fiv(t.rhs(), out);
        break;
    case Type::Kind::Indexed: collect_fiv(t.index(), out); break;
    case Type::Kind::Pi: {
        std::set<std::string> inner;
        collect_fiv(t.body(), inner);
        inner.erase(t.name());
        out.insert(inner.begin(), inner.end());
        break;
    }
    }
}

void collect_typing_fiv(const ContextualTyping& typing, std::set<std::string>& out) {
    std::set<std::string> bound;
    auto add = [&](const std::set<std::string>& s) {
        for (const auto& n : s)
            if (!bound.count(n))
                out.insert(n);
    };
    for (const auto& d : typing.ctx) {
        if (d.is_index()) {
            bound.insert(d.name);
        } else {
            std::set<std::string> s;
            collect_fiv(*d.type, s);
            add(s);
        }
    }
    std::set<std::string> s;
    collect_fiv(typing.goal, s);
    add(s);
}

void collect_fiv(const Term& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: break;
    case Term::Kind::Lam: collect_fiv(e.body(), out); break;
    case Term::Kind::App:
    case Term::Kind::Merge:
        collect_fiv(e.lhs(), out);
        collect_fiv(e.rhs(), out);
        break;
    case Term::Kind::Anno:
        collect_fiv(e.body(), out);
        collect_fiv(e.type(), out);
        break;
    case Term::Kind::Guard:
        if (e.decl().is_var())
            collect_fiv(*e.decl().type, out);
        else
            out.insert(e.decl().name);
        collect_fiv(e.body(), out);
        break;
    case Term::Kind::Some:
    case Term::Kind::BigLam: {
        std::set<std::string> inner;
        collect_fiv(e.body(), inner);
        inner.erase(e.name());
        out.insert(inner.begin(), inner.end());
        break;
    }
    case Term::Kind::CtxAnno:
        collect_fiv(e.body(), out);
        for (const auto& typing : e.typings())
            collect_typing_fiv(typing, out);
        break;
    }
}

void collect_ftv(const Term& e, std::set<std::string>& out) {
    switch (e.kind()) {
    case Term::Kind::Var: out.insert(e.name()); break;
    case Term::Kind::Unit:
    case Term::Kind::Prim: break;
    case Term::Kind::Lam: {
        std::set<std::string> inner;
        collect_ftv(e.body(), inner);
        inner.erase(e.name());
        out.insert(inner.begin(), inner.end());
        break;
    }
    case Term::Kind::App:
    case Term::Kind::Merge:
        collect_ftv(e.lhs(), out);
        collect_ftv(e.rhs(), out);
        break;
    case Term::Kind::Guard:
        if (e.decl().is_var())
            out.insert(e.decl().name);
        collect_ftv(e.body(), out);
        break;
    case Term::Kind::CtxAnno:
        for (const auto& typing : e.typings())
            for (const auto& d : typing.ctx)
                if (d.is_var())
                    out.insert(d.name);
        collect_ftv(e.body(), out);
        break;
    case Term::Kind::Anno:
    case Term::Kind::Some:
    case Term::Kind::BigLam: collect_ftv(e.body(), out); break;
    }
}

}  // namespace

std::set<std::string> free_index_vars(const IndexExpr& i) {
    std::set<std::string> out;
    collect_fiv(i, out);
    return out;
}
std::set<std::string> free_index_vars(const Type& type) {
    std::set<std::string> out;
    collect_fiv(type, out);
    return out;
}
std::set<std::string> free_index_vars(const Term& e) {
    std::set<std::string> out;
    collect_fiv(e, out);
    return out;
}
std::set<std::string> free_term_vars(const Term& e) {
    std::set<std::string> out;
    collect_ftv(e, out);
    return out;
}

// --- Metavariable occurrence --------------------------------------------------------

bool has_metas(const IndexExpr& i) {
    switch (i.kind()) {
    case IndexExpr::Kind::Meta: return true;
    case IndexExpr::Kind::Var:
    case IndexExpr::Kind::Lit: return false;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub: return has_metas(i.lhs()) || has_metas(i.rhs());
    case IndexExpr::Kind::Mul: return has_metas(i.operand());
    }
    return false;
}

bool has_metas(const Type& t) {
    switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom: return false;
    case Type::Kind::Arrow:
    case Type::Kind::Sect: return has_metas(t.lhs()) || has_metas(t.rhs());
    case Type::Kind::Indexed: return has_metas(t.index());
    case Type::Kind::Pi: return has_metas(t.body());
    }
    return false;
}

bool has_metas(const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return false;
    case Term::Kind::App:
    case Term::Kind::Merge: return has_metas(e.lhs()) || has_metas(e.rhs());
    case Term::Kind::Anno: return has_metas(e.type()) || has_metas(e.body());
    case Term::Kind::Guard:
        return (e.decl().is_var() && has_metas(*e.decl().type)) || has_metas(e.body());
    case Term::Kind::Lam:
    case Term::Kind::Some:
    case Term::Kind::BigLam: return has_metas(e.body());
    case Term::Kind::CtxAnno:
        for (const auto& typing : e.typings()) {
            if (has_metas(typing.goal))
                return true;
            for (const auto& d : typing.ctx)
                if (d.is_var() && has_metas(*d.type))
                    return true;
        }
        return has_metas(e.body());
    }
    return false;
}

// --- Substitution -------------------------------------------------------------------

IndexExpr subst_index(const IndexExpr& i, const std::string& a, const IndexExpr& e) {
    switch (e.kind()) {
    case IndexExpr::Kind::Var: return e.name() == a ? i : e;
    case IndexExpr::Kind::Lit:
    case IndexExpr::Kind::Meta: return e;
    case IndexExpr::Kind::Add: return IndexExpr::add(subst_index(i, a, e.lhs()), subst_index(i, a, e.rhs()));
    case IndexExpr::Kind::Sub: return IndexExpr::sub(subst_index(i, a, e.lhs()), subst_index(i, a, e.rhs()));
    case IndexExpr::Kind::Mul: return IndexExpr::mul(e.value(), subst_index(i, a, e.operand()));
    }
    return e;
}

Type subst_index_in_type(const IndexExpr& i, const std::string& a, const Type& type) {
    switch (type.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom: return type;
    case Type::Kind::Arrow:
        return Type::arrow(subst_index_in_type(i, a, type.lhs()), subst_index_in_type(i, a, type.rhs()));
    case Type::Kind::Sect:
        return Type::sect(subst_index_in_type(i, a, type.lhs()), subst_index_in_type(i, a, type.rhs()));
    case Type::Kind::Indexed: return Type::indexed(type.name(), subst_index(i, a, type.index()));
    case Type::Kind::Pi: {
        if (type.name() == a)
            return type;
        auto body_fv = free_index_vars(type.body());
        if (!body_fv.count(a))
            return type;
        auto i_fv = free_index_vars(i);
        if (!i_fv.count(type.name()))
            return Type::pi(type.name(), type.sort(), subst_index_in_type(i, a, type.body()));
        auto avoid = i_fv;
        avoid.insert(body_fv.begin(), body_fv.end());
        avoid.insert(a);
        auto renamed = prime_away(type.name(), avoid);
        auto body = subst_index_in_type(IndexExpr::var(renamed), type.name(), type.body());
        return Type::pi(renamed, type.sort(), subst_index_in_type(i, a, body));
    }
    }
    return type;
}

Decl subst_index_in_decl(const IndexExpr& i, const std::string& a, const Decl& d) {
    if (d.is_var())
        return Decl::var(d.name, subst_index_in_type(i, a, *d.type));
    if (d.name == a && i.is(IndexExpr::Kind::Var))
        return Decl::index(i.name(), d.sort);
    return d;
}

namespace {

// Substitutes through one contextual typing whose index sortings bind
// their names in the remaining declarations and the goal.
ContextualTyping subst_index_in_typing(const IndexExpr& i, const std::string& b, const ContextualTyping& typing) {
    auto i_fv = free_index_vars(i);
    ContextualTyping out{{}, typing.goal};
    std::vector<Decl> rest = typing.ctx;
    Type goal = typing.goal;
    for (std::size_t k = 0; k < rest.size(); ++k) {
        const Decl& d = rest[k];
        if (d.is_var()) {
            out.ctx.push_back(Decl::var(d.name, subst_index_in_type(i, b, *d.type)));
            continue;
        }
        if (d.name == b) {
            out.ctx.insert(out.ctx.end(), rest.begin() + static_cast<std::ptrdiff_t>(k), rest.end());
            out.goal = goal;
            return out;
        }
        if (i_fv.count(d.name)) {
            std::set<std::string> avoid = i_fv;
            for (std::size_t m = k; m < rest.size(); ++m)
                if (rest[m].is_var()) {
                    auto s = free_index_vars(*rest[m].type);
                    avoid.insert(s.begin(), s.end());
                }
            auto g = free_index_vars(goal);
            avoid.insert(g.begin(), g.end());
            avoid.insert(b);
            auto renamed = prime_away(d.name, avoid);
            auto v = IndexExpr::var(renamed);
            for (std::size_t m = k + 1; m < rest.size(); ++m)
                rest[m] = subst_index_in_decl(v, d.name, rest[m]);
            goal = subst_index_in_type(v, d.name, goal);
            out.ctx.push_back(Decl::index(renamed, d.sort));
        } else {
            out.ctx.push_back(d);
        }
    }
    out.goal = subst_index_in_type(i, b, goal);
    return out;
}

}  // namespace

Term subst_index_in_term(const IndexExpr& i, const std::string& b, const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return e;
    case Term::Kind::Lam: return Term::lam(e.name(), subst_index_in_term(i, b, e.body()), e.span());
    case Term::Kind::App:
        return Term::app(subst_index_in_term(i, b, e.lhs()), subst_index_in_term(i, b, e.rhs()), e.span());
    case Term::Kind::Merge:
        return Term::merge(subst_index_in_term(i, b, e.lhs()), subst_index_in_term(i, b, e.rhs()), e.span());
    case Term::Kind::Anno:
        return Term::anno(subst_index_in_term(i, b, e.body()), subst_index_in_type(i, b, e.type()), e.span());
    case Term::Kind::Guard:
        return Term::guard(subst_index_in_decl(i, b, e.decl()), subst_index_in_term(i, b, e.body()), e.span());
    case Term::Kind::Some:
    case Term::Kind::BigLam: {
        if (e.name() == b)
            return e;
        auto body_fv = free_index_vars(e.body());
        if (!body_fv.count(b))
            return e;
        auto i_fv = free_index_vars(i);
        std::string name = e.name();
        Term body = e.body();
        if (i_fv.count(name)) {
            auto avoid = i_fv;
            avoid.insert(body_fv.begin(), body_fv.end());
            avoid.insert(b);
            auto renamed = prime_away(name, avoid);
            body = subst_index_in_term(IndexExpr::var(renamed), name, body);
            name = renamed;
        }
        body = subst_index_in_term(i, b, body);
        return e.is(Term::Kind::Some) ? Term::some(name, e.sort(), body, e.span())
                                      : Term::big_lam(name, e.sort(), body, e.span());
    }
    case Term::Kind::CtxAnno: {
        std::vector<ContextualTyping> typings;
        typings.reserve(e.typings().size());
        for (const auto& typing : e.typings())
            typings.push_back(subst_index_in_typing(i, b, typing));
        return Term::ctx_anno(subst_index_in_term(i, b, e.body()), std::move(typings), e.span());
    }
    }
    return e;
}

namespace {

Decl rename_subject(const Decl& d, const std::string& x, const Term& value) {
    if (d.is_var() && d.name == x && value.is(Term::Kind::Var))
        return Decl::var(value.name(), *d.type);
    return d;
}

}  // namespace

Term subst_term(const Term& value, const std::string& x, const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var: return e.name() == x ? value : e;
    case Term::Kind::Unit:
    case Term::Kind::Prim: return e;
    case Term::Kind::Lam: {
        if (e.name() == x)
            return e;
        auto body_fv = free_term_vars(e.body());
        if (!body_fv.count(x))
            return e;
        auto v_fv = free_term_vars(value);
        std::string name = e.name();
        Term body = e.body();
        if (v_fv.count(name)) {
            auto avoid = v_fv;
            avoid.insert(body_fv.begin(), body_fv.end());
            avoid.insert(x);
            auto renamed = prime_away(name, avoid);
            body = subst_term(Term::var(renamed), name, body);
            name = renamed;
        }
        return Term::lam(name, subst_term(value, x, body), e.span());
    }
    case Term::Kind::App:
        return Term::app(subst_term(value, x, e.lhs()), subst_term(value, x, e.rhs()), e.span());
    case Term::Kind::Merge:
        return Term::merge(subst_term(value, x, e.lhs()), subst_term(value, x, e.rhs()), e.span());
    case Term::Kind::Anno: return Term::anno(subst_term(value, x, e.body()), e.type(), e.span());
    case Term::Kind::Guard:
        return Term::guard(rename_subject(e.decl(), x, value), subst_term(value, x, e.body()), e.span());
    case Term::Kind::Some: return Term::some(e.name(), e.sort(), subst_term(value, x, e.body()), e.span());
    case Term::Kind::BigLam: return Term::big_lam(e.name(), e.sort(), subst_term(value, x, e.body()), e.span());
    case Term::Kind::CtxAnno: {
        std::vector<ContextualTyping> typings;
        for (const auto& typing : e.typings()) {
            ContextualTyping t{{}, typing.goal};
            for (const auto& d : typing.ctx)
                t.ctx.push_back(rename_subject(d, x, value));
            typings.push_back(std::move(t));
        }
        return Term::ctx_anno(subst_term(value, x, e.body()), std::move(typings), e.span());
    }
    }
    return e;
}

// --- Alpha-equivalence --------------------------------------------------------------

namespace {

// Pairs of names bound in lock-step on both sides, innermost last.
using Env = std::vector<std::pair<std::string, std::string>>;

bool same_name(const Env& env, const std::string& x, const std::string& y) {
    for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool hx = it->first == x;
        bool hy = it->second == y;
        if (hx || hy)
            return hx && hy;
    }
    return x == y;
}

bool aeq(const Env& env, const IndexExpr& x, const IndexExpr& y) {
    if (x.kind() != y.kind())
        return false;
    switch (x.kind()) {
    case IndexExpr::Kind::Var: return same_name(env, x.name(), y.name());
    case IndexExpr::Kind::Lit: return x.value() == y.value();
    case IndexExpr::Kind::Meta: return x.meta_id() == y.meta_id();
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub: return aeq(env, x.lhs(), y.lhs()) && aeq(env, x.rhs(), y.rhs());
    case IndexExpr::Kind::Mul: return x.value() == y.value() && aeq(env, x.operand(), y.operand());
    }
    return false;
}

bool aeq(Env& env, const Type& x, const Type& y) {
    if (x.id() == y.id() && env.empty())
        return true;
    if (x.kind() != y.kind())
        return false;
    switch (x.kind()) {
    case Type::Kind::Unit: return true;
    case Type::Kind::Atom: return x.name() == y.name();
    case Type::Kind::Arrow:
    case Type::Kind::Sect: return aeq(env, x.lhs(), y.lhs()) && aeq(env, x.rhs(), y.rhs());
    case Type::Kind::Indexed: return x.name() == y.name() && aeq(env, x.index(), y.index());
    case Type::Kind::Pi: {
        if (x.sort() != y.sort())
            return false;
        env.emplace_back(x.name(), y.name());
        bool ok = aeq(env, x.body(), y.body());
        env.pop_back();
        return ok;
    }
    }
    return false;
}

struct TermEnv {
    Env index;
    Env term;
};

bool aeq_decl(TermEnv& env, const Decl& x, const Decl& y) {
    if (x.kind != y.kind)
        return false;
    if (x.is_var())
        return same_name(env.term, x.name, y.name) && aeq(env.index, *x.type, *y.type);
    return x.sort == y.sort && same_name(env.index, x.name, y.name);
}

bool aeq(TermEnv& env, const Term& x, const Term& y) {
    if (x.kind() != y.kind())
        return false;
    switch (x.kind()) {
    case Term::Kind::Var: return same_name(env.term, x.name(), y.name());
    case Term::Kind::Unit: return true;
    case Term::Kind::Prim: return x.name() == y.name();
    case Term::Kind::Lam: {
        env.term.emplace_back(x.name(), y.name());
        bool ok = aeq(env, x.body(), y.body());
        env.term.pop_back();
        return ok;
    }
    case Term::Kind::App:
    case Term::Kind::Merge: return aeq(env, x.lhs(), y.lhs()) && aeq(env, x.rhs(), y.rhs());
    case Term::Kind::Anno: return aeq(env.index, x.type(), y.type()) && aeq(env, x.body(), y.body());
    case Term::Kind::Guard: return aeq_decl(env, x.decl(), y.decl()) && aeq(env, x.body(), y.body());
    case Term::Kind::Some:
    case Term::Kind::BigLam: {
        if (x.sort() != y.sort())
            return false;
        env.index.emplace_back(x.name(), y.name());
        bool ok = aeq(env, x.body(), y.body());
        env.index.pop_back();
        return ok;
    }
    case Term::Kind::CtxAnno: {
        if (x.typings().size() != y.typings().size() || !aeq(env, x.body(), y.body()))
            return false;
        for (std::size_t k = 0; k < x.typings().size(); ++k) {
            const auto& tx = x.typings()[k];
            const auto& ty = y.typings()[k];
            if (tx.ctx.size() != ty.ctx.size())
                return false;
            std::size_t pushed = 0;
            bool ok = true;
            for (std::size_t m = 0; ok && m < tx.ctx.size(); ++m) {
                const Decl& dx = tx.ctx[m];
                const Decl& dy = ty.ctx[m];
                if (dx.kind != dy.kind) {
                    ok = false;
                } else if (dx.is_index()) {
                    ok = dx.sort == dy.sort;
                    env.index.emplace_back(dx.name, dy.name);
                    ++pushed;
                } else {
                    ok = same_name(env.term, dx.name, dy.name) && aeq(env.index, *dx.type, *dy.type);
                }
            }
            ok = ok && aeq(env.index, tx.goal, ty.goal);
            env.index.resize(env.index.size() - pushed);
            if (!ok)
                return false;
        }
        return true;
    }
    }
    return false;
}

}  // namespace

bool alpha_eq(const IndexExpr& x, const IndexExpr& y) { return aeq(Env{}, x, y); }

bool alpha_eq(const Type& x, const Type& y) {
    Env env;
    return aeq(env, x, y);
}

bool alpha_eq(const Term& x, const Term& y) {
    TermEnv env;
    return aeq(env, x, y);
}

// --- Sizes --------------------------------------------------------------------------

std::size_t type_size(const Type& t) {
    switch (t.kind()) {
    case Type::Kind::Unit:
    case Type::Kind::Atom:
    case Type::Kind::Indexed: return 1;
    case Type::Kind::Arrow:
    case Type::Kind::Sect: return 1 + type_size(t.lhs()) + type_size(t.rhs());
    case Type::Kind::Pi: return 1 + type_size(t.body());
    }
    return 1;
}

std::size_t term_size(const Term& e) {
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Unit:
    case Term::Kind::Prim: return 1;
    case Term::Kind::App:
    case Term::Kind::Merge: return 1 + term_size(e.lhs()) + term_size(e.rhs());
    case Term::Kind::Lam:
    case Term::Kind::Anno:
    case Term::Kind::Guard:
    case Term::Kind::Some:
    case Term::Kind::BigLam:
    case Term::Kind::CtxAnno: return 1 + term_size(e.body());
    }
    return 1;
}

}  // namespace guardlang
