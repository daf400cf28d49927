#ifndef GUARDLANG_AST_HPP
#define GUARDLANG_AST_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace guardlang {

// Index sorts. Only `int` ships; the enumeration is the extension point.
enum class IndexSort { Int };

std::string_view sort_name(IndexSort sort);

struct SourceSpan {
    std::string file;
    int start_line = 0;
    int start_col = 0;
    int end_line = 0;
    int end_col = 0;

    bool known() const { return start_line > 0; }
};

// Linear index expressions. Mul always carries a literal coefficient.
class IndexExpr {
public:
    enum class Kind { Var, Lit, Add, Sub, Mul, Meta };

    static IndexExpr var(std::string name);
    static IndexExpr lit(std::int64_t value);
    static IndexExpr add(IndexExpr lhs, IndexExpr rhs);
    static IndexExpr sub(IndexExpr lhs, IndexExpr rhs);
    static IndexExpr mul(std::int64_t coeff, IndexExpr operand);
    static IndexExpr meta(int id);

    Kind kind() const;
    const std::string& name() const;   // Var
    std::int64_t value() const;        // Lit value, Mul coefficient
    int meta_id() const;               // Meta
    const IndexExpr& lhs() const;      // Add, Sub
    const IndexExpr& rhs() const;      // Add, Sub
    const IndexExpr& operand() const;  // Mul

    bool is(Kind k) const { return kind() == k; }

private:
    struct Node;
    explicit IndexExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct IndexProp {
    enum class Rel { Eq, Le, Lt };
    Rel rel;
    IndexExpr lhs;
    IndexExpr rhs;

    static IndexProp eq(IndexExpr l, IndexExpr r) { return {Rel::Eq, std::move(l), std::move(r)}; }
    static IndexProp le(IndexExpr l, IndexExpr r) { return {Rel::Le, std::move(l), std::move(r)}; }
    static IndexProp lt(IndexExpr l, IndexExpr r) { return {Rel::Lt, std::move(l), std::move(r)}; }
};

class Type {
public:
    enum class Kind { Unit, Atom, Arrow, Sect, Indexed, Pi };

    static Type unit();
    static Type atom(std::string name);
    static Type arrow(Type dom, Type cod);
    static Type sect(Type lhs, Type rhs);
    static Type indexed(std::string con, IndexExpr index);
    static Type pi(std::string var, IndexSort sort, Type body);

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }

    // Atom name, indexed constructor, or Pi-bound variable.
    const std::string& name() const;
    const IndexExpr& index() const;  // Indexed
    const Type& lhs() const;         // Arrow domain, Sect left
    const Type& rhs() const;         // Arrow codomain, Sect right
    const Type& body() const;        // Pi
    IndexSort sort() const;          // Pi

    // Identity of the shared node; used for cheap equality short-cuts.
    const void* id() const { return node_.get(); }

private:
    struct Node;
    explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct Decl {
    enum class Kind { VarTyping, IndexSorting };
    Kind kind = Kind::VarTyping;
    std::string name;
    std::optional<Type> type;  // VarTyping
    IndexSort sort = IndexSort::Int;

    static Decl var(std::string name, Type type);
    static Decl index(std::string name, IndexSort sort);

    bool is_var() const { return kind == Kind::VarTyping; }
    bool is_index() const { return kind == Kind::IndexSorting; }
};

// Ordered context. Program variables never repeat: extending with an
// existing name drops the older entry.
class Context {
public:
    Context() = default;
    explicit Context(std::vector<Decl> decls);

    const std::vector<Decl>& decls() const { return decls_; }
    bool empty() const { return decls_.empty(); }
    std::size_t size() const { return decls_.size(); }

    Context extended(Decl d) const;

    const Type* lookup_var(std::string_view x) const;
    std::optional<IndexSort> lookup_index(std::string_view a) const;
    std::set<std::string> index_vars() const;
    bool mentions_index_var(std::string_view a) const;

private:
    std::vector<Decl> decls_;
};

struct ContextualTyping;

class Term {
public:
    enum class Kind { Var, Unit, Lam, App, Anno, Guard, Merge, Some, BigLam, CtxAnno, Prim };

    static Term var(std::string name, SourceSpan span = {});
    static Term unit(SourceSpan span = {});
    static Term lam(std::string param, Term body, SourceSpan span = {});
    static Term app(Term fn, Term arg, SourceSpan span = {});
    static Term anno(Term subject, Type type, SourceSpan span = {});
    static Term guard(Decl decl, Term body, SourceSpan span = {});
    static Term merge(Term lhs, Term rhs, SourceSpan span = {});
    static Term some(std::string var, IndexSort sort, Term body, SourceSpan span = {});
    static Term big_lam(std::string var, IndexSort sort, Term body, SourceSpan span = {});
    static Term ctx_anno(Term subject, std::vector<ContextualTyping> typings, SourceSpan span = {});
    static Term prim(std::string name, SourceSpan span = {});

    Kind kind() const;
    bool is(Kind k) const { return kind() == k; }

    // Var/Prim name, Lam parameter, Some/BigLam index variable.
    const std::string& name() const;
    const Term& lhs() const;   // App function, Merge left
    const Term& rhs() const;   // App argument, Merge right
    const Term& body() const;  // Lam, Guard, Some, BigLam body; Anno/CtxAnno subject
    const Type& type() const;  // Anno
    const Decl& decl() const;  // Guard
    IndexSort sort() const;    // Some, BigLam
    const std::vector<ContextualTyping>& typings() const;  // CtxAnno
    const SourceSpan& span() const;

    const void* id() const { return node_.get(); }

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ContextualTyping {
    std::vector<Decl> ctx;
    Type goal;
};

// Program header: datasort lattice, indexed constructors and primitive constants.
class Signature {
public:
    void declare_atom(const std::string& name);
    // Adds sub <: super. Throws std::invalid_argument if the edge closes a cycle.
    void declare_subsort(const std::string& sub, const std::string& super);
    void declare_indexcon(const std::string& name, IndexSort sort);
    void declare_prim(const std::string& name, Type type);

    bool has_atom(std::string_view name) const;
    bool subsort(std::string_view sub, std::string_view super) const;
    std::optional<IndexSort> indexcon_sort(std::string_view name) const;
    const Type* prim_type(std::string_view name) const;

    const std::set<std::string>& atoms() const { return atoms_; }
    const std::vector<std::pair<std::string, std::string>>& subsort_edges() const { return edges_; }
    const std::map<std::string, IndexSort, std::less<>>& indexcons() const { return indexcons_; }
    const std::vector<std::pair<std::string, Type>>& prims() const { return prims_; }

private:
    std::set<std::string> atoms_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::map<std::string, std::set<std::string>, std::less<>> above_;  // reflexive-transitive
    std::map<std::string, IndexSort, std::less<>> indexcons_;
    std::vector<std::pair<std::string, Type>> prims_;
};

struct Program {
    std::string file;
    Signature sig;
    Term main = Term::unit();
    std::optional<Type> goal;
};

// Counter-based fresh names. The '#' separator cannot occur in source
// identifiers, so generated names never capture user names.
class FreshNames {
public:
    std::string fresh(std::string_view base);
    int counter() const { return next_; }

private:
    int next_ = 1;
};

// Strips a '#n' suffix produced by FreshNames.
std::string source_name(std::string_view name);

// --- Substitution and friends -------------------------------------------------

IndexExpr subst_index(const IndexExpr& i, const std::string& a, const IndexExpr& e);
Type subst_index_in_type(const IndexExpr& i, const std::string& a, const Type& type);
Decl subst_index_in_decl(const IndexExpr& i, const std::string& a, const Decl& d);
Term subst_index_in_term(const IndexExpr& i, const std::string& b, const Term& e);

// Capture-avoiding substitution of a term for a program variable. Guard
// subjects name variables and are left untouched.
Term subst_term(const Term& value, const std::string& x, const Term& e);

std::set<std::string> free_index_vars(const IndexExpr& i);
std::set<std::string> free_index_vars(const Type& type);
std::set<std::string> free_index_vars(const Term& e);
std::set<std::string> free_term_vars(const Term& e);

bool has_metas(const IndexExpr& i);
bool has_metas(const Type& type);
bool has_metas(const Term& e);

bool alpha_eq(const IndexExpr& x, const IndexExpr& y);
bool alpha_eq(const Type& x, const Type& y);
bool alpha_eq(const Term& x, const Term& y);

// Picks `base`, base', base'', ... avoiding every name in `avoid`.
std::string prime_away(const std::string& base, const std::set<std::string>& avoid);

// Number of nodes, for reports and generators.
std::size_t term_size(const Term& e);
std::size_t type_size(const Type& t);

}  // namespace guardlang

#endif  // GUARDLANG_AST_HPP
