#ifndef GUARDLANG_INDEX_DOMAIN_HPP
#define GUARDLANG_INDEX_DOMAIN_HPP

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "guardlang/ast.hpp"

namespace guardlang {

using Integer = boost::multiprecision::cpp_int;

// Key under which a metavariable appears in a LinearForm ("?3").
std::string meta_key(int id);
std::optional<int> meta_from_key(const std::string& key);

// sum(coeff * var) + constant, no zero coefficients, keys in map order.
struct LinearForm {
    std::map<std::string, Integer> coeffs;
    Integer constant = 0;

    static LinearForm constant_form(Integer c);
    static LinearForm variable(const std::string& key, Integer coeff = 1);

    LinearForm& operator+=(const LinearForm& other);
    LinearForm& operator-=(const LinearForm& other);
    LinearForm& operator*=(const Integer& k);
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(LinearForm a, const Integer& k) { return a *= k; }
    friend bool operator==(const LinearForm&, const LinearForm&) = default;
    friend bool operator<(const LinearForm& a, const LinearForm& b) {
        return a.coeffs != b.coeffs ? a.coeffs < b.coeffs : a.constant < b.constant;
    }

    bool is_constant() const { return coeffs.empty(); }
    Integer coeff(const std::string& key) const;

    // Canonical surface expression: a, a*2, a + b*3 - 1, ...
    IndexExpr to_expr() const;
};

LinearForm normalize(const IndexExpr& i);

class UnboundIndexVariable : public std::runtime_error {
public:
    explicit UnboundIndexVariable(std::string name)
        : std::runtime_error("unbound index variable '" + name + "'"), name_(std::move(name)) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

struct MetaInfo {
    IndexSort sort = IndexSort::Int;
    std::set<std::string> scope;  // index variables visible where it was introduced
    std::string origin;           // source-level variable it stands for
    std::optional<IndexExpr> solution;
    bool abandoned = false;  // created inside an alternative that was rewound
};

// Run-local metavariable store with an undo trail for backtracking.
class MetaStore {
public:
    struct Snapshot {
        std::size_t trail = 0;
        std::size_t count = 0;
    };

    int fresh(IndexSort sort, std::set<std::string> scope, std::string origin);
    std::size_t size() const { return metas_.size(); }
    const MetaInfo& info(int id) const { return metas_.at(static_cast<std::size_t>(id)); }
    bool solved(int id) const { return info(id).solution.has_value(); }
    void assign(int id, IndexExpr value);

    Snapshot snapshot() const { return {trail_.size(), metas_.size()}; }
    void restore(Snapshot s);

    // Unsolved, not abandoned metavariables with id >= first.
    std::vector<int> unsolved_from(int first) const;

    IndexExpr zonk(const IndexExpr& i) const;
    Type zonk(const Type& t) const;
    Term zonk(const Term& e) const;
    Decl zonk(const Decl& d) const;
    Context zonk(const Context& ctx) const;

private:
    std::vector<MetaInfo> metas_;
    std::vector<int> trail_;
};

// Sorting judgment for index expressions. Throws UnboundIndexVariable.
IndexSort sort_of(const Context& ctx, const IndexExpr& i, const MetaStore* metas = nullptr);

// Checks every index expression inside `type` (Pi binders in scope).
void check_type_indices(const Context& ctx, const Type& type, const MetaStore* metas = nullptr);

// Validity of hyps => goal over the rationals, with strict inequalities
// shifted by one. Sound for integer validity, not complete.
bool entails(const Context& ctx, const std::vector<IndexProp>& hyps, const IndexProp& goal);

struct MetaSolution {
    int meta = -1;
    IndexExpr value = IndexExpr::lit(0);
};

struct SolveOutcome {
    std::optional<MetaSolution> solution;
    std::string reason;  // set when no solution
};

// Solves an equality containing exactly one unsolved metavariable.
SolveOutcome solve_meta(const Context& ctx, const MetaStore& metas, const IndexProp& constraint);

}  // namespace guardlang

#endif  // GUARDLANG_INDEX_DOMAIN_HPP
