#ifndef GUARDLANG_SESSION_HPP
#define GUARDLANG_SESSION_HPP

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "guardlang/ast.hpp"
#include "guardlang/index_domain.hpp"

namespace guardlang {

struct CheckOptions {
    // Bound on nested rule applications (typing) and on rule applications
    // per subtyping query.
    int max_depth = 512;
    // Rule ctx-anno; switched off to check desugared programs.
    bool ctx_anno = true;
    // Checks an unannotated redex (fn x => e) e2 by synthesizing e2.
    // Off by default; the core rules do not include it.
    bool redex_synthesis = false;
    bool memoize = true;
};

struct Stats {
    std::uint64_t rule_applications = 0;
    std::uint64_t backtracks = 0;
    std::uint64_t subtype_queries = 0;
    std::uint64_t entailment_queries = 0;
    std::uint64_t metas_created = 0;
    std::uint64_t memo_hits = 0;
    std::uint64_t depth_exceeded = 0;
};

struct Diagnostic {
    SourceSpan span;
    std::string message;
    int depth = 0;
};

class DepthExceeded : public std::runtime_error {
public:
    DepthExceeded() : std::runtime_error("search bound exceeded") {}
};

// State of one typechecking run: metavariables, fresh names, statistics
// and the failure log. Not shared between runs.
class Session {
public:
    explicit Session(const Signature& sig, CheckOptions options = {});

    const Signature& sig() const { return *sig_; }
    const CheckOptions& options() const { return options_; }
    CheckOptions& options() { return options_; }
    MetaStore& metas() { return metas_; }
    const MetaStore& metas() const { return metas_; }
    FreshNames& names() { return names_; }
    Stats& stats() { return stats_; }
    const Stats& stats() const { return stats_; }

    int new_meta(const Context& ctx, IndexSort sort, std::string origin);

    // Logs a failed goal. Generated names and metavariables are shown by
    // the source names they stand for.
    void fail(int depth, const SourceSpan& span, std::string message);
    std::string readable(const std::string& text) const;
    const std::vector<Diagnostic>& failures() const { return failures_; }
    void clear_failures();

    // Distinct failure messages, deepest first.
    std::vector<Diagnostic> deepest_failures(std::size_t limit) const;

private:
    const Signature* sig_;
    CheckOptions options_;
    MetaStore metas_;
    FreshNames names_;
    Stats stats_;
    std::vector<Diagnostic> failures_;
    std::set<std::string> seen_failures_;
};

}  // namespace guardlang

#endif  // GUARDLANG_SESSION_HPP
