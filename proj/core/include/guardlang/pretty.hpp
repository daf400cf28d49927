#ifndef GUARDLANG_PRETTY_HPP
#define GUARDLANG_PRETTY_HPP

#include <string>

#include "guardlang/ast.hpp"
#include "guardlang/derivation.hpp"

namespace guardlang {

std::string pretty(const IndexExpr& i);
std::string pretty(const IndexProp& p);
std::string pretty(const Type& t);
std::string pretty(const Decl& d);
std::string pretty(const Context& ctx);
std::string pretty(const ContextualTyping& typing);
std::string pretty(const Term& e);

struct TraceOptions {
    bool subtyping = false;  // include subtyping subtrees
};

// Indented derivation dump, one judgment per line.
std::string pretty(const Derivation& d, const TraceOptions& options = {});

// Shows generated names a#3 as their source name a wherever that name is
// not otherwise taken in `text`.
std::string readable_names(const std::string& text);
// Same renaming, applied only inside `backquoted` spans.
std::string readable_code_spans(const std::string& text);

// Whole program in source syntax.
std::string pretty(const Program& p);

}  // namespace guardlang

#endif  // GUARDLANG_PRETTY_HPP
