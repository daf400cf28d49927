#ifndef GUARDLANG_PARSER_HPP
#define GUARDLANG_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "guardlang/ast.hpp"

namespace guardlang {

class ParseError : public std::runtime_error {
public:
    ParseError(SourceSpan span, std::vector<std::string> expected, std::string found, std::string message);

    const SourceSpan& span() const { return span_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }
    const std::string& message() const { return message_; }

private:
    SourceSpan span_;
    std::vector<std::string> expected_;
    std::string found_;
    std::string message_;
};

// Grammar of `.gl` sources:
//
//   program  ::= header* 'val' 'main' (':' type)? '=' term
//   header   ::= 'datasort' id ('<:' id)? | 'indexcon' id '::' sort | 'prim' id ':' type
//   type     ::= 'Pi' id ':' sort '.' type | sect ('->' type)?
//   sect     ::= atomic ('/\' atomic)*
//   atomic   ::= 'unit' | id | id '(' index ')' | '(' type ')'
//   term     ::= 'fn' id '=>' term | 'where' decl 'do' term
//              | 'some' id ':' sort 'in' term | 'idxfn' id ':' sort '=>' term
//              | app (',,' term)?
//   app      ::= atom+
//   atom     ::= id | '(' ')' | '(' term ')' | '(' term ':' type ')'
//              | '(' term '::' '[' typing (';' typing)* ']' ')'
//   typing   ::= (decl (',' decl)*)? '|-' type
//   decl     ::= id ':' type | id ':' sort
//
// Line comments start with `--`.
Program parse_program(std::string_view text, std::string file = "<input>");

// Without a signature every identifier is accepted as an atom, `id(...)`
// as an indexed constructor, and no identifier denotes a primitive.
Type parse_type(std::string_view text, const Signature* sig = nullptr);
Term parse_term(std::string_view text, const Signature* sig = nullptr);
IndexExpr parse_index(std::string_view text);

// Reads and parses a file; I/O failures surface as ParseError.
Program parse_file(const std::string& path);

}  // namespace guardlang

#endif  // GUARDLANG_PARSER_HPP
