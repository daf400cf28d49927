#include "guardlang/parser.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace guardlang {

ParseError::ParseError(SourceSpan span, std::vector<std::string> expected, std::string found, std::string message)
    : std::runtime_error(span.file + ":" + std::to_string(span.start_line) + ":" + std::to_string(span.start_col) +
                         ": " + message),
      span_(std::move(span)),
      expected_(std::move(expected)),
      found_(std::move(found)),
      message_(std::move(message)) {}

namespace {

enum class Tok { Ident, Int, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
    int end_line;
    int end_col;
};

const std::set<std::string, std::less<>> kKeywords = {"fn",  "where", "do",       "some",     "in",   "idxfn", "Pi",
                                                      "unit", "int",  "datasort", "indexcon", "prim", "val"};

// Longest symbols first.
const char* const kSymbols[] = {",,", "::", "->", "=>", "/\\", "|-", "<:", "(", ")", "[", "]",
                                ",",  ":",  ";",  ".",  "+",   "-",  "*",  "="};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "integer " + t.text;
    case Tok::Ident: return kKeywords.count(t.text) ? "keyword '" + t.text + "'" : "identifier '" + t.text + "'";
    case Tok::Sym: return "'" + t.text + "'";
    }
    return t.text;
}

std::vector<Token> lex(std::string_view src, const std::string& file) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "--") {
            while (i < src.size() && src[i] != '\n')
                advance(1);
            continue;
        }
        int l0 = line, c0 = col;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j]))
                ++j;
            std::string text(src.substr(i, j - i));
            advance(j - i);
            out.push_back({Tok::Ident, std::move(text), l0, c0, line, col});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                ++j;
            std::string text(src.substr(i, j - i));
            advance(j - i);
            out.push_back({Tok::Int, std::move(text), l0, c0, line, col});
            continue;
        }
        bool matched = false;
        for (const char* sym : kSymbols) {
            std::string_view s(sym);
            if (src.substr(i, s.size()) == s) {
                advance(s.size());
                out.push_back({Tok::Sym, std::string(s), l0, c0, line, col});
                matched = true;
                break;
            }
        }
        if (!matched)
            throw ParseError(SourceSpan{file, l0, c0, l0, c0 + 1}, {}, std::string(1, c),
                             std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", line, col, line, col});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, std::string file, const Signature* sig)
        : file_(std::move(file)), toks_(lex(src, file_)), sig_(sig) {}

    Program program() {
        Program p;
        p.file = file_;
        sig_ = &p.sig;
        strict_ = true;
        for (;;) {
            if (accept_kw("datasort")) {
                auto sub = ident("datasort name");
                if (accept_sym("<:")) {
                    auto super = ident("datasort name");
                    try {
                        p.sig.declare_subsort(sub, super);
                    } catch (const std::invalid_argument& e) {
                        error_at(prev(), {}, e.what());
                    }
                } else {
                    p.sig.declare_atom(sub);
                }
            } else if (accept_kw("indexcon")) {
                auto name = ident("constructor name");
                expect_sym("::");
                p.sig.declare_indexcon(name, sort());
            } else if (accept_kw("prim")) {
                auto name = ident("primitive name");
                expect_sym(":");
                auto t = type();
                if (!free_index_vars(t).empty())
                    error_at(prev(), {}, "primitive '" + name + "' must have a closed type");
                p.sig.declare_prim(name, t);
            } else {
                break;
            }
        }
        expect_kw("val");
        auto name = ident("'main'");
        if (name != "main")
            error_at(prev(), {"'main'"}, "the program must define 'main'");
        if (accept_sym(":"))
            p.goal = type();
        expect_sym("=");
        p.main = term();
        expect_end();
        return p;
    }

    Type whole_type() {
        auto t = type();
        expect_end();
        return t;
    }

    Term whole_term() {
        auto e = term();
        expect_end();
        return e;
    }

    IndexExpr whole_index() {
        auto i = index();
        expect_end();
        return i;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    bool is_sym(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Sym && peek(k).text == s; }
    bool is_kw(const char* s, std::size_t k = 0) const { return peek(k).kind == Tok::Ident && peek(k).text == s; }
    bool is_ident(std::size_t k = 0) const {
        return peek(k).kind == Tok::Ident && !kKeywords.count(peek(k).text);
    }

    bool accept_sym(const char* s) {
        if (!is_sym(s))
            return false;
        ++pos_;
        return true;
    }
    bool accept_kw(const char* s) {
        if (!is_kw(s))
            return false;
        ++pos_;
        return true;
    }

    [[noreturn]] void error_at(const Token& t, std::vector<std::string> expected, const std::string& message) {
        throw ParseError(SourceSpan{file_, t.line, t.col, t.end_line, t.end_col}, std::move(expected), describe(t),
                         message);
    }

    [[noreturn]] void unexpected(std::vector<std::string> expected) {
        std::string msg = "expected ";
        for (std::size_t k = 0; k < expected.size(); ++k)
            msg += (k ? (k + 1 == expected.size() ? " or " : ", ") : "") + expected[k];
        const Token& t = peek();
        msg += ", found " + describe(t);
        if (t.kind == Tok::End)
            msg = "unexpected end of input (" + msg + ")";
        error_at(t, std::move(expected), msg);
    }

    void expect_sym(const char* s) {
        if (!accept_sym(s))
            unexpected({std::string("'") + s + "'"});
    }
    void expect_kw(const char* s) {
        if (!accept_kw(s))
            unexpected({std::string("'") + s + "'"});
    }
    void expect_end() {
        if (peek().kind != Tok::End)
            unexpected({"end of input"});
    }

    std::string ident(const char* what) {
        if (!is_ident())
            unexpected({what});
        return next().text;
    }

    SourceSpan span_from(const Token& start) const {
        const Token& end = prev();
        return SourceSpan{file_, start.line, start.col, end.end_line, end.end_col};
    }

    IndexSort sort() {
        if (accept_kw("int"))
            return IndexSort::Int;
        unexpected({"index sort 'int'"});
    }

    // --- index expressions ---

    IndexExpr index() {
        auto lhs = index_term();
        for (;;) {
            if (accept_sym("+"))
                lhs = IndexExpr::add(lhs, index_term());
            else if (accept_sym("-"))
                lhs = IndexExpr::sub(lhs, index_term());
            else
                return lhs;
        }
    }

    IndexExpr index_term() {
        auto lhs = index_unary();
        while (is_sym("*")) {
            const Token& star = next();
            auto rhs = index_unary();
            if (rhs.is(IndexExpr::Kind::Lit))
                lhs = IndexExpr::mul(rhs.value(), lhs);
            else if (lhs.is(IndexExpr::Kind::Lit))
                lhs = IndexExpr::mul(lhs.value(), rhs);
            else
                error_at(star, {"integer literal"}, "nonlinear index expression: one factor must be a literal");
        }
        return lhs;
    }

    IndexExpr index_unary() {
        if (accept_sym("-")) {
            auto e = index_unary();
            if (e.is(IndexExpr::Kind::Lit))
                return IndexExpr::lit(-e.value());
            return IndexExpr::mul(-1, e);
        }
        if (peek().kind == Tok::Int) {
            const Token& t = next();
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc())
                error_at(t, {}, "integer literal out of range");
            return IndexExpr::lit(v);
        }
        if (is_ident())
            return IndexExpr::var(next().text);
        if (accept_sym("(")) {
            auto e = index();
            expect_sym(")");
            return e;
        }
        unexpected({"index expression"});
    }

    // --- types ---

    Type type() {
        if (accept_kw("Pi")) {
            auto a = ident("index variable");
            expect_sym(":");
            auto s = sort();
            expect_sym(".");
            return Type::pi(a, s, type());
        }
        auto lhs = sect();
        if (accept_sym("->"))
            return Type::arrow(lhs, type());
        return lhs;
    }

    Type sect() {
        auto lhs = atomic_type();
        while (accept_sym("/\\"))
            lhs = Type::sect(lhs, atomic_type());
        return lhs;
    }

    Type atomic_type() {
        if (accept_kw("unit"))
            return Type::unit();
        if (accept_sym("(")) {
            auto t = type();
            expect_sym(")");
            return t;
        }
        if (is_ident()) {
            const Token& name = next();
            if (accept_sym("(")) {
                if (strict_ && !sig_->indexcon_sort(name.text))
                    error_at(name, {}, "unknown indexed constructor '" + name.text + "'");
                auto i = index();
                expect_sym(")");
                return Type::indexed(name.text, i);
            }
            if (sig_ && sig_->indexcon_sort(name.text))
                error_at(name, {"'('"}, "indexed constructor '" + name.text + "' needs an index");
            if (strict_ && !sig_->has_atom(name.text))
                error_at(name, {}, "unknown datasort '" + name.text + "'");
            return Type::atom(name.text);
        }
        unexpected({"type"});
    }

    // --- terms ---

    Decl decl() {
        auto name = ident("variable");
        expect_sym(":");
        if (is_kw("int")) {
            next();
            return Decl::index(name, IndexSort::Int);
        }
        return Decl::var(name, type());
    }

    Term term() {
        const Token& start = peek();
        if (accept_kw("fn")) {
            auto x = ident("parameter name");
            expect_sym("=>");
            bound_.push_back(x);
            auto body = term();
            bound_.pop_back();
            return Term::lam(x, body, span_from(start));
        }
        if (accept_kw("where")) {
            auto d = decl();
            expect_kw("do");
            auto body = term();
            return Term::guard(d, body, span_from(start));
        }
        if (accept_kw("some")) {
            auto a = ident("index variable");
            expect_sym(":");
            auto s = sort();
            expect_kw("in");
            auto body = term();
            return Term::some(a, s, body, span_from(start));
        }
        if (accept_kw("idxfn")) {
            auto a = ident("index variable");
            expect_sym(":");
            auto s = sort();
            expect_sym("=>");
            auto body = term();
            return Term::big_lam(a, s, body, span_from(start));
        }
        auto lhs = app();
        if (accept_sym(",,")) {
            auto rhs = term();
            return Term::merge(lhs, rhs, span_from(start));
        }
        return lhs;
    }

    bool atom_start() const { return is_ident() || is_sym("("); }

    Term app() {
        const Token& start = peek();
        if (!atom_start())
            unexpected({"term"});
        auto fn = atom();
        while (atom_start())
            fn = Term::app(fn, atom(), span_from(start));
        return fn;
    }

    Term atom() {
        const Token& start = peek();
        if (is_ident()) {
            const auto& name = next().text;
            auto span = span_from(start);
            bool is_bound = std::find(bound_.begin(), bound_.end(), name) != bound_.end();
            if (!is_bound && sig_ && sig_->prim_type(name))
                return Term::prim(name, span);
            return Term::var(name, span);
        }
        expect_sym("(");
        if (accept_sym(")"))
            return Term::unit(span_from(start));
        auto e = term();
        if (accept_sym(":")) {
            auto t = type();
            expect_sym(")");
            return Term::anno(e, t, span_from(start));
        }
        if (accept_sym("::")) {
            expect_sym("[");
            std::vector<ContextualTyping> typings;
            do {
                typings.push_back(typing());
            } while (accept_sym(";"));
            expect_sym("]");
            expect_sym(")");
            return Term::ctx_anno(e, std::move(typings), span_from(start));
        }
        if (!is_sym(")"))
            unexpected({"')'", "':'", "'::'", "',,'"});
        next();
        return e;
    }

    ContextualTyping typing() {
        std::vector<Decl> ctx;
        if (!is_sym("|-")) {
            ctx.push_back(decl());
            while (accept_sym(","))
                ctx.push_back(decl());
        }
        expect_sym("|-");
        return ContextualTyping{std::move(ctx), type()};
    }

    std::string file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const Signature* sig_;
    bool strict_ = false;
    std::vector<std::string> bound_;
};

}  // namespace

Program parse_program(std::string_view text, std::string file) {
    Parser p(text, std::move(file), nullptr);
    return p.program();
}

Type parse_type(std::string_view text, const Signature* sig) {
    Parser p(text, "<type>", sig);
    return p.whole_type();
}

Term parse_term(std::string_view text, const Signature* sig) {
    Parser p(text, "<term>", sig);
    return p.whole_term();
}

IndexExpr parse_index(std::string_view text) {
    Parser p(text, "<index>", nullptr);
    return p.whole_index();
}

Program parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(SourceSpan{path, 0, 0, 0, 0}, {}, "", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_program(buf.str(), path);
}

}  // namespace guardlang
