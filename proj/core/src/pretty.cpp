#include "guardlang/pretty.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace guardlang {

namespace {

bool is_sum(const IndexExpr& i) { return i.is(IndexExpr::Kind::Add) || i.is(IndexExpr::Kind::Sub); }

void print_index(std::ostream& os, const IndexExpr& i, bool operand) {
    switch (i.kind()) {
    case IndexExpr::Kind::Var: os << i.name(); return;
    case IndexExpr::Kind::Lit: os << i.value(); return;
    case IndexExpr::Kind::Meta: os << '?' << i.meta_id(); return;
    case IndexExpr::Kind::Mul:
        print_index(os, i.operand(), true);
        os << '*' << i.value();
        return;
    case IndexExpr::Kind::Add:
    case IndexExpr::Kind::Sub:
        if (operand)
            os << '(';
        print_index(os, i.lhs(), false);
        os << (i.is(IndexExpr::Kind::Add) ? " + " : " - ");
        if (is_sum(i.rhs()))
            os << '(';
        print_index(os, i.rhs(), false);
        if (is_sum(i.rhs()))
            os << ')';
        if (operand)
            os << ')';
        return;
    }
}

// Precedence levels: 0 top, 1 arrow domain, 2 left of /\, 3 right of /\.
void print_type(std::ostream& os, const Type& t, int level) {
    switch (t.kind()) {
    case Type::Kind::Unit: os << "unit"; return;
    case Type::Kind::Atom: os << t.name(); return;
    case Type::Kind::Indexed:
        os << t.name() << '(';
        print_index(os, t.index(), false);
        os << ')';
        return;
    case Type::Kind::Pi:
        if (level >= 1)
            os << '(';
        os << "Pi " << t.name() << " : " << sort_name(t.sort()) << " . ";
        print_type(os, t.body(), 0);
        if (level >= 1)
            os << ')';
        return;
    case Type::Kind::Arrow:
        if (level >= 1)
            os << '(';
        print_type(os, t.lhs(), 1);
        os << " -> ";
        print_type(os, t.rhs(), 0);
        if (level >= 1)
            os << ')';
        return;
    case Type::Kind::Sect:
        if (level >= 3)
            os << '(';
        print_type(os, t.lhs(), 2);
        os << " /\\ ";
        print_type(os, t.rhs(), 3);
        if (level >= 3)
            os << ')';
        return;
    }
}

void print_decl(std::ostream& os, const Decl& d) {
    if (d.is_var()) {
        os << d.name << " : ";
        print_type(os, *d.type, 0);
    } else {
        os << d.name << " : " << sort_name(d.sort);
    }
}

void print_typing(std::ostream& os, const ContextualTyping& t) {
    for (std::size_t k = 0; k < t.ctx.size(); ++k) {
        if (k)
            os << ", ";
        print_decl(os, t.ctx[k]);
    }
    os << (t.ctx.empty() ? "|- " : " |- ");
    print_type(os, t.goal, 0);
}

// Levels: 0 full term, 1 application head, 2 atomic.
void print_term(std::ostream& os, const Term& e, int level) {
    auto open = [&](int threshold) {
        if (level >= threshold)
            os << '(';
    };
    auto close = [&](int threshold) {
        if (level >= threshold)
            os << ')';
    };
    switch (e.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Prim: os << e.name(); return;
    case Term::Kind::Unit: os << "()"; return;
    case Term::Kind::Lam:
        open(1);
        os << "fn " << e.name() << " => ";
        print_term(os, e.body(), 0);
        close(1);
        return;
    case Term::Kind::Guard:
        open(1);
        os << "where ";
        print_decl(os, e.decl());
        os << " do ";
        print_term(os, e.body(), 0);
        close(1);
        return;
    case Term::Kind::Some:
        open(1);
        os << "some " << e.name() << " : " << sort_name(e.sort()) << " in ";
        print_term(os, e.body(), 0);
        close(1);
        return;
    case Term::Kind::BigLam:
        open(1);
        os << "idxfn " << e.name() << " : " << sort_name(e.sort()) << " => ";
        print_term(os, e.body(), 0);
        close(1);
        return;
    case Term::Kind::App:
        open(2);
        print_term(os, e.lhs(), 1);
        os << ' ';
        print_term(os, e.rhs(), 2);
        close(2);
        return;
    case Term::Kind::Merge:
        os << '(';
        print_term(os, e.lhs(), 1);
        os << " ,, ";
        print_term(os, e.rhs(), 0);
        os << ')';
        return;
    case Term::Kind::Anno:
        os << '(';
        print_term(os, e.body(), 0);
        os << " : ";
        print_type(os, e.type(), 0);
        os << ')';
        return;
    case Term::Kind::CtxAnno:
        os << '(';
        print_term(os, e.body(), 0);
        os << " :: [";
        for (std::size_t k = 0; k < e.typings().size(); ++k) {
            if (k)
                os << " ; ";
            print_typing(os, e.typings()[k]);
        }
        os << "])";
        return;
    }
}

template <class F>
std::string render(F&& f) {
    std::ostringstream os;
    f(os);
    return os.str();
}

std::string judgment_line(const Derivation& d) {
    std::ostringstream os;
    os << d.rule << ": ";
    switch (d.judgment) {
    case Judgment::Subtype:
        os << pretty(d.ctx) << " |- " << pretty(*d.lhs) << " <: " << pretty(*d.rhs);
        break;
    case Judgment::Check:
        os << pretty(d.ctx) << " |- " << pretty(*d.term) << " <== " << pretty(*d.lhs);
        break;
    case Judgment::Synth:
        os << pretty(d.ctx) << " |- " << pretty(*d.term) << " ==> " << pretty(*d.lhs);
        break;
    case Judgment::Guard: os << pretty(d.ctx) << " |- guard " << pretty(*d.decl); break;
    case Judgment::CtxSub:
        os << '(' << pretty(*d.inner) << ") <~ (" << pretty(d.ctx) << " |- " << pretty(*d.lhs) << ')';
        break;
    }
    if (d.witness)
        os << "  [witness " << pretty(*d.witness) << ']';
    if (d.branch)
        os << "  [branch " << d.branch << ']';
    return os.str();
}

void print_derivation(std::ostream& os, const Derivation& d, const TraceOptions& options, int indent) {
    os << std::string(static_cast<std::size_t>(indent) * 2, ' ') << readable_names(judgment_line(d)) << '\n';
    for (const auto& p : d.premises) {
        if (!options.subtyping && p->judgment == Judgment::Subtype)
            continue;
        print_derivation(os, *p, options, indent + 1);
    }
}

struct NameToken {
    std::size_t start;
    std::size_t end;
    std::string base;
    bool generated;
};

std::vector<NameToken> name_tokens(const std::string& text) {
    std::vector<NameToken> out;
    auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    std::size_t i = 0;
    while (i < text.size()) {
        if (!ident_start(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && ident_char(text[j]))
            ++j;
        NameToken t{i, j, text.substr(i, j - i), false};
        if (j + 1 < text.size() && text[j] == '#' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
            j += 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            t.end = j;
            t.generated = true;
        }
        out.push_back(std::move(t));
        i = j;
    }
    return out;
}

}  // namespace

std::string readable_names(const std::string& text) {
    auto tokens = name_tokens(text);
    std::map<std::string, std::set<std::string>> variants;
    std::set<std::string> plain;
    for (const auto& t : tokens) {
        if (t.generated)
            variants[t.base].insert(text.substr(t.start, t.end - t.start));
        else
            plain.insert(t.base);
    }
    std::string out;
    std::size_t pos = 0;
    for (const auto& t : tokens) {
        if (!t.generated || variants[t.base].size() != 1 || plain.count(t.base))
            continue;
        out += text.substr(pos, t.start - pos);
        out += t.base;
        pos = t.end;
    }
    out += text.substr(pos);
    return out;
}

std::string readable_code_spans(const std::string& text) {
    const char sep = '\x1f';
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::string code;
    for (std::size_t i = text.find('`'); i != std::string::npos;) {
        std::size_t j = text.find('`', i + 1);
        if (j == std::string::npos)
            break;
        spans.emplace_back(i + 1, j);
        code += text.substr(i + 1, j - i - 1) + sep;
        i = text.find('`', j + 1);
    }
    if (spans.empty())
        return text;
    std::string renamed = readable_names(code);
    std::string out;
    std::size_t pos = 0, from = 0;
    for (const auto& [start, end] : spans) {
        std::size_t to = renamed.find(sep, from);
        out += text.substr(pos, start - pos);
        out += renamed.substr(from, to - from);
        from = to + 1;
        pos = end;
    }
    out += text.substr(pos);
    return out;
}

std::string pretty(const IndexExpr& i) {
    return render([&](std::ostream& os) { print_index(os, i, false); });
}

std::string pretty(const IndexProp& p) {
    const char* rel = p.rel == IndexProp::Rel::Eq ? " = " : p.rel == IndexProp::Rel::Le ? " <= " : " < ";
    return pretty(p.lhs) + rel + pretty(p.rhs);
}

std::string pretty(const Type& t) {
    return render([&](std::ostream& os) { print_type(os, t, 0); });
}

std::string pretty(const Decl& d) {
    return render([&](std::ostream& os) { print_decl(os, d); });
}

std::string pretty(const Context& ctx) {
    if (ctx.empty())
        return ".";
    return render([&](std::ostream& os) {
        for (std::size_t k = 0; k < ctx.size(); ++k) {
            if (k)
                os << ", ";
            print_decl(os, ctx.decls()[k]);
        }
    });
}

std::string pretty(const ContextualTyping& typing) {
    return render([&](std::ostream& os) { print_typing(os, typing); });
}

std::string pretty(const Term& e) {
    return render([&](std::ostream& os) { print_term(os, e, 0); });
}

std::string pretty(const Derivation& d, const TraceOptions& options) {
    return render([&](std::ostream& os) { print_derivation(os, d, options, 0); });
}

std::string pretty(const Program& p) {
    std::ostringstream os;
    std::set<std::string> related;
    for (const auto& [sub, super] : p.sig.subsort_edges()) {
        os << "datasort " << sub << " <: " << super << '\n';
        related.insert(sub);
        related.insert(super);
    }
    for (const auto& atom : p.sig.atoms())
        if (!related.count(atom))
            os << "datasort " << atom << '\n';
    for (const auto& [name, sort] : p.sig.indexcons())
        os << "indexcon " << name << " :: " << sort_name(sort) << '\n';
    for (const auto& [name, type] : p.sig.prims())
        os << "prim " << name << " : " << pretty(type) << '\n';
    os << "val main";
    if (p.goal)
        os << " : " << pretty(*p.goal);
    os << " = " << pretty(p.main) << '\n';
    return os.str();
}

}  // namespace guardlang
