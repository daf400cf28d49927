#include "fixtures.hpp"

#include <algorithm>
#include <filesystem>

namespace guardlang::testing {

const Signature& std_sig() {
    static const Signature sig = parse_program(std::string(kHeader) + "val main = ()").sig;
    return sig;
}

Type ty(const std::string& text) { return parse_type(text, &std_sig()); }

Term tm(const std::string& text) { return parse_term(text, &std_sig()); }

IndexExpr ix(const std::string& text) { return parse_index(text); }

Program program(const std::string& body) { return parse_program(std::string(kHeader) + body, "<test>"); }

Context ctx_of(const std::string& text) {
    Term t = tm("(() :: [" + text + (text.empty() ? "|- unit])" : " |- unit])"));
    return Context(t.typings().front().ctx);
}

std::string corpus_path(const std::string& name) { return std::string(GUARDLANG_CORPUS_DIR) + "/" + name; }

std::vector<std::string> corpus_files() {
    std::vector<std::string> out;
    for (const auto& entry : std::filesystem::directory_iterator(GUARDLANG_CORPUS_DIR))
        if (entry.path().extension() == ".gl")
            out.push_back(entry.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace guardlang::testing
