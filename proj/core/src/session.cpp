#include "guardlang/session.hpp"

#include <algorithm>
#include <cctype>

#include "guardlang/pretty.hpp"

namespace guardlang {

namespace {

constexpr std::size_t kMaxLoggedFailures = 4096;

}  // namespace

Session::Session(const Signature& sig, CheckOptions options) : sig_(&sig), options_(options) {}

int Session::new_meta(const Context& ctx, IndexSort sort, std::string origin) {
    ++stats_.metas_created;
    return metas_.fresh(sort, ctx.index_vars(), std::move(origin));
}

// Unsolved metavariables print as ?b after the variable they stand for.
std::string Session::readable(const std::string& text) const {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '?' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            std::size_t j = i + 1;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j])))
                ++j;
            auto id = static_cast<std::size_t>(std::stoul(text.substr(i + 1, j - i - 1)));
            out += '?';
            out += id < metas_.size() ? source_name(metas_.info(static_cast<int>(id)).origin) : std::to_string(id);
            i = j - 1;
            continue;
        }
        out += text[i];
    }
    return readable_code_spans(out);
}

void Session::fail(int depth, const SourceSpan& span, std::string message) {
    if (failures_.size() >= kMaxLoggedFailures)
        return;
    message = readable(message);
    std::string key = std::to_string(span.start_line) + ":" + std::to_string(span.start_col) + ":" + message;
    if (!seen_failures_.insert(key).second)
        return;
    failures_.push_back(Diagnostic{span, std::move(message), depth});
}

void Session::clear_failures() {
    failures_.clear();
    seen_failures_.clear();
}

std::vector<Diagnostic> Session::deepest_failures(std::size_t limit) const {
    std::vector<Diagnostic> out = failures_;
    std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) { return a.depth > b.depth; });
    if (out.size() > limit)
        out.resize(limit);
    return out;
}

}  // namespace guardlang
