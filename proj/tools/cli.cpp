#include "cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "guardlang/ctxanno.hpp"
#include "guardlang/eval.hpp"
#include "guardlang/parser.hpp"
#include "guardlang/pretty.hpp"

namespace guardlang::cli {

namespace {

struct Flags {
    std::string file;
    bool trace = false;
    bool trace_sub = false;
    bool json = false;
    int max_depth = 512;
    std::size_t fuel = 100000;
    std::string mode = "erase";
    bool no_ctx_anno = false;
    bool verify = false;
    bool unsafe_eval = false;
};

CheckOptions options_of(const Flags& f) {
    CheckOptions o;
    o.max_depth = f.max_depth;
    o.ctx_anno = !f.no_ctx_anno;
    return o;
}

std::string location(const SourceSpan& s, const std::string& fallback) {
    const std::string& file = s.file.empty() ? fallback : s.file;
    if (!s.known())
        return file;
    return file + ":" + std::to_string(s.start_line) + ":" + std::to_string(s.start_col);
}

nlohmann::json diagnostic_json(const SourceSpan& span, const std::string& message, const std::string& file) {
    return {{"file", span.file.empty() ? file : span.file},
            {"line", span.start_line},
            {"col", span.start_col},
            {"end_line", span.end_line},
            {"end_col", span.end_col},
            {"message", message}};
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& ds, const std::string& file) {
    for (const auto& d : ds)
        err << location(d.span, file) << ": " << d.message << '\n';
}

int parse_failure(const ParseError& e, const Flags& f, std::ostream& out, std::ostream& err) {
    if (f.json) {
        nlohmann::json j = {{"verdict", "error"},
                            {"file", f.file},
                            {"diagnostics", {diagnostic_json(e.span(), e.message(), f.file)}}};
        out << j.dump(2) << '\n';
    } else {
        err << location(e.span(), f.file) << ": " << e.message() << '\n';
    }
    return kUsage;
}

int cmd_check(const Flags& f, std::ostream& out, std::ostream& err) {
    Program p;
    try {
        p = parse_file(f.file);
    } catch (const ParseError& e) {
        return parse_failure(e, f, out, err);
    }
    Report r = typecheck_program(p, options_of(f));
    if (f.json) {
        out << report_json(r, f.file, f.trace_sub, f.trace || f.trace_sub).dump(2) << '\n';
    } else {
        out << verdict_name(r.verdict);
        if (r.type)
            out << ": main : " << pretty(*r.type);
        out << '\n';
        if ((f.trace || f.trace_sub) && r.derivation)
            out << pretty(*r.derivation, TraceOptions{f.trace_sub});
        print_diagnostics(err, r.diagnostics, f.file);
    }
    return r.verdict == Report::Verdict::Accept ? kAccept : kFailure;
}

int cmd_eval(const Flags& f, std::ostream& out, std::ostream& err) {
    Program p;
    try {
        p = parse_file(f.file);
    } catch (const ParseError& e) {
        return parse_failure(e, f, out, err);
    }
    if (f.mode != "erase" && f.mode != "annotated") {
        err << "unknown mode '" << f.mode << "' (expected erase or annotated)\n";
        return kUsage;
    }
    if (!f.unsafe_eval) {
        Report r = typecheck_program(p, options_of(f));
        if (r.verdict != Report::Verdict::Accept) {
            if (f.json)
                out << report_json(r, f.file, false, false).dump(2) << '\n';
            else
                print_diagnostics(err, r.diagnostics, f.file);
            return kFailure;
        }
    }
    EvalMode mode = f.mode == "annotated" ? EvalMode::Annotated : EvalMode::Erase;
    EvalResult res = eval(p.main, builtin_prims(), f.fuel, mode);
    std::string shown = pretty(res.term);
    if (res.outcome == EvalResult::Outcome::Value) {
        try {
            shown = pretty(erase(res.term));
        } catch (const MergeMismatch&) {
        }
    }
    if (f.json) {
        nlohmann::json j = {{"outcome", outcome_name(res.outcome)},
                            {"value", shown},
                            {"steps", res.steps},
                            {"mode", f.mode}};
        if (!res.reason.empty())
            j["reason"] = res.reason;
        out << j.dump(2) << '\n';
    } else if (res.outcome == EvalResult::Outcome::Value) {
        out << shown << '\n' << "steps: " << res.steps << '\n';
    } else {
        err << f.file << ": " << outcome_name(res.outcome) << ": " << res.reason << '\n';
        err << "at: " << shown << '\n';
    }
    return res.outcome == EvalResult::Outcome::Value ? kAccept : kFailure;
}

int cmd_desugar(const Flags& f, std::ostream& out, std::ostream& err) {
    Program p;
    try {
        p = parse_file(f.file);
    } catch (const ParseError& e) {
        return parse_failure(e, f, out, err);
    }
    if (!f.verify) {
        out << pretty(encode(p));
        return kAccept;
    }
    EncodingReport r = verify_encoding(p, options_of(f));
    out << pretty(r.encoded_program);
    if (r.original.verdict != Report::Verdict::Accept) {
        err << f.file << ": the program is not accepted with contextual annotations; nothing to verify\n";
        print_diagnostics(err, r.original.diagnostics, f.file);
        return kFailure;
    }
    if (r.gap) {
        err << f.file << ": EncodingGap: the desugared program is rejected without contextual annotations\n";
        print_diagnostics(err, r.encoded.diagnostics, f.file);
        return kFailure;
    }
    err << "verified: derivation size " << r.original_size << " before, " << r.encoded_size << " after\n";
    return kAccept;
}

}  // namespace

nlohmann::json report_json(const Report& r, const std::string& file, bool with_subtyping, bool with_derivation) {
    nlohmann::json diags = nlohmann::json::array();
    for (const auto& d : r.diagnostics)
        diags.push_back(diagnostic_json(d.span, d.message, file));
    nlohmann::json j = {{"verdict", verdict_name(r.verdict)},
                        {"file", file},
                        {"diagnostics", diags},
                        {"statistics",
                         {{"rule_applications", r.stats.rule_applications},
                          {"backtracks", r.stats.backtracks},
                          {"subtype_queries", r.stats.subtype_queries},
                          {"entailment_queries", r.stats.entailment_queries},
                          {"metavariables", r.stats.metas_created},
                          {"memo_hits", r.stats.memo_hits},
                          {"depth_exceeded", r.stats.depth_exceeded},
                          {"wall_ms", r.wall_ms}}},
                        {"unsolved_metavariables", r.unsolved_metas}};
    if (r.type)
        j["type"] = pretty(*r.type);
    if (with_derivation && r.derivation)
        j["derivation"] = pretty(*r.derivation, TraceOptions{with_subtyping});
    return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Typechecker and interpreter for guardlang programs", "guardlang"};
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("file", f.file, "Source file (.gl)")->required();
        sub->add_option("--max-depth", f.max_depth, "Search bound for typing and subtyping")->check(CLI::PositiveNumber);
        sub->add_flag("--no-ctx-anno", f.no_ctx_anno, "Disable contextual typing annotations");
        sub->add_flag("--json", f.json, "Emit a JSON report");
    };

    auto* check = app.add_subcommand("check", "Typecheck a program");
    add_common(check);
    check->add_flag("--trace", f.trace, "Print the typing derivation");
    check->add_flag("--trace-sub", f.trace_sub, "Print the derivation including subtyping");

    auto* ev = app.add_subcommand("eval", "Typecheck and run a program");
    add_common(ev);
    ev->add_option("--fuel", f.fuel, "Step budget");
    ev->add_option("--mode", f.mode, "erase or annotated")->check(CLI::IsMember({"erase", "annotated"}));
    ev->add_flag("--unsafe-eval", f.unsafe_eval, "Skip typechecking");

    auto* desugar = app.add_subcommand("desugar", "Translate contextual annotations away");
    add_common(desugar);
    desugar->add_flag("--verify", f.verify, "Check that the translation still typechecks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kAccept : kUsage;
    }

    if (check->parsed())
        return cmd_check(f, out, err);
    if (ev->parsed())
        return cmd_eval(f, out, err);
    return cmd_desugar(f, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"guardlang"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace guardlang::cli
