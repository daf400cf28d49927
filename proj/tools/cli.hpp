#ifndef GUARDLANG_TOOLS_CLI_HPP
#define GUARDLANG_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "guardlang/typecheck.hpp"

namespace guardlang::cli {

enum ExitCode { kAccept = 0, kFailure = 1, kUsage = 2 };

// Runs one command line; everything goes to `out` and `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json report_json(const Report& r, const std::string& file, bool with_subtyping, bool with_derivation);

}  // namespace guardlang::cli

#endif  // GUARDLANG_TOOLS_CLI_HPP
