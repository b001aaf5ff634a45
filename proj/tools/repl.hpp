#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "olapcube/cube.hpp"
#include "olapcube/engine.hpp"

namespace olapcube::cli {

/// Whitespace-separated words; double quotes group words and "" inside a
/// quoted word is a literal quote. Throws Error(InvalidArgument) on an
/// unterminated quote.
std::vector<std::string> tokenize(std::string_view line);

struct ReplOptions {
    std::optional<std::string> measure;  ///< defaults to the first measure column
    ExecMode mode = ExecMode::serial();
    bool show_prompt = false;
};

/// Console session over one cube. Reads commands until `quit` or end of
/// input; returns the process exit code.
int run_repl(const Cube& cube, std::istream& in, std::ostream& out, const ReplOptions& options);

}  // namespace olapcube::cli
