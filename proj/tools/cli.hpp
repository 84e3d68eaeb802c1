#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srirnn::cli {

/// Entry point of the `srirnn` tool. Normal output goes to `out`; failures
/// print one JSON object {"error": code, "message": text} to `err` and
/// return a nonzero exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace srirnn::cli
