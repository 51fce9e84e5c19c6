#pragma once

#include <iosfwd>

namespace qdsim::cli {

/// Parses argv, runs one subcommand and writes its artifacts. Returns the
/// process exit status; failures print a single "error: ..." line to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdsim::cli
