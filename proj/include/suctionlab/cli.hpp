#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace suctionlab {

/// Command-line entry point with subcommands exact, simulate, sweep, czdecomp and validate.
/// Returns 0 on success or a passing check, 1 on failure, 2 on usage errors.
int cli_main(int argc, const char* const* argv);

/// Same, with explicit arguments (without the program name) and streams.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace suctionlab
