#pragma once

// Command-line front end: subcommands {convolve, steinitz, hinchin, check}
// driven by JSON configs, emitting machine-readable reports. Kept as a
// library so the test suite can drive it in-process.

#include <string>
#include <vector>

namespace opfree::cli {

/// Returns the process exit code: 0 ok, 2 config/validation, 3 numerical.
int run(const std::vector<std::string>& args);

}  // namespace opfree::cli
