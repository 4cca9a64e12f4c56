#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ebsched::cli {

/// Process exit codes.
enum Exit : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

/// Entry point of the ebsched tool; `args` excludes the program name.
/// Subcommands: check, verify, explore, run, laws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ebsched::cli
