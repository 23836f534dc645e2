#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace epi::cli {

/// Exit statuses shared by every command.
enum Status : int { kTrue = 0, kFalse = 1, kUsage = 2 };

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace epi::cli
