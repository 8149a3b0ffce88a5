#ifndef CONVPOW_TOOLS_CLI_HPP
#define CONVPOW_TOOLS_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace convpow::cli {

enum ExitCode : int { kOk = 0, kConfig = 1, kMathDomain = 2, kIo = 3, kSuspect = 4 };

/// Parses "10,20,40", "10..160*2" (geometric) or "100..500+100" (arithmetic). Throws InvalidArgument.
std::vector<std::int64_t> parse_j_list(const std::string& text);

/// ratio:c:<j-list> (t = c j), power:q:<j-list> (t = j^q), list:j@t,j@t,...
std::vector<std::pair<std::int64_t, double>> parse_schedule(const std::string& text);

/// Runs the command line; data goes to `out` (or --out), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace convpow::cli

#endif
