#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace delayq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

/// Runs one subcommand. `args` excludes the program name. Output files named by
/// flags are written directly; summaries go to `out`, diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

/// Expands every `--args-file PATH` (or `--args-file=PATH`) in place with the
/// file's lines. Each nonblank line not starting with '#' holds one flag,
/// optionally followed by whitespace and its value.
std::vector<std::string> expand_args_files(const std::vector<std::string>& args);

} // namespace delayq::cli
