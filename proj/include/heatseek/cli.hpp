#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heatseek::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;

/// Entry point of the `heatseek` command (subcommands calibrate, scan, synth,
/// eval). `args` excludes the program name. Returns 0 on success, including
/// empty results, and 2 on any input or contract error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace heatseek::cli
