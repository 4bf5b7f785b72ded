#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hrbc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_model_error = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_witness = 3;

/// Runs `hrbc <args...>` (program name excluded) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Same, on the process's standard streams.
int run(const std::vector<std::string>& args);

}  // namespace hrbc::cli
