#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace riesz::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

/// Environment variable naming the base directory for relative output paths.
inline constexpr const char* kOutputDirEnv = "RIESZ_OUTPUT_DIR";

/// Executes one subcommand. args excludes the program name. Returns 0 on
/// success, 1 on a domain error (its name is printed to err), 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Applies kOutputDirEnv to relative paths and creates missing parent directories.
std::string resolve_output_path(const std::string& path);

}  // namespace riesz::cli
