#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nfold/cli/config.hpp"

namespace nfold::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_build = 3, exit_verification = 4 };

enum class Format { json, csv };

struct CommandOptions {
  Format format = Format::json;
  /// Overrides the config seed.
  std::optional<std::uint64_t> seed;
  /// Builtin mass profile for the mass-independence check.
  std::optional<std::string> compare_mass;
};

struct CommandResult {
  int exit_code = exit_ok;
  /// Report, table or error record.
  std::string output;
};

/// Runs one of build, potential, sector, spectrum, verify, oracle-compare.
/// Library errors are turned into {"error": {"kind", "message"}} records
/// with the matching exit code.
CommandResult run_command(const std::string& command, const RunConfig& config, const CommandOptions& options);

/// Loads the config first; config errors give exit code 2.
CommandResult run_command(const std::string& command, const std::string& config_path, const CommandOptions& options);

/// Shortest round-trip decimal form, with ".0" appended to integral values.
std::string format_double(double x);

}  // namespace nfold::cli
