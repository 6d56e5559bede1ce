#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfold/type_a.hpp"

namespace nfold::cli {

enum class SystemKind { type_a, generic };

struct GenericSpec {
  /// Expressions in z.
  std::string A;
  std::string B;
  std::string C;
  std::vector<std::string> basis;
  /// Expression in q; replaces the integrated change of variable.
  std::optional<std::string> z_of_q;
  BuildOptions options;
};

struct MassSpec {
  std::string profile = "constant";
  MassParams params;
  /// Source text of a custom m(q).
  std::optional<std::string> expression;
};

struct Tolerances {
  double kernel = 1e-8;
  double intertwining = 1e-8;
  double matrix_fit = 1e-8;
  double anticommutator = 1e-6;
  double partner_difference = 1e-8;
  double conditions = 1e-8;
  double mass_independence = 1e-7;
  double oracle = 1e-3;
};

struct OracleSpec {
  /// Explicit interval; when absent the window is widened until the sector
  /// functions fall below 1e-10 at both ends.
  std::optional<double> qa;
  std::optional<double> qb;
  int grid_size = 4000;
  /// Number of FD eigenvalues; 0 means N + 4.
  int eigenvalues = 0;
  double max_width = 40.0;
};

struct RunConfig {
  SystemKind kind = SystemKind::type_a;
  TypeAConfig type_a;
  GenericSpec generic;
  MassSpec mass;
  std::optional<Window> window;
  Tolerances tolerances;
  OracleSpec oracle;
  std::uint64_t seed = 42;
};

/// Validates a schema-1 document. Unknown keys, missing required keys and
/// ill-typed values raise ConfigError; malformed expressions raise
/// ParseError.
RunConfig parse_config(const nlohmann::json& document);

/// Reads and parses a config file.
RunConfig load_config(const std::string& path);

/// Mass profile described by the config.
MassProfile make_mass(const MassSpec& spec);

/// Gauged data described by a generic system block.
GaugedData make_gauged_data(const GenericSpec& spec);

}  // namespace nfold::cli
