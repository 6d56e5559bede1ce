#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "nfold/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Build and certify N-fold supersymmetric position-dependent-mass systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format = "json";
  std::string out_path;
  std::uint64_t seed = 0;
  std::string compare_mass;

  const std::pair<const char*, const char*> commands[] = {
      {"build", "Build the system and print a summary"},
      {"potential", "Tabulate U- and U+ over the window"},
      {"sector", "Tabulate the solvable sector functions over the window"},
      {"spectrum", "Matrix of H on both sectors and its eigenvalues"},
      {"verify", "Run every certificate and report residuals"},
      {"oracle-compare", "Compare the algebraic spectrum with a finite-difference solve"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Config file (JSON, schema 1)")->required();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write output to this file instead of stdout");
    sub->add_option("--seed", seed, "Seed for the random test functions");
    sub->add_option("--compare-mass", compare_mass, "Builtin mass profile for the mass-independence check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nfold::cli::exit_config;
  }

  const CLI::App* sub = app.get_subcommands().front();
  nfold::cli::CommandOptions options;
  options.format = format == "csv" ? nfold::cli::Format::csv : nfold::cli::Format::json;
  if (sub->count("--seed")) options.seed = seed;
  if (sub->count("--compare-mass")) options.compare_mass = compare_mass;

  const auto result = nfold::cli::run_command(sub->get_name(), config_path, options);
  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return nfold::cli::exit_config;
    }
    out << result.output;
  }
  if (result.exit_code != nfold::cli::exit_ok && !out_path.empty()) std::cerr << result.output;
  return result.exit_code;
}
