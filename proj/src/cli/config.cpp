#include "nfold/cli/config.hpp"

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>

#include "nfold/cli/expression.hpp"
#include "nfold/error.hpp"

namespace nfold::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

/// Rejects keys outside `allowed` and requires an object.
void check_keys(const json& node, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!node.is_object()) config_error(path, "expected an object");
  const std::set<std::string> names(allowed.begin(), allowed.end());
  for (const auto& [key, value] : node.items()) {
    if (!names.contains(key)) config_error(path + "." + key, "unknown key");
  }
}

const json& required(const json& node, const std::string& path, const char* key) {
  if (!node.contains(key)) config_error(path + "." + key, "missing required key");
  return node.at(key);
}

double real_value(const json& v, const std::string& path) {
  if (!v.is_number()) config_error(path, "expected a number");
  return v.get<double>();
}

int int_value(const json& v, const std::string& path) {
  if (!v.is_number_integer()) config_error(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) config_error(path, "out of range");
  return static_cast<int>(x);
}

/// A number or a pair [re, im].
Complex complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  config_error(path, "expected a number or [re, im]");
}

std::string string_value(const json& v, const std::string& path) {
  if (!v.is_string()) config_error(path, "expected a string");
  return v.get<std::string>();
}

/// Expression text: a string, or a number written directly.
std::string expression_text(const json& v, const std::string& path) {
  if (v.is_number()) return v.dump();
  return string_value(v, path);
}

void parse_type_a(const json& node, RunConfig& cfg) {
  check_keys(node, "system", {"type", "case", "N", "b", "R", "case_params"});
  TypeAConfig& t = cfg.type_a;
  t.which = parse_case(string_value(required(node, "system", "case"), "system.case"));
  t.N = int_value(required(node, "system", "N"), "system.N");
  if (node.contains("b")) {
    const json& b = node.at("b");
    if (!b.is_array() || b.size() != 3) config_error("system.b", "expected [b2, b1, b0]");
    for (std::size_t k = 0; k < 3; ++k) t.b[k] = complex_value(b[k], "system.b[" + std::to_string(k) + "]");
  }
  if (node.contains("R")) t.R = complex_value(node.at("R"), "system.R");
  if (node.contains("case_params")) {
    const json& p = node.at("case_params");
    switch (t.which) {
      case TypeACase::III:
      case TypeACase::IV:
        check_keys(p, "system.case_params", {"nu"});
        if (p.contains("nu")) t.nu = complex_value(p.at("nu"), "system.case_params.nu");
        break;
      case TypeACase::V:
        check_keys(p, "system.case_params", {"g2", "g3"});
        if (p.contains("g2")) t.g2 = complex_value(p.at("g2"), "system.case_params.g2");
        if (p.contains("g3")) t.g3 = complex_value(p.at("g3"), "system.case_params.g3");
        break;
      default:
        check_keys(p, "system.case_params", {});
    }
  }
  try {
    validate(t);
  } catch (const Error& e) {
    config_error("system", e.what());
  }
}

void parse_generic(const json& node, RunConfig& cfg) {
  check_keys(node, "system", {"type", "A", "B", "C", "basis", "z_anchor", "branch", "z_of_q", "invariance_tolerance"});
  GenericSpec& g = cfg.generic;
  g.A = expression_text(required(node, "system", "A"), "system.A");
  g.B = node.contains("B") ? expression_text(node.at("B"), "system.B") : "0";
  g.C = node.contains("C") ? expression_text(node.at("C"), "system.C") : "0";
  const json& basis = required(node, "system", "basis");
  if (!basis.is_array() || basis.empty()) config_error("system.basis", "expected a non-empty array");
  for (std::size_t k = 0; k < basis.size(); ++k) {
    g.basis.push_back(expression_text(basis[k], "system.basis[" + std::to_string(k) + "]"));
  }
  if (node.contains("z_anchor")) g.options.z_anchor = complex_value(node.at("z_anchor"), "system.z_anchor");
  if (node.contains("branch")) {
    const double b = real_value(node.at("branch"), "system.branch");
    if (b != 1.0 && b != -1.0) config_error("system.branch", "must be 1 or -1");
    g.options.branch = b;
  }
  if (node.contains("z_of_q")) g.z_of_q = string_value(node.at("z_of_q"), "system.z_of_q");
  if (node.contains("invariance_tolerance")) {
    g.options.invariance_tolerance = real_value(node.at("invariance_tolerance"), "system.invariance_tolerance");
  }
  (void)make_gauged_data(g);
  if (g.z_of_q) g.options.z_of_q = parse_expression(*g.z_of_q, "q");
}

void parse_mass(const json& node, RunConfig& cfg) {
  check_keys(node, "mass", {"profile", "c", "alpha", "m", "anchor", "u_anchor"});
  MassSpec& m = cfg.mass;
  m.profile = string_value(required(node, "mass", "profile"), "mass.profile");
  if (node.contains("c")) m.params.c = complex_value(node.at("c"), "mass.c");
  if (node.contains("alpha")) m.params.alpha = complex_value(node.at("alpha"), "mass.alpha");
  if (node.contains("anchor")) m.params.anchor = complex_value(node.at("anchor"), "mass.anchor");
  if (node.contains("u_anchor")) m.params.u_anchor = complex_value(node.at("u_anchor"), "mass.u_anchor");
  if (node.contains("m")) {
    if (m.profile != "custom") config_error("mass.m", "only allowed with profile \"custom\"");
    m.expression = expression_text(node.at("m"), "mass.m");
    m.params.m = parse_expression(*m.expression, "q");
  } else if (m.profile == "custom") {
    config_error("mass.m", "missing required key");
  }
  try {
    (void)make_mass(m);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BadParams) throw;
    config_error("mass", e.what());
  }
}

void parse_window(const json& node, RunConfig& cfg) {
  check_keys(node, "window", {"qmin", "qmax", "samples", "anchor"});
  Window w;
  w.qmin = real_value(required(node, "window", "qmin"), "window.qmin");
  w.qmax = real_value(required(node, "window", "qmax"), "window.qmax");
  if (!(w.qmin < w.qmax)) config_error("window", "qmin must be below qmax");
  w.samples = node.contains("samples") ? int_value(node.at("samples"), "window.samples") : 41;
  if (w.samples < 2) config_error("window.samples", "must be at least 2");
  w.anchor = node.contains("anchor") ? real_value(node.at("anchor"), "window.anchor") : 0.5 * (w.qmin + w.qmax);
  cfg.window = w;
}

void parse_tolerances(const json& node, RunConfig& cfg) {
  check_keys(node, "tolerances",
             {"kernel", "intertwining", "matrix_fit", "anticommutator", "partner_difference", "conditions",
              "mass_independence", "oracle"});
  Tolerances& t = cfg.tolerances;
  const std::pair<const char*, double*> fields[] = {
      {"kernel", &t.kernel},
      {"intertwining", &t.intertwining},
      {"matrix_fit", &t.matrix_fit},
      {"anticommutator", &t.anticommutator},
      {"partner_difference", &t.partner_difference},
      {"conditions", &t.conditions},
      {"mass_independence", &t.mass_independence},
      {"oracle", &t.oracle},
  };
  for (const auto& [key, field] : fields) {
    if (!node.contains(key)) continue;
    *field = real_value(node.at(key), std::string("tolerances.") + key);
    if (!(*field > 0.0)) config_error(std::string("tolerances.") + key, "must be positive");
  }
}

void parse_oracle(const json& node, RunConfig& cfg) {
  check_keys(node, "oracle", {"qa", "qb", "grid_size", "eigenvalues", "max_width"});
  OracleSpec& o = cfg.oracle;
  if (node.contains("qa") != node.contains("qb")) config_error("oracle", "qa and qb must be given together");
  if (node.contains("qa")) {
    o.qa = real_value(node.at("qa"), "oracle.qa");
    o.qb = real_value(node.at("qb"), "oracle.qb");
    if (!(*o.qa < *o.qb)) config_error("oracle", "qa must be below qb");
  }
  if (node.contains("grid_size")) o.grid_size = int_value(node.at("grid_size"), "oracle.grid_size");
  if (o.grid_size < 200) config_error("oracle.grid_size", "must be at least 200");
  if (node.contains("eigenvalues")) o.eigenvalues = int_value(node.at("eigenvalues"), "oracle.eigenvalues");
  if (o.eigenvalues < 0) config_error("oracle.eigenvalues", "must be non-negative");
  if (node.contains("max_width")) o.max_width = real_value(node.at("max_width"), "oracle.max_width");
}

}  // namespace

RunConfig parse_config(const json& document) {
  check_keys(document, "config", {"schema", "system", "mass", "window", "tolerances", "oracle", "seed"});
  const json& schema = required(document, "config", "schema");
  if (!schema.is_number_integer() || schema.get<std::int64_t>() != 1) config_error("config.schema", "must be 1");

  RunConfig cfg;
  const json& system = required(document, "config", "system");
  if (!system.is_object()) config_error("system", "expected an object");
  const std::string type = string_value(required(system, "system", "type"), "system.type");
  if (type == "typeA") {
    cfg.kind = SystemKind::type_a;
    parse_type_a(system, cfg);
  } else if (type == "generic") {
    cfg.kind = SystemKind::generic;
    parse_generic(system, cfg);
  } else {
    config_error("system.type", "must be \"typeA\" or \"generic\"");
  }
  if (document.contains("mass")) parse_mass(document.at("mass"), cfg);
  if (document.contains("window")) parse_window(document.at("window"), cfg);
  if (cfg.kind == SystemKind::generic && !cfg.window) config_error("window", "required for generic systems");
  if (document.contains("tolerances")) parse_tolerances(document.at("tolerances"), cfg);
  if (document.contains("oracle")) parse_oracle(document.at("oracle"), cfg);
  if (document.contains("seed")) {
    const json& seed = document.at("seed");
    if (!seed.is_number_unsigned()) config_error("config.seed", "expected a non-negative integer");
    cfg.seed = seed.get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open " + path);
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
  return parse_config(document);
}

MassProfile make_mass(const MassSpec& spec) { return builtin_mass_profile(spec.profile, spec.params); }

GaugedData make_gauged_data(const GenericSpec& spec) {
  GaugedData data;
  data.A = parse_expression(spec.A, "z");
  data.B = parse_expression(spec.B, "z");
  data.C = parse_expression(spec.C, "z");
  for (const std::string& b : spec.basis) data.basis.push_back(parse_expression(b, "z"));
  return data;
}

}  // namespace nfold::cli
