#include "nfold/cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>

#include "nfold/error.hpp"
#include "nfold/oracle.hpp"
#include "nfold/verify.hpp"

namespace nfold::cli {

namespace {

using ojson = nlohmann::ordered_json;

/// Decay threshold below which sector functions count as vanishing at the
/// ends of the oracle interval.
constexpr double decay_threshold = 1e-10;

enum class Phase { build, check };

/// A library error raised while running a named check.
struct CheckFailure {
  std::string check;
  Error error;
};

int exit_code_for(ErrorKind kind, Phase phase) {
  switch (kind) {
    case ErrorKind::ConfigError:
    case ErrorKind::ParseError:
    case ErrorKind::BadParams:
    case ErrorKind::NotHermitianInput:
      return exit_config;
    default:
      return phase == Phase::build ? exit_build : exit_verification;
  }
}

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson complex_list(const std::vector<Complex>& v) {
  ojson out = ojson::array();
  for (Complex z : v) out.push_back(complex_json(z));
  return out;
}

ojson matrix_json(const Eigen::MatrixXcd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

std::string dump(const ojson& doc) { return doc.dump(2) + "\n"; }

CommandResult error_result(const Error& e, int code, const std::string& check = {}) {
  ojson err;
  err["kind"] = std::string(to_string(e.kind()));
  err["message"] = e.what();
  if (!check.empty()) err["check"] = check;
  ojson doc;
  doc["error"] = err;
  return {code, dump(doc)};
}

ojson system_json(const RunConfig& cfg) {
  ojson s;
  if (cfg.kind == SystemKind::type_a) {
    const TypeAConfig& t = cfg.type_a;
    s["type"] = "typeA";
    s["case"] = to_string(t.which);
    s["N"] = t.N;
    s["b"] = complex_list({t.b.begin(), t.b.end()});
    s["R"] = complex_json(t.R);
    if (t.which == TypeACase::III || t.which == TypeACase::IV) s["case_params"] = {{"nu", complex_json(t.nu)}};
    if (t.which == TypeACase::V) s["case_params"] = {{"g2", complex_json(t.g2)}, {"g3", complex_json(t.g3)}};
  } else {
    const GenericSpec& g = cfg.generic;
    s["type"] = "generic";
    s["N"] = g.basis.size();
    s["A"] = g.A;
    s["B"] = g.B;
    s["C"] = g.C;
    s["basis"] = g.basis;
    s["z_anchor"] = complex_json(g.options.z_anchor);
    s["branch"] = g.options.branch;
    if (g.z_of_q) s["z_of_q"] = *g.z_of_q;
  }
  return s;
}

ojson mass_json(const MassSpec& m) {
  ojson out;
  out["profile"] = m.profile;
  if (m.profile == "constant") out["c"] = complex_json(m.params.c);
  if (m.profile == "exp_scale" || m.profile == "sech_like") out["alpha"] = complex_json(m.params.alpha);
  if (m.expression) out["m"] = *m.expression;
  if (m.profile == "custom") out["anchor"] = complex_json(m.params.anchor);
  if (m.params.u_anchor) out["u_anchor"] = complex_json(*m.params.u_anchor);
  return out;
}

ojson window_json(const Window& w) {
  return {{"qmin", w.qmin}, {"qmax", w.qmax}, {"samples", w.samples}, {"anchor", w.anchor}};
}

struct Built {
  BuiltSystem system;
  std::optional<TypeASystem> type_a;
};

Built build_system(const RunConfig& cfg, const MassProfile& mass) {
  Built out;
  if (cfg.kind == SystemKind::type_a) {
    const Window window = cfg.window ? *cfg.window : default_window(cfg.type_a, mass);
    out.type_a = build_type_a(cfg.type_a, mass, window);
    out.system = out.type_a->system;
  } else {
    out.system = build(make_gauged_data(cfg.generic), mass, *cfg.window, cfg.generic.options);
  }
  return out;
}

ojson preamble(const std::string& command, const RunConfig& cfg, const BuiltSystem& sys) {
  ojson doc;
  doc["command"] = command;
  doc["system"] = system_json(cfg);
  doc["mass"] = mass_json(cfg.mass);
  doc["window"] = window_json(sys.window);
  return doc;
}

/// max_q |a(q) - b(q)| / max(1, |b(q)|).
double relative_deviation(const std::function<Complex(double)>& a, const ScalarFunction& b,
                          const std::vector<double>& points) {
  double worst = 0.0;
  for (double q : points) {
    const Complex ref = b(q);
    worst = std::max(worst, std::abs(a(q) - ref) / std::max(1.0, std::abs(ref)));
  }
  return worst;
}

ojson cmd_build(const RunConfig& cfg, const Built& built) {
  const BuiltSystem& sys = built.system;
  ojson doc = preamble("build", cfg, sys);
  doc["N"] = sys.N;
  if (built.type_a) {
    doc["case"] = to_string(cfg.type_a.which);
    doc["is_solvable"] = built.type_a->is_solvable;
  } else {
    doc["is_solvable"] = nullptr;
  }
  const std::vector<double> points = sys.window.points();
  ojson w_top;
  w_top["q"] = points;
  std::vector<double> re, im;
  for (double q : points) {
    const Complex w = sys.w_top(q);
    re.push_back(w.real());
    im.push_back(w.imag());
  }
  w_top["re"] = re;
  w_top["im"] = im;
  doc["w_top"] = w_top;

  const double a = sys.window.anchor;
  ojson anchors;
  anchors["q"] = a;
  anchors["z"] = complex_json(sys.z(a));
  anchors["gauge_minus"] = complex_json(sys.gauge_minus(a));
  anchors["gauge_plus"] = complex_json(sys.gauge_plus(a));
  anchors["sector_minus_first"] = complex_json(sys.sector_minus.front()(a));
  anchors["sector_plus_first"] = complex_json(sys.sector_plus.front()(a));
  doc["gauge_anchors"] = anchors;

  if (built.type_a) {
    const MassProfile& mass = sys.mass;
    const TypeAConfig& t = cfg.type_a;
    ojson dev;
    dev["minus"] = relative_deviation([&](double q) { return case_potential(t, mass, Sign::minus, q); },
                                      sys.U_minus, points);
    dev["plus"] = relative_deviation([&](double q) { return case_potential(t, mass, Sign::plus, q); },
                                     sys.U_plus, points);
    doc["closed_form_deviation"] = dev;
  }
  return doc;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Table potential_table(const BuiltSystem& sys) {
  Table t{{"q", "U_minus_re", "U_minus_im", "U_plus_re", "U_plus_im"}, {}};
  for (double q : sys.window.points()) {
    const Complex um = sys.U_minus(q);
    const Complex up = sys.U_plus(q);
    t.rows.push_back({q, um.real(), um.imag(), up.real(), up.imag()});
  }
  return t;
}

Table sector_table(const BuiltSystem& sys) {
  Table t;
  t.columns.push_back("q");
  for (const auto& [label, sector] : {std::pair{"minus", &sys.sector_minus}, std::pair{"plus", &sys.sector_plus}}) {
    for (std::size_t k = 0; k < sector->size(); ++k) {
      const std::string stem = std::string("phi_") + label + "_" + std::to_string(k);
      t.columns.push_back(stem + "_re");
      t.columns.push_back(stem + "_im");
    }
  }
  for (double q : sys.window.points()) {
    std::vector<double> row{q};
    for (const auto* sector : {&sys.sector_minus, &sys.sector_plus}) {
      for (const ScalarFunction& phi : *sector) {
        const Complex v = phi(q);
        row.push_back(v.real());
        row.push_back(v.imag());
      }
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string render_table(const std::string& command, const RunConfig& cfg, const BuiltSystem& sys, const Table& t,
                         Format format) {
  if (format == Format::csv) {
    std::ostringstream out;
    for (std::size_t j = 0; j < t.columns.size(); ++j) out << (j ? "," : "") << t.columns[j];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
      out << "\n";
    }
    return out.str();
  }
  ojson doc = preamble(command, cfg, sys);
  doc["columns"] = t.columns;
  doc["rows"] = t.rows;
  return dump(doc);
}

ojson spectrum_json(const SpectrumReport& r, double tolerance) {
  ojson out;
  out["matrix"] = matrix_json(r.matrix);
  out["eigenvalues"] = complex_list(r.eigenvalues);
  out["charpoly"] = complex_list(r.charpoly);
  out["fit_residual"] = r.fit_residual;
  out["companion_residual"] = r.companion_residual;
  out["condition"] = r.condition;
  out["tolerance"] = tolerance;
  out["passed"] = r.fit_residual <= tolerance && r.companion_residual <= tolerance;
  return out;
}

SpectrumReport extract(const BuiltSystem& sys, Sign sign, const SampleGrid& grid, double tolerance,
                       const char* check) {
  try {
    return extract_matrix(sys, sign, grid, tolerance);
  } catch (const Error& e) {
    throw CheckFailure{check, e};
  }
}

ojson cmd_spectrum(const RunConfig& cfg, const BuiltSystem& sys, bool& passed) {
  ojson doc = preamble("spectrum", cfg, sys);
  const SampleGrid grid = SampleGrid::from_window(sys.window);
  ojson sectors;
  for (const auto& [label, sign] : {std::pair{"minus", Sign::minus}, std::pair{"plus", Sign::plus}}) {
    sectors[label] = spectrum_json(extract(sys, sign, grid, cfg.tolerances.matrix_fit, label), cfg.tolerances.matrix_fit);
    passed = passed && sectors[label]["passed"].get<bool>();
  }
  doc["sectors"] = sectors;
  doc["passed"] = passed;
  return doc;
}

/// Runs one named check; library errors become a failed entry.
void run_check(ojson& checks, std::vector<std::string>& failed, const std::string& name,
               const std::function<void(ojson&)>& body) {
  ojson entry;
  entry["name"] = name;
  try {
    body(entry);
  } catch (const Error& e) {
    entry["passed"] = false;
    entry["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  } catch (const CheckFailure& f) {
    entry["passed"] = false;
    entry["error"] = {{"kind", std::string(to_string(f.error.kind()))}, {"message", f.error.what()}};
  }
  if (!entry["passed"].get<bool>()) failed.push_back(name);
  checks.push_back(entry);
}

void set_residual(ojson& entry, double residual, double tolerance) {
  entry["residual"] = residual;
  entry["tolerance"] = tolerance;
  entry["passed"] = residual <= tolerance;
}

ojson cmd_verify(const RunConfig& cfg, const Built& built, const CommandOptions& options, std::uint64_t seed,
                 std::vector<std::string>& failed) {
  const BuiltSystem& sys = built.system;
  const Tolerances& tol = cfg.tolerances;
  ojson doc = preamble("verify", cfg, sys);
  doc["seed"] = seed;
  const SampleGrid grid = SampleGrid::from_window(sys.window);
  const double center = 0.5 * (sys.window.qmin + sys.window.qmax);
  const auto tests = seeded_test_functions(sys.N, seed, center);
  ojson checks = ojson::array();

  run_check(checks, failed, "kernel", [&](ojson& e) { set_residual(e, check_kernel(sys, grid), tol.kernel); });
  run_check(checks, failed, "intertwining", [&](ojson& e) {
    const IntertwiningReport r = check_intertwining(sys, grid, tests);
    e["direct"] = r.direct;
    e["transposed"] = r.transposed;
    set_residual(e, r.max(), tol.intertwining);
  });
  run_check(checks, failed, "partner_difference",
            [&](ojson& e) { set_residual(e, check_partner_difference(sys, grid), tol.partner_difference); });
  std::optional<SpectrumReport> minus;
  for (const auto& [name, sign] : {std::pair{"spectrum_minus", Sign::minus}, std::pair{"spectrum_plus", Sign::plus}}) {
    run_check(checks, failed, name, [&](ojson& e) {
      const SpectrumReport r = extract_matrix(sys, sign, grid, tol.matrix_fit);
      e["eigenvalues"] = complex_list(r.eigenvalues);
      e["fit_residual"] = r.fit_residual;
      e["companion_residual"] = r.companion_residual;
      set_residual(e, std::max(r.fit_residual, r.companion_residual), tol.matrix_fit);
      if (sign == Sign::minus) minus = r;
    });
  }
  run_check(checks, failed, "anticommutator", [&](ojson& e) {
    const AntiCommutatorReport r = check_anticommutator(sys, grid, tests);
    e["minus"] = r.minus;
    e["plus"] = r.plus;
    e["minus_opposite_sign"] = r.minus_opposite_sign;
    e["plus_opposite_sign"] = r.plus_opposite_sign;
    set_residual(e, r.max(), tol.anticommutator);
  });
  if (built.type_a) {
    run_check(checks, failed, "type_a_conditions", [&](ojson& e) {
      const TypeAConditionReport r = verify_type_a_conditions(*built.type_a, sys.window.points());
      e["first"] = r.first;
      e["second"] = r.second;
      e["z_space"] = r.z_space;
      set_residual(e, std::max({r.first, r.second, r.z_space}), tol.conditions);
    });
  }
  if (options.compare_mass) {
    run_check(checks, failed, "mass_independence", [&](ojson& e) {
      MassSpec spec;
      spec.profile = *options.compare_mass;
      const MassProfile other_mass = make_mass(spec);
      BuiltSystem other;
      if (built.type_a) {
        other = build_type_a(cfg.type_a, other_mass, default_window(cfg.type_a, other_mass)).system;
      } else {
        other = build(make_gauged_data(cfg.generic), other_mass, *cfg.window, cfg.generic.options);
      }
      if (!minus) throw Error(ErrorKind::InvarianceViolated, "no reference matrix");
      const SpectrumReport r =
          extract_matrix(other, Sign::minus, SampleGrid::from_window(other.window), tol.matrix_fit);
      e["compare_mass"] = *options.compare_mass;
      e["compare_window"] = window_json(other.window);
      e["eigenvalues"] = complex_list(r.eigenvalues);
      e["max_entry_delta"] = max_entry_delta(minus->matrix, r.matrix);
      set_residual(e, max_entry_delta(minus->matrix, r.matrix), tol.mass_independence);
    });
  }
  doc["checks"] = checks;
  doc["failed"] = failed;
  doc["passed"] = failed.empty();
  return doc;
}

ojson cmd_oracle(const RunConfig& cfg, const BuiltSystem& sys, bool& passed) {
  ojson doc = preamble("oracle-compare", cfg, sys);
  const OracleSpec& o = cfg.oracle;
  const SampleGrid grid = SampleGrid::from_window(sys.window);
  const SpectrumReport spectrum = extract(sys, Sign::minus, grid, cfg.tolerances.matrix_fit, "spectrum_minus");

  std::vector<double> algebraic;
  for (Complex lambda : spectrum.eigenvalues) {
    if (std::abs(lambda.imag()) > 1e-8 * (1.0 + std::abs(lambda.real()))) {
      throw Error(ErrorKind::NotHermitianInput, "algebraic eigenvalue " + format_double(lambda.real()) + " + " +
                                                    format_double(lambda.imag()) + "i is not real");
    }
    algebraic.push_back(lambda.real());
  }

  ojson interval;
  double qa = 0.0, qb = 0.0;
  if (o.qa) {
    qa = *o.qa;
    qb = *o.qb;
    interval["source"] = "config";
  } else {
    const WidenedInterval w = widen_interval(sys.sector_minus, sys.window.qmin, sys.window.qmax, o.max_width,
                                             decay_threshold);
    qa = w.qa;
    qb = w.qb;
    interval["source"] = "widened";
    interval["satisfied"] = w.satisfied;
  }
  interval["qa"] = qa;
  interval["qb"] = qb;
  doc["interval"] = interval;

  const DecayReport decay = decay_probe(sys, Sign::minus, {qa, qb});
  bool decays = true;
  for (const auto& values : decay.values) {
    for (double v : values) decays = decays && std::isfinite(v) && v <= decay_threshold;
  }
  doc["decay"] = {{"points", decay.points}, {"values", decay.values}, {"threshold", decay_threshold},
                  {"passed", decays}};

  const int k = o.eigenvalues > 0 ? o.eigenvalues : sys.N + 4;
  const FDReport fd = solve_fd({sys.mass, sys.U_minus, qa, qb, o.grid_size}, k);
  doc["grid_size"] = fd.grid_size;
  doc["fd"] = {{"coarse", fd.eigenvalues}, {"fine", fd.eigenvalues_fine}, {"extrapolated", fd.extrapolated}};
  doc["algebraic"] = algebraic;

  const auto matches = match_spectrum(algebraic, fd.extrapolated, cfg.tolerances.oracle);
  ojson match_list = ojson::array();
  std::vector<double> matched;
  bool all = true;
  for (const SpectrumMatch& m : matches) {
    match_list.push_back({{"algebraic", m.algebraic}, {"fd", m.fd}, {"delta", m.delta}, {"matched", m.matched}});
    if (m.matched) matched.push_back(m.algebraic);
    all = all && m.matched;
  }
  doc["matches"] = match_list;
  doc["matched"] = matched;
  doc["tolerance"] = cfg.tolerances.oracle;
  // Sector functions that do not decay need not be eigenfunctions of the
  // Dirichlet problem, so only decaying sectors are required to match.
  doc["required"] = decays;
  passed = !decays || all;
  doc["passed"] = passed;
  return doc;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

CommandResult run_command(const std::string& command, const RunConfig& config, const CommandOptions& options) {
  static const char* const known[] = {"build", "potential", "sector", "spectrum", "verify", "oracle-compare"};
  if (std::find(std::begin(known), std::end(known), command) == std::end(known)) {
    return error_result(Error(ErrorKind::ConfigError, "unknown command " + command), exit_config);
  }
  if (options.format == Format::csv && command != "potential" && command != "sector") {
    return error_result(Error(ErrorKind::ConfigError, "csv output is only available for tables"), exit_config);
  }
  const std::uint64_t seed = options.seed.value_or(config.seed);

  Built built;
  try {
    if (options.compare_mass) {
      MassSpec spec;
      spec.profile = *options.compare_mass;
      (void)make_mass(spec);
    }
    built = build_system(config, make_mass(config.mass));
    if (command == "build") return {exit_ok, dump(cmd_build(config, built))};
    if (command == "potential") {
      return {exit_ok, render_table(command, config, built.system, potential_table(built.system), options.format)};
    }
    if (command == "sector") {
      return {exit_ok, render_table(command, config, built.system, sector_table(built.system), options.format)};
    }
  } catch (const Error& e) {
    return error_result(e, exit_code_for(e.kind(), Phase::build));
  }

  try {
    bool passed = true;
    if (command == "spectrum") {
      const ojson doc = cmd_spectrum(config, built.system, passed);
      return {passed ? exit_ok : exit_verification, dump(doc)};
    }
    if (command == "verify") {
      std::vector<std::string> failed;
      const ojson doc = cmd_verify(config, built, options, seed, failed);
      return {failed.empty() ? exit_ok : exit_verification, dump(doc)};
    }
    const ojson doc = cmd_oracle(config, built.system, passed);
    return {passed ? exit_ok : exit_verification, dump(doc)};
  } catch (const CheckFailure& f) {
    return error_result(f.error, exit_code_for(f.error.kind(), Phase::check), f.check);
  } catch (const Error& e) {
    return error_result(e, exit_code_for(e.kind(), Phase::check));
  }
}

CommandResult run_command(const std::string& command, const std::string& config_path, const CommandOptions& options) {
  RunConfig config;
  try {
    config = load_config(config_path);
  } catch (const Error& e) {
    return error_result(e, exit_config);
  }
  return run_command(command, config, options);
}

}  // namespace nfold::cli
