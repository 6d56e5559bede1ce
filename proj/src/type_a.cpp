#include "nfold/type_a.hpp"

#include <cmath>

#include "nfold/error.hpp"

namespace nfold {

namespace {

const ScalarFunction& var() {
  static const ScalarFunction x = ScalarFunction::variable();
  return x;
}

double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

std::vector<ScalarFunction> monomials(const ScalarFunction& x, int N) {
  std::vector<ScalarFunction> out{ScalarFunction::constant(1.0)};
  for (int k = 1; k < N; ++k) out.push_back(pow(x, k));
  return out;
}

std::vector<ScalarFunction> normalized(std::vector<ScalarFunction> fs, double anchor) {
  const Complex n = fs.front()(anchor);
  if (std::abs(n) == 0.0) throw Error(ErrorKind::CaseSingularity, "sector weight vanishes at the anchor");
  for (auto& f : fs) f = f / n;
  return fs;
}

void check_window(const TypeAConfig& config, const MassProfile& mass, const Window& window, const ScalarFunction& f) {
  const ScalarFunction fp = f.derivative(1);
  constexpr int kProbes = 257;
  std::vector<Complex> values;
  values.reserve(kProbes);
  double largest = 0.0;
  for (int i = 0; i < kProbes; ++i) {
    const double q = window.qmin + (window.qmax - window.qmin) * i / (kProbes - 1);
    Complex v;
    try {
      v = fp(mass.u(q));
    } catch (const Error& e) {
      throw Error(ErrorKind::CaseSingularity, "Case " + to_string(config.which) + " is singular near q = " +
                                                  std::to_string(q) + " (" + e.what() + ")");
    }
    if (!std::isfinite(std::abs(v))) {
      throw Error(ErrorKind::CaseSingularity, "Case " + to_string(config.which) + " is singular near q = " +
                                                  std::to_string(q));
    }
    values.push_back(v);
    largest = std::max(largest, std::abs(v));
  }
  for (int i = 0; i < kProbes; ++i) {
    const bool tiny = std::abs(values[i]) < 1e-6 * largest;
    const bool crosses = i > 0 && values[i].real() * values[i - 1].real() < 0.0 &&
                         std::abs(values[i].imag()) < 1e-12 * largest;
    if (tiny || crosses) {
      const double q = window.qmin + (window.qmax - window.qmin) * i / (kProbes - 1);
      throw Error(ErrorKind::CaseSingularity,
                  "Case " + to_string(config.which) + ": f'(u(q)) vanishes in the window near q = " + std::to_string(q));
    }
  }
}

}  // namespace

std::string to_string(TypeACase c) {
  switch (c) {
    case TypeACase::I: return "I";
    case TypeACase::II: return "II";
    case TypeACase::III: return "III";
    case TypeACase::IV: return "IV";
    case TypeACase::V: return "V";
  }
  return "?";
}

TypeACase parse_case(const std::string& name) {
  if (name == "I") return TypeACase::I;
  if (name == "II") return TypeACase::II;
  if (name == "III") return TypeACase::III;
  if (name == "IV") return TypeACase::IV;
  if (name == "V") return TypeACase::V;
  throw Error(ErrorKind::BadParams, "unknown type A case '" + name + "'");
}

void validate(const TypeAConfig& config) {
  if (config.N < 1) throw Error(ErrorKind::BadParams, "N must be a positive integer");
  if ((config.which == TypeACase::III || config.which == TypeACase::IV) && std::abs(config.nu) == 0.0) {
    throw Error(ErrorKind::BadParams, "Cases III and IV need nu != 0");
  }
  if (config.which == TypeACase::V) {
    const Complex disc = config.g2 * config.g2 * config.g2 - 27.0 * config.g3 * config.g3;
    if (std::abs(disc) == 0.0) throw Error(ErrorKind::BadParams, "Case V needs g2^3 - 27 g3^2 != 0");
  }
}

std::array<Complex, 5> canonical_a(const TypeAConfig& c) {
  switch (c.which) {
    case TypeACase::I: return {0.0, 0.0, 0.0, 0.0, 0.5};
    case TypeACase::II: return {0.0, 0.0, 0.0, 2.0, 0.0};
    case TypeACase::III: return {0.0, 0.0, 2.0 * c.nu, 0.0, 0.0};
    case TypeACase::IV: return {0.0, 0.0, 2.0 * c.nu, 0.0, -2.0 * c.nu};
    case TypeACase::V: return {0.0, 2.0, 0.0, -c.g2 / 2.0, -c.g3 / 2.0};
  }
  return {};
}

bool is_solvable(const TypeAConfig& config) {
  if (config.which == TypeACase::V) return false;
  return config.b2() == 0.0;
}

GaugedData type_a_gauged_data(const TypeAConfig& config) {
  validate(config);
  const auto a = canonical_a(config);
  const double N = config.N;
  const ScalarFunction& z = var();
  const ScalarFunction A = polynomial({a[4], a[3], a[2], a[1], a[0]});
  const ScalarFunction Q = polynomial({config.b0(), config.b1(), config.b2()});
  GaugedData d;
  d.A = A;
  d.B = Q - (N - 2.0) / 2.0 * A.derivative(1);
  d.C = (N - 1.0) * (N - 2.0) / 12.0 * A.derivative(2) - (N - 1.0) / 2.0 * Q.derivative(1) + config.R;
  d.basis = monomials(z, config.N);
  return d;
}

ScalarFunction case_map(const TypeAConfig& config) {
  validate(config);
  const ScalarFunction& u = var();
  const Complex r = std::sqrt(config.nu);
  switch (config.which) {
    case TypeACase::I: return u;
    case TypeACase::II: return u * u;
    case TypeACase::III: return exp(2.0 * r * u);
    case TypeACase::IV: return cosh(2.0 * r * u);
    case TypeACase::V: return Weierstrass(config.g2, config.g3).function().compose(u);
  }
  return u;
}

double invert_u(const MassProfile& mass, double target) {
  auto u = [&](double q) { return mass.u(q).real(); };
  double lo = -1.0, hi = 1.0;
  for (int i = 0; i < 200 && u(lo) > target; ++i) lo = hi - 2.0 * (hi - lo);
  for (int i = 0; i < 200 && u(hi) < target; ++i) hi = lo + 2.0 * (hi - lo);
  if (!(u(lo) <= target && target <= u(hi))) {
    throw Error(ErrorKind::BadParams, "u(q) = " + std::to_string(target) + " has no real solution");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (u(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Window default_window(const TypeAConfig& config, const MassProfile& mass, int samples) {
  double ua = 0.2, ub = 1.2;
  switch (config.which) {
    case TypeACase::I: break;
    case TypeACase::II: ua = 0.4; break;
    case TypeACase::III: break;
    case TypeACase::IV: ua = 0.3; break;
    case TypeACase::V: {
      const double w1 = Weierstrass(config.g2, config.g3).real_half_period();
      ua = 0.25 * w1;
      ub = 0.75 * w1;
      break;
    }
  }
  Window w;
  w.qmin = invert_u(mass, ua);
  w.qmax = invert_u(mass, ub);
  w.anchor = invert_u(mass, 0.5 * (ua + ub));
  w.samples = samples;
  return w;
}

ScalarFunction type_a_potential(int N, const ScalarFunction& E, const ScalarFunction& W, const ScalarFunction& m,
                                Complex R, Sign sign) {
  const double n = N;
  const ScalarFunction m1 = m.derivative(1);
  const ScalarFunction m2 = m.derivative(2);
  const ScalarFunction E1 = E.derivative(1);
  const ScalarFunction W1 = W.derivative(1);
  return pow(W, 2) / (2.0 * m) - (n * n - 1.0) / (24.0 * m) * (2.0 * E1 - pow(E, 2)) +
         (n * n + 2.0) / 24.0 * m2 / pow(m, 2) - (5.0 * n * n + 16.0) / 96.0 * pow(m1, 2) / pow(m, 3) +
         sign_value(sign) * n * (W1 / (2.0 * m) - m1 * W / (4.0 * pow(m, 2))) - R;
}

TypeASystem build_type_a(const TypeAConfig& config, const MassProfile& mass, const Window& window) {
  validate(config);
  const int N = config.N;
  const double n = N;
  TypeASystem out;
  out.config = config;
  out.f = case_map(config);
  out.is_solvable = is_solvable(config);
  out.gauged = type_a_gauged_data(config);
  check_window(config, mass, window, out.f);

  BuiltSystem& s = out.system;
  s.N = N;
  s.mass = mass;
  s.window = window;
  const ScalarFunction& m = mass.m;
  const ScalarFunction m1 = m.derivative(1);
  s.z = out.f.compose(mass.u);
  const ScalarFunction zp = s.z.derivative(1);
  s.E = s.z.derivative(2) / zp;
  const ScalarFunction Q = polynomial({config.b0(), config.b1(), config.b2()});
  s.W = -m * Q.compose(s.z) / zp;

  const ScalarFunction shift = s.W - n * m1 / (4.0 * m);
  LinearDiffOp product = LinearDiffOp::identity();
  for (int k = 0; k < N; ++k) {
    const LinearDiffOp factor = LinearDiffOp::from_coefficients({shift + (n - 1.0 - 2.0 * k) / 2.0 * s.E,
                                                                 ScalarFunction::constant(1.0)});
    product = k == 0 ? factor : factor * product;
  }
  s.P = pow(m, Complex(-n / 2.0)) * product;
  s.P_t = s.P.transpose();

  s.U_minus = type_a_potential(N, s.E, s.W, m, config.R, Sign::minus);
  s.U_plus = type_a_potential(N, s.E, s.W, m, config.R, Sign::plus);
  const ScalarFunction c1 = m1 / (2.0 * pow(m, 2));
  const ScalarFunction c2 = -1.0 / (2.0 * m);
  s.H_minus = LinearDiffOp::from_coefficients({s.U_minus, c1, c2});
  s.H_plus = LinearDiffOp::from_coefficients({s.U_plus, c1, c2});

  s.gauge_prime_minus = -n * m1 / (4.0 * m) + (n - 1.0) / 2.0 * s.E + s.W;
  s.gauge_prime_plus = -n * m1 / (4.0 * m) + (n - 1.0) / 2.0 * s.E - s.W;
  const auto basis = monomials(var(), N);
  s.sector_minus = gauge_sector(s.gauge_prime_minus, basis, s.z, window.anchor, &s.gauge_minus);
  s.sector_plus = gauge_sector(s.gauge_prime_plus, basis, s.z, window.anchor, &s.gauge_plus);
  s.w_top = n * pow(m, Complex(-n / 2.0)) * s.W - n * n / 4.0 * pow(m, Complex(-(n + 2.0) / 2.0)) * m1;

  const Complex u0 = mass.u(window.anchor);
  const Complex z0 = out.f(u0);
  const Complex zp0 = zp(window.anchor);
  out.generic_options.z_anchor = z0;
  const Complex principal = std::sqrt(2.0 * m(window.anchor) * out.gauged.A(z0));
  out.generic_options.branch = std::abs(zp0 - principal) <= std::abs(zp0 + principal) ? 1.0 : -1.0;
  return out;
}

ScalarFunction case_potential(const TypeAConfig& c, const MassProfile& mass, Sign sign) {
  validate(c);
  const double s = sign_value(sign);
  const double N = c.N;
  const Complex b2 = c.b2(), b1 = c.b1(), b0 = c.b0(), R = c.R, nu = c.nu;
  const ScalarFunction& u = mass.u;
  const ScalarFunction corr = mass_correction(mass);
  switch (c.which) {
    case TypeACase::I: {
      const ScalarFunction Q = b2 * u * u + b1 * u + b0;
      return 0.5 * Q * Q - s * N * b2 * u + corr - s * N * b1 / 2.0 - R;
    }
    case TypeACase::II: {
      return b2 * b2 / 8.0 * pow(u, 6) + b2 * b1 / 4.0 * pow(u, 4) +
             (b1 * b1 + 2.0 * b0 * b2 - s * 6.0 * N * b2) / 8.0 * pow(u, 2) +
             (N - 1.0 + s * b0) * (N + 1.0 + s * b0) / (8.0 * pow(u, 2)) + corr - s * N * b1 / 4.0 + b0 * b1 / 4.0 - R;
    }
    case TypeACase::III: {
      const Complex r = std::sqrt(nu);
      return b2 * b2 / (8.0 * nu) * exp(4.0 * r * u) + b2 / (4.0 * nu) * (b1 - s * 2.0 * N * nu) * exp(2.0 * r * u) +
             b0 / (4.0 * nu) * (b1 + s * 2.0 * N * nu) * exp(-2.0 * r * u) + b0 * b0 / (8.0 * nu) * exp(-4.0 * r * u) +
             corr + (b1 * b1 + 2.0 * b2 * b0) / (8.0 * nu) + (N * N - 1.0) / 6.0 * nu - R;
    }
    case TypeACase::IV: {
      const Complex r = std::sqrt(nu);
      const ScalarFunction sh1 = pow(sinh(r * u), 2);
      const ScalarFunction sh2 = pow(sinh(2.0 * r * u), 2);
      const Complex k = b2 + b0 - b1;
      return b2 * b2 / (8.0 * nu) * sh2 + b2 * (b1 - s * 2.0 * N * nu) / (2.0 * nu) * sh1 +
             (b2 + b0) * (b1 + s * 2.0 * N * nu) / (8.0 * nu * sh1) +
             (k - s * 2.0 * (N - 1.0) * nu) * (k - s * 2.0 * (N + 1.0) * nu) / (8.0 * nu * sh2) + corr -
             s * N * b2 / 2.0 + (2.0 * b2 * (b2 + b0 + b1) + b1 * b1) / (8.0 * nu) + (N * N - 1.0) / 6.0 * nu - R;
    }
    case TypeACase::V: {
      const Weierstrass wp(c.g2, c.g3);
      const ScalarFunction P = wp.function().compose(u);
      ScalarFunction total = (N - 1.0 - s * b2) * (N + 1.0 - s * b2) / 8.0 * P + corr + s * N * b1 / 4.0 +
                             b2 * b1 / 4.0 - R;
      for (const Complex e : wp.roots()) {
        const Complex H2 = 3.0 * e * e - c.g2 / 4.0;
        const Complex eta = -b2 * e * (b2 * e - 2.0 * b1) * (2.0 * H2 - 5.0 * e * e) + (b1 * b1 + 2.0 * b2 * b0) * e * e -
                            2.0 * b1 * b0 * e + b0 * b0 + (N * N - 1.0) * (H2 * H2 - 18.0 * e * e * H2 + 36.0 * e * e * e * e) -
                            s * 2.0 * N * ((b2 * e - b1) * (5.0 * H2 - 12.0 * e * e) * e - b0 * H2);
        total = total + eta / (8.0 * H2 * (P - e));
      }
      return total;
    }
  }
  return {};
}

Complex case_potential(const TypeAConfig& config, const MassProfile& mass, Sign sign, Complex q) {
  return case_potential(config, mass, sign)(q);
}

std::vector<ScalarFunction> case_sector(const TypeAConfig& c, const MassProfile& mass, Sign sign, double anchor) {
  validate(c);
  const double s = sign_value(sign);
  const double N = c.N;
  const Complex b2 = c.b2(), b1 = c.b1(), b0 = c.b0(), nu = c.nu;
  const ScalarFunction& u = mass.u;
  const ScalarFunction m4 = pow(mass.m, Complex(0.25));
  ScalarFunction weight;
  ScalarFunction z;
  switch (c.which) {
    case TypeACase::I:
      weight = m4 * exp(-s * (b2 / 3.0 * pow(u, 3) + b1 / 2.0 * pow(u, 2) + b0 * u));
      z = u;
      break;
    case TypeACase::II:
      weight = m4 * pow(u, -(N - 1.0 + s * b0) / 2.0) * exp(-s * (b2 / 8.0 * pow(u, 4) + b1 / 4.0 * pow(u, 2)));
      z = pow(u, 2);
      break;
    case TypeACase::III: {
      const Complex r = std::sqrt(nu);
      weight = m4 * exp(-s * b2 / (4.0 * nu) * exp(2.0 * r * u) + s * b0 / (4.0 * nu) * exp(-2.0 * r * u) -
                        (2.0 * (N - 1.0) * nu + s * b1) / (2.0 * r) * u);
      z = exp(2.0 * r * u);
      break;
    }
    case TypeACase::IV: {
      const Complex r = std::sqrt(nu);
      weight = m4 * pow(sinh(2.0 * r * u), -(N - 1.0) / 2.0 - s * b1 / (4.0 * nu)) *
               pow(tanh(r * u), -s * (b2 + b0) / (4.0 * nu)) * exp(-s * b2 / (4.0 * nu) * cosh(2.0 * r * u));
      z = cosh(2.0 * r * u);
      break;
    }
    case TypeACase::V: {
      const Weierstrass wp(c.g2, c.g3);
      z = wp.function().compose(u);
      weight = m4;
      for (const Complex e : wp.roots()) {
        const Complex H2 = 3.0 * e * e - c.g2 / 4.0;
        weight = weight * pow(z - e, -(N - 1.0) / 4.0 - s * (b2 * e * e - b1 * e + b0) / (4.0 * H2));
      }
      break;
    }
  }
  std::vector<ScalarFunction> out;
  for (const auto& zk : monomials(z, c.N)) out.push_back(weight * zk);
  return normalized(std::move(out), anchor);
}

TypeAConditionReport type_a_condition_residuals(int N, const ScalarFunction& E, const ScalarFunction& W,
                                                const ScalarFunction& m, const std::vector<double>& samples) {
  const LinearDiffOp D = LinearDiffOp::derivative(1);
  const LinearDiffOp Em = LinearDiffOp::multiply(E);
  TypeAConditionReport r;
  if (N >= 2) {
    const LinearDiffOp op = (D - Em) * D * (D + Em);
    const ScalarFunction f = W / m;
    for (double q : samples) {
      const Jet fj = f.eval_jet(q, op.order());
      const double mag = application_magnitude(op, fj);
      r.first = std::max(r.first, std::abs(op.apply(fj).value()) / std::max(mag, 1.0));
    }
  }
  if (N >= 3) {
    const LinearDiffOp op = (D - 2.0 * Em) * (D - Em) * D * (D + Em);
    const ScalarFunction f = E / m - m.derivative(1) / (2.0 * pow(m, 2));
    for (double q : samples) {
      const Jet fj = f.eval_jet(q, op.order());
      const double mag = application_magnitude(op, fj);
      r.second = std::max(r.second, std::abs(op.apply(fj).value()) / std::max(mag, 1.0));
    }
  }
  return r;
}

TypeAConditionReport verify_type_a_conditions(const TypeASystem& sys, const std::vector<double>& samples) {
  TypeAConditionReport r = type_a_condition_residuals(sys.config.N, sys.system.E, sys.system.W, sys.system.mass.m, samples);
  const ScalarFunction Q = polynomial({sys.config.b0(), sys.config.b1(), sys.config.b2()});
  for (double q : samples) {
    const Complex z = sys.system.z(q);
    const Jet qj = Q.eval_jet(z, 3);
    const Jet aj = sys.gauged.A.eval_jet(z, 5);
    const double qs = std::abs(qj[0]) + std::abs(qj[1]) + std::abs(qj[2]) + 1.0;
    const double as = std::abs(aj[0]) + std::abs(aj[1]) + std::abs(aj[2]) + 1.0;
    r.z_space = std::max({r.z_space, std::abs(qj.derivative(3)) / qs, std::abs(aj.derivative(5)) / as});
  }
  return r;
}

}  // namespace nfold
