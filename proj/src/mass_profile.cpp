#include "nfold/mass_profile.hpp"

#include <cmath>

#include "nfold/error.hpp"
#include "nfold/integrators.hpp"

namespace nfold {

namespace {

void shift_u(MassProfile& p, const MassParams& params) {
  if (!params.u_anchor) return;
  const Complex u0 = p.u(*params.u_anchor);
  p.u = p.u - u0;
  p.anchor = *params.u_anchor;
}

}  // namespace

MassProfile builtin_mass_profile(const std::string& name, const MassParams& params) {
  const ScalarFunction q = ScalarFunction::variable();
  MassProfile p;
  p.name = name;
  if (name == "constant") {
    if (std::abs(params.c) == 0.0) throw Error(ErrorKind::BadParams, "constant mass requires c != 0");
    p.m = ScalarFunction::constant(params.c * params.c);
    p.u = params.c * q;
  } else if (name == "exp_scale") {
    const Complex a = params.alpha;
    if (std::abs(a) == 0.0) throw Error(ErrorKind::BadParams, "exp_scale requires alpha != 0");
    p.m = exp(2.0 * a * q);
    p.u = exp(a * q) / a;
  } else if (name == "cauchy_sq") {
    p.m = pow(1.0 + q * q, -2);
    p.u = atan(q);
  } else if (name == "sech_like") {
    const Complex a = params.alpha;
    if (std::abs(a) == 0.0) throw Error(ErrorKind::BadParams, "sech_like requires alpha != 0");
    p.m = pow(cosh(a * q), -2);
    p.u = atan(sinh(a * q)) / a;
  } else if (name == "custom") {
    if (!params.m) throw Error(ErrorKind::BadParams, "custom mass requires an m(q) expression");
    p.m = *params.m;
    p.u = antiderivative(sqrt(p.m), params.anchor);
    p.anchor = params.anchor;
  } else {
    throw Error(ErrorKind::BadParams, "unknown mass profile '" + name + "'");
  }
  shift_u(p, params);
  return p;
}

void require_positive_mass(const MassProfile& mass, double qa, double qb, int samples) {
  for (int i = 0; i < samples; ++i) {
    const double q = qa + (qb - qa) * i / std::max(1, samples - 1);
    const Complex v = mass.m(q);
    if (!(std::abs(v.imag()) <= 1e-12 * std::abs(v)) || !(v.real() > 0.0)) {
      throw Error(ErrorKind::NonPositiveMass,
                  "m(" + std::to_string(q) + ") = (" + std::to_string(v.real()) + ", " + std::to_string(v.imag()) + ")");
    }
  }
}

ScalarFunction von_roos_effective_potential(const ScalarFunction& V, const MassProfile& mass, Complex alpha,
                                            Complex gamma) {
  const ScalarFunction& m = mass.m;
  const ScalarFunction m1 = m.derivative(1);
  const ScalarFunction m2 = m.derivative(2);
  return V - (alpha + gamma) * m2 / (4.0 * pow(m, 2)) + (alpha * gamma + alpha + gamma) * pow(m1, 2) / (2.0 * pow(m, 3));
}

ScalarFunction mass_correction(const MassProfile& mass) {
  const ScalarFunction& m = mass.m;
  const ScalarFunction m1 = m.derivative(1);
  return m.derivative(2) / (8.0 * pow(m, 2)) - 7.0 * pow(m1, 2) / (32.0 * pow(m, 3));
}

}  // namespace nfold
