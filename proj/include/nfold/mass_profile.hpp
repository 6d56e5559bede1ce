#pragma once

#include <limits>
#include <optional>
#include <string>

#include "nfold/scalar_function.hpp"

namespace nfold {

/// A mass function m(q) together with u(q), an antiderivative of sqrt(m).
struct MassProfile {
  std::string name;
  ScalarFunction m;
  ScalarFunction u;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  /// Point where u is normalized (u(anchor) = 0 for quadrature-built profiles).
  Complex anchor = 0.0;

  bool in_domain(double q) const { return q > domain_lo && q < domain_hi; }
};

struct MassParams {
  /// constant: m = c^2.
  Complex c = 1.0;
  /// exp_scale, sech_like: rate.
  Complex alpha = 1.0;
  /// custom: supplied mass function of q.
  std::optional<ScalarFunction> m;
  /// custom: point where u vanishes.
  Complex anchor = 0.0;
  /// When set, u is shifted so that u(u_anchor) = 0.
  std::optional<Complex> u_anchor;
};

/// Builtin catalog: constant, exp_scale, cauchy_sq, sech_like, custom.
/// Throws BadParams for unknown names or invalid parameters.
MassProfile builtin_mass_profile(const std::string& name, const MassParams& params = {});

/// Throws NonPositiveMass unless m is real and positive at `samples` evenly
/// spaced points of [qa, qb].
void require_positive_mass(const MassProfile& mass, double qa, double qb, int samples = 64);

/// Effective potential of the von Roos Hamiltonian with ordering parameters
/// (alpha, beta, gamma), alpha + beta + gamma = -1:
///   U = V - (alpha + gamma) m'' / 4m^2 + (alpha gamma + alpha + gamma) m'^2 / 2m^3.
ScalarFunction von_roos_effective_potential(const ScalarFunction& V, const MassProfile& mass, Complex alpha,
                                            Complex gamma);

/// m''/8m^2 - 7m'^2/32m^3, the mass correction shared by the type A potentials.
ScalarFunction mass_correction(const MassProfile& mass);

}  // namespace nfold
