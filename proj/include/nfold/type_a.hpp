#pragma once

#include <array>
#include <string>
#include <vector>

#include "nfold/builder.hpp"
#include "nfold/weierstrass.hpp"

namespace nfold {

enum class TypeACase { I, II, III, IV, V };

std::string to_string(TypeACase c);
/// Parses "I".."V"; throws BadParams otherwise.
TypeACase parse_case(const std::string& name);

struct TypeAConfig {
  TypeACase which = TypeACase::I;
  int N = 1;
  /// (b2, b1, b0): Q(z) = b2 z^2 + b1 z + b0.
  std::array<Complex, 3> b{0.0, 0.0, 0.0};
  Complex R = 0.0;
  /// Case III and IV parameter.
  Complex nu = 1.0;
  /// Case V invariants.
  Complex g2 = 4.0;
  Complex g3 = 1.0;

  Complex b2() const { return b[0]; }
  Complex b1() const { return b[1]; }
  Complex b0() const { return b[2]; }
};

/// Throws BadParams for N < 1, nu = 0 (III, IV) or a degenerate Case V cubic.
void validate(const TypeAConfig& config);

/// Coefficients (a4, a3, a2, a1, a0) of the canonical A(z).
std::array<Complex, 5> canonical_a(const TypeAConfig& config);

/// Models with a4 = a3 = b2 = 0 are solvable: Cases I-IV with b2 = 0.
bool is_solvable(const TypeAConfig& config);

/// A, B, C and the monomial basis of the gauged type A Hamiltonian.
GaugedData type_a_gauged_data(const TypeAConfig& config);

/// z = f(u) as a function of u.
ScalarFunction case_map(const TypeAConfig& config);

/// Default window: a singularity-free u-interval per case mapped to q by
/// inverting u(q); the anchor is the preimage of the interval midpoint.
Window default_window(const TypeAConfig& config, const MassProfile& mass, int samples = 41);

/// Solves u(q) = target for real increasing u by bracketing and bisection.
double invert_u(const MassProfile& mass, double target);

struct TypeASystem {
  TypeAConfig config;
  /// P from the ordered product form, H+- from E, W and m.
  BuiltSystem system;
  ScalarFunction f;
  bool is_solvable = false;
  GaugedData gauged;
  /// Change-of-variable settings under which the generic construction
  /// reproduces this system.
  BuildOptions generic_options;
};

/// Throws CaseSingularity when the window touches a zero of f'(u(q)) or a
/// lattice point, BadParams for invalid configurations.
TypeASystem build_type_a(const TypeAConfig& config, const MassProfile& mass, const Window& window);

/// Closed-form effective potential of the given sign as a function of q.
ScalarFunction case_potential(const TypeAConfig& config, const MassProfile& mass, Sign sign);
Complex case_potential(const TypeAConfig& config, const MassProfile& mass, Sign sign, Complex q);

/// Closed-form solvable sector of the given sign, normalized so that the
/// first function is 1 at `anchor`.
std::vector<ScalarFunction> case_sector(const TypeAConfig& config, const MassProfile& mass, Sign sign, double anchor);

/// Potential of the type A Hamiltonians in terms of E, W and m.
ScalarFunction type_a_potential(int N, const ScalarFunction& E, const ScalarFunction& W, const ScalarFunction& m,
                                Complex R, Sign sign);

struct TypeAConditionReport {
  /// Residuals are relative to the application magnitude, floored at 1.
  /// (d - E) d (d + E)(W/m); applies for N >= 2.
  double first = 0.0;
  /// (d - 2E)(d - E) d (d + E)(E/m - m'/2m^2); applies for N >= 3.
  double second = 0.0;
  /// Largest z-space residual of Q''' = 0 and A''''' = 0.
  double z_space = 0.0;
};

TypeAConditionReport type_a_condition_residuals(int N, const ScalarFunction& E, const ScalarFunction& W,
                                                const ScalarFunction& m, const std::vector<double>& samples);
TypeAConditionReport verify_type_a_conditions(const TypeASystem& system, const std::vector<double>& samples);

}  // namespace nfold
