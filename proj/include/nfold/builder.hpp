#pragma once

#include <optional>
#include <vector>

#include "nfold/diffop.hpp"
#include "nfold/mass_profile.hpp"

namespace nfold {

/// Selects H- with its sector or H+ with its sector.
enum class Sign { minus, plus };

/// Data of the gauged frame: H~- = -A d_z^2 - B d_z - C leaving span(basis)
/// invariant. All functions are of z.
struct GaugedData {
  ScalarFunction A;
  ScalarFunction B;
  ScalarFunction C;
  std::vector<ScalarFunction> basis;

  int N() const { return static_cast<int>(basis.size()); }
};

/// Real q-window on which a system is built and certified.
struct Window {
  double qmin = -1.0;
  double qmax = 1.0;
  /// Anchor of the gauge potentials (and of z(q) when integrated).
  double anchor = 0.0;
  int samples = 41;

  std::vector<double> points() const;
};

struct BuildOptions {
  /// z(anchor) for the integrated change of variable.
  Complex z_anchor = 0.0;
  /// Sign of z' = branch * sqrt(2 m A) at the anchor.
  double branch = 1.0;
  /// Closed-form z(q); when present it replaces the integrated one.
  std::optional<ScalarFunction> z_of_q;
  /// Relative tolerance of the invariance precondition.
  double invariance_tolerance = 1e-8;
};

/// A partner pair of PDM Hamiltonians with its N-fold supercharge.
struct BuiltSystem {
  int N = 0;
  MassProfile mass;
  Window window;

  LinearDiffOp H_minus;
  LinearDiffOp H_plus;
  LinearDiffOp P;
  LinearDiffOp P_t;

  ScalarFunction z;
  /// Derivatives of the gauge potentials W^-, W^+ and the potentials
  /// themselves (anchored to 0 at window.anchor).
  ScalarFunction gauge_prime_minus;
  ScalarFunction gauge_prime_plus;
  ScalarFunction gauge_minus;
  ScalarFunction gauge_plus;
  ScalarFunction E;
  ScalarFunction W;
  ScalarFunction U_minus;
  ScalarFunction U_plus;
  /// Coefficient of d^{N-1} in P.
  ScalarFunction w_top;

  std::vector<ScalarFunction> sector_minus;
  std::vector<ScalarFunction> sector_plus;
};

/// Extra data produced by the generic construction.
struct GenericSystem : BuiltSystem {
  GaugedData data;
  ScalarFunction delta_C;
  /// g(q) = m^{-N/2} z'^N.
  ScalarFunction g;
  Annihilator annihilator;
};

/// z(q) solving z'^2 = 2 m A(z) with z(anchor) = z_anchor and the sign of
/// z' fixed by `branch` at the anchor and continued smoothly.
ScalarFunction solve_change_of_variable(const ScalarFunction& A, const MassProfile& mass, Complex q_anchor,
                                        Complex z_anchor, double branch = 1.0);

struct GaugeData {
  /// dW^-/dq as a function of q.
  ScalarFunction gauge_prime_minus;
  /// delta C as a function of z.
  ScalarFunction delta_C;
  /// g as a function of q.
  ScalarFunction g;
};

GaugeData compute_gauge_and_delta(const GaugedData& data, const MassProfile& mass, const ScalarFunction& z_of_q,
                                  const Annihilator& annihilator);

/// Generic construction. Throws InvarianceViolated if H~- does not preserve
/// span(basis) on the window, and singularity errors from the change of
/// variable.
GenericSystem build(const GaugedData& data, const MassProfile& mass, const Window& window,
                    const BuildOptions& options = {});

/// Relative least-squares residual of H~- phi_i against span(basis) at the
/// given z points.
double invariance_residual(const GaugedData& data, const std::vector<Complex>& z_points);

/// Potential term of a PDM Schrodinger operator, U = (H 1)(q).
ScalarFunction potential_of(const LinearDiffOp& H);

/// Max relative deviation of H's coefficients from -1/2m, m'/2m^2 at q.
double pdm_pattern_residual(const LinearDiffOp& H, const ScalarFunction& m, const std::vector<double>& q);

/// Kernel functions e^{-G} * basis(z(q)) with G anchored at `anchor`,
/// divided by the first member's value at the anchor.
std::vector<ScalarFunction> gauge_sector(const ScalarFunction& gauge_prime, const std::vector<ScalarFunction>& basis_z,
                                         const ScalarFunction& z, double anchor, ScalarFunction* gauge_out = nullptr);

}  // namespace nfold
