#pragma once

#include <array>
#include <vector>

#include "nfold/scalar_function.hpp"

namespace nfold {

/// Weierstrass elliptic function for invariants (g2, g3), evaluated from its
/// Laurent series about the origin and the duplication formula.
class Weierstrass {
 public:
  struct Value {
    Complex p;
    Complex dp;
  };

  /// Throws BadParams when g2^3 - 27 g3^2 = 0.
  Weierstrass(Complex g2, Complex g3);

  Complex g2() const { return g2_; }
  Complex g3() const { return g3_; }

  /// (wp(u), wp'(u)); throws LatticePole near lattice points.
  Value operator()(Complex u) const;
  /// Taylor expansion of wp about u0 from wp'' = 6 wp^2 - g2/2.
  Jet jet(Complex u0, int order) const;
  /// wp as a jet-evaluable function of u.
  ScalarFunction function() const;

  /// Roots of 4z^3 - g2 z - g3 sorted by (Re, Im).
  const std::array<Complex, 3>& roots() const { return roots_; }
  /// Real half-period for real invariants with three real roots; throws
  /// BadParams otherwise.
  double real_half_period() const;

 private:
  Value series(Complex u) const;

  Complex g2_, g3_;
  std::vector<Complex> c_;
  double radius_;
  std::array<Complex, 3> roots_;
};

}  // namespace nfold
