#pragma once

#include <memory>
#include <vector>

#include "nfold/scalar_function.hpp"

namespace nfold {

namespace detail {
struct OpNode;
}

/// Linear differential operator sum_k c_k(q) d^k/dq^k with jet-evaluable
/// coefficients. Composition, sums, gauge conjugation and transposition are
/// kept as a lazy operator graph and only resolved when applied to a jet.
class LinearDiffOp {
 public:
  /// The zero operator.
  LinearDiffOp();

  /// sum_k coeffs[k] d^k.
  static LinearDiffOp from_coefficients(std::vector<ScalarFunction> coeffs);
  static LinearDiffOp identity();
  /// Multiplication by f.
  static LinearDiffOp multiply(const ScalarFunction& f);
  /// d^k/dq^k.
  static LinearDiffOp derivative(int k = 1);
  /// e^{-G} op e^{G}, given only G' (the additive constant of G cancels).
  static LinearDiffOp conjugate(const LinearDiffOp& op, const ScalarFunction& gauge_prime);

  int order() const;

  /// Applies the operator to the jet of f at f.base_point(). The result has
  /// order f.order() - order(); throws OrderTooLow if that is negative.
  Jet apply(const Jet& f) const;
  /// Value of (op f)(q0).
  Complex apply(const ScalarFunction& f, Complex q0) const;

  /// Formal transpose: (sum c_k d^k)^t psi = sum (-1)^k d^k (c_k psi).
  LinearDiffOp transpose() const;

  /// this o rhs.
  LinearDiffOp compose(const LinearDiffOp& rhs) const;

  friend LinearDiffOp operator+(const LinearDiffOp& a, const LinearDiffOp& b);
  friend LinearDiffOp operator-(const LinearDiffOp& a, const LinearDiffOp& b);
  friend LinearDiffOp operator*(const LinearDiffOp& a, const LinearDiffOp& b) { return a.compose(b); }
  friend LinearDiffOp operator*(Complex s, const LinearDiffOp& a);
  friend LinearDiffOp operator*(const ScalarFunction& f, const LinearDiffOp& a);
  LinearDiffOp operator-() const;

 private:
  friend struct Annihilator annihilator_from_basis(const std::vector<ScalarFunction>& basis, const ScalarFunction& g);

  explicit LinearDiffOp(std::shared_ptr<const detail::OpNode> node);
  std::shared_ptr<const detail::OpNode> node_;
};

/// Jets (to `order`) at q0 of the expanded coefficients c_0..c_n of op,
/// recovered by probing with (q - q0)^j / j!.
std::vector<Jet> coefficient_jets(const LinearDiffOp& op, Complex q0, int order);

/// sum_k |c_k(q0) f^(k)(q0)|, the magnitude against which cancellation in
/// (op f)(q0) is measured. Needs f.order() >= op.order().
double application_magnitude(const LinearDiffOp& op, const Jet& f);

/// Kernel data of the monic operator d^N + sum_k w_k d^k annihilating a basis.
struct Annihilator {
  /// g(z) * (d^N + sum_k w_k(z) d^k), an operator in z.
  LinearDiffOp op;
  /// w_0 .. w_{N-1} as functions of z.
  std::vector<ScalarFunction> w;
  /// Wronskian W(phi_1, ..., phi_N).
  ScalarFunction wronskian;
  /// psi_i = W(phi without phi_i) / W(phi), spanning the kernel of the
  /// transpose of the monic core. Stored from i = N-1 down to 0, so that for
  /// monomial bases the first entry is the constant.
  std::vector<ScalarFunction> adjoint_kernel;
};

/// Builds the annihilator of span(basis), scaled by g. Coefficients come
/// from a pivoted jet solve of the Wronskian system at each point; throws
/// DegenerateBasis when the Wronskian matrix is singular to 1e-10 relative.
Annihilator annihilator_from_basis(const std::vector<ScalarFunction>& basis,
                                   const ScalarFunction& g = ScalarFunction::constant(1.0));

/// Determinant of a square matrix of jets by cofactor expansion over column
/// subsets (division free, valid when the determinant vanishes at the point).
Jet jet_determinant(const std::vector<std::vector<Jet>>& rows);

}  // namespace nfold
