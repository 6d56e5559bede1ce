#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nfold {

using Complex = std::complex<double>;

/// Default modulus below which singular primitives (1/x, log, sqrt, x^r)
/// refuse to expand around a point.
inline constexpr double kSingularityFloor = 1e-12;

/// Floor in effect on the calling thread.
double singularity_floor() noexcept;

/// Replaces the floor on the calling thread for the lifetime of the guard.
class ScopedSingularityFloor {
 public:
  explicit ScopedSingularityFloor(double floor) noexcept;
  ~ScopedSingularityFloor();
  ScopedSingularityFloor(const ScopedSingularityFloor&) = delete;
  ScopedSingularityFloor& operator=(const ScopedSingularityFloor&) = delete;

 private:
  double previous_;
};

/// Truncated Taylor expansion of a scalar function about `base_point`.
///
/// Coefficients are stored scaled: coeffs[k] = f^(k)(q0) / k!. The order is
/// fixed for the lifetime of a value; arithmetic between jets requires both
/// operands to share base point and order and never extends or truncates.
class Jet {
 public:
  Jet() : coeffs_(1, Complex{}) {}
  Jet(Complex base_point, std::vector<Complex> coeffs);

  /// Jet of f(q) = q at q0.
  static Jet variable(Complex q0, int order);
  static Jet constant(Complex q0, Complex value, int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  Complex base_point() const noexcept { return base_; }
  Complex value() const noexcept { return coeffs_.front(); }

  Complex operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }
  Complex& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  /// Raw derivative f^(k)(q0) = coeffs[k] * k!.
  Complex derivative(int k) const;

  /// Jet of f' (order drops by one).
  Jet differentiate() const;
  /// Jet of f^(k) (order drops by k).
  Jet differentiate(int k) const;
  /// Jet of the antiderivative with value `c0` at the base point (order grows by one).
  Jet integrate(Complex c0) const;
  Jet truncated(int order) const;

  /// True when the jet is exactly the identity expansion [q0, 1, 0, ...].
  bool is_identity() const noexcept;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(Complex rhs);
  Jet& operator-=(Complex rhs);
  Jet& operator*=(Complex rhs);
  Jet& operator/=(Complex rhs);

  Jet operator-() const;

 private:
  void check_compatible(const Jet& rhs) const;

  Complex base_{};
  std::vector<Complex> coeffs_;
};

Jet operator+(Jet lhs, const Jet& rhs);
Jet operator-(Jet lhs, const Jet& rhs);
Jet operator*(const Jet& lhs, const Jet& rhs);
Jet operator/(const Jet& lhs, const Jet& rhs);
Jet operator+(Jet lhs, Complex rhs);
Jet operator-(Jet lhs, Complex rhs);
Jet operator*(Jet lhs, Complex rhs);
Jet operator/(Jet lhs, Complex rhs);
Jet operator+(Complex lhs, Jet rhs);
Jet operator-(Complex lhs, const Jet& rhs);
Jet operator*(Complex lhs, Jet rhs);
Jet operator/(Complex lhs, const Jet& rhs);

Jet recip(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, Complex exponent);
Jet pow(const Jet& a, int exponent);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet atan(const Jet& a);

/// Coupled sin/cos (or sinh/cosh) of the same argument in one pass.
struct JetPair {
  Jet first;
  Jet second;
};
JetPair sincos(const Jet& a);
JetPair sinhcosh(const Jet& a);

/// Composes a Taylor expansion `outer` (in its own variable, expanded about
/// inner.value()) with `inner`, returning the expansion of outer(inner(q))
/// about inner.base_point(). Both must have the same order.
Jet compose_series(const Jet& outer, const Jet& inner);

}  // namespace nfold
