#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nfold/jet.hpp"

namespace nfold {

/// A function whose Taylor expansion about an arbitrary point can be produced
/// on demand (special functions, ODE solutions, quadrature antiderivatives).
class Primitive {
 public:
  virtual ~Primitive() = default;
  /// Expansion in the primitive's own variable about x0, to `order`.
  virtual Jet taylor(Complex x0, int order) const = 0;
  virtual std::string name() const = 0;
};

namespace detail {
struct Node;
}

/// Immutable closed-form function of one complex variable, represented as an
/// expression tree. Evaluation always goes through jets, so any tree yields
/// derivatives to whatever order the caller asks for.
class ScalarFunction {
 public:
  /// The zero function.
  ScalarFunction();

  static ScalarFunction constant(Complex value);
  static ScalarFunction variable();
  static ScalarFunction primitive(std::shared_ptr<const Primitive> p);
  /// Wraps a callable producing the Taylor expansion about a point.
  static ScalarFunction from_taylor(std::string name, std::function<Jet(Complex, int)> taylor);

  /// Expansion about q0 to `order`.
  Jet eval_jet(Complex q0, int order) const;
  /// Expansion of f(arg(q)) about arg.base_point().
  Jet eval(const Jet& arg) const;
  Complex operator()(Complex q) const;

  /// this(inner(q)).
  ScalarFunction compose(const ScalarFunction& inner) const;
  ScalarFunction derivative(int k = 1) const;

  /// Non-null when the function is a literal constant.
  const Complex* constant_value() const;
  bool is_zero() const;

  const std::vector<Complex>& singular_points() const { return singular_points_; }
  ScalarFunction with_singular_points(std::vector<Complex> points) const;

  std::string to_string() const;

  friend ScalarFunction operator+(const ScalarFunction& a, const ScalarFunction& b);
  friend ScalarFunction operator-(const ScalarFunction& a, const ScalarFunction& b);
  friend ScalarFunction operator*(const ScalarFunction& a, const ScalarFunction& b);
  friend ScalarFunction operator/(const ScalarFunction& a, const ScalarFunction& b);
  ScalarFunction operator-() const;

  friend ScalarFunction pow(const ScalarFunction& a, int exponent);
  friend ScalarFunction pow(const ScalarFunction& a, Complex exponent);
  friend ScalarFunction exp(const ScalarFunction& a);
  friend ScalarFunction log(const ScalarFunction& a);
  friend ScalarFunction sqrt(const ScalarFunction& a);
  friend ScalarFunction sin(const ScalarFunction& a);
  friend ScalarFunction cos(const ScalarFunction& a);
  friend ScalarFunction sinh(const ScalarFunction& a);
  friend ScalarFunction cosh(const ScalarFunction& a);
  friend ScalarFunction tanh(const ScalarFunction& a);
  friend ScalarFunction atan(const ScalarFunction& a);
  friend ScalarFunction recip(const ScalarFunction& a);

 private:
  explicit ScalarFunction(std::shared_ptr<const detail::Node> node, std::vector<Complex> singular = {});

  std::shared_ptr<const detail::Node> node_;
  std::vector<Complex> singular_points_;
};

ScalarFunction operator+(const ScalarFunction& a, Complex b);
ScalarFunction operator+(Complex a, const ScalarFunction& b);
ScalarFunction operator-(const ScalarFunction& a, Complex b);
ScalarFunction operator-(Complex a, const ScalarFunction& b);
ScalarFunction operator*(const ScalarFunction& a, Complex b);
ScalarFunction operator*(Complex a, const ScalarFunction& b);
ScalarFunction operator/(const ScalarFunction& a, Complex b);
ScalarFunction operator/(Complex a, const ScalarFunction& b);

/// Polynomial sum_k coeffs[k] x^k in the function's variable.
ScalarFunction polynomial(const std::vector<Complex>& coeffs);

}  // namespace nfold
