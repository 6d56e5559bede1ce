#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "nfold/scalar_function.hpp"

namespace nfold {

/// Results at exact abscissas are memoized up to this many entries per
/// function. Values are a pure function of the abscissa, so the memo never
/// changes results.
inline constexpr std::size_t kMemoCapacity = 1 << 16;

/// Checkpoints live on the lattice anchor + k * spacing (k integer, real
/// offsets). Every evaluation starts from the lattice point nearest to the
/// requested abscissa, so results do not depend on evaluation order.
inline constexpr double kCheckpointSpacing = 0.25;

/// F(x) = F(anchor) + integral of f from anchor to x along straight segments,
/// by adaptive Gauss-Kronrod quadrature. Higher Taylor coefficients come
/// directly from the integrand's jet.
class Antiderivative final : public Primitive {
 public:
  Antiderivative(ScalarFunction integrand, Complex anchor, Complex anchor_value = 0.0, double tolerance = 1e-12);

  Jet taylor(Complex x0, int order) const override;
  std::string name() const override { return "antiderivative"; }

  Complex value(Complex x) const;

 private:
  Complex segment(Complex a, Complex b) const;

  ScalarFunction integrand_;
  Complex anchor_;
  Complex anchor_value_;
  double tolerance_;
  mutable std::mutex mutex_;
  mutable std::map<long, Complex> checkpoints_;
  mutable std::map<std::pair<double, double>, Complex> memo_;
};

ScalarFunction antiderivative(const ScalarFunction& integrand, Complex anchor, Complex anchor_value = 0.0);

/// Solution of y' = rhs(q, y) through (anchor, y_anchor) by the Taylor-series
/// method. `rhs` receives the jets of q and y and the current slope, which it
/// may use to select a branch (e.g. of a square root) continuously.
class TaylorOdeSolution final : public Primitive {
 public:
  using Rhs = std::function<Jet(const Jet& q, const Jet& y, Complex slope_hint)>;

  TaylorOdeSolution(std::string name, Rhs rhs, Complex anchor, Complex y_anchor, Complex slope_hint);

  Jet taylor(Complex x0, int order) const override;
  std::string name() const override { return name_; }

  /// Jet of the solution through (q0, y0) from the ODE recurrence alone.
  Jet local_jet(Complex q0, Complex y0, Complex slope_hint, int order) const;

  static constexpr int kStepOrder = 24;

 private:
  struct State {
    Complex y;
    Complex slope;
  };
  State advance(Complex from, const State& s, Complex to) const;
  std::pair<Complex, State> nearest_checkpoint(Complex x) const;

  std::string name_;
  Rhs rhs_;
  Complex anchor_;
  mutable std::mutex mutex_;
  mutable std::map<long, State> checkpoints_;
  mutable std::map<std::pair<double, double>, State> memo_;
};

}  // namespace nfold
