#include "nfold/weierstrass.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>

#include "nfold/error.hpp"

namespace nfold {

namespace {

constexpr int kLaurentTerms = 48;
constexpr double kPoleGuard = 1e14;

bool root_less(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

class WeierstrassPrimitive final : public Primitive {
 public:
  explicit WeierstrassPrimitive(Weierstrass wp) : wp_(std::move(wp)) {}
  Jet taylor(Complex x0, int order) const override { return wp_.jet(x0, order); }
  std::string name() const override { return "wp"; }

 private:
  Weierstrass wp_;
};

}  // namespace

Weierstrass::Weierstrass(Complex g2, Complex g3) : g2_(g2), g3_(g3) {
  const Complex disc = g2 * g2 * g2 - 27.0 * g3 * g3;
  if (std::abs(disc) <= 1e-12 * std::max(1.0, std::abs(g2 * g2 * g2))) {
    throw Error(ErrorKind::BadParams, "Weierstrass invariants need g2^3 - 27 g3^2 != 0");
  }
  // wp(u) = u^-2 + sum_{k>=2} c_k u^{2k-2}.
  c_.assign(kLaurentTerms + 1, Complex{});
  c_[2] = g2 / 20.0;
  c_[3] = g3 / 28.0;
  for (int k = 4; k <= kLaurentTerms; ++k) {
    Complex s{};
    for (int m = 2; m <= k - 2; ++m) s += c_[m] * c_[k - m];
    c_[k] = 3.0 / ((2.0 * k + 1.0) * (k - 3.0)) * s;
  }
  // Radius of convergence from the tail of the coefficient sequence.
  double inv_radius = 0.0;
  for (int k = kLaurentTerms - 8; k <= kLaurentTerms; ++k) {
    if (std::abs(c_[k]) > 0.0) inv_radius = std::max(inv_radius, std::pow(std::abs(c_[k]), 1.0 / (2.0 * k - 2.0)));
  }
  radius_ = inv_radius > 0.0 ? 1.0 / inv_radius : 1e3;

  Eigen::Matrix3cd companion = Eigen::Matrix3cd::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(0, 2) = g3 / 4.0;
  companion(1, 2) = g2 / 4.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> solver(companion);
  for (int i = 0; i < 3; ++i) {
    Complex z = solver.eigenvalues()(i);
    for (int it = 0; it < 4; ++it) {
      const Complex f = 4.0 * z * z * z - g2 * z - g3;
      const Complex df = 12.0 * z * z - g2;
      if (std::abs(df) == 0.0) break;
      z -= f / df;
    }
    roots_[static_cast<std::size_t>(i)] = z;
  }
  std::sort(roots_.begin(), roots_.end(), root_less);
}

Weierstrass::Value Weierstrass::series(Complex u) const {
  const Complex u2 = u * u;
  Complex p{}, dp{};
  for (int k = kLaurentTerms; k >= 2; --k) {
    p = p * u2 + c_[k];
    dp = dp * u2 + (2.0 * k - 2.0) * c_[k];
  }
  // p currently holds sum c_k u^{2k-4}; dp holds sum (2k-2) c_k u^{2k-4}.
  return {1.0 / u2 + p * u2, -2.0 / (u2 * u) + dp * u};
}

Weierstrass::Value Weierstrass::operator()(Complex u) const {
  if (!(std::abs(u) > 1e-7)) throw Error(ErrorKind::LatticePole, "wp evaluated at the lattice origin");
  int doublings = 0;
  Complex v = u;
  while (std::abs(v) > 0.4 * radius_) {
    v *= 0.5;
    ++doublings;
  }
  Value w = series(v);
  for (int i = 0; i < doublings; ++i) {
    const Complex P = w.p;
    const Complex D = w.dp;
    const Complex S = 6.0 * P * P - g2_ / 2.0;
    if (std::abs(D) == 0.0) throw Error(ErrorKind::LatticePole, "wp duplication through a half period");
    const Complex r = S / D;
    w.p = 0.25 * r * r - 2.0 * P;
    w.dp = r * (12.0 * P * D * D - S * S) / (4.0 * D * D) - D;
  }
  if (!std::isfinite(std::abs(w.p)) || std::abs(w.p) > kPoleGuard) {
    throw Error(ErrorKind::LatticePole, "wp overflows near a lattice point");
  }
  return w;
}

Jet Weierstrass::jet(Complex u0, int order) const {
  const Value w = (*this)(u0);
  std::vector<Complex> p(static_cast<std::size_t>(order) + 1, Complex{});
  p[0] = w.p;
  if (order >= 1) p[1] = w.dp;
  for (int k = 0; k + 2 <= order; ++k) {
    Complex sq{};
    for (int i = 0; i <= k; ++i) sq += p[i] * p[k - i];
    Complex rhs = 6.0 * sq;
    if (k == 0) rhs -= g2_ / 2.0;
    p[k + 2] = rhs / ((k + 1.0) * (k + 2.0));
  }
  return Jet(u0, std::move(p));
}

ScalarFunction Weierstrass::function() const {
  return ScalarFunction::primitive(std::make_shared<WeierstrassPrimitive>(*this));
}

double Weierstrass::real_half_period() const {
  const bool real_params = g2_.imag() == 0.0 && g3_.imag() == 0.0;
  const Complex disc = g2_ * g2_ * g2_ - 27.0 * g3_ * g3_;
  if (!real_params || disc.real() <= 0.0) {
    throw Error(ErrorKind::BadParams, "real half-period needs real invariants with three real roots");
  }
  const double e1 = roots_[2].real();
  const double e2 = roots_[1].real();
  const double e3 = roots_[0].real();
  double a = std::sqrt(e1 - e3);
  double b = std::sqrt(e1 - e2);
  while (std::abs(a - b) > 1e-16 * a) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (2.0 * a);
}

}  // namespace nfold
