#include "nfold/jet.hpp"

#include <cmath>
#include <utility>

#include "nfold/error.hpp"

namespace nfold {

namespace {

thread_local double current_floor = kSingularityFloor;

void require_nonsingular(Complex value, const char* what) {
  if (std::abs(value) < current_floor) {
    throw Error(ErrorKind::SingularJet, std::string(what) + " evaluated at a point where its argument vanishes");
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

double singularity_floor() noexcept { return current_floor; }

ScopedSingularityFloor::ScopedSingularityFloor(double floor) noexcept : previous_(current_floor) {
  current_floor = floor;
}

ScopedSingularityFloor::~ScopedSingularityFloor() { current_floor = previous_; }

Jet::Jet(Complex base_point, std::vector<Complex> coeffs) : base_(base_point), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back();
}

Jet Jet::variable(Complex q0, int order) {
  if (order < 0) throw Error(ErrorKind::OrderTooLow, "jet order must be non-negative");
  std::vector<Complex> c(static_cast<std::size_t>(order) + 1, Complex{});
  c[0] = q0;
  if (order >= 1) c[1] = 1.0;
  return Jet(q0, std::move(c));
}

Jet Jet::constant(Complex q0, Complex value, int order) {
  if (order < 0) throw Error(ErrorKind::OrderTooLow, "jet order must be non-negative");
  std::vector<Complex> c(static_cast<std::size_t>(order) + 1, Complex{});
  c[0] = value;
  return Jet(q0, std::move(c));
}

Complex Jet::derivative(int k) const { return coeffs_.at(static_cast<std::size_t>(k)) * factorial(k); }

Jet Jet::differentiate() const {
  if (order() < 1) throw Error(ErrorKind::OrderTooLow, "cannot differentiate an order-0 jet");
  std::vector<Complex> c(coeffs_.size() - 1);
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = coeffs_[k + 1] * static_cast<double>(k + 1);
  return Jet(base_, std::move(c));
}

Jet Jet::differentiate(int k) const {
  if (k > order()) throw Error(ErrorKind::OrderTooLow, "jet order too low for requested derivative");
  Jet out = *this;
  for (int i = 0; i < k; ++i) out = out.differentiate();
  return out;
}

Jet Jet::integrate(Complex c0) const {
  std::vector<Complex> c(coeffs_.size() + 1);
  c[0] = c0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k + 1] = coeffs_[k] / static_cast<double>(k + 1);
  return Jet(base_, std::move(c));
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) throw Error(ErrorKind::OrderTooLow, "cannot truncate a jet to a higher order");
  if (new_order < 0) throw Error(ErrorKind::OrderTooLow, "negative jet order");
  return Jet(base_, std::vector<Complex>(coeffs_.begin(), coeffs_.begin() + new_order + 1));
}

bool Jet::is_identity() const noexcept {
  if (coeffs_[0] != base_) return false;
  if (order() >= 1 && coeffs_[1] != Complex(1.0)) return false;
  for (std::size_t k = 2; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != Complex{}) return false;
  }
  return true;
}

void Jet::check_compatible(const Jet& rhs) const {
  if (order() != rhs.order()) throw Error(ErrorKind::OrderMismatch, "jets of different order combined");
  if (base_ != rhs.base_) throw Error(ErrorKind::OrderMismatch, "jets at different base points combined");
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_compatible(rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_compatible(rhs);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  *this = *this / rhs;
  return *this;
}

Jet& Jet::operator+=(Complex rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(Complex rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(Complex rhs) {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(Complex rhs) {
  for (auto& c : coeffs_) c /= rhs;
  return *this;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (lhs.order() != rhs.order() || lhs.base_point() != rhs.base_point()) {
    throw Error(ErrorKind::OrderMismatch, "jets of different order or base point multiplied");
  }
  const int n = lhs.order();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    Complex s{};
    for (int j = 0; j <= k; ++j) s += lhs[j] * rhs[k - j];
    c[static_cast<std::size_t>(k)] = s;
  }
  return Jet(lhs.base_point(), std::move(c));
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
  if (lhs.order() != rhs.order() || lhs.base_point() != rhs.base_point()) {
    throw Error(ErrorKind::OrderMismatch, "jets of different order or base point divided");
  }
  require_nonsingular(rhs[0], "division");
  const int n = lhs.order();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    Complex s = lhs[k];
    for (int j = 1; j <= k; ++j) s -= rhs[j] * c[static_cast<std::size_t>(k - j)];
    c[static_cast<std::size_t>(k)] = s / rhs[0];
  }
  return Jet(lhs.base_point(), std::move(c));
}

Jet operator+(Jet lhs, Complex rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, Complex rhs) { return lhs -= rhs; }
Jet operator*(Jet lhs, Complex rhs) { return lhs *= rhs; }
Jet operator/(Jet lhs, Complex rhs) { return lhs /= rhs; }
Jet operator+(Complex lhs, Jet rhs) { return rhs += lhs; }
Jet operator-(Complex lhs, const Jet& rhs) { return (-rhs) + lhs; }
Jet operator*(Complex lhs, Jet rhs) { return rhs *= lhs; }
Jet operator/(Complex lhs, const Jet& rhs) { return Jet::constant(rhs.base_point(), lhs, rhs.order()) / rhs; }

Jet recip(const Jet& a) { return Complex(1.0) / a; }

Jet exp(const Jet& a) {
  const int n = a.order();
  std::vector<Complex> e(static_cast<std::size_t>(n) + 1);
  e[0] = std::exp(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s{};
    for (int j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * e[static_cast<std::size_t>(k - j)];
    e[static_cast<std::size_t>(k)] = s / static_cast<double>(k);
  }
  return Jet(a.base_point(), std::move(e));
}

Jet log(const Jet& a) {
  require_nonsingular(a[0], "log");
  const int n = a.order();
  std::vector<Complex> l(static_cast<std::size_t>(n) + 1);
  l[0] = std::log(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex s{};
    for (int j = 1; j < k; ++j) s += static_cast<double>(k - j) * a[j] * l[static_cast<std::size_t>(k - j)];
    l[static_cast<std::size_t>(k)] = (a[k] - s / static_cast<double>(k)) / a[0];
  }
  return Jet(a.base_point(), std::move(l));
}

Jet sqrt(const Jet& a) {
  require_nonsingular(a[0], "sqrt");
  const int n = a.order();
  std::vector<Complex> s(static_cast<std::size_t>(n) + 1);
  s[0] = std::sqrt(a[0]);
  for (int k = 1; k <= n; ++k) {
    Complex acc = a[k];
    for (int j = 1; j < k; ++j) acc -= s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
    s[static_cast<std::size_t>(k)] = acc / (2.0 * s[0]);
  }
  return Jet(a.base_point(), std::move(s));
}

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) return recip(pow(a, -exponent));
  Jet result = Jet::constant(a.base_point(), 1.0, a.order());
  Jet base = a;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e != 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, Complex exponent) {
  if (exponent.imag() == 0.0 && std::nearbyint(exponent.real()) == exponent.real() &&
      std::abs(exponent.real()) < 64.0) {
    return pow(a, static_cast<int>(exponent.real()));
  }
  require_nonsingular(a[0], "pow");
  const int n = a.order();
  std::vector<Complex> p(static_cast<std::size_t>(n) + 1);
  p[0] = std::pow(a[0], exponent);
  for (int k = 1; k <= n; ++k) {
    Complex s{};
    for (int j = 1; j <= k; ++j) {
      s += (exponent * static_cast<double>(j) - static_cast<double>(k - j)) * a[j] * p[static_cast<std::size_t>(k - j)];
    }
    p[static_cast<std::size_t>(k)] = s / (static_cast<double>(k) * a[0]);
  }
  return Jet(a.base_point(), std::move(p));
}

namespace {

// sign = -1 for (sin, cos), +1 for (sinh, cosh).
JetPair coupled(const Jet& a, double sign, Complex s0, Complex c0) {
  const int n = a.order();
  std::vector<Complex> s(static_cast<std::size_t>(n) + 1), c(static_cast<std::size_t>(n) + 1);
  s[0] = s0;
  c[0] = c0;
  for (int k = 1; k <= n; ++k) {
    Complex ss{}, cc{};
    for (int j = 1; j <= k; ++j) {
      const Complex ja = static_cast<double>(j) * a[j];
      ss += ja * c[static_cast<std::size_t>(k - j)];
      cc += ja * s[static_cast<std::size_t>(k - j)];
    }
    s[static_cast<std::size_t>(k)] = ss / static_cast<double>(k);
    c[static_cast<std::size_t>(k)] = sign * cc / static_cast<double>(k);
  }
  return {Jet(a.base_point(), std::move(s)), Jet(a.base_point(), std::move(c))};
}

}  // namespace

JetPair sincos(const Jet& a) { return coupled(a, -1.0, std::sin(a[0]), std::cos(a[0])); }
JetPair sinhcosh(const Jet& a) { return coupled(a, 1.0, std::sinh(a[0]), std::cosh(a[0])); }

Jet sin(const Jet& a) { return sincos(a).first; }
Jet cos(const Jet& a) { return sincos(a).second; }
Jet sinh(const Jet& a) { return sinhcosh(a).first; }
Jet cosh(const Jet& a) { return sinhcosh(a).second; }

Jet tanh(const Jet& a) {
  auto [s, c] = sinhcosh(a);
  return s / c;
}

Jet atan(const Jet& a) {
  const Complex value = std::atan(a[0]);
  if (a.order() == 0) return Jet::constant(a.base_point(), value, 0);
  Jet da = a.differentiate();
  Jet a_low = a.truncated(a.order() - 1);
  Jet den = a_low * a_low + Complex(1.0);
  require_nonsingular(den[0], "atan");
  return (da / den).integrate(value);
}

Jet compose_series(const Jet& outer, const Jet& inner) {
  if (outer.order() != inner.order()) {
    throw Error(ErrorKind::OrderMismatch, "series composition requires equal orders");
  }
  if (inner.is_identity()) {
    return Jet(inner.base_point(), std::vector<Complex>(outer.coeffs().begin(), outer.coeffs().end()));
  }
  const int n = inner.order();
  Jet shift = inner;
  shift[0] = 0.0;
  Jet result = Jet::constant(inner.base_point(), outer[n], n);
  for (int k = n - 1; k >= 0; --k) {
    result = result * shift;
    result[0] += outer[k];
  }
  return result;
}

}  // namespace nfold
