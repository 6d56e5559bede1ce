#pragma once

// Independent reference computations for the unit tests. Nothing here uses
// the library's jet engine.

#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using LComplex = std::complex<long double>;
using LFunction = std::function<LComplex(LComplex)>;

/// Fornberg finite-difference weights for the k-th derivative at 0 on the
/// nodes x[0..n-1].
inline std::vector<long double> fd_weights(const std::vector<long double>& x, int k) {
  const std::size_t n = x.size();
  std::vector<std::vector<long double>> c(n, std::vector<long double>(static_cast<std::size_t>(k) + 1, 0.0L));
  long double c1 = 1.0L;
  long double c4 = x[0];
  c[0][0] = 1.0L;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, static_cast<std::size_t>(k));
    long double c2 = 1.0L;
    const long double c5 = c4;
    c4 = x[i];
    for (std::size_t j = 0; j < i; ++j) {
      const long double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t s = mn; s >= 1; --s) c[i][s] = c1 * (s * c[i - 1][s - 1] - c5 * c[i - 1][s]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t s = mn; s >= 1; --s) c[j][s] = (c4 * c[j][s] - s * c[j][s - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<long double> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = c[i][static_cast<std::size_t>(k)];
  return w;
}

/// k-th derivative of f at x0 by a wide central stencil with step h, in
/// extended precision.
inline std::complex<double> fd_derivative(const LFunction& f, std::complex<double> x0, int k, double h = 1e-2) {
  const int p = k / 2 + 4;
  std::vector<long double> nodes;
  for (int i = -p; i <= p; ++i) nodes.push_back(static_cast<long double>(i));
  const auto w = fd_weights(nodes, k);
  LComplex acc = 0.0L;
  const LComplex base(x0.real(), x0.imag());
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += w[i] * f(base + nodes[i] * static_cast<long double>(h));
  acc /= std::pow(static_cast<long double>(h), k);
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

/// Scaled Taylor coefficient f^(k)(x0)/k! of an analytic f from the
/// trapezoidal rule on the circle |x - x0| = r (Cauchy integral formula).
inline std::complex<double> cauchy_coefficient(const std::function<std::complex<double>(std::complex<double>)>& f,
                                               std::complex<double> x0, int k, double r, int samples = 128) {
  std::complex<double> acc = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double theta = 2.0 * 3.14159265358979323846 * j / samples;
    const std::complex<double> e = std::polar(1.0, theta);
    acc += f(x0 + r * e) * std::pow(e, -k);
  }
  return acc / (static_cast<double>(samples) * std::pow(r, k));
}

inline double rel_err(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

}  // namespace oracle
