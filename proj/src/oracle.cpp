#include "nfold/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfold/error.hpp"

namespace nfold {

namespace {

/// Number of eigenvalues below x (Sturm count from the LDL^T pivots).
int count_below(const std::vector<double>& a, const std::vector<double>& b, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
    d = a[i] - x - (i == 0 ? 0.0 : off / d);
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::abs(a[i]) + std::abs(x) + 1.0);
    if (d < 0.0) ++count;
  }
  return count;
}

double real_sample(const ScalarFunction& f, double q, const char* what) {
  // Samples are checked for finiteness here, so tiny intermediate divisors
  // (e.g. m^3 for a rapidly decaying mass) are allowed.
  const ScopedSingularityFloor floor(std::numeric_limits<double>::min());
  const Complex v = f(q);
  if (!std::isfinite(v.real()) || std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real()))) {
    throw Error(ErrorKind::NotHermitianInput, std::string(what) + " is not real at q = " + std::to_string(q));
  }
  return v.real();
}

std::vector<double> solve_once(const FDProblem& p, int n, int k) {
  const double h = (p.qb - p.qa) / (n + 1);
  std::vector<double> half(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double q = p.qa + (i + 0.5) * h;
    const double m = real_sample(p.mass.m, q, "m");
    if (!(m > 0.0)) throw Error(ErrorKind::NotHermitianInput, "m is not positive at q = " + std::to_string(q));
    half[static_cast<std::size_t>(i)] = 1.0 / (2.0 * m * h * h);
  }
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> off(static_cast<std::size_t>(n) - 1);
  for (int i = 0; i < n; ++i) {
    const double q = p.qa + (i + 1) * h;
    diag[static_cast<std::size_t>(i)] =
        half[static_cast<std::size_t>(i)] + half[static_cast<std::size_t>(i) + 1] + real_sample(p.U, q, "U");
    if (i + 1 < n) off[static_cast<std::size_t>(i)] = -half[static_cast<std::size_t>(i) + 1];
  }
  return tridiagonal_lowest(diag, off, k);
}

}  // namespace

std::vector<double> tridiagonal_lowest(const std::vector<double>& a, const std::vector<double>& b, int k) {
  const int n = static_cast<int>(a.size());
  k = std::min(k, n);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double r = (i > 0 ? std::abs(b[static_cast<std::size_t>(i) - 1]) : 0.0) +
                     (i + 1 < n ? std::abs(b[static_cast<std::size_t>(i)]) : 0.0);
    lo = std::min(lo, a[static_cast<std::size_t>(i)] - r);
    hi = std::max(hi, a[static_cast<std::size_t>(i)] + r);
  }
  std::vector<double> out;
  double floor = lo;
  for (int j = 0; j < k; ++j) {
    double l = floor, u = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (l + u);
      if (mid <= l || mid >= u) break;
      (count_below(a, b, mid) > j ? u : l) = mid;
    }
    const double value = 0.5 * (l + u);
    out.push_back(value);
    floor = l;
  }
  return out;
}

FDReport solve_fd(const FDProblem& problem, int k, bool richardson) {
  if (problem.grid_size < 200) throw Error(ErrorKind::BadParams, "grid_size must be at least 200");
  if (!(problem.qa < problem.qb)) throw Error(ErrorKind::BadParams, "interval must satisfy qa < qb");
  if (k < 1 || k >= problem.grid_size) throw Error(ErrorKind::BadParams, "need 1 <= k < grid_size");
  FDReport r;
  r.qa = problem.qa;
  r.qb = problem.qb;
  r.grid_size = problem.grid_size;
  r.eigenvalues = solve_once(problem, problem.grid_size, k);
  if (richardson) {
    r.eigenvalues_fine = solve_once(problem, 2 * problem.grid_size + 1, k);
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
      r.extrapolated.push_back((4.0 * r.eigenvalues_fine[i] - r.eigenvalues[i]) / 3.0);
    }
  }
  return r;
}

WidenedInterval widen_interval(const std::vector<ScalarFunction>& functions, double qa, double qb, double max_width,
                               double threshold) {
  auto edge_ok = [&](double a, double b, bool& evaluable) {
    evaluable = true;
    try {
      for (const ScalarFunction& f : functions) {
        const double fa = std::abs(f(a));
        const double fb = std::abs(f(b));
        if (!std::isfinite(fa) || !std::isfinite(fb)) {
          evaluable = false;
          return false;
        }
        if (fa >= threshold || fb >= threshold) return false;
      }
    } catch (const Error&) {
      evaluable = false;
      return false;
    }
    return true;
  };
  WidenedInterval w{qa, qb, false};
  for (int it = 0; it < 200; ++it) {
    bool evaluable = true;
    if (edge_ok(w.qa, w.qb, evaluable)) {
      w.satisfied = true;
      return w;
    }
    if (!evaluable) return w;
    const double grow = 0.125 * (w.qb - w.qa);
    const double na = w.qa - grow;
    const double nb = w.qb + grow;
    if (nb - na > max_width) return w;
    bool next_evaluable = true;
    (void)edge_ok(na, nb, next_evaluable);
    if (!next_evaluable) return w;
    w.qa = na;
    w.qb = nb;
  }
  return w;
}

std::vector<SpectrumMatch> match_spectrum(const std::vector<double>& algebraic, const std::vector<double>& fd,
                                          double tolerance) {
  std::vector<SpectrumMatch> out;
  for (double lambda : algebraic) {
    SpectrumMatch m;
    m.algebraic = lambda;
    m.delta = std::numeric_limits<double>::infinity();
    for (double e : fd) {
      if (std::abs(e - lambda) < m.delta) {
        m.delta = std::abs(e - lambda);
        m.fd = e;
      }
    }
    m.matched = m.delta <= tolerance;
    out.push_back(m);
  }
  return out;
}

}  // namespace nfold
