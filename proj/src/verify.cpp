#include "nfold/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nfold/error.hpp"

namespace nfold {

namespace {

constexpr double kConditionCap = 1e10;

double relative(Complex residual, double magnitude, double scale) {
  return std::abs(residual) / std::max({magnitude, scale, std::numeric_limits<double>::min()});
}

bool eigen_less(Complex a, Complex b) {
  const double tol = 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b)));
  if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real();
  if (std::abs(a.imag() - b.imag()) > tol) return a.imag() < b.imag();
  return std::abs(a) < std::abs(b);
}

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

/// p(H) for p(x) = sum_k c_k x^k, composed by Horner's scheme.
LinearDiffOp polynomial_of(const std::vector<Complex>& c, const LinearDiffOp& H) {
  LinearDiffOp op = c.back() * LinearDiffOp::identity();
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    op = H * op + c[static_cast<std::size_t>(k)] * LinearDiffOp::identity();
  }
  return op;
}

double max_relative(const LinearDiffOp& lhs, const LinearDiffOp& rhs, const SampleGrid& grid,
                    const std::vector<ScalarFunction>& fs) {
  const int order = std::max(lhs.order(), rhs.order());
  double worst = 0.0;
  for (const ScalarFunction& f : fs) {
    for (Complex q : grid.points) {
      Jet fj;
      try {
        fj = f.eval_jet(q, order);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OrderMismatch) throw;
        throw Error(ErrorKind::OrderTooLow, "test function is not jet-evaluable to order " + std::to_string(order));
      }
      const Complex diff = lhs.apply(fj).value() - rhs.apply(fj).value();
      const double mag = std::max(application_magnitude(lhs, fj), application_magnitude(rhs, fj));
      worst = std::max(worst, relative(diff, mag, grid.scale));
    }
  }
  return worst;
}

}  // namespace

SampleGrid SampleGrid::from_window(const Window& window, int count) {
  Window w = window;
  if (count > 0) w.samples = count;
  SampleGrid g;
  for (double q : w.points()) g.points.emplace_back(q);
  return g;
}

std::vector<ScalarFunction> seeded_test_functions(int N, std::uint64_t seed, double center, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const ScalarFunction x = ScalarFunction::variable() - center;
  std::vector<ScalarFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<Complex> c;
    for (int k = 0; k <= N + 2; ++k) {
      const double re = d(rng);
      const double im = d(rng);
      c.emplace_back(re, im);
    }
    out.push_back(polynomial(c).compose(x) * exp(-0.25 * x * x));
  }
  return out;
}

double check_kernel(const BuiltSystem& system, const SampleGrid& grid) {
  double worst = 0.0;
  for (const ScalarFunction& phi : system.sector_minus) {
    for (Complex q : grid.points) {
      const Jet pj = phi.eval_jet(q, system.P.order());
      worst = std::max(worst, relative(system.P.apply(pj).value(), application_magnitude(system.P, pj), grid.scale));
    }
  }
  for (const ScalarFunction& phi : system.sector_plus) {
    for (Complex q : grid.points) {
      const Jet pj = phi.eval_jet(q, system.P_t.order());
      worst = std::max(worst, relative(system.P_t.apply(pj).value(), application_magnitude(system.P_t, pj), grid.scale));
    }
  }
  return worst;
}

IntertwiningReport check_intertwining(const BuiltSystem& system, const SampleGrid& grid,
                                      const std::vector<ScalarFunction>& test_functions) {
  IntertwiningReport r;
  r.direct = max_relative(system.P * system.H_minus, system.H_plus * system.P, grid, test_functions);
  r.transposed = max_relative(system.P_t * system.H_plus, system.H_minus * system.P_t, grid, test_functions);
  return r;
}

std::vector<Complex> characteristic_polynomial(const Eigen::MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1, 0.0);
  c[static_cast<std::size_t>(n)] = 1.0;
  Eigen::MatrixXcd mk = Eigen::MatrixXcd::Zero(n, n);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = a * mk + c[static_cast<std::size_t>(n - k + 1)] * id;
    c[static_cast<std::size_t>(n - k)] = -(a * mk).trace() / static_cast<double>(k);
  }
  if (n % 2 == 1) {
    for (Complex& v : c) v = -v;
  }
  return c;
}

SpectrumReport extract_matrix(const BuiltSystem& system, Sign sector, const SampleGrid& grid, double tolerance) {
  const auto& basis = sector == Sign::minus ? system.sector_minus : system.sector_plus;
  const LinearDiffOp& H = sector == Sign::minus ? system.H_minus : system.H_plus;
  const int n = static_cast<int>(basis.size());
  const int rows = static_cast<int>(grid.points.size());
  if (rows < 2 * n + 1) {
    throw Error(ErrorKind::BadParams, "matrix extraction needs at least 2N+1 grid points");
  }

  Eigen::MatrixXcd phi(rows, n);
  Eigen::MatrixXcd image(rows, n);
  Eigen::MatrixXd magnitude(rows, n);
  for (int r = 0; r < rows; ++r) {
    for (int l = 0; l < n; ++l) {
      const Jet pj = basis[static_cast<std::size_t>(l)].eval_jet(grid.points[static_cast<std::size_t>(r)], H.order());
      phi(r, l) = pj[0];
      image(r, l) = H.apply(pj).value();
      magnitude(r, l) = application_magnitude(H, pj);
    }
  }

  Eigen::VectorXd row_scale(rows);
  for (int r = 0; r < rows; ++r) {
    const double m = phi.row(r).cwiseAbs().maxCoeff();
    row_scale(r) = m > 0.0 ? 1.0 / m : 1.0;
  }
  Eigen::MatrixXcd scaled = row_scale.asDiagonal() * phi;
  Eigen::VectorXd col_scale(n);
  for (int l = 0; l < n; ++l) {
    const double m = scaled.col(l).norm();
    col_scale(l) = m > 0.0 ? 1.0 / m : 1.0;
  }
  scaled = scaled * col_scale.asDiagonal();

  SpectrumReport report;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(scaled);
  const auto& sv = svd.singularValues();
  report.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
  if (!(report.condition <= kConditionCap)) {
    throw Error(ErrorKind::IllConditionedBasis,
                "collocation matrix condition number " + std::to_string(report.condition) + " exceeds 1e10");
  }

  const Eigen::MatrixXcd solved = scaled.householderQr().solve(row_scale.asDiagonal() * image);
  const Eigen::MatrixXcd x = col_scale.asDiagonal() * solved;
  const Eigen::MatrixXcd fitted = phi * x;
  for (int r = 0; r < rows; ++r) {
    double mag = magnitude.row(r).maxCoeff();
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) mag = std::max(mag, std::abs(phi(r, l) * x(l, k)));
    }
    for (int k = 0; k < n; ++k) {
      report.fit_residual = std::max(report.fit_residual, relative(fitted(r, k) - image(r, k), mag, grid.scale));
    }
  }
  if (!(report.fit_residual <= tolerance)) {
    throw Error(ErrorKind::InvarianceViolated,
                "sector is not invariant (fit residual " + std::to_string(report.fit_residual) + ")");
  }

  report.matrix = x.transpose();
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(report.matrix, false);
  for (int i = 0; i < n; ++i) report.eigenvalues.push_back(eig.eigenvalues()(i));
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), eigen_less);

  report.charpoly = characteristic_polynomial(report.matrix);
  for (Complex lambda : report.eigenvalues) {
    double mag = 0.0;
    for (std::size_t k = 0; k < report.charpoly.size(); ++k) {
      mag += std::abs(report.charpoly[k]) * std::pow(std::max(1.0, std::abs(lambda)), static_cast<double>(k));
    }
    report.companion_residual = std::max(report.companion_residual, std::abs(horner(report.charpoly, lambda)) / mag);
  }
  return report;
}

AntiCommutatorReport check_anticommutator(const BuiltSystem& system, const SampleGrid& grid,
                                          const std::vector<ScalarFunction>& test_functions) {
  const double two_n = std::pow(2.0, system.N);
  const double monic_sign = system.N % 2 == 0 ? 1.0 : -1.0;
  AntiCommutatorReport r;
  for (Sign side : {Sign::minus, Sign::plus}) {
    const SpectrumReport spectrum = extract_matrix(system, side, grid);
    const LinearDiffOp& H = side == Sign::minus ? system.H_minus : system.H_plus;
    const LinearDiffOp lhs = side == Sign::minus ? system.P_t * system.P : system.P * system.P_t;
    const LinearDiffOp literal = polynomial_of(spectrum.charpoly, H);
    const double monic = max_relative(lhs, (two_n * monic_sign) * literal, grid, test_functions);
    const double opposite = max_relative(lhs, (-two_n * monic_sign) * literal, grid, test_functions);
    (side == Sign::minus ? r.minus : r.plus) = monic;
    (side == Sign::minus ? r.minus_opposite_sign : r.plus_opposite_sign) = system.N % 2 == 0 ? monic : opposite;
  }
  return r;
}

double check_partner_difference(const BuiltSystem& system, const SampleGrid& grid) {
  const double N = system.N;
  const ScalarFunction& m = system.mass.m;
  const ScalarFunction m1 = m.derivative(1);
  const ScalarFunction m2 = m.derivative(2);
  const ScalarFunction& w = system.w_top;
  const ScalarFunction expected = pow(m, Complex((N - 2.0) / 2.0)) * w.derivative(1) +
                                  (N - 1.0) / 2.0 * pow(m, Complex((N - 4.0) / 2.0)) * m1 * w +
                                  N * N * m2 / (4.0 * pow(m, 2)) - 3.0 * N * N * pow(m1, 2) / (8.0 * pow(m, 3));
  const ScalarFunction x = ScalarFunction::variable();
  const ScalarFunction psi = (1.0 + x + x * x) * exp(-0.25 * x * x);
  double worst = 0.0;
  for (Complex q : grid.points) {
    const Jet pj = psi.eval_jet(q, 2);
    const Complex diff = system.H_plus.apply(pj).value() - system.H_minus.apply(pj).value();
    const double mag = std::max(application_magnitude(system.H_plus, pj), application_magnitude(system.H_minus, pj));
    worst = std::max(worst, relative(diff - expected(q) * pj[0], mag, grid.scale));
  }
  return worst;
}

DecayReport decay_probe(const BuiltSystem& system, Sign sector, const std::vector<double>& boundary_points) {
  const auto& basis = sector == Sign::minus ? system.sector_minus : system.sector_plus;
  // Values are reported as computed; tiny intermediate divisors are allowed.
  const ScopedSingularityFloor floor(std::numeric_limits<double>::min());
  DecayReport report;
  report.points = boundary_points;
  for (const ScalarFunction& phi : basis) {
    std::vector<double> row;
    for (double q : boundary_points) {
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = std::norm(phi(q)) / std::sqrt(std::abs(system.mass.m(q)));
      } catch (const Error&) {
      }
      row.push_back(v);
    }
    report.values.push_back(std::move(row));
  }
  return report;
}

double max_entry_delta(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace nfold
