#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nfold/builder.hpp"

namespace nfold {

/// Points at which certificates are evaluated. Relative residuals divide by
/// max(magnitude, scale), so `scale` is the floor below which a residual is
/// treated as absolute.
struct SampleGrid {
  std::vector<Complex> points;
  double scale = 1e-12;

  /// `count` evenly spaced points of the window (window.samples if 0).
  static SampleGrid from_window(const Window& window, int count = 0);
};

struct SpectrumReport {
  /// H phi_k = sum_l matrix(k, l) phi_l.
  Eigen::MatrixXcd matrix;
  /// Sorted by (Re, Im), ties by magnitude.
  std::vector<Complex> eigenvalues;
  double fit_residual = 0.0;
  /// Coefficients c_0..c_N of det(M - x I) = sum_k c_k x^k.
  std::vector<Complex> charpoly;
  /// max_i |charpoly(lambda_i)| relative to sum_k |c_k| max(1, |lambda_i|)^k.
  double companion_residual = 0.0;
  /// Condition number of the equilibrated collocation matrix.
  double condition = 0.0;
};

struct IntertwiningReport {
  /// (P H- - H+ P) psi.
  double direct = 0.0;
  /// (P^t H+ - H- P^t) psi.
  double transposed = 0.0;

  double max() const { return direct > transposed ? direct : transposed; }
};

struct AntiCommutatorReport {
  /// P^t P psi against 2^N det(x I - M-) at x = H-, on the minus side.
  double minus = 0.0;
  /// P P^t psi against 2^N det(x I - M+) at x = H+.
  double plus = 0.0;
  /// Same comparisons with the opposite overall sign, i.e. 2^N det(M - H).
  /// Equal to the above for even N.
  double minus_opposite_sign = 0.0;
  double plus_opposite_sign = 0.0;

  double max() const { return minus > plus ? minus : plus; }
};

struct DecayReport {
  std::vector<double> points;
  /// values[k][j] = |phi_k(points[j])|^2 / sqrt(m(points[j])); NaN where the
  /// sector function cannot be evaluated. The singularity floor is lifted
  /// while probing.
  std::vector<std::vector<double>> values;
};

/// Polynomials of degree N + 2 with seeded complex coefficients times a
/// Gaussian centred at `center`.
std::vector<ScalarFunction> seeded_test_functions(int N, std::uint64_t seed, double center = 0.0, int count = 3);

/// max_{i, q} |P phi_i(q)| relative to the application magnitude.
double check_kernel(const BuiltSystem& system, const SampleGrid& grid);

/// Throws OrderTooLow if the test functions cannot be jet-evaluated.
IntertwiningReport check_intertwining(const BuiltSystem& system, const SampleGrid& grid,
                                      const std::vector<ScalarFunction>& test_functions);

/// Least-squares matrix of H on the sector. Throws IllConditionedBasis
/// (condition > 1e10) or InvarianceViolated (fit residual > tolerance).
SpectrumReport extract_matrix(const BuiltSystem& system, Sign sector, const SampleGrid& grid,
                              double tolerance = 1e-8);

AntiCommutatorReport check_anticommutator(const BuiltSystem& system, const SampleGrid& grid,
                                          const std::vector<ScalarFunction>& test_functions);

/// (H+ - H-) psi for a fixed psi against the multiplication operator built
/// from w_{N-1}:
///   m^{(N-2)/2} w' + (N-1)/2 m^{(N-4)/2} m' w + N^2 m''/4m^2 - 3N^2 m'^2/8m^3.
double check_partner_difference(const BuiltSystem& system, const SampleGrid& grid);

DecayReport decay_probe(const BuiltSystem& system, Sign sector, const std::vector<double>& boundary_points);

/// Largest absolute difference between corresponding matrix entries.
double max_entry_delta(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// det(M - x I) by the Faddeev-LeVerrier recursion.
std::vector<Complex> characteristic_polynomial(const Eigen::MatrixXcd& m);

}  // namespace nfold
