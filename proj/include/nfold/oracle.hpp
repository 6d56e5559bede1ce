#pragma once

#include <vector>

#include "nfold/mass_profile.hpp"

namespace nfold {

/// Dirichlet problem for H = -d/dq (1/2m) d/dq + U on [qa, qb].
struct FDProblem {
  MassProfile mass;
  ScalarFunction U;
  double qa = -8.0;
  double qb = 8.0;
  /// Number of interior grid points.
  int grid_size = 4000;
};

struct FDReport {
  /// Lowest eigenvalues on the requested grid.
  std::vector<double> eigenvalues;
  /// Same on the doubled grid.
  std::vector<double> eigenvalues_fine;
  /// (4 fine - coarse) / 3.
  std::vector<double> extrapolated;
  double qa = 0.0;
  double qb = 0.0;
  int grid_size = 0;
};

/// Lowest k eigenvalues of the flux-form discretization (staggered masses),
/// by Sturm-sequence bisection. Throws NotHermitianInput if U is not real or
/// m is not real and positive on the grid, BadParams for grid_size < 200.
FDReport solve_fd(const FDProblem& problem, int k, bool richardson = true);

/// Lowest k eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal.
std::vector<double> tridiagonal_lowest(const std::vector<double>& diagonal, const std::vector<double>& off_diagonal,
                                       int k);

struct WidenedInterval {
  double qa = 0.0;
  double qb = 0.0;
  /// True when every function is below the threshold at both ends.
  bool satisfied = false;
};

/// Grows [qa, qb] symmetrically in steps of 25% until all functions are
/// below `threshold` in modulus at both ends, or the width reaches
/// `max_width`, or a function stops being evaluable.
WidenedInterval widen_interval(const std::vector<ScalarFunction>& functions, double qa, double qb,
                               double max_width, double threshold = 1e-10);

struct SpectrumMatch {
  double algebraic = 0.0;
  double fd = 0.0;
  double delta = 0.0;
  bool matched = false;
};

/// Pairs every algebraic eigenvalue with the nearest FD eigenvalue.
std::vector<SpectrumMatch> match_spectrum(const std::vector<double>& algebraic, const std::vector<double>& fd,
                                          double tolerance);

}  // namespace nfold
