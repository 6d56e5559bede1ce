#include "nfold/builder.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nfold/error.hpp"
#include "nfold/integrators.hpp"

namespace nfold {

std::vector<double> Window::points() const {
  std::vector<double> p;
  const int n = std::max(samples, 2);
  p.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p.push_back(qmin + (qmax - qmin) * i / (n - 1));
  return p;
}

ScalarFunction solve_change_of_variable(const ScalarFunction& A, const MassProfile& mass, Complex q_anchor,
                                        Complex z_anchor, double branch) {
  const ScalarFunction m = mass.m;
  const Complex s0 = branch * std::sqrt(2.0 * m(q_anchor) * A(z_anchor));
  if (std::abs(s0) < singularity_floor()) {
    throw Error(ErrorKind::SingularTurningPoint, "A(z) * m(q) vanishes at the anchor");
  }
  auto rhs = [m, A](const Jet& q, const Jet& y, Complex hint) {
    Jet r = sqrt(2.0 * m.eval(q) * A.eval(y));
    if (std::abs(r.value() - hint) > std::abs(r.value() + hint)) r = -r;
    return r;
  };
  return ScalarFunction::primitive(std::make_shared<TaylorOdeSolution>("z", rhs, q_anchor, z_anchor, s0));
}

GaugeData compute_gauge_and_delta(const GaugedData& data, const MassProfile& mass, const ScalarFunction& z,
                                  const Annihilator& annihilator) {
  const double N = data.N();
  const ScalarFunction& A = data.A;
  const ScalarFunction& B = data.B;
  const ScalarFunction A1 = A.derivative(1);
  const ScalarFunction A2 = A.derivative(2);
  const ScalarFunction B1 = B.derivative(1);
  const ScalarFunction& wt = annihilator.w.back();
  const ScalarFunction wt1 = wt.derivative(1);

  GaugeData out;
  out.delta_C = N * (N - 2.0) / 2.0 * (A2 - pow(A1, 2) / (2.0 * A)) + N * (B1 - B * A1 / (2.0 * A)) - A1 * wt -
                2.0 * A * wt1;
  const ScalarFunction& m = mass.m;
  const ScalarFunction mp = m.derivative(1);
  const ScalarFunction zp = z.derivative(1);
  const ScalarFunction zpp = z.derivative(2);
  out.gauge_prime_minus = zpp / (2.0 * zp) - m * B.compose(z) / zp - mp / (2.0 * m);
  out.g = pow(m, Complex(-N / 2.0)) * pow(zp, data.N());
  return out;
}

double invariance_residual(const GaugedData& data, const std::vector<Complex>& z_points) {
  const int n = data.N();
  const int rows = static_cast<int>(z_points.size());
  const LinearDiffOp H = LinearDiffOp::from_coefficients({-data.C, -data.B, -data.A});
  Eigen::MatrixXcd basis(rows, n);
  Eigen::MatrixXcd image(rows, n);
  Eigen::VectorXd magnitude(rows);
  for (int r = 0; r < rows; ++r) {
    const Complex z0 = z_points[static_cast<std::size_t>(r)];
    const double a = std::abs(data.A(z0)), b = std::abs(data.B(z0)), c = std::abs(data.C(z0));
    double mag = 0.0;
    for (int i = 0; i < n; ++i) {
      const Jet phi = data.basis[static_cast<std::size_t>(i)].eval_jet(z0, 2);
      basis(r, i) = phi[0];
      image(r, i) = H.apply(phi).value();
      mag = std::max(mag, a * std::abs(phi.derivative(2)) + b * std::abs(phi[1]) + c * std::abs(phi[0]));
    }
    magnitude(r) = mag;
  }
  const Eigen::MatrixXcd fit = basis.colPivHouseholderQr().solve(image);
  const Eigen::MatrixXcd resid = basis * fit - image;
  double worst = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(resid(r, i)) / std::max(magnitude(r), 1e-300));
  }
  return worst;
}

ScalarFunction potential_of(const LinearDiffOp& H) {
  return ScalarFunction::from_taylor("potential", [H](Complex q0, int order) {
    return H.apply(Jet::constant(q0, 1.0, order + H.order()));
  });
}

double pdm_pattern_residual(const LinearDiffOp& H, const ScalarFunction& m, const std::vector<double>& q) {
  double worst = 0.0;
  for (double x : q) {
    const auto c = coefficient_jets(H, x, 0);
    if (c.size() != 3) return std::numeric_limits<double>::infinity();
    const Jet mj = m.eval_jet(x, 1);
    const Complex c2 = -1.0 / (2.0 * mj[0]);
    const Complex c1 = mj[1] / (2.0 * mj[0] * mj[0]);
    worst = std::max(worst, std::abs(c[2][0] - c2) / std::abs(c2));
    worst = std::max(worst, std::abs(c[1][0] - c1) / std::max(std::abs(c1), std::abs(c2)));
  }
  return worst;
}

std::vector<ScalarFunction> gauge_sector(const ScalarFunction& gauge_prime, const std::vector<ScalarFunction>& basis_z,
                                         const ScalarFunction& z, double anchor, ScalarFunction* gauge_out) {
  const ScalarFunction G = antiderivative(gauge_prime, anchor);
  if (gauge_out != nullptr) *gauge_out = G;
  const ScalarFunction weight = exp(-G);
  const Complex norm = basis_z.front()(z(anchor));
  if (std::abs(norm) == 0.0) throw Error(ErrorKind::DegenerateBasis, "leading basis function vanishes at the anchor");
  std::vector<ScalarFunction> out;
  out.reserve(basis_z.size());
  for (const ScalarFunction& phi : basis_z) out.push_back(weight * phi.compose(z) / norm);
  return out;
}

GenericSystem build(const GaugedData& data, const MassProfile& mass, const Window& window, const BuildOptions& options) {
  const int N = data.N();
  if (N < 1) throw Error(ErrorKind::BadParams, "gauged data needs a nonempty basis");
  if (!(window.qmin < window.qmax) || window.anchor < window.qmin || window.anchor > window.qmax) {
    throw Error(ErrorKind::BadParams, "window must satisfy qmin <= anchor <= qmax and qmin < qmax");
  }

  GenericSystem s;
  s.N = N;
  s.mass = mass;
  s.window = window;
  s.data = data;
  s.z = options.z_of_q ? *options.z_of_q
                       : solve_change_of_variable(data.A, mass, window.anchor, options.z_anchor, options.branch);

  std::vector<Complex> z_points;
  const int probes = std::max(2 * N + 2, 8);
  for (int i = 0; i < probes; ++i) z_points.push_back(s.z(window.qmin + (window.qmax - window.qmin) * i / (probes - 1)));
  const double inv = invariance_residual(data, z_points);
  if (!(inv <= options.invariance_tolerance)) {
    throw Error(ErrorKind::InvarianceViolated,
                "H~- does not preserve the basis span (relative residual " + std::to_string(inv) + ")");
  }

  s.annihilator = annihilator_from_basis(data.basis);
  const GaugeData gauge = compute_gauge_and_delta(data, mass, s.z, s.annihilator);
  s.delta_C = gauge.delta_C;
  s.g = gauge.g;
  s.gauge_prime_minus = gauge.gauge_prime_minus;

  const ScalarFunction& m = mass.m;
  const ScalarFunction mp = m.derivative(1);
  const ScalarFunction zp = s.z.derivative(1);
  const ScalarFunction zpp = s.z.derivative(2);
  const LinearDiffOp Dz = LinearDiffOp::from_coefficients({ScalarFunction(), 1.0 / zp});

  const ScalarFunction Az = data.A.compose(s.z);
  const ScalarFunction Bz = data.B.compose(s.z);
  const ScalarFunction Cz = data.C.compose(s.z);
  const LinearDiffOp Ht_minus = -(Az * (Dz * Dz)) - Bz * Dz - LinearDiffOp::multiply(Cz);
  const LinearDiffOp Ht_plus = Ht_minus - LinearDiffOp::multiply(s.delta_C.compose(s.z));
  s.H_minus = LinearDiffOp::conjugate(Ht_minus, s.gauge_prime_minus);
  s.H_plus = LinearDiffOp::conjugate(Ht_plus, s.gauge_prime_minus);

  std::vector<LinearDiffOp> powers{LinearDiffOp::identity()};
  for (int k = 1; k <= N; ++k) powers.push_back(Dz * powers.back());
  LinearDiffOp core = powers[static_cast<std::size_t>(N)];
  for (int k = 0; k < N; ++k) core = core + s.annihilator.w[static_cast<std::size_t>(k)].compose(s.z) * powers[static_cast<std::size_t>(k)];
  s.P = LinearDiffOp::conjugate(s.g * core, s.gauge_prime_minus);
  s.P_t = s.P.transpose();

  s.U_minus = potential_of(s.H_minus);
  s.U_plus = potential_of(s.H_plus);
  s.E = zpp / zp;
  const ScalarFunction Q = (N - 2.0) / 2.0 * data.A.derivative(1) + data.B;
  s.W = -m * Q.compose(s.z) / zp;
  s.gauge_prime_plus = -s.gauge_prime_minus + (N - 1.0) * s.E - (N / 2.0) * mp / m;

  s.sector_minus = gauge_sector(s.gauge_prime_minus, data.basis, s.z, window.anchor, &s.gauge_minus);
  s.sector_plus = gauge_sector(s.gauge_prime_plus, s.annihilator.adjoint_kernel, s.z, window.anchor, &s.gauge_plus);

  const LinearDiffOp P = s.P;
  s.w_top = ScalarFunction::from_taylor("w_top", [P, N](Complex q0, int order) {
    return coefficient_jets(P, q0, order)[static_cast<std::size_t>(N - 1)];
  });
  return s;
}

}  // namespace nfold
