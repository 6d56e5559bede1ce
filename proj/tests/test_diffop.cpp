#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "nfold/diffop.hpp"
#include "nfold/error.hpp"

using nfold::Complex;
using nfold::Jet;
using nfold::LinearDiffOp;
using nfold::ScalarFunction;

namespace {

const ScalarFunction q = ScalarFunction::variable();
const LinearDiffOp D = LinearDiffOp::derivative(1);

ScalarFunction random_test_function(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> c;
  for (int k = 0; k <= degree; ++k) c.emplace_back(d(rng), 0.3 * d(rng));
  return nfold::polynomial(c) * exp(-0.5 * q * q);
}

}  // namespace

// =============================================================================
// Application
// =============================================================================

TEST(DiffOpTest, ApplyExamples) {
  EXPECT_NEAR(std::abs(D.apply(q * q, 2.0) - 4.0), 0.0, 1e-14);
  const LinearDiffOp euler = LinearDiffOp::from_coefficients({ScalarFunction::constant(1.0), q});
  EXPECT_NEAR(std::abs(euler.apply(pow(q, 3), 1.0) - 4.0), 0.0, 1e-14);
  const ScalarFunction m = exp(2.0 * q);
  const LinearDiffOp pm = LinearDiffOp::multiply(pow(m, Complex(-0.5))) * D;
  EXPECT_NEAR(std::abs(pm.apply(exp(q), 0.0) - 1.0), 0.0, 1e-14);
}

TEST(DiffOpTest, ApplyRejectsShortJet) {
  const LinearDiffOp d3 = LinearDiffOp::derivative(3);
  try {
    (void)d3.apply(Jet::variable(0.0, 2));
    FAIL();
  } catch (const nfold::Error& e) {
    EXPECT_EQ(e.kind(), nfold::ErrorKind::OrderTooLow);
  }
}

// =============================================================================
// Composition
// =============================================================================

TEST(DiffOpTest, ComposeExamples) {
  EXPECT_NEAR(std::abs((D * D).apply(pow(q, 3), 1.0) - 6.0), 0.0, 1e-14);
  const LinearDiffOp dq = D * LinearDiffOp::multiply(q);
  for (double x : {-1.0, 0.5, 3.0}) EXPECT_NEAR(std::abs(dq.apply(q, x) - 2.0 * x), 0.0, 1e-13);
  const LinearDiffOp lower = D - LinearDiffOp::multiply(q);
  const LinearDiffOp raise = D + LinearDiffOp::multiply(q);
  EXPECT_NEAR(std::abs((lower * raise).apply(exp(-0.5 * q * q), 0.3) - 0.0), 0.0, 1e-14);
}

TEST(DiffOpTest, CompositionIsAssociative) {
  std::mt19937_64 rng(5);
  const LinearDiffOp A = LinearDiffOp::from_coefficients({sin(q), ScalarFunction::constant(2.0), q});
  const LinearDiffOp B = LinearDiffOp::from_coefficients({q * q, exp(q)});
  const LinearDiffOp C = LinearDiffOp::from_coefficients({cos(q), ScalarFunction(), 1.0 + q * q});
  const ScalarFunction psi = random_test_function(rng, 3);
  for (double x : {-0.7, 0.1, 1.2}) {
    const Complex a = ((A * B) * C).apply(psi, x);
    const Complex b = (A * (B * C)).apply(psi, x);
    EXPECT_LT(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST(DiffOpTest, ExpandedCoefficientsOfComposition) {
  // (d + q)(d - q) = d^2 - q^2 - 1.
  const LinearDiffOp op = (D + LinearDiffOp::multiply(q)) * (D - LinearDiffOp::multiply(q));
  const auto c = nfold::coefficient_jets(op, 0.4, 2);
  ASSERT_EQ(c.size(), 3u);
  EXPECT_NEAR(std::abs(c[0][0] - (-0.16 - 1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[0][1] - (-0.8)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[0][2] - (-1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[1][0]), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[2][0] - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(c[2][1]), 0.0, 1e-14);
}

TEST(DiffOpTest, GaugeConjugation) {
  // e^{-q^2/2} d e^{q^2/2} = d + q.
  const LinearDiffOp conj = LinearDiffOp::conjugate(D, q);
  std::mt19937_64 rng(9);
  const ScalarFunction psi = random_test_function(rng, 2);
  for (double x : {-1.0, 0.3, 2.0}) {
    EXPECT_NEAR(std::abs(conj.apply(psi, x) - (D + LinearDiffOp::multiply(q)).apply(psi, x)), 0.0, 1e-13);
  }
}

// =============================================================================
// Transposition
// =============================================================================

TEST(DiffOpTest, TransposeExamples) {
  const LinearDiffOp c = LinearDiffOp::multiply(sin(q));
  EXPECT_NEAR(std::abs(c.transpose().apply(q, 0.7) - c.apply(q, 0.7)), 0.0, 1e-15);
  const LinearDiffOp qd = LinearDiffOp::from_coefficients({ScalarFunction(), q});
  EXPECT_NEAR(std::abs(qd.transpose().apply(q * q, 1.0) + 3.0), 0.0, 1e-14);
}

TEST(DiffOpTest, TransposeIsInvolutionAndReversesProducts) {
  std::mt19937_64 rng(17);
  const LinearDiffOp A = LinearDiffOp::from_coefficients({sin(q), ScalarFunction::constant(2.0), q});
  const LinearDiffOp B = LinearDiffOp::conjugate(LinearDiffOp::from_coefficients({q * q, exp(q)}), cos(q));
  const LinearDiffOp P = A * B + 0.5 * LinearDiffOp::derivative(4);
  const LinearDiffOp Ptt = LinearDiffOp::from_coefficients({ScalarFunction::constant(1.0)}) * P.transpose().transpose();
  const ScalarFunction psi = random_test_function(rng, 4);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const double x = d(rng);
    const Complex a = P.apply(psi, x);
    EXPECT_LT(std::abs(Ptt.apply(psi, x) - a), 1e-10 * std::max(1.0, std::abs(a)));
    const Complex lhs = (A * B).transpose().apply(psi, x);
    const Complex rhs = (B.transpose() * A.transpose()).apply(psi, x);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(DiffOpTest, TransposeAdjointIdentity) {
  std::mt19937_64 rng(23);
  const LinearDiffOp P = LinearDiffOp::from_coefficients({cos(q), q, 1.0 + 0.1 * q * q, ScalarFunction(), sin(q)});
  const ScalarFunction f = random_test_function(rng, 3);
  const ScalarFunction g = random_test_function(rng, 2);
  auto integrand = [&](double x) { return P.apply(f, x) * g(x) - f(x) * P.transpose().apply(g, x); };
  const Complex total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, -14.0, 14.0, 12, 1e-12);
  EXPECT_LT(std::abs(total), 1e-6);
}

// =============================================================================
// Annihilators
// =============================================================================

TEST(AnnihilatorTest, MonomialSpaces) {
  const auto a2 = nfold::annihilator_from_basis({ScalarFunction::constant(1.0), q});
  EXPECT_NEAR(std::abs(a2.op.apply(q * q, 5.0) - 2.0), 0.0, 1e-12);
  const auto a3 = nfold::annihilator_from_basis({ScalarFunction::constant(1.0), q, q * q});
  EXPECT_NEAR(std::abs(a3.op.apply(pow(q, 3), 1.0) - 6.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a3.w[2](1.0)), 0.0, 1e-14);
}

TEST(AnnihilatorTest, TypeBLikeBasis) {
  const auto a = nfold::annihilator_from_basis({ScalarFunction::constant(1.0), pow(q, 3)});
  const double z = 2.0;
  // Brute-force Wronskians at z:
  //   W(1, z^3, z) = | 1 z^3 z ; 0 3z^2 1 ; 0 6z 0 | = -6z,   W(1, z^3) = 3z^2.
  const double w3 = -6.0 * z;
  const double w2 = 3.0 * z * z;
  EXPECT_NEAR(std::abs(a.op.apply(q, z) - w3 / w2), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a.w[1](z) + 2.0 / z), 0.0, 1e-13);
}

TEST(AnnihilatorTest, KernelAndAdjointKernel) {
  const std::vector<ScalarFunction> basis = {exp(q), sin(q) + q * q, 1.0 / (2.0 + q)};
  const auto a = nfold::annihilator_from_basis(basis, 1.0 + q * q);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> d(-1.0, 1.5);
  for (int i = 0; i < 10; ++i) {
    const double z = d(rng);
    for (const auto& phi : basis) EXPECT_LT(std::abs(a.op.apply(phi, z)), 1e-9 * (1.0 + std::abs(phi(z))));
    const auto monic = nfold::annihilator_from_basis(basis);
    for (const auto& psi : a.adjoint_kernel) {
      const Complex r = monic.op.transpose().apply(psi, z);
      EXPECT_LT(std::abs(r), 1e-8 * (1.0 + std::abs(psi(z))));
    }
    // w_{N-1} = -W'/W.
    const Jet wj = a.wronskian.eval_jet(z, 1);
    EXPECT_LT(std::abs(a.w[2](z) + wj[1] / wj[0]), 1e-10 * (1.0 + std::abs(a.w[2](z))));
  }
}

TEST(AnnihilatorTest, DegenerateBasisThrows) {
  const auto a = nfold::annihilator_from_basis({q, 2.0 * q});
  try {
    (void)a.op.apply(q * q, 0.5);
    FAIL();
  } catch (const nfold::Error& e) {
    EXPECT_EQ(e.kind(), nfold::ErrorKind::DegenerateBasis);
  }
}
