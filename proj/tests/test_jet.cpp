#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nfold/error.hpp"
#include "nfold/jet.hpp"
#include "oracles.hpp"

using nfold::Complex;
using nfold::Jet;
using oracle::LComplex;

namespace {

Jet random_jet(std::mt19937_64& rng, Complex q0, int order) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<Complex> c;
  for (int k = 0; k <= order; ++k) c.emplace_back(d(rng), d(rng));
  return Jet(q0, c);
}

void expect_jet_matches_fd(const Jet& j, const oracle::LFunction& f, int max_order, double tol) {
  for (int k = 0; k <= max_order; ++k) {
    const Complex fd = oracle::fd_derivative(f, j.base_point(), k);
    EXPECT_LT(oracle::rel_err(j.derivative(k), fd), tol) << "derivative order " << k;
  }
}

}  // namespace

// =============================================================================
// Construction
// =============================================================================

TEST(JetTest, VariableIsIdentity) {
  const Jet a = Jet::variable(3.0, 2);
  ASSERT_EQ(a.order(), 2);
  EXPECT_EQ(a[0], Complex(3.0));
  EXPECT_EQ(a[1], Complex(1.0));
  EXPECT_EQ(a[2], Complex(0.0));

  const Jet b = Jet::variable(0.0, 0);
  ASSERT_EQ(b.order(), 0);
  EXPECT_EQ(b[0], Complex(0.0));

  const Jet c = Jet::variable(Complex(1.0, 2.0), 3);
  EXPECT_EQ(c[0], Complex(1.0, 2.0));
  EXPECT_EQ(c[1], Complex(1.0));
  EXPECT_EQ(c[2], Complex(0.0));
  EXPECT_EQ(c[3], Complex(0.0));
}

// =============================================================================
// Arithmetic and primitives
// =============================================================================

TEST(JetTest, ExpAtZero) {
  const Jet e = exp(Jet::variable(0.0, 3));
  EXPECT_NEAR(std::abs(e[0] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e[1] - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e[2] - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e[3] - 1.0 / 6.0), 0.0, 1e-15);
}

TEST(JetTest, SquareOfIdentity) {
  const Jet x = Jet::variable(2.0, 2);
  const Jet s = x * x;
  EXPECT_EQ(s[0], Complex(4.0));
  EXPECT_EQ(s[1], Complex(4.0));
  EXPECT_EQ(s[2], Complex(1.0));
}

TEST(JetTest, SinOfSquareMatchesFiniteDifferences) {
  const Jet x = Jet::variable(0.7, 4);
  const Jet j = sin(x * x);
  expect_jet_matches_fd(j, [](LComplex q) { return std::sin(q * q); }, 4, 1e-6);
}

TEST(JetTest, PrimitivesMatchFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.3, 1.5);
  for (int trial = 0; trial < 5; ++trial) {
    const Complex q0(d(rng), 0.2 * d(rng));
    const Jet x = Jet::variable(q0, 4);
    const Complex r(0.37, -0.2);
    const LComplex rl(0.37L, -0.2L);
    expect_jet_matches_fd(exp(x), [](LComplex q) { return std::exp(q); }, 4, 1e-6);
    expect_jet_matches_fd(log(x), [](LComplex q) { return std::log(q); }, 4, 1e-6);
    expect_jet_matches_fd(sqrt(x), [](LComplex q) { return std::sqrt(q); }, 4, 1e-6);
    expect_jet_matches_fd(pow(x, r), [rl](LComplex q) { return std::pow(q, rl); }, 4, 1e-6);
    expect_jet_matches_fd(pow(x, -3), [](LComplex q) { return 1.0L / (q * q * q); }, 4, 1e-6);
    expect_jet_matches_fd(sin(x), [](LComplex q) { return std::sin(q); }, 4, 1e-6);
    expect_jet_matches_fd(cos(x), [](LComplex q) { return std::cos(q); }, 4, 1e-6);
    expect_jet_matches_fd(sinh(x), [](LComplex q) { return std::sinh(q); }, 4, 1e-6);
    expect_jet_matches_fd(cosh(x), [](LComplex q) { return std::cosh(q); }, 4, 1e-6);
    expect_jet_matches_fd(tanh(x), [](LComplex q) { return std::tanh(q); }, 4, 1e-6);
    expect_jet_matches_fd(atan(x), [](LComplex q) { return std::atan(q); }, 4, 1e-6);
    expect_jet_matches_fd(recip(x), [](LComplex q) { return 1.0L / q; }, 4, 1e-6);
    expect_jet_matches_fd(x / (1.0 + x * x), [](LComplex q) { return q / (1.0L + q * q); }, 4, 1e-6);
  }
}

TEST(JetTest, RingAxioms) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Jet a = random_jet(rng, 0.5, 8);
    const Jet b = random_jet(rng, 0.5, 8);
    const Jet c = random_jet(rng, 0.5, 8);
    const Jet lhs1 = (a * b) * c;
    const Jet rhs1 = a * (b * c);
    const Jet lhs2 = a * (b + c);
    const Jet rhs2 = a * b + a * c;
    for (int k = 0; k <= 8; ++k) {
      EXPECT_LT(std::abs(lhs1[k] - rhs1[k]), 1e-12 * std::max(1.0, std::abs(rhs1[k])));
      EXPECT_LT(std::abs(lhs2[k] - rhs2[k]), 1e-12 * std::max(1.0, std::abs(rhs2[k])));
    }
  }
}

TEST(JetTest, DivisionUndoesMultiplication) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Jet a = random_jet(rng, 0.0, 10);
    Jet b = random_jet(rng, 0.0, 10);
    b[0] += 2.0;
    const Jet back = (a * b) / b;
    for (int k = 0; k <= 10; ++k) EXPECT_LT(std::abs(back[k] - a[k]), 1e-12 * std::max(1.0, std::abs(a[k])));
  }
}

TEST(JetTest, OrderIsPreserved) {
  const Jet x = Jet::variable(0.4, 6);
  EXPECT_EQ((x * x).order(), 6);
  EXPECT_EQ(exp(x).order(), 6);
  EXPECT_EQ((x / (x + 1.0)).order(), 6);
  EXPECT_EQ(x.differentiate().order(), 5);
  EXPECT_EQ(x.integrate(0.0).order(), 7);
}

// =============================================================================
// Errors
// =============================================================================

TEST(JetTest, MismatchedOperandsThrow) {
  const Jet a = Jet::variable(0.0, 2);
  const Jet b = Jet::variable(0.0, 3);
  const Jet c = Jet::variable(1.0, 2);
  EXPECT_THROW(a + b, nfold::Error);
  EXPECT_THROW(a * c, nfold::Error);
}

TEST(JetTest, SingularPrimitivesThrow) {
  const Jet z = Jet::variable(0.0, 3);
  for (auto fn : {+[](const Jet& j) { return log(j); }, +[](const Jet& j) { return sqrt(j); },
                  +[](const Jet& j) { return recip(j); }}) {
    try {
      fn(z);
      FAIL() << "expected SingularJet";
    } catch (const nfold::Error& e) {
      EXPECT_EQ(e.kind(), nfold::ErrorKind::SingularJet);
    }
  }
  EXPECT_THROW(Jet::constant(0.0, 1.0, 3) / z, nfold::Error);
}

TEST(JetTest, ScopedSingularityFloor) {
  const Jet tiny = Jet::constant(0.0, 1e-20, 3);
  EXPECT_THROW((void)recip(tiny), nfold::Error);
  {
    const nfold::ScopedSingularityFloor floor(1e-30);
    EXPECT_DOUBLE_EQ(nfold::singularity_floor(), 1e-30);
    EXPECT_NEAR(std::abs(recip(tiny)[0] - 1e20), 0.0, 1e5);
  }
  EXPECT_DOUBLE_EQ(nfold::singularity_floor(), nfold::kSingularityFloor);
  EXPECT_THROW((void)recip(tiny), nfold::Error);
}
