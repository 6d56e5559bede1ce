#include <gtest/gtest.h>

#include <cmath>

#include "nfold/error.hpp"
#include "nfold/type_a.hpp"
#include "nfold/verify.hpp"

using nfold::Complex;
using nfold::LinearDiffOp;
using nfold::SampleGrid;
using nfold::ScalarFunction;
using nfold::Sign;
using nfold::TypeACase;
using nfold::TypeAConfig;

namespace {

const ScalarFunction q = ScalarFunction::variable();

TypeAConfig harmonic(Complex R = 0.0) {
  TypeAConfig cfg;
  cfg.which = TypeACase::I;
  cfg.N = 2;
  cfg.b = {0.0, -2.0, 0.0};
  cfg.R = R;
  return cfg;
}

nfold::MassProfile exp_mass() {
  nfold::MassParams p;
  p.u_anchor = std::log(6.0);
  return nfold::builtin_mass_profile("exp_scale", p);
}

nfold::TypeASystem flat_harmonic(Complex R = 0.0) {
  return nfold::build_type_a(harmonic(R), nfold::builtin_mass_profile("constant"), {-2.0, 2.0, 0.0, 21});
}

nfold::TypeASystem exp_harmonic() {
  return nfold::build_type_a(harmonic(), exp_mass(), {1.0, 2.5, std::log(6.0), 21});
}

nfold::ErrorKind error_kind(const std::function<void()>& f) {
  try {
    f();
  } catch (const nfold::Error& e) {
    return e.kind();
  }
  return nfold::ErrorKind::ParseError;
}

}  // namespace

// =============================================================================
// Kernel
// =============================================================================

TEST(VerifyTest, KernelOfHarmonicSystem) {
  const auto sys = flat_harmonic();
  EXPECT_LE(nfold::check_kernel(sys.system, SampleGrid::from_window(sys.system.window)), 1e-9);
}

TEST(VerifyTest, KernelFirstOrder) {
  const Complex c(0.7, 0.2);
  TypeAConfig cfg;
  cfg.b = {0.0, 0.0, c};
  const auto sys = nfold::build_type_a(cfg, nfold::builtin_mass_profile("constant"), {});
  const ScalarFunction e = exp(c * q);
  for (double x : {-1.0, 0.0, 0.5}) EXPECT_NEAR(std::abs(sys.system.P.apply(e, x)), 0.0, 1e-14);
  EXPECT_LE(nfold::check_kernel(sys.system, SampleGrid::from_window(sys.system.window)), 1e-14);
}

TEST(VerifyTest, KernelNegativeControl) {
  auto sys = flat_harmonic().system;
  sys.sector_minus = {pow(q, 2) * sys.sector_minus[0]};
  sys.sector_plus.clear();
  EXPECT_GT(nfold::check_kernel(sys, SampleGrid::from_window(sys.window)), 1e-2);
}

// =============================================================================
// Intertwining
// =============================================================================

TEST(VerifyTest, IntertwiningAcrossCases) {
  const ScalarFunction psi = (1.0 + q + q * q) * exp(-0.25 * q * q);
  for (TypeACase c : {TypeACase::I, TypeACase::II, TypeACase::III, TypeACase::IV, TypeACase::V}) {
    for (const char* mname : {"constant", "exp_scale"}) {
      TypeAConfig cfg;
      cfg.which = c;
      cfg.N = 3;
      cfg.b = {0.3, -0.6, 0.8};
      cfg.R = 0.1;
      const auto mass = nfold::builtin_mass_profile(mname);
      const auto sys = nfold::build_type_a(cfg, mass, nfold::default_window(cfg, mass, 9));
      const auto r = nfold::check_intertwining(sys.system, SampleGrid::from_window(sys.system.window), {psi});
      EXPECT_LE(r.max(), 1e-8) << to_string(c) << " " << mname;
    }
  }
}

TEST(VerifyTest, IntertwiningFirstOrderConstantCoefficients) {
  TypeAConfig cfg;
  cfg.b = {0.0, 0.0, 1.3};
  const auto sys = nfold::build_type_a(cfg, nfold::builtin_mass_profile("constant"), {});
  const auto r = nfold::check_intertwining(sys.system, SampleGrid::from_window(sys.system.window),
                                           {exp(q) * sin(2.0 * q), 1.0 / (2.0 + q * q)});
  EXPECT_LE(r.max(), 1e-14);
}

TEST(VerifyTest, IntertwiningNegativeControl) {
  TypeAConfig cfg;
  cfg.N = 2;
  cfg.b = {0.0, 0.7, -0.3};
  auto sys = nfold::build_type_a(cfg, nfold::builtin_mass_profile("constant"), {}).system;
  std::swap(sys.H_minus, sys.H_plus);
  const auto r = nfold::check_intertwining(sys, SampleGrid::from_window(sys.window), {exp(-0.25 * q * q)});
  EXPECT_GT(r.direct, 1e-2);
}

TEST(VerifyTest, IntertwiningRejectsShortJets) {
  const auto sys = flat_harmonic();
  const ScalarFunction shallow = ScalarFunction::from_taylor("shallow", [](Complex x0, int) {
    return nfold::Jet::variable(x0, 1);
  });
  EXPECT_EQ(error_kind([&] { (void)nfold::check_intertwining(sys.system, SampleGrid::from_window(sys.system.window), {shallow}); }),
            nfold::ErrorKind::OrderTooLow);
}

// =============================================================================
// Matrix extraction
// =============================================================================

TEST(VerifyTest, HarmonicMatrix) {
  const auto sys = flat_harmonic();
  const auto r = nfold::extract_matrix(sys.system, Sign::minus, SampleGrid::from_window(sys.system.window));
  EXPECT_LE(r.fit_residual, 1e-8);
  EXPECT_NEAR(std::abs(r.matrix(0, 0) + 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.matrix(1, 1) - 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.matrix(0, 1)), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.matrix(1, 0)), 0.0, 1e-10);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(std::abs(r.eigenvalues[0] + 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.eigenvalues[1] - 1.0), 0.0, 1e-10);
  EXPECT_LE(r.companion_residual, 1e-8);
  // det(M - x I) = (-1 - x)(1 - x) = x^2 - 1.
  ASSERT_EQ(r.charpoly.size(), 3u);
  EXPECT_NEAR(std::abs(r.charpoly[0] + 1.0), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.charpoly[1]), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(r.charpoly[2] - 1.0), 0.0, 1e-10);
}

TEST(VerifyTest, MatrixIsMassIndependent) {
  const auto flat = flat_harmonic();
  const auto curved = exp_harmonic();
  const auto a = nfold::extract_matrix(flat.system, Sign::minus, SampleGrid::from_window(flat.system.window));
  const auto b = nfold::extract_matrix(curved.system, Sign::minus, SampleGrid::from_window(curved.system.window));
  EXPECT_LE(nfold::max_entry_delta(a.matrix, b.matrix), 1e-7);
}

TEST(VerifyTest, FirstOrderMatrixIsLocalEigenvalue) {
  TypeAConfig cfg;
  cfg.which = TypeACase::III;
  cfg.b = {0.4, -0.2, 0.9};
  cfg.R = 0.3;
  const auto mass = nfold::builtin_mass_profile("exp_scale");
  const auto sys = nfold::build_type_a(cfg, mass, nfold::default_window(cfg, mass, 7));
  const auto grid = SampleGrid::from_window(sys.system.window);
  const auto r = nfold::extract_matrix(sys.system, Sign::minus, grid);
  ASSERT_EQ(r.matrix.rows(), 1);
  const ScalarFunction& phi = sys.system.sector_minus[0];
  for (Complex x : grid.points) {
    EXPECT_NEAR(std::abs(sys.system.H_minus.apply(phi, x) / phi(x) - r.eigenvalues[0]), 0.0, 1e-10);
  }
}

TEST(VerifyTest, SpectrumStableUnderRefinementAndShift) {
  TypeAConfig cfg;
  cfg.which = TypeACase::II;
  cfg.N = 3;
  cfg.b = {0.0, 1.5, 0.5};
  const auto mass = nfold::builtin_mass_profile("constant");
  const nfold::Window w{0.4, 1.6, 1.0, 11};
  const auto sys = nfold::build_type_a(cfg, mass, w);
  const auto base = nfold::extract_matrix(sys.system, Sign::minus, SampleGrid::from_window(w));
  const auto fine = nfold::extract_matrix(sys.system, Sign::minus, SampleGrid::from_window(w, 21));
  const auto shifted = nfold::extract_matrix(sys.system, Sign::minus, SampleGrid::from_window({0.8, 2.0, 1.0, 11}));
  for (int i = 0; i < 3; ++i) {
    EXPECT_LE(std::abs(base.eigenvalues[i] - fine.eigenvalues[i]), 1e-6);
    EXPECT_LE(std::abs(base.eigenvalues[i] - shifted.eigenvalues[i]), 1e-6);
  }
  EXPECT_LE(base.companion_residual, 1e-8);
}

TEST(VerifyTest, ConstantShiftMovesSpectrumOnly) {
  const auto a = flat_harmonic();
  const auto b = flat_harmonic(0.5);
  const auto grid = SampleGrid::from_window(a.system.window);
  const auto ra = nfold::extract_matrix(a.system, Sign::minus, grid);
  const auto rb = nfold::extract_matrix(b.system, Sign::minus, grid);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(std::abs(rb.eigenvalues[i] - (ra.eigenvalues[i] - 0.5)), 0.0, 1e-10);
  EXPECT_LE(nfold::check_intertwining(b.system, grid, {exp(-0.25 * q * q)}).max(), 1e-12);
}

TEST(VerifyTest, CorruptedPartnerBreaksBothCertificates) {
  auto sys = flat_harmonic().system;
  sys.H_plus = sys.H_plus + LinearDiffOp::multiply(0.1 * q);
  const auto grid = SampleGrid::from_window(sys.window);
  const auto tf = nfold::seeded_test_functions(2, 42);
  EXPECT_GT(nfold::check_intertwining(sys, grid, tf).max(), 1e-2);
  EXPECT_EQ(error_kind([&] { (void)nfold::check_anticommutator(sys, grid, tf); }), nfold::ErrorKind::InvarianceViolated);
}

TEST(VerifyTest, MatrixExtractionErrors) {
  const auto sys = flat_harmonic();
  EXPECT_EQ(error_kind([&] { (void)nfold::extract_matrix(sys.system, Sign::minus, SampleGrid::from_window(sys.system.window, 4)); }),
            nfold::ErrorKind::BadParams);
  auto broken = sys.system;
  broken.sector_minus[1] = exp(-q * q) * (q + 1e-12 * q * q * q);
  broken.sector_minus[0] = exp(-q * q) * q;
  EXPECT_EQ(error_kind([&] { (void)nfold::extract_matrix(broken, Sign::minus, SampleGrid::from_window(sys.system.window)); }),
            nfold::ErrorKind::IllConditionedBasis);
  broken = sys.system;
  broken.sector_minus[1] = pow(q, 3) * exp(-q * q);
  EXPECT_EQ(error_kind([&] { (void)nfold::extract_matrix(broken, Sign::minus, SampleGrid::from_window(sys.system.window)); }),
            nfold::ErrorKind::InvarianceViolated);
}

TEST(VerifyTest, CharacteristicPolynomialSign) {
  Eigen::MatrixXcd m(3, 3);
  m << 2.0, 1.0, 0.0, 0.0, 3.0, 0.0, 1.0, 0.0, -1.0;
  // det(M - x I) = (2 - x)(3 - x)(-1 - x) = -x^3 + 4x^2 - x - 6.
  const auto c = nfold::characteristic_polynomial(m);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_NEAR(std::abs(c[0] + 6.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(c[1] + 1.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(c[2] - 4.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(c[3] + 1.0), 0.0, 1e-13);
}

// =============================================================================
// Anti-commutator and partner difference
// =============================================================================

TEST(VerifyTest, AntiCommutatorFirstOrder) {
  for (Complex c : {Complex(1.0), Complex(1.0, 1.0)}) {
    TypeAConfig cfg;
    cfg.b = {0.0, 0.0, c};
    const auto sys = nfold::build_type_a(cfg, nfold::builtin_mass_profile("constant"), {});
    const auto grid = SampleGrid::from_window(sys.system.window);
    const auto r = nfold::check_anticommutator(sys.system, grid, nfold::seeded_test_functions(1, 42));
    EXPECT_LE(r.max(), 1e-12);
    EXPECT_GT(r.minus_opposite_sign, 1.0);
  }
}

TEST(VerifyTest, AntiCommutatorHarmonic) {
  const ScalarFunction psi = exp(-0.5 * q * q);
  const auto flat = flat_harmonic();
  EXPECT_LE(nfold::check_anticommutator(flat.system, SampleGrid::from_window(flat.system.window), {psi}).max(), 1e-6);
  const auto curved = exp_harmonic();
  const ScalarFunction shifted = exp(-0.5 * (q - 1.8) * (q - 1.8));
  EXPECT_LE(nfold::check_anticommutator(curved.system, SampleGrid::from_window(curved.system.window), {shifted}).max(),
            1e-6);
}

TEST(VerifyTest, AntiCommutatorOddOrderSign) {
  TypeAConfig cfg;
  cfg.which = TypeACase::III;
  cfg.N = 3;
  cfg.b = {0.2, 0.5, -0.7};
  const auto mass = nfold::builtin_mass_profile("constant");
  const auto sys = nfold::build_type_a(cfg, mass, nfold::default_window(cfg, mass, 11));
  const auto grid = SampleGrid::from_window(sys.system.window);
  const auto r = nfold::check_anticommutator(sys.system, grid, nfold::seeded_test_functions(3, 42, sys.system.window.anchor));
  EXPECT_LE(r.max(), 1e-6);
  EXPECT_GT(std::min(r.minus_opposite_sign, r.plus_opposite_sign), 1e-1);
}

TEST(VerifyTest, PartnerDifference) {
  const auto flat = nfold::build_type_a([] {
    TypeAConfig c;
    c.which = TypeACase::II;
    c.N = 3;
    c.b = {0.5, -0.4, 0.3};
    return c;
  }(), nfold::builtin_mass_profile("constant"), {0.5, 1.5, 1.0, 11});
  const auto grid = SampleGrid::from_window(flat.system.window);
  EXPECT_LE(nfold::check_partner_difference(flat.system, grid), 1e-9);
  const ScalarFunction nw = 3.0 * flat.system.W.derivative(1);
  for (Complex x : grid.points) {
    EXPECT_NEAR(std::abs(flat.system.U_plus(x) - flat.system.U_minus(x) - nw(x)), 0.0, 1e-10 * (1.0 + std::abs(nw(x))));
  }
  const auto curved = exp_harmonic();
  EXPECT_LE(nfold::check_partner_difference(curved.system, SampleGrid::from_window(curved.system.window)), 1e-8);
  TypeAConfig one;
  one.b = {0.2, 0.3, 0.4};
  const auto first = nfold::build_type_a(one, exp_mass(), {1.0, 2.5, 1.5, 11});
  EXPECT_LE(nfold::check_partner_difference(first.system, SampleGrid::from_window(first.system.window)), 1e-10);
}

// =============================================================================
// Decay probe and test functions
// =============================================================================

TEST(VerifyTest, DecayProbe) {
  const auto flat = flat_harmonic();
  const auto r = nfold::decay_probe(flat.system, Sign::minus, {-8.0, 8.0});
  for (const auto& row : r.values) {
    for (double v : row) EXPECT_LT(v, 1e-20);
  }
  const auto curved = exp_harmonic();
  const auto rc = nfold::decay_probe(curved.system, Sign::minus, {-12.0, -20.0});
  for (const auto& row : rc.values) {
    EXPECT_LT(row[0], 1e-20);
    EXPECT_LT(row[1], 1e-20);
  }

  TypeAConfig flipped = harmonic();
  flipped.b = {0.0, 2.0, 0.0};
  const auto grow = nfold::build_type_a(flipped, nfold::builtin_mass_profile("constant"), {-2.0, 2.0, 0.0, 21});
  const auto rg = nfold::decay_probe(grow.system, Sign::minus, {-8.0, 8.0});
  for (const auto& row : rg.values) EXPECT_GT(row[1], 1e20);
}

TEST(VerifyTest, SeededTestFunctionsAreReproducible) {
  const auto a = nfold::seeded_test_functions(2, 42, 0.5);
  const auto b = nfold::seeded_test_functions(2, 42, 0.5);
  const auto c = nfold::seeded_test_functions(2, 43, 0.5);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i](0.3), b[i](0.3));
    EXPECT_NE(a[i](0.3), c[i](0.3));
  }
}
