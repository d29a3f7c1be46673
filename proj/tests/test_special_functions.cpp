#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/math/special_functions/expm1.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>

#include "hsl/special_functions.hpp"

using hsl::BranchConvention;
using hsl::Complex;
using hsl::kPi;

namespace {

const BranchConvention kPrincipal = BranchConvention::principal();
const BranchConvention kUpperWindow = BranchConvention::positive_axis_from_above();

Complex random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(1e-3, 10.0), t(-kPi, kPi);
  return std::polar(r(rng), t(rng));
}

}  // namespace

TEST(BranchLog, Examples) {
  EXPECT_EQ(hsl::branch_log(1.0, kPrincipal), Complex(0.0, 0.0));
  const Complex a = hsl::branch_log(-1.0, kUpperWindow);
  EXPECT_NEAR(a.real(), 0.0, 1e-15);
  EXPECT_NEAR(a.imag(), kPi, 1e-15);
  const Complex b = hsl::branch_log(Complex(0.0, 1.0), kUpperWindow);
  EXPECT_NEAR(b.imag(), kPi / 2, 1e-15);
}

TEST(BranchLog, ZeroIsDomainError) {
  EXPECT_THROW(hsl::branch_log(0.0, kPrincipal), std::domain_error);
}

TEST(BranchLog, CutSides) {
  // On the negative axis the principal window (-pi, pi] gives +pi, the lower-limit window -pi.
  EXPECT_DOUBLE_EQ(hsl::branch_arg(-2.0, kPrincipal), kPi);
  EXPECT_DOUBLE_EQ(hsl::branch_arg(-2.0, BranchConvention::principal_from_below()), -kPi);
  EXPECT_DOUBLE_EQ(hsl::branch_arg(3.0, kUpperWindow), 0.0);
  EXPECT_DOUBLE_EQ(hsl::branch_arg(3.0, BranchConvention::positive_axis_from_below()), 2 * kPi);
  // Signed zero in the imaginary part must not pick a side.
  EXPECT_DOUBLE_EQ(hsl::branch_arg(Complex(-2.0, -0.0), kPrincipal), kPi);
}

TEST(BranchLog, ExpInvertsLogOnRandomPoints) {
  std::mt19937_64 rng(11);
  for (const auto& conv : {kPrincipal, kUpperWindow}) {
    for (int i = 0; i < 10000; ++i) {
      const Complex z = random_point(rng);
      const Complex l = hsl::branch_log(z, conv);
      EXPECT_LE(std::abs(std::exp(l) - z), 1e-14 * std::abs(z) * 4);
      EXPECT_GE(l.imag(), conv.arg_min);
      EXPECT_LE(l.imag(), conv.arg_min + 2 * kPi);
    }
  }
}

TEST(BranchPow, Examples) {
  EXPECT_NEAR(std::abs(hsl::branch_pow(4.0, 0.5, kPrincipal) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(hsl::branch_pow(-1.0, 0.5, kUpperWindow) - Complex(0, 1)), 0.0, 1e-15);
  // 16 approached from below the positive axis: e^{(ln 16 + 2 pi i)/4} = 2i.
  const Complex v = hsl::branch_pow(16.0, 0.25, BranchConvention::positive_axis_from_below());
  EXPECT_NEAR(std::abs(v - Complex(0, 2)), 0.0, 1e-14);
}

TEST(BranchPow, ZeroHandling) {
  EXPECT_EQ(hsl::branch_pow(0.0, 1.5), Complex(0.0, 0.0));
  EXPECT_EQ(hsl::branch_pow(0.0, 0.0), Complex(1.0, 0.0));
  EXPECT_THROW(hsl::branch_pow(0.0, -0.5), std::domain_error);
}

TEST(BranchPow, IntegerPowersMatchRepeatedProducts) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Complex z = random_point(rng);
    for (int m = -3; m <= 5; ++m) {
      Complex expect(1.0, 0.0);
      for (int k = 0; k < std::abs(m); ++k) expect *= z;
      if (m < 0) expect = 1.0 / expect;
      for (const auto& conv : {kPrincipal, kUpperWindow}) {
        const Complex got = hsl::branch_pow(z, m, conv);
        EXPECT_LE(std::abs(got - expect), 1e-12 * std::abs(expect));
      }
    }
  }
}

TEST(Arctan, Examples) {
  EXPECT_EQ(hsl::arctan_c(0.0), Complex(0.0, 0.0));
  EXPECT_NEAR(std::abs(hsl::arctan_c(1.0) - kPi / 4), 0.0, 1e-15);
  EXPECT_THROW(hsl::arctan_c(Complex(0, 1)), std::domain_error);
  EXPECT_THROW(hsl::arctan_c(Complex(0, -1)), std::domain_error);
}

TEST(Arctan, NearTheSingularity) {
  const double delta = 1e-6;
  const Complex v = hsl::arctan_c(Complex(0.0, 1.0 - delta));
  // arctan(iy) = i artanh(y).
  EXPECT_NEAR(v.imag(), std::atanh(1.0 - delta), 1e-9);
  EXPECT_NEAR(v.imag(), 0.5 * std::log(2.0 / delta), 1e-6);
  EXPECT_NEAR(v.real(), 0.0, 1e-12);
}

TEST(Arctan, TangentAndOddSymmetry) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const Complex w(u(rng), u(rng));
    if (std::abs(w.real()) < 1e-3 && std::abs(w.imag()) >= 1.0) continue;  // near the cuts
    const Complex a = hsl::arctan_c(w);
    EXPECT_LE(std::abs(std::tan(a) - w), 1e-12 * (1.0 + std::abs(w)) * 10);
    EXPECT_LE(std::abs(a + hsl::arctan_c(-w)), 1e-14 * (1.0 + std::abs(a)));
    EXPECT_LE(std::abs(a - std::atan(w)), 1e-13 * (1.0 + std::abs(a)));
  }
}

TEST(Hypergeometric, ZeroArgument) {
  EXPECT_EQ(hsl::gauss_2f1(0.3, -1.2, 2.5, 0.0).value, Complex(1.0, 0.0));
}

TEST(Hypergeometric, PaperClosedFormValues) {
  const hsl::SeriesOptions opts{1e-12, 1'000'000};
  const auto f1 = hsl::gauss_2f1(-0.5, 1.0, 2.5, -1.0, opts);
  EXPECT_NEAR(f1.value.real(), 3 * kPi / 8, 1e-10);
  EXPECT_NEAR(f1.value.imag(), 0.0, 1e-15);
  const auto f2 = hsl::gauss_2f1(-0.5, 2.0, 3.5, -1.0, opts);
  EXPECT_NEAR(f2.value.real(), 1.25, 1e-10);
  EXPECT_LE(f2.error_bound, 1e-11);
}

TEST(Hypergeometric, MatchesBoostOnRealAxis) {
  for (double x : {-0.99, -0.7, -0.3, 0.1, 0.5, 0.9, 0.999}) {
    for (double b : {0.5, 1.0, 2.0, 4.0}) {
      const double a = -0.5, c = b + 1.5;
      const double expect = boost::math::hypergeometric_pFq({a, b}, {c}, x);
      const Complex got = hsl::gauss_2f1(a, b, c, x, {1e-13, 1'000'000}).value;
      EXPECT_NEAR(got.real(), expect, 1e-11 * std::abs(expect)) << "x=" << x << " b=" << b;
    }
  }
}

TEST(Hypergeometric, ComplexClosedForm) {
  // F(1, 1; 2; z) = -log(1 - z) / z.
  const hsl::SeriesOptions tight{1e-15, 1'000'000};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(0.01, 0.9), t(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Complex z = std::polar(r(rng), t(rng));
    const Complex expect = -std::log(1.0 - z) / z;
    EXPECT_LE(std::abs(hsl::gauss_2f1(1, 1, 2, z, tight).value - expect), 1e-12);
  }
}

TEST(Hypergeometric, DerivativeJetMatchesContiguousRelation) {
  // F' = (ab/c) F(a+1, b+1; c+1), F'' = (ab(a+1)(b+1)/(c(c+1))) F(a+2, b+2; c+2).
  const double a = -0.5, b = 0.5, c = 2.0;
  const hsl::SeriesOptions tight{1e-15, 1'000'000};
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> r(0.0, 0.95), t(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const Complex z = std::polar(r(rng), t(rng));
    const auto jet = hsl::gauss_2f1_jet(a, b, c, z, 2, tight);
    const Complex d1 = (a * b / c) * hsl::gauss_2f1(a + 1, b + 1, c + 1, z, tight).value;
    const Complex d2 = (a * b * (a + 1) * (b + 1) / (c * (c + 1))) *
                       hsl::gauss_2f1(a + 2, b + 2, c + 2, z, tight).value;
    EXPECT_LE(std::abs(jet.z_d1 - z * d1), 1e-11);
    EXPECT_LE(std::abs(jet.z2_d2 - z * z * d2), 1e-10);
    EXPECT_LE(std::abs(jet.value - hsl::gauss_2f1(a, b, c, z, tight).value), 1e-14);
  }
}

TEST(Hypergeometric, DoublingTermCapIsStable) {
  const hsl::SeriesOptions small{1e-10, 1'000'000}, big{1e-10, 2'000'000};
  for (Complex z : {Complex(-1, 0), Complex(0, 1), Complex(0.6, -0.8), Complex(1, 0)}) {
    const auto x = hsl::gauss_2f1(-0.5, 4.0, 5.5, z, small);
    const auto y = hsl::gauss_2f1(-0.5, 4.0, 5.5, z, big);
    EXPECT_LE(std::abs(x.value - y.value), 1e-10 * std::abs(x.value));
  }
}

TEST(Hypergeometric, UnitCircleValuesAgainstGammaFormula) {
  // Gauss: F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)).
  const auto f = hsl::gauss_2f1(-0.5, 4.0, 5.5, 1.0, {1e-11, 1'000'000});
  const double expect = std::tgamma(5.5) * std::tgamma(2.0) / (std::tgamma(6.0) * std::tgamma(1.5));
  EXPECT_NEAR(f.value.real(), expect, 1e-10);
  EXPECT_NEAR(expect, 0.4921875, 1e-15);
}

TEST(Hypergeometric, Errors) {
  EXPECT_THROW(hsl::gauss_2f1(1, 1, -2.0, 0.5), std::invalid_argument);
  EXPECT_THROW(hsl::gauss_2f1(1, 1, 3.0, 1.5), std::domain_error);
  EXPECT_THROW(hsl::gauss_2f1(1, 1, 2.0, 1.0), std::domain_error);  // c - a - b = 0
  try {
    hsl::gauss_2f1(-0.5, 2.0, 3.5, -1.0, {1e-14, 1000});
    FAIL() << "expected ConvergenceError";
  } catch (const hsl::ConvergenceError& e) {
    EXPECT_EQ(e.work(), 1000u);
    EXPECT_GT(e.achieved(), 0.0);
  }
}

TEST(Hypergeometric, TerminatingSeries) {
  // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1)).
  const double b = 1.5, c = 2.5;
  const Complex z(0.3, 0.4);
  const Complex expect = 1.0 - 2.0 * b * z / c + b * (b + 1) * z * z / (c * (c + 1));
  EXPECT_LE(std::abs(hsl::gauss_2f1(-2, b, c, z).value - expect), 1e-15);
}
