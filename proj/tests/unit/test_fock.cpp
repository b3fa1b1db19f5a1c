#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ncspec;
using namespace testing_support;

namespace {

const ToleranceConfig cfg{};
const BandOperator a = BandOperator::annihilation();
const BandOperator ad = BandOperator::creation();
const BandOperator N = BandOperator::number();
const BandOperator one = BandOperator::identity();
const WeightExpr n = WeightExpr::level();

BandOperator diag(const WeightExpr& g) { return BandOperator::diagonal(g); }

// Elementwise comparison against an explicit matrix-element function.
template <class F>
void expect_elements(const BandOperator& x, F want, long top = 16, double tol = 1e-12) {
  for (long m = 0; m <= top; ++m)
    for (long k = 0; k <= top; ++k) {
      Complex got = x.matrix_element(m, k);
      Complex ref = want(m, k);
      ASSERT_NEAR(got.real(), ref.real(), tol) << "<" << m << "|X|" << k << ">";
      ASSERT_NEAR(got.imag(), ref.imag(), tol) << "<" << m << "|X|" << k << ">";
    }
}

BandOperator random_band(Gen& g) {
  BandOperator x;
  const std::size_t count = g.index(1, 3);
  for (std::size_t c = 0; c < count; ++c) {
    const int s = static_cast<int>(g.integer(-2, 2));
    // Unit-scale coefficients keep products within double precision of the tolerances.
    WeightExpr w = WeightExpr(Rational(g.integer(-4, 4)) / Rational(4));
    const WeightExpr shifted_n = n + WeightExpr(g.integer(1, 4));
    switch (g.integer(0, 2)) {
      case 1: w = w * sqrt(shifted_n); break;
      case 2: w = w / shifted_n; break;
      default: break;
    }
    x = x + BandOperator::from_reduced(s, w);
  }
  return x;
}

Eigen::MatrixXcd dense(const BandOperator& x, long levels) {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(levels, levels);
  for (long m = 0; m < levels; ++m)
    for (long k = 0; k < levels; ++k) d(m, k) = x.matrix_element(m, k);
  return d;
}

}  // namespace

TEST(WeightExpr, EvaluatesAndReportsBadLevels) {
  EXPECT_EQ((WeightExpr(2) * n + WeightExpr(3)).eval(4), Complex(11.0, 0.0));
  EXPECT_NEAR(sqrt(WeightExpr(2) * n + WeightExpr(3)).eval(3).real(), 3.0, 1e-15);

  try {
    (WeightExpr(1) / n).eval(0);
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_EQ(e.level(), 0);
  }
  try {
    sqrt(n - WeightExpr(3)).eval(1);
    FAIL() << "expected EvalError";
  } catch (const EvalError& e) {
    EXPECT_EQ(e.level(), 1);
  }
  EXPECT_NO_THROW((WeightExpr(1) / (WeightExpr(2) * n - WeightExpr(1))).eval(0));
}

TEST(WeightExpr, ShiftCompositionIsExact) {
  const WeightExpr f = sqrt(WeightExpr(2) * n + WeightExpr(3)) / (n + WeightExpr(1));
  const WeightExpr g = f.shifted(3).shifted(-1);
  for (long k = 0; k < 20; ++k) EXPECT_EQ(g.eval(k), f.eval(k + 2));
  EXPECT_EQ(f.shifted(0).eval(5), f.eval(5));
}

TEST(WeightExpr, GrammarRendering) {
  EXPECT_EQ((n + WeightExpr(1) - n).to_grammar(), "1");
  EXPECT_FALSE((WeightExpr(1) / n).to_grammar().has_value());
  EXPECT_EQ(WeightExpr(Rational(-3)).to_grammar(), "(-3)");
}

TEST(BandOperator, GeneratorMatrixElements) {
  EXPECT_EQ(a.matrix_element(0, 1), Complex(1.0, 0.0));
  for (long k = 0; k < 12; ++k) {
    EXPECT_NEAR(ad.matrix_element(k + 1, k).real(), std::sqrt(k + 1.0), 1e-15);
    EXPECT_NEAR(a.matrix_element(k, k + 1).real(), std::sqrt(k + 1.0), 1e-15);
    EXPECT_EQ(N.matrix_element(k, k), Complex(static_cast<double>(k), 0.0));
  }
  EXPECT_EQ(N.matrix_element(2, 2), Complex(2.0, 0.0));
  EXPECT_EQ(a.matrix_element(0, 0), Complex(0.0, 0.0));
  expect_elements(a, [](long m, long k) { return m + 1 == k ? Complex(std::sqrt(double(k)), 0) : Complex(0, 0); });
}

TEST(BandOperator, CanonicalCommutator) {
  const BandOperator aad = a * ad;
  EXPECT_TRUE(band_equal(aad, N + one, cfg));
  EXPECT_TRUE(aad.is_diagonal());
  EXPECT_TRUE(band_equal(ad * a, N, cfg));
  EXPECT_TRUE(band_equal(a * ad - ad * a, one, cfg));
  EXPECT_TRUE(band_equal(a, a, cfg));
  EXPECT_FALSE(band_equal(a, ad, cfg));
  expect_elements(aad, [](long m, long k) { return m == k ? Complex(k + 1.0, 0) : Complex(0, 0); });
}

TEST(BandOperator, NumberOperatorShiftsThroughA) {
  EXPECT_TRUE(band_equal(N * a, a * (N - one), cfg));
  EXPECT_FALSE(band_equal(N * a, a * N, cfg));
  // Independent elementwise check: <m|N a|k> = (k-1) sqrt(k) when m = k-1.
  expect_elements(N * a, [](long m, long k) {
    return m + 1 == k ? Complex((k - 1.0) * std::sqrt(double(k)), 0) : Complex(0, 0);
  });
}

TEST(BandOperator, CommutationWithFunctionsOfN) {
  const std::vector<WeightExpr> fs = {n, WeightExpr(1) / (WeightExpr(2) * n + WeightExpr(3)),
                                      sqrt(WeightExpr(2) * n + WeightExpr(3))};
  for (const auto& f : fs) {
    EXPECT_TRUE(band_equal(a * diag(f), diag(f.shifted(1)) * a, cfg));
    EXPECT_TRUE(band_equal(ad * diag(f), diag(f.shifted(-1)) * ad, cfg));
  }
}

TEST(BandOperator, OscillatorSquareCorner) {
  const auto A = oscillator_matrix();
  const auto A2 = A * A;
  EXPECT_TRUE(band_equal(A2(1, 1), BandOperator::scalar(WeightExpr(2)) * (N + one), cfg));
}

TEST(BandOperator, Associativity) {
  Gen g(21);
  for (int t = 0; t < 60; ++t) {
    auto x = random_band(g), y = random_band(g), z = random_band(g);
    ASSERT_TRUE(band_equal((x * y) * z, x * (y * z), cfg));
    ASSERT_TRUE(band_equal(x * (y + z), x * y + x * z, cfg));
  }
}

TEST(BandOperator, ProductAgreesWithDenseTruncation) {
  Gen g(22);
  const long levels = cfg.probe_levels + cfg.guard_band + 1;
  for (int t = 0; t < 40; ++t) {
    auto x = random_band(g), y = random_band(g);
    Eigen::MatrixXcd ref = dense(x, levels) * dense(y, levels);
    const BandOperator xy = x * y;
    for (long m = 0; m <= cfg.probe_levels; ++m)
      for (long k = 0; k <= cfg.probe_levels; ++k) ASSERT_LT(std::abs(xy.matrix_element(m, k) - ref(m, k)), 1e-12);
  }
}

TEST(BandOperator, DiagonalInverse) {
  const BandOperator d = diag(WeightExpr(2) * n + WeightExpr(3));
  auto inv = band_try_inverse(d, cfg);
  ASSERT_TRUE(inv.has_value());
  for (long k = 0; k < 20; ++k) EXPECT_NEAR(inv->matrix_element(k, k).real(), 1.0 / (2.0 * k + 3.0), 1e-15);
  EXPECT_TRUE(band_equal(*inv * d, one, cfg));
  EXPECT_TRUE(band_equal(*band_try_inverse(one, cfg), one, cfg));
  EXPECT_FALSE(band_try_inverse(a, cfg).has_value());
  EXPECT_FALSE(band_try_inverse(N, cfg).has_value());
  EXPECT_FALSE(band_try_inverse(BandOperator{}, cfg).has_value());
}

TEST(BandDivide, RightDivisionByA) {
  const BandOperator r2 = BandOperator::scalar(sqrt(WeightExpr(2)));
  const BandOperator c = r2 * a;
  const BandOperator want = diag(WeightExpr(2) * (WeightExpr(2) * n + WeightExpr(3)));
  const BandOperator b = want * c;
  auto x = band_divide(b, c, DivisionSide::right, cfg);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(band_equal(x->value, want, cfg));
  EXPECT_FALSE(x->kernel_flag);
}

TEST(BandDivide, DivisionByOne) {
  Gen g(23);
  auto b = random_band(g);
  auto x = band_divide(b, one, DivisionSide::right, cfg);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(band_equal(x->value, b, cfg));
  EXPECT_FALSE(x->kernel_flag);
}

TEST(BandDivide, KernelFlagForCreation) {
  const BandOperator c = BandOperator::scalar(sqrt(WeightExpr(2))) * ad;
  const BandOperator want = diag(WeightExpr(2) * (WeightExpr(2) * n + WeightExpr(1)));
  auto x = band_divide(want * c, c, DivisionSide::right, cfg);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(band_equal(x->value, want, cfg));
  EXPECT_TRUE(x->kernel_flag);
}

TEST(BandDivide, NoSolutionOutsideImage) {
  // Column 0 of X*a is always zero; the identity has a nonzero column 0.
  EXPECT_FALSE(band_divide(one, a, DivisionSide::right, cfg).has_value());
  // Row 0 of ad*X is always zero.
  EXPECT_FALSE(band_divide(one, ad, DivisionSide::left, cfg).has_value());
  EXPECT_THROW(band_divide(one, a + ad, DivisionSide::right, cfg), UnsupportedDivision);
}

TEST(BandDivide, RecoversFactor) {
  Gen g(24);
  const std::vector<BandOperator> divisors = {BandOperator::scalar(sqrt(WeightExpr(2))) * a,
                                              diag(WeightExpr(2) * n + WeightExpr(3)),
                                              diag(sqrt(n + WeightExpr(1)))};
  for (int t = 0; t < 30; ++t) {
    auto b = random_band(g);
    for (const auto& c : divisors) {
      auto x = band_divide(b * c, c, DivisionSide::right, cfg);
      ASSERT_TRUE(x.has_value());
      ASSERT_TRUE(band_equal(x->value, b, cfg));
      auto y = band_divide(c * b, c, DivisionSide::left, cfg);
      if (c.is_diagonal()) {
        ASSERT_TRUE(y.has_value());
        ASSERT_TRUE(band_equal(y->value, b, cfg));
      }
    }
  }
}
