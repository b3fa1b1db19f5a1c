#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ncspec;
using namespace testing_support;

namespace {

const ToleranceConfig cfg{};
const QuaternionQ q0 = q(0);

QuaternionQ inv(const QuaternionQ& x) { return *try_inverse(x, cfg); }

// Two distinct nodes whose difference is invertible.
std::pair<QuaternionQ, QuaternionQ> node_pair(Gen& g) {
  for (;;) {
    auto x1 = g.quaternion(), x2 = g.quaternion();
    if ((x1 - x2).norm2() != 0) return {x1, x2};
  }
}

QuaternionF qf(double w, double x = 0, double y = 0, double z = 0) { return {w, x, y, z}; }

double qdist(const QuaternionF& a, const QuaternionF& b) {
  return std::max({std::abs(a.w - b.w), std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

// Closed form of exp(tA) for the sp(2) matrix.
NcMatrix<QuaternionF> sp2_exp(double t) {
  const QuaternionF e_pos = qf(std::cos(t), std::sin(t)), e_neg = qf(std::cos(t), -std::sin(t));
  const QuaternionF j = qf(0, 0, 1);
  return {{e_pos * qf(std::cos(t)), e_pos * qf(std::sin(t)) * j},
          {e_neg * qf(std::sin(t)) * j, e_neg * qf(std::cos(t))}};
}

double qmat_dist(const NcMatrix<QuaternionF>& a, const NcMatrix<QuaternionF>& b) {
  double d = 0;
  for (std::size_t i = 1; i <= a.rows(); ++i)
    for (std::size_t j = 1; j <= a.cols(); ++j) d = std::max(d, qdist(a(i, j), b(i, j)));
  return d;
}

SpectralDecomposition<BandOperator> oscillator_decomposition() {
  auto a = oscillator_matrix();
  auto polys = char_poly_all(a, cfg);
  auto xs = solve_eigen_diagonals(a, polys, RootStrategy::pointwise_numeric, cfg);
  return spectral_decompose(a, xs, cfg);
}

}  // namespace

TEST(Vandermonde, TwoNodeExpansion) {
  Gen g(71);
  for (int t = 0; t < 40; ++t) {
    auto [x1, x2] = node_pair(g);
    auto z = g.quaternion();
    auto v = vandermonde_qdet<QuaternionQ>({x1, x2}, z, cfg);
    ASSERT_TRUE(v.has_value());
    const auto y1 = x1, y2 = (x2 - x1) * x2 * inv(x2 - x1);
    ASSERT_EQ(*v, z * z - (y1 + y2) * z + y2 * y1);
    ASSERT_EQ(*vandermonde_qdet<QuaternionQ>({x1, x2}, x1, cfg), q0);
    ASSERT_EQ(*vandermonde_qdet<QuaternionQ>({x1, x2}, x2, cfg), q0);
  }
}

TEST(Vandermonde, CommutativeProduct) {
  Gen g(72);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> xs = {g.rational(), g.rational(), g.rational()};
    if (xs[0] == xs[1] || xs[1] == xs[2] || xs[0] == xs[2]) continue;
    const Rational z = g.rational();
    ASSERT_EQ(*vandermonde_qdet(xs, z, cfg), (z - xs[0]) * (z - xs[1]) * (z - xs[2]));
  }
}

TEST(Lagrange, TwoNodeFormula) {
  Gen g(73);
  for (int t = 0; t < 40; ++t) {
    auto [x1, x2] = node_pair(g);
    auto w = lagrange_coeffs<QuaternionQ>({x1, x2}, cfg);
    auto z = g.quaternion();
    ASSERT_EQ(lagrange_eval(w, 1, z), inv(x1 - x2) * (z - x2));
    ASSERT_EQ(lagrange_eval(w, 2, z), inv(x2 - x1) * (z - x1));
    ASSERT_EQ(lagrange_eval(w, 1, q0), -(inv(x1 - x2) * x2));
  }
}

TEST(Lagrange, SingleNodeIsOne) {
  auto w = lagrange_coeffs<QuaternionQ>({q(3, 1, 4, 1)}, cfg);
  EXPECT_EQ(lagrange_eval(w, 1, q(2, 7, 1, 8)), q1);
}

TEST(Lagrange, CommutativeProductFormula) {
  Gen g(74);
  for (int t = 0; t < 20; ++t) {
    std::vector<Rational> xs;
    while (xs.size() < 4) {
      Rational r = g.rational();
      if (std::find(xs.begin(), xs.end(), r) == xs.end()) xs.push_back(r);
    }
    auto w = lagrange_coeffs(xs, cfg);
    const Rational z = g.rational();
    auto want = classical_lagrange(xs, z);
    for (std::size_t i = 1; i <= 4; ++i) ASSERT_EQ(lagrange_eval(w, i, z), want[i - 1]);
  }
}

TEST(Lagrange, KroneckerAndPowerSums) {
  Gen g(75);
  for (int t = 0; t < 10; ++t) {
    std::vector<QuaternionQ> xs = {g.quaternion(), g.quaternion(), g.quaternion()};
    NcMatrix<QuaternionQ> w;
    try {
      w = lagrange_coeffs(xs, cfg);
    } catch (const VandermondeSingular&) {
      continue;
    }
    for (std::size_t i = 1; i <= 3; ++i)
      for (std::size_t j = 1; j <= 3; ++j) ASSERT_EQ(lagrange_eval(w, i, xs[j - 1]), i == j ? q1 : q0);
    auto z = g.quaternion();
    for (std::size_t p = 0; p < 3; ++p) {
      QuaternionQ s = q0;
      for (std::size_t i = 1; i <= 3; ++i) s = s + power(xs[i - 1], p) * lagrange_eval(w, i, z);
      ASSERT_EQ(s, power(z, p));
    }
  }
}

TEST(Lagrange, CoincidentNodes) {
  EXPECT_THROW(lagrange_coeffs<QuaternionQ>({qi, qi}, cfg), VandermondeSingular);
  EXPECT_THROW(lagrange_coeffs<Rational>({Rational(1), Rational(2), Rational(1)}, cfg), VandermondeSingular);
}

TEST(MainIdentity, ResidualVanishes) {
  Gen g(76);
  std::size_t checked = 0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = g.index(2, 3);
    std::vector<QuaternionQ> xs;
    for (std::size_t k = 0; k < n; ++k) xs.push_back(g.quaternion());
    auto z = g.quaternion();
    for (std::size_t m = n; m <= n + 4; ++m) {
      auto r = main_identity_residual(xs, z, m, cfg);
      if (!r) continue;
      ASSERT_EQ(*r, q0);
      ++checked;
    }
  }
  EXPECT_GT(checked, 30u);
}

TEST(MainIdentity, TwoNodeForm) {
  // {V_(m-1)} z = V_m - (x2^(m-1) - x1^(m-1)) (x2 - x1)^-1 V_2 with f_k from the two-node formula.
  Gen g(77);
  for (int t = 0; t < 20; ++t) {
    auto [x1, x2] = node_pair(g);
    auto z = g.quaternion();
    const auto f1 = inv(x1 - x2) * (z - x2), f2 = inv(x2 - x1) * (z - x1);
    auto v = [&](std::size_t m) { return power(z, m) - (power(x1, m) * f1 + power(x2, m) * f2); };
    for (std::size_t m = 2; m <= 6; ++m) {
      ASSERT_EQ(v(m - 1) * z, v(m) - (power(x2, m - 1) - power(x1, m - 1)) * inv(x2 - x1) * v(2));
      auto bordered = vandermonde_vm<QuaternionQ>({x1, x2}, z, m, cfg);
      ASSERT_TRUE(bordered.has_value());
      ASSERT_EQ(*bordered, v(m));
    }
  }
}

TEST(Spectral, Sp2Projectors) {
  auto a = sp2_matrix();
  auto polys = char_poly_all(a, cfg);
  auto xs = solve_eigen_diagonals(a, polys, RootStrategy::zero_root_factoring, cfg);
  ASSERT_EQ(xs.xs.size(), 2u);
  EXPECT_TRUE(same(xs.xs[0], NcMatrix<QuaternionQ>::diagonal({q(0, 2), q(0, -2)})));
  EXPECT_TRUE(same(xs.xs[1], NcMatrix<QuaternionQ>::zeros(2, 2, q1)));

  auto d = spectral_decompose(a, xs, cfg);
  const auto half = QuaternionQ(rat(1, 2));
  NcMatrix<QuaternionQ> p1{{half, -half * qk}, {half * qk, half}};
  NcMatrix<QuaternionQ> p2{{half, half * qk}, {-half * qk, half}};
  EXPECT_TRUE(same(d.projectors[0], p1));
  EXPECT_TRUE(same(d.projectors[1], p2));
  EXPECT_EQ(d.residuals.idempotence, 0.0);
  EXPECT_EQ(d.residuals.orthogonality, 0.0);
  EXPECT_EQ(d.residuals.completeness, 0.0);
  EXPECT_EQ(d.residuals.vm_bordered, 0.0);
  EXPECT_EQ(d.residuals.vm_expanded, 0.0);
  EXPECT_EQ(d.residuals.vm_max, 7u);
}

TEST(Spectral, Sp2Exponential) {
  auto a = sp2_matrix();
  auto xs = solve_eigen_diagonals(a, char_poly_all(a, cfg), RootStrategy::zero_root_factoring, cfg);
  auto d = spectral_decompose(a, xs, cfg);
  for (double t : {0.25, 1.0, 2.5}) EXPECT_LT(qmat_dist(matrix_function(a, d, FunctionTag::exp, t, cfg), sp2_exp(t)), 1e-12);
  auto back = matrix_function(a, d, FunctionTag::identity, 1.0, cfg);
  EXPECT_LT(qmat_dist(back, to_floating(a)), 1e-12);
  EXPECT_THROW(matrix_function(a, d, FunctionTag::exp, Complex(0, 1), cfg), UnsupportedFunction);
  EXPECT_THROW(matrix_function(a, d, FunctionTag::cos, 1.0, cfg), UnsupportedFunction);
}

TEST(Spectral, Sp2AlternateOrdering) {
  auto a = sp2_matrix();
  auto polys = char_poly_all(a, cfg);
  auto xs = solve_eigen_diagonals(a, polys, RootStrategy::user_supplied, cfg, {{q(0, 2), q0}, {q0, q(0, -2)}});
  auto d = spectral_decompose(a, xs, cfg);
  const auto& f1 = d.projectors[0];
  EXPECT_FALSE(same(f1 * f1, f1));
  EXPECT_FALSE(same(a * xs.xs[0], xs.xs[0] * a));
  for (std::size_t m = 0; m <= 6; ++m) {
    auto sum = power(xs.xs[0], m) * d.projectors[0] + power(xs.xs[1], m) * d.projectors[1];
    ASSERT_TRUE(same(sum, mat_power(a, m))) << "m = " << m;
  }
  EXPECT_EQ(d.residuals.vm_expanded, 0.0);
  auto ref_xs = solve_eigen_diagonals(a, polys, RootStrategy::zero_root_factoring, cfg);
  auto ref = spectral_decompose(a, ref_xs, cfg);
  for (double t : {0.25, 1.0, 2.5}) {
    auto e = matrix_function(a, d, FunctionTag::exp, t, cfg);
    EXPECT_LT(qmat_dist(e, sp2_exp(t)), 1e-12);
    EXPECT_LT(qmat_dist(e, matrix_function(a, ref, FunctionTag::exp, t, cfg)), 1e-14);
  }
}

TEST(Spectral, RootsAreChecked) {
  auto a = sp2_matrix();
  auto polys = char_poly_all(a, cfg);
  EXPECT_THROW(solve_eigen_diagonals(a, polys, RootStrategy::user_supplied, cfg, {{qi, q0}, {q0, qi}}), RootRejected);
  EXPECT_THROW(solve_eigen_diagonals(a, polys, RootStrategy::user_supplied, cfg, {{q0}}), RootNotFound);
  EXPECT_THROW(solve_eigen_diagonals(a, polys, RootStrategy::pointwise_numeric, cfg), RootNotFound);
}

TEST(Spectral, CommutativeDiagonalizable) {
  // Every entry of s is nonzero, so each e_i is cyclic and no row polynomial is degenerate.
  NcMatrix<Rational> s{{1, 1, 1}, {1, 2, 3}, {1, 4, 9}};
  const auto sinv = adjugate_inverse(s);
  const std::vector<Rational> ev = {Rational(1), Rational(2), Rational(3)};
  const auto a = s * NcMatrix<Rational>::diagonal(ev) * sinv;
  auto polys = char_poly_all(a, cfg);
  for (const auto& p : polys) ASSERT_FALSE(p.degenerate);
  std::vector<std::vector<Rational>> roots(3, ev);
  auto xs = solve_eigen_diagonals(a, polys, RootStrategy::user_supplied, cfg, roots);
  auto d = spectral_decompose(a, xs, cfg);
  auto want = classical_projectors(a, ev);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_TRUE(same(d.projectors[k], want[k]));
  EXPECT_EQ(d.residuals.idempotence, 0.0);
  EXPECT_EQ(d.residuals.completeness, 0.0);
}

TEST(Spectral, DiagonalCommutativeUsesZeroRoots) {
  // Free parameters set to zero give rows lambda^n - d_i lambda^(n-1).
  auto a = NcMatrix<Rational>::diagonal({Rational(1), Rational(2)});
  auto xs = solve_eigen_diagonals(a, char_poly_all(a, cfg), RootStrategy::zero_root_factoring, cfg);
  EXPECT_TRUE(same(xs.xs[0], a));
  auto d = spectral_decompose(a, xs, cfg);
  EXPECT_TRUE(same(d.projectors[0], NcMatrix<Rational>::identity(2, Rational(0))));
  EXPECT_TRUE(same(d.projectors[1], NcMatrix<Rational>::zeros(2, 2, Rational(0))));

  auto b = NcMatrix<Rational>::diagonal({Rational(1), Rational(2), Rational(5)});
  EXPECT_THROW(solve_eigen_diagonals(b, char_poly_all(b, cfg), RootStrategy::zero_root_factoring, cfg),
               VandermondeSingular);
}

TEST(Spectral, ScalarMatrix) {
  NcMatrix<QuaternionQ> a{{q(1, 2, 3, 4)}};
  auto xs = solve_eigen_diagonals(a, char_poly_all(a, cfg), RootStrategy::zero_root_factoring, cfg);
  auto d = spectral_decompose(a, xs, cfg);
  EXPECT_TRUE(same(xs.xs[0], a));
  EXPECT_TRUE(same(d.projectors[0], NcMatrix<QuaternionQ>{{q1}}));
}

TEST(NumericRoots, OrderingAndValues) {
  // (x - 2)(x + 1)(x - i)(x + i) = x^4 - x^3 - x^2 - x - 2
  auto r = numeric_roots({Complex(-1), Complex(-1), Complex(-1), Complex(-2)}, 1e-9);
  ASSERT_EQ(r.size(), 4u);
  const std::vector<Complex> want = {{2, 0}, {0, 1}, {0, -1}, {-1, 0}};
  for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(r[k] - want[k]), 1e-12);
  auto z = numeric_roots({Complex(0), Complex(-2), Complex(0)}, 1e-9);  // x^3 - 2x
  EXPECT_LT(std::abs(z[0] - Complex(std::sqrt(2.0), 0)), 1e-14);
  EXPECT_EQ(z[1], Complex(0, 0));
  EXPECT_LT(std::abs(z[2] + Complex(std::sqrt(2.0), 0)), 1e-14);
}

TEST(Spectral, ComplexEntries) {
  NcMatrix<Complex> a{{Complex(1, 1), Complex(2, 0)}, {Complex(0, -1), Complex(3, 0)}};
  auto xs = solve_eigen_diagonals(a, char_poly_all(a, cfg), RootStrategy::pointwise_numeric, cfg);
  auto d = spectral_decompose(a, xs, cfg);
  EXPECT_LT(d.residuals.idempotence, 1e-12);
  EXPECT_LT(d.residuals.completeness, 1e-12);
  EXPECT_LT(d.residuals.vm_expanded, 1e-12);
}

TEST(Oscillator, Projectors) {
  auto d = oscillator_decomposition();
  ASSERT_EQ(d.projectors.size(), 3u);
  EXPECT_LE(closed_gap(d.projectors[0], oscillator_p_outer(1.0), 12), 1e-9);
  EXPECT_LE(closed_gap(d.projectors[1], oscillator_p_middle(), 12), 1e-9);
  EXPECT_LE(closed_gap(d.projectors[2], oscillator_p_outer(-1.0), 12), 1e-9);
  EXPECT_LE(d.residuals.idempotence, 1e-9);
  EXPECT_LE(d.residuals.orthogonality, 1e-9);
  EXPECT_LE(d.residuals.completeness, 1e-9);
  EXPECT_LE(d.residuals.vm_expanded, 1e-9);
  EXPECT_LE(d.residuals.vm_bordered, 1e-9);
}

TEST(Oscillator, EigenDiagonals) {
  auto d = oscillator_decomposition();
  for (long m = 0; m <= 12; ++m) {
    const double n = static_cast<double>(m);
    const Complex want[3] = {csqrt(2 * (2 * n + 3)), csqrt(2 * (2 * n + 1)), csqrt(2 * (2 * n - 1))};
    for (std::size_t i = 1; i <= 3; ++i) {
      EXPECT_LT(std::abs(d.xs.xs[0](i, i).matrix_element(m, m) - want[i - 1]), 1e-9);
      EXPECT_LT(std::abs(d.xs.xs[1](i, i).matrix_element(m, m)), 1e-9);
      EXPECT_LT(std::abs(d.xs.xs[2](i, i).matrix_element(m, m) + want[i - 1]), 1e-9);
    }
  }
}

TEST(Oscillator, Exponential) {
  auto a = oscillator_matrix();
  auto d = oscillator_decomposition();
  for (double t : {0.1, 0.5, 1.3}) {
    auto e = matrix_function(a, d, FunctionTag::exp, Complex(0, -t), cfg);
    EXPECT_LE(closed_gap(e, oscillator_exp(t, 1.0), 12), 1e-9) << "t = " << t;
  }
}
