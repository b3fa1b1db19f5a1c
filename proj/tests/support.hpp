#pragma once

#include "ncspec/ncspec.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace testing_support {

using ncspec::BandOperator;
using ncspec::Complex;
using ncspec::NcMatrix;
using ncspec::QuaternionF;
using ncspec::QuaternionQ;
using ncspec::Rational;
using ncspec::WeightExpr;

inline QuaternionQ q(long w, long x = 0, long y = 0, long z = 0) {
  return QuaternionQ(Rational(w), Rational(x), Rational(y), Rational(z));
}
inline const QuaternionQ qi = q(0, 1), qj = q(0, 0, 1), qk = q(0, 0, 0, 1), q1 = q(1);

inline Rational rat(long p, long d = 1) { return Rational(p) / Rational(d); }

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  Rational rational() { return Rational(integer(-9, 9)) / Rational(integer(1, 4)); }
  QuaternionQ quaternion() { return {rational(), rational(), rational(), rational()}; }
  QuaternionQ nonzero_quaternion() {
    for (;;) {
      auto v = quaternion();
      if (v.norm2() != 0) return v;
    }
  }
  QuaternionF quaternion_f(double r) { return {real(-r, r), real(-r, r), real(-r, r), real(-r, r)}; }

  NcMatrix<Rational> rational_matrix(std::size_t n) {
    std::vector<Rational> e;
    for (std::size_t k = 0; k < n * n; ++k) e.push_back(rational());
    return NcMatrix<Rational>(n, n, std::move(e));
  }
  NcMatrix<QuaternionQ> quaternion_matrix(std::size_t n) {
    std::vector<QuaternionQ> e;
    for (std::size_t k = 0; k < n * n; ++k) e.push_back(quaternion());
    return NcMatrix<QuaternionQ>(n, n, std::move(e));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// The sp(2) matrix [[i, j], [j, -i]].
inline NcMatrix<QuaternionQ> sp2_matrix() { return {{qi, qj}, {qj, -qi}}; }

/// sqrt(2) [[0, a, 0], [ad, 0, a], [0, ad, 0]].
inline NcMatrix<BandOperator> oscillator_matrix() {
  const WeightExpr r2 = ncspec::sqrt(WeightExpr(2));
  const BandOperator a = r2 * BandOperator::annihilation();
  const BandOperator ad = r2 * BandOperator::creation();
  const BandOperator z;
  return {{z, a, z}, {ad, z, a}, {z, ad, z}};
}

/// Cofactor expansion along the first row; independent of the library's
/// determinant code.
inline Rational laplace_det(const NcMatrix<Rational>& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(1, 1);
  Rational acc = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (a(1, j) == 0) continue;
    const Rational minor = laplace_det(ncspec::delete_row_col(a, 1, j));
    acc += (j % 2 == 1 ? 1 : -1) * a(1, j) * minor;
  }
  return acc;
}

/// adj(A) / det(A).
inline NcMatrix<Rational> adjugate_inverse(const NcMatrix<Rational>& a) {
  const std::size_t n = a.rows();
  const Rational d = laplace_det(a);
  NcMatrix<Rational> out(n, n, Rational(0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      const Rational c = n == 1 ? Rational(1) : laplace_det(ncspec::delete_row_col(a, j, i));
      out(i, j) = ((i + j) % 2 == 0 ? 1 : -1) * c / d;
    }
  return out;
}

template <class T>
bool same(const NcMatrix<T>& a, const NcMatrix<T>& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.entries() == b.entries();
}

/// Closed-form oscillator entries f(N) S with S = a^p (shift -p) or (a^dagger)^p
/// (shift +p), compared through matrix elements <m| . |n>.
struct ClosedEntry {
  int shift = 0;
  std::function<Complex(double)> f;  // null: the entry is zero

  Complex element(long m, long n) const {
    if (!f || m - n != shift) return {0.0, 0.0};
    double s = 1.0;
    if (shift < 0)
      for (long l = n; l > m; --l) s *= std::sqrt(static_cast<double>(l));
    else
      for (long l = n + 1; l <= m; ++l) s *= std::sqrt(static_cast<double>(l));
    return f(static_cast<double>(m)) * s;
  }
};

using ClosedMatrix = std::array<std::array<ClosedEntry, 3>, 3>;

inline Complex csqrt(double v) { return std::sqrt(Complex(v, 0.0)); }

/// P_1 (sign = +1) or P_3 (sign = -1) of the oscillator matrix.
inline ClosedMatrix oscillator_p_outer(double sign) {
  auto c = [](int s, std::function<Complex(double)> f) { return ClosedEntry{s, std::move(f)}; };
  return {{{c(0, [](double N) { return Complex((N + 1) / (2 * (2 * N + 3)), 0); }),
            c(-1, [sign](double N) { return sign / (2.0 * csqrt(2 * N + 3)); }),
            c(-2, [](double N) { return Complex(1 / (2 * (2 * N + 3)), 0); })},
           {c(1, [sign](double N) { return sign / (2.0 * csqrt(2 * N + 1)); }),
            c(0, [](double) { return Complex(0.5, 0); }),
            c(-1, [sign](double N) { return sign / (2.0 * csqrt(2 * N + 1)); })},
           {c(2, [](double N) { return Complex(1 / (2 * (2 * N - 1)), 0); }),
            c(1, [sign](double N) { return sign / (2.0 * csqrt(2 * N - 1)); }),
            c(0, [](double N) { return Complex(N / (2 * (2 * N - 1)), 0); })}}};
}

inline ClosedMatrix oscillator_p_middle() {
  auto c = [](int s, std::function<Complex(double)> f) { return ClosedEntry{s, std::move(f)}; };
  return {{{c(0, [](double N) { return Complex((N + 2) / (2 * N + 3), 0); }), ClosedEntry{},
            c(-2, [](double N) { return Complex(-1 / (2 * N + 3), 0); })},
           {ClosedEntry{}, ClosedEntry{}, ClosedEntry{}},
           {c(2, [](double N) { return Complex(-1 / (2 * N - 1), 0); }), ClosedEntry{},
            c(0, [](double N) { return Complex((N - 1) / (2 * N - 1), 0); })}}};
}

/// exp(-i t g A) for the oscillator matrix.
inline ClosedMatrix oscillator_exp(double t, double g) {
  const double tg = t * g;
  const Complex I(0.0, 1.0);
  auto lam = [](double N) { return csqrt(2 * (2 * N + 3)); };
  auto c = [](int s, std::function<Complex(double)> f) { return ClosedEntry{s, std::move(f)}; };
  return {{{c(0, [=](double N) { return (N + 2 + (N + 1) * std::cos(tg * lam(N))) / (2 * N + 3); }),
            c(-1, [=](double N) { return -I * std::sin(tg * lam(N)) / csqrt(2 * N + 3); }),
            c(-2, [=](double N) { return (-1.0 + std::cos(tg * lam(N))) / (2 * N + 3); })},
           {c(1, [=](double N) { return -I * std::sin(tg * lam(N - 1)) / csqrt(2 * N + 1); }),
            c(0, [=](double N) { return std::cos(tg * lam(N - 1)); }),
            c(-1, [=](double N) { return -I * std::sin(tg * lam(N - 1)) / csqrt(2 * N + 1); })},
           {c(2, [=](double N) { return (-1.0 + std::cos(tg * lam(N - 2))) / (2 * N - 1); }),
            c(1, [=](double N) { return -I * std::sin(tg * lam(N - 2)) / csqrt(2 * N - 1); }),
            c(0, [=](double N) {
              const Complex cs = N == 0 ? Complex(0.0, 0.0) : N * std::cos(tg * lam(N - 2));
              return (N - 1 + cs) / (2 * N - 1);
            })}}};
}

/// Largest |<m|X_ij|n> - closed_ij(m, n)| over 0 <= m, n <= top.
inline double closed_gap(const NcMatrix<BandOperator>& x, const ClosedMatrix& want, long top) {
  double worst = 0.0;
  for (std::size_t i = 1; i <= 3; ++i)
    for (std::size_t j = 1; j <= 3; ++j)
      for (long m = 0; m <= top; ++m)
        for (long n = 0; n <= top; ++n)
          worst = std::max(worst, std::abs(x(i, j).matrix_element(m, n) - want[i - 1][j - 1].element(m, n)));
  return worst;
}

}  // namespace testing_support
