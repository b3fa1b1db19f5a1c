#pragma once

// Commutative and dense-numeric reference computations.

#include "ncspec/band_operator.hpp"
#include "ncspec/errors.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/ring.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <vector>

namespace ncspec {

/// Fraction-free (Bareiss) determinant with row swaps.
inline Rational det_exact(const NcMatrix<Rational>& a) {
  if (!a.is_square()) throw DimensionMismatch("determinant needs a square matrix");
  const std::size_t n = a.rows();
  NcMatrix<Rational> m = a;
  Rational sign = 1, prev = 1;
  for (std::size_t k = 1; k < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r <= n && m(r, k) == 0) ++r;
      if (r > n) return Rational(0);
      for (std::size_t c = 1; c <= n; ++c) std::swap(m(k, c), m(r, c));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i <= n; ++i)
      for (std::size_t j = k + 1; j <= n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n, n);
}

/// Coefficients p_1..p_n of det(lambda I - A) = lambda^n + p_1 lambda^{n-1} + ... + p_n
/// (Faddeev-LeVerrier).
inline std::vector<Rational> classical_charpoly(const NcMatrix<Rational>& a) {
  if (!a.is_square()) throw DimensionMismatch("characteristic polynomial needs a square matrix");
  const std::size_t n = a.rows();
  const auto id = NcMatrix<Rational>::identity(n, Rational(0));
  std::vector<Rational> p;
  NcMatrix<Rational> m = NcMatrix<Rational>::zeros(n, n, Rational(0));
  Rational c = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c * id;
    NcMatrix<Rational> am = a * m;
    Rational tr = 0;
    for (std::size_t i = 1; i <= n; ++i) tr += am(i, i);
    c = -tr / Rational(static_cast<long>(k));
    p.push_back(c);
  }
  return p;
}

/// f_i(z) = prod_{l != i} (z - x_l) / (x_i - x_l) for each i.
inline std::vector<Rational> classical_lagrange(const std::vector<Rational>& xs, const Rational& z) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Rational v = 1;
    for (std::size_t l = 0; l < xs.size(); ++l)
      if (l != i) v *= (z - xs[l]) / (xs[i] - xs[l]);
    out.push_back(v);
  }
  return out;
}

/// P_i = prod_{l != i} (A - x_l I) / (x_i - x_l).
inline std::vector<NcMatrix<Rational>> classical_projectors(const NcMatrix<Rational>& a,
                                                            const std::vector<Rational>& eigenvalues) {
  const std::size_t n = a.rows();
  const auto id = NcMatrix<Rational>::identity(n, Rational(0));
  std::vector<NcMatrix<Rational>> out;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    NcMatrix<Rational> p = id;
    for (std::size_t l = 0; l < eigenvalues.size(); ++l)
      if (l != i) p = p * ((a - eigenvalues[l] * id) * (Rational(1) / (eigenvalues[i] - eigenvalues[l])));
    out.push_back(p);
  }
  return out;
}

/// exp(t M) by Pade scaling and squaring.
inline Eigen::MatrixXcd dense_expm(const Eigen::MatrixXcd& m, Complex t) {
  Eigen::MatrixXcd tm = t * m;
  return tm.exp();
}

/// Dense block matrix of an oscillator matrix on levels 0..levels-1: index
/// (i, n) maps to (i-1) * levels + n.
class DenseTruncation {
 public:
  DenseTruncation(const NcMatrix<BandOperator>& a, long levels) : rows_(a.rows()), levels_(levels) {
    const auto dim = static_cast<Eigen::Index>(rows_ * static_cast<std::size_t>(levels));
    matrix_ = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t i = 1; i <= a.rows(); ++i)
      for (std::size_t j = 1; j <= a.cols(); ++j)
        for (const auto& [s, g] : a(i, j).reduced_bands())
          for (long n = 0; n < levels; ++n) {
            long m = n + s;
            if (m < 0 || m >= levels) continue;
            matrix_(index(i, m), index(j, n)) = a(i, j).matrix_element(m, n);
          }
  }

  /// probe_levels + guard_band + 1 levels.
  static DenseTruncation guarded(const NcMatrix<BandOperator>& a, const ToleranceConfig& cfg) {
    return DenseTruncation(a, cfg.probe_levels + cfg.guard_band + 1);
  }

  Eigen::Index index(std::size_t i, long n) const {
    return static_cast<Eigen::Index>((i - 1) * static_cast<std::size_t>(levels_) + static_cast<std::size_t>(n));
  }
  long levels() const { return levels_; }
  std::size_t rows() const { return rows_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  /// <m| (block i, j) |n> of an arbitrary dense matrix laid out like this one.
  Complex element(const Eigen::MatrixXcd& d, std::size_t i, long m, std::size_t j, long n) const {
    return d(index(i, m), index(j, n));
  }

 private:
  std::size_t rows_;
  long levels_;
  Eigen::MatrixXcd matrix_;
};

}  // namespace ncspec
