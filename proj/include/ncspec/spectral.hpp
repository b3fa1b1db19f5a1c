#pragma once

// Vandermonde quasideterminants, Lagrange interpolation with left
// coefficients, eigen-diagonals and spectral projectors. Everything works in
// the ring R = M(n, T): A and the x_j are elements of R.

#include "ncspec/band_operator.hpp"
#include "ncspec/charpoly.hpp"
#include "ncspec/errors.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/quasidet.hpp"
#include "ncspec/quaternion.hpp"
#include "ncspec/ring.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

namespace ncspec {

// ---------------------------------------------------------------------------
// Vandermonde and interpolation over an arbitrary ring R

/// Vd(p, j) = x_j^{n-p}.
template <RingElement R>
NcMatrix<R> vandermonde_matrix(const std::vector<R>& xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw DimensionMismatch("need at least one node");
  std::vector<R> e;
  e.reserve(n * n);
  for (std::size_t p = 1; p <= n; ++p)
    for (std::size_t j = 0; j < n; ++j) e.push_back(power(xs[j], n - p));
  return NcMatrix<R>(n, n, std::move(e));
}

/// V(x_1..x_k, z): powers k-1 down to 0 in each column, z in the last column,
/// quasideterminant at the top-right corner.
template <RingElement R>
std::optional<R> vandermonde_qdet(const std::vector<R>& xs, const R& z, const ToleranceConfig& cfg) {
  std::vector<R> cols = xs;
  cols.push_back(z);
  const std::size_t k = cols.size();
  std::vector<R> e;
  for (std::size_t p = 1; p <= k; ++p)
    for (const auto& c : cols) e.push_back(power(c, k - p));
  return quasideterminant(NcMatrix<R>(k, k, std::move(e)), 1, k, cfg);
}

/// V_m: first row (x_1^m .. x_n^m, z^m), then powers n-1 .. 0; corner (1, n+1).
template <RingElement R>
std::optional<R> vandermonde_vm(const std::vector<R>& xs, const R& z, std::size_t m, const ToleranceConfig& cfg) {
  const std::size_t n = xs.size();
  std::vector<R> cols = xs;
  cols.push_back(z);
  std::vector<R> e;
  for (const auto& c : cols) e.push_back(power(c, m));
  for (std::size_t p = 1; p <= n; ++p)
    for (const auto& c : cols) e.push_back(power(c, n - p));
  return quasideterminant(NcMatrix<R>(n + 1, n + 1, std::move(e)), 1, n + 1, cfg);
}

/// W = Vd^{-1}; f_i(z) = sum_k W_ik z^{n-k}.
template <RingElement R>
NcMatrix<R> lagrange_coeffs(const std::vector<R>& xs, const ToleranceConfig& cfg) {
  auto w = mat_inverse_elimination(vandermonde_matrix(xs), cfg);
  if (!w) throw VandermondeSingular("Vandermonde matrix of the nodes is not invertible");
  return *w;
}

template <RingElement R>
R lagrange_eval(const NcMatrix<R>& w, std::size_t i, const R& z) {
  const std::size_t n = w.rows();
  if (i < 1 || i > n) throw IndexOutOfRange("Lagrange index");
  R zp = one_like(z);
  R acc = w(i, n) * zp;
  for (std::size_t k = n - 1; k >= 1; --k) {
    zp = zp * z;
    acc = acc + w(i, k) * zp;
  }
  return acc;
}

/// z^m - sum_k x_k^m f_k(z).
template <RingElement R>
R vandermonde_vm_expanded(const NcMatrix<R>& w, const std::vector<R>& xs, const R& z, std::size_t m) {
  R acc = power(z, m);
  for (std::size_t k = 0; k < xs.size(); ++k) acc = acc - power(xs[k], m) * lagrange_eval(w, k + 1, z);
  return acc;
}

/// V_{m-1} z - V_m + c_{1,n+1} c_{2,n+1}^{-1} V_n, the c entries coming from
/// Sylvester reduction of the (n+2)-square matrix with the Vandermonde block
/// as pivot.
template <RingElement R>
std::optional<R> main_identity_residual(const std::vector<R>& xs, const R& z, std::size_t m,
                                        const ToleranceConfig& cfg) {
  const std::size_t n = xs.size();
  if (m < 1) throw IndexOutOfRange("main identity needs m >= 1");
  const R zero = zero_like(z), one = one_like(z);

  // Rows: x^{n-1} .. x^0 (pivot block), then x^m, x^n. Columns: x_1..x_n, e, z.
  std::vector<R> e;
  auto push_row = [&](std::size_t p, const R& extra) {
    for (const auto& x : xs) e.push_back(power(x, p));
    e.push_back(extra);
    e.push_back(power(z, p));
  };
  for (std::size_t p = n; p-- > 0;) push_row(p, p == 0 ? one : zero);
  push_row(m, zero);
  push_row(n, zero);

  NcMatrix<R> c;
  try {
    c = sylvester_reduce(NcMatrix<R>(n + 2, n + 2, std::move(e)), n, cfg);
  } catch (const PivotSingular&) {
    return std::nullopt;
  }
  auto vm = vandermonde_vm(xs, z, m, cfg);
  auto vm1 = vandermonde_vm(xs, z, m - 1, cfg);
  auto vn = vandermonde_vm(xs, z, n, cfg);
  auto c21_inv = try_inverse(c(2, 1), cfg);
  if (!vm || !vm1 || !vn || !c21_inv) return std::nullopt;
  return *vm1 * z - *vm + c(1, 1) * *c21_inv * *vn;
}

// ---------------------------------------------------------------------------
// Numeric polynomial roots

namespace detail {

inline void sort_roots(std::vector<Complex>& r, double tol) {
  std::sort(r.begin(), r.end(), [tol](const Complex& a, const Complex& b) {
    if (std::abs(a.real() - b.real()) > tol) return a.real() > b.real();
    return a.imag() > b.imag();
  });
}

inline Complex horner(const std::vector<Complex>& a, Complex x) {
  Complex v(1.0, 0.0);
  for (const auto& c : a) v = v * x + c;
  return v;
}

inline Complex horner_derivative(const std::vector<Complex>& a, Complex x) {
  const std::size_t d = a.size();
  Complex v(static_cast<double>(d), 0.0);
  for (std::size_t k = 0; k + 1 < d; ++k) v = v * x + static_cast<double>(d - 1 - k) * a[k];
  return v;
}

}  // namespace detail

/// Roots of x^d + a[0] x^{d-1} + ... + a[d-1], ordered by descending real part
/// (ties within tol by descending imaginary part).
inline std::vector<Complex> numeric_roots(std::vector<Complex> a, double tol) {
  std::vector<Complex> roots;
  while (!a.empty() && std::abs(a.back()) < tol) {
    roots.emplace_back(0.0, 0.0);
    a.pop_back();
  }
  const std::vector<Complex> full = a;
  if (a.size() == 1) {
    roots.push_back(-a[0]);
  } else if (a.size() == 2) {
    Complex b = a[0], c = a[1];
    Complex disc = std::sqrt(b * b - 4.0 * c);
    Complex q = -0.5 * (b + (std::real(std::conj(b) * disc) >= 0 ? disc : -disc));
    if (std::abs(q) == 0.0) {
      roots.emplace_back(0.0, 0.0);
      roots.emplace_back(0.0, 0.0);
    } else {
      roots.push_back(q);
      roots.push_back(c / q);
    }
  } else if (a.size() > 2) {
    const auto d = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) comp(0, k) = -a[static_cast<std::size_t>(k)];
    for (Eigen::Index k = 1; k < d; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw RootNotFound("companion eigenvalue iteration failed");
    for (Eigen::Index k = 0; k < d; ++k) {
      Complex x = es.eigenvalues()(k);
      for (int it = 0; it < 8; ++it) {
        Complex dp = detail::horner_derivative(full, x);
        if (std::abs(dp) == 0.0) break;
        Complex step = detail::horner(full, x) / dp;
        x -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
      }
      roots.push_back(x);
    }
  }
  for (auto& r : roots) {
    if (std::abs(r.real()) < 1e-14) r.real(0.0);
    if (std::abs(r.imag()) < 1e-14) r.imag(0.0);
  }
  detail::sort_roots(roots, tol);
  return roots;
}

// ---------------------------------------------------------------------------
// Eigen-diagonals and the decomposition

template <RingElement T>
struct EigenDiagonals {
  std::vector<NcMatrix<T>> xs;
};

enum class RootStrategy { zero_root_factoring, pointwise_numeric, user_supplied };

namespace detail {

template <RingElement T>
std::vector<T> roots_by_zero_factoring(const RowCharPoly<T>& p, const ToleranceConfig& cfg);

inline std::vector<Complex> monic_complex(const std::vector<Complex>& c) {
  std::vector<Complex> a;
  for (const auto& v : c) a.push_back(-v);
  return a;
}

template <RingElement T>
std::vector<T> roots_pointwise(const RowCharPoly<T>& p, const ToleranceConfig& cfg) {
  if constexpr (std::is_same_v<T, Complex>) {
    return numeric_roots(monic_complex(p.coeffs), cfg.abs_tol);
  } else if constexpr (std::is_same_v<T, BandOperator>) {
    const std::size_t n = p.coeffs.size();
    const long top = cfg.table_levels();
    std::vector<std::vector<std::optional<Complex>>> cols(n, std::vector<std::optional<Complex>>(top + 1));
    for (const auto& c : p.coeffs)
      if (!c.is_diagonal()) throw RootNotFound("pointwise roots need diagonal coefficients");
    for (long m = 0; m <= top; ++m) {
      std::vector<Complex> c;
      try {
        for (const auto& ck : p.coeffs) c.push_back(ck.is_zero() ? Complex(0.0, 0.0) : ck.reduced_bands().at(0).eval(m));
      } catch (const EvalError&) {
        continue;
      }
      auto r = numeric_roots(monic_complex(c), cfg.abs_tol);
      for (std::size_t j = 0; j < n; ++j) cols[j][static_cast<std::size_t>(m)] = r[j];
    }
    std::vector<BandOperator> out;
    for (auto& col : cols) out.push_back(BandOperator::diagonal(WeightExpr::table(0, std::move(col))));
    return out;
  } else {
    (void)cfg;
    throw RootNotFound("pointwise numeric roots need complex or oscillator coefficients");
  }
}

template <RingElement T>
std::vector<T> roots_by_zero_factoring(const RowCharPoly<T>& p, const ToleranceConfig& cfg) {
  std::vector<T> c = p.coeffs;
  std::size_t zeros = 0;
  while (!c.empty() && is_zero(c.back(), cfg)) {
    c.pop_back();
    ++zeros;
  }
  std::vector<T> roots;
  if (c.size() == 1) {
    roots.push_back(c[0]);
  } else if (c.size() >= 2) {
    if constexpr (std::is_same_v<T, Complex>)
      roots = numeric_roots(monic_complex(c), cfg.abs_tol);
    else
      throw RootNotFound("row " + std::to_string(p.row) + ": quotient of degree " + std::to_string(c.size()) +
                         " has a nonzero constant term");
  }
  const T zero = zero_like(p.coeffs.front());
  for (std::size_t z = 0; z < zeros; ++z) roots.push_back(zero);
  return roots;
}

}  // namespace detail

/// Roots of every row polynomial, assembled as x_j = diag_i(j-th root of row i).
/// `user_roots[i][j]` is used with RootStrategy::user_supplied.
template <RingElement T>
EigenDiagonals<T> solve_eigen_diagonals(const NcMatrix<T>& a, const std::vector<RowCharPoly<T>>& polys,
                                        RootStrategy strategy, const ToleranceConfig& cfg,
                                        const std::vector<std::vector<T>>& user_roots = {}) {
  const std::size_t n = a.rows();
  if (polys.size() != n) throw DimensionMismatch("need one polynomial per row");

  std::vector<std::vector<T>> roots(n);
  for (const auto& p : polys) {
    if (p.row < 1 || p.row > n) throw DimensionMismatch("polynomial row out of range");
    auto& r = roots[p.row - 1];
    switch (strategy) {
      case RootStrategy::zero_root_factoring:
        r = detail::roots_by_zero_factoring(p, cfg);
        break;
      case RootStrategy::pointwise_numeric:
        r = detail::roots_pointwise(p, cfg);
        break;
      case RootStrategy::user_supplied:
        if (user_roots.size() != n) throw RootNotFound("user roots must list every row");
        r = user_roots[p.row - 1];
        break;
    }
    if (r.size() != n) throw RootNotFound("row " + std::to_string(p.row) + ": found " + std::to_string(r.size()) +
                                          " of " + std::to_string(n) + " roots");
    for (std::size_t j = 0; j < n; ++j) {
      T v = eval_row_poly(p, r[j]);
      double scale = 1.0;
      if constexpr (!is_exact_v<T>) scale = std::max(1.0, std::pow(magnitude(r[j], cfg), static_cast<double>(n)));
      if (magnitude(v, cfg) > cfg.abs_tol * scale || (is_exact_v<T> && !is_zero(v, cfg)))
        throw RootRejected("row " + std::to_string(p.row) + ", root " + std::to_string(j + 1) +
                           ": polynomial residual " + std::to_string(magnitude(v, cfg)));
    }
  }

  EigenDiagonals<T> out;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<T> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(roots[i][j]);
    out.xs.push_back(NcMatrix<T>::diagonal(d));
  }
  (void)lagrange_coeffs(out.xs, cfg);
  return out;
}

struct SpectralResiduals {
  double idempotence = 0.0;   // max_k |P_k^2 - P_k|
  double orthogonality = 0.0; // max_{k != l} |P_k P_l|
  double completeness = 0.0;  // |sum P_k - I|
  // V_m residuals are divided by max(1, |A^m|).
  double vm_bordered = 0.0;   // max_m |V_m| by quasideterminant
  double vm_expanded = 0.0;   // max_m |A^m - sum x_k^m P_k|
  std::size_t vm_undefined = 0;
  std::size_t vm_max = 0;
};

template <RingElement T>
struct SpectralDecomposition {
  EigenDiagonals<T> xs;
  NcMatrix<NcMatrix<T>> coeffs;  // W, f_k(z) = sum_l W_kl z^{n-l}
  std::vector<NcMatrix<T>> projectors;
  SpectralResiduals residuals;
};

template <RingElement T>
SpectralDecomposition<T> spectral_decompose(const NcMatrix<T>& a, const EigenDiagonals<T>& xs,
                                            const ToleranceConfig& cfg, std::size_t vm_max = 0) {
  using R = NcMatrix<T>;
  const std::size_t n = a.rows();
  if (xs.xs.size() != n) throw DimensionMismatch("need n eigen-diagonals");
  if (vm_max == 0) vm_max = n + 5;

  SpectralDecomposition<T> out;
  out.xs = xs;
  out.coeffs = lagrange_coeffs(xs.xs, cfg);
  for (std::size_t k = 1; k <= n; ++k) out.projectors.push_back(lagrange_eval(out.coeffs, k, a));

  auto& res = out.residuals;
  res.vm_max = vm_max;
  const R id = R::identity(n, a.sample());
  R total = R::zeros(n, n, a.sample());
  for (std::size_t k = 0; k < n; ++k) {
    const R& p = out.projectors[k];
    total = total + p;
    res.idempotence = std::max(res.idempotence, mat_max_abs(p * p - p, cfg));
    for (std::size_t l = 0; l < n; ++l)
      if (l != k) res.orthogonality = std::max(res.orthogonality, mat_max_abs(p * out.projectors[l], cfg));
  }
  res.completeness = mat_max_abs(total - id, cfg);
  for (std::size_t m = 0; m <= vm_max; ++m) {
    const double scale = std::max(1.0, mat_max_abs(power(a, m), cfg));
    auto v = vandermonde_vm(xs.xs, a, m, cfg);
    if (v)
      res.vm_bordered = std::max(res.vm_bordered, mat_max_abs(*v, cfg) / scale);
    else
      ++res.vm_undefined;
    res.vm_expanded =
        std::max(res.vm_expanded, mat_max_abs(vandermonde_vm_expanded(out.coeffs, xs.xs, a, m), cfg) / scale);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Matrix functions

template <class T>
struct floating_type {
  using type = T;
};
template <>
struct floating_type<Rational> {
  using type = Complex;
};
template <>
struct floating_type<QuaternionQ> {
  using type = QuaternionF;
};
template <class T>
using floating_t = typename floating_type<T>::type;

inline Complex to_floating(const Rational& r) { return {r.convert_to<double>(), 0.0}; }
inline Complex to_floating(const Complex& c) { return c; }
inline QuaternionF to_floating(const QuaternionF& q) { return q; }
inline BandOperator to_floating(const BandOperator& b) { return b; }

template <RingElement T>
NcMatrix<floating_t<T>> to_floating(const NcMatrix<T>& m) {
  std::vector<floating_t<T>> e;
  for (const auto& v : m.entries()) e.push_back(to_floating(v));
  return NcMatrix<floating_t<T>>(m.rows(), m.cols(), std::move(e));
}

enum class FunctionTag { exp, identity, cos, sin };

inline FunctionTag parse_function_tag(const std::string& s) {
  if (s == "exp") return FunctionTag::exp;
  if (s == "identity" || s == "id") return FunctionTag::identity;
  if (s == "cos") return FunctionTag::cos;
  if (s == "sin") return FunctionTag::sin;
  throw UnsupportedFunction("unknown function '" + s + "'");
}

inline std::string to_string(FunctionTag f) {
  switch (f) {
    case FunctionTag::exp: return "exp";
    case FunctionTag::identity: return "identity";
    case FunctionTag::cos: return "cos";
    case FunctionTag::sin: return "sin";
  }
  return "?";
}

namespace detail {

inline Complex apply_complex(FunctionTag f, Complex x) {
  switch (f) {
    case FunctionTag::exp: return std::exp(x);
    case FunctionTag::identity: return x;
    case FunctionTag::cos: return std::cos(x);
    case FunctionTag::sin: return std::sin(x);
  }
  return x;
}

inline Complex apply_scalar(FunctionTag f, Complex scale, const Complex& x, const ToleranceConfig&) {
  return apply_complex(f, scale * x);
}

inline QuaternionF apply_scalar(FunctionTag f, Complex scale, const QuaternionF& x, const ToleranceConfig&) {
  if (scale.imag() != 0.0) throw UnsupportedFunction("quaternion entries need a real scale");
  QuaternionF y = scale.real() * x;
  if (f == FunctionTag::exp) return quaternion_exp(y);
  if (f == FunctionTag::identity) return y;
  throw UnsupportedFunction(to_string(f) + " is not available for quaternion entries");
}

inline BandOperator apply_scalar(FunctionTag f, Complex scale, const BandOperator& x, const ToleranceConfig& cfg) {
  if (!x.is_diagonal()) throw UnsupportedFunction("function of a non-diagonal oscillator entry");
  const WeightExpr g = x.is_zero() ? WeightExpr(0) : x.reduced_bands().at(0);
  if (g.is_constant()) return BandOperator::diagonal(WeightExpr::floating(apply_complex(f, scale * g.constant_value())));
  const long top = cfg.table_levels();
  std::vector<std::optional<Complex>> vals(static_cast<std::size_t>(top + 1));
  for (long m = 0; m <= top; ++m) {
    try {
      vals[static_cast<std::size_t>(m)] = apply_complex(f, scale * g.eval(m));
    } catch (const EvalError&) {
    }
  }
  return BandOperator::diagonal(WeightExpr::table(0, std::move(vals)));
}

}  // namespace detail

/// sum_k f(scale x_k) P_k with the scalar function applied entrywise to the
/// diagonal x_k.
template <RingElement T>
NcMatrix<floating_t<T>> matrix_function(const NcMatrix<T>& a, const SpectralDecomposition<T>& d, FunctionTag f,
                                        Complex scale, const ToleranceConfig& cfg) {
  using F = floating_t<T>;
  const std::size_t n = a.rows();
  if (d.projectors.size() != n || d.xs.xs.size() != n) throw DimensionMismatch("decomposition does not match matrix");
  NcMatrix<F> out = NcMatrix<F>::zeros(n, n, to_floating(a.sample()));
  for (std::size_t k = 0; k < n; ++k) {
    NcMatrix<F> p = to_floating(d.projectors[k]);
    const NcMatrix<T>& x = d.xs.xs[k];
    for (std::size_t i = 1; i <= n; ++i) {
      F fx = detail::apply_scalar(f, scale, to_floating(x(i, i)), cfg);
      for (std::size_t j = 1; j <= n; ++j) out(i, j) = out(i, j) + fx * p(i, j);
    }
  }
  return out;
}

}  // namespace ncspec
