#pragma once

// Per-row characteristic polynomials lambda^n - sum_k C_k lambda^{n-k} with
// left coefficients, solved from (C_1..C_n) M = (row i of A^n) where M stacks
// row i of A^{n-1}, ..., A^0.

#include "ncspec/band_operator.hpp"
#include "ncspec/errors.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/quasidet.hpp"
#include "ncspec/ring.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

namespace ncspec {

template <RingElement T>
struct RowCharPoly {
  std::size_t row = 0;
  std::vector<T> coeffs;  // C_(i)1 .. C_(i)n
  bool degenerate = false;
  std::optional<std::string> free_parameter_note;

  std::size_t degree() const { return coeffs.size(); }
};

namespace detail {

template <RingElement T>
struct RowSystem {
  std::vector<std::vector<T>> m;  // m[k][j], 0-based: row i of A^{n-1-k}
  std::vector<T> b;               // row i of A^n
};

template <RingElement T>
RowSystem<T> row_system(const NcMatrix<T>& a, std::size_t i) {
  const std::size_t n = a.rows();
  std::vector<NcMatrix<T>> pw{NcMatrix<T>::identity(n, a.sample())};
  for (std::size_t p = 1; p <= n; ++p) pw.push_back(pw.back() * a);
  RowSystem<T> sys;
  sys.m.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 1; j <= n; ++j) sys.m[k].push_back(pw[n - 1 - k](i, j));
  for (std::size_t j = 1; j <= n; ++j) sys.b.push_back(pw[n](i, j));
  return sys;
}

// Column elimination for c M = b with right multipliers. Free unknowns are 0.
template <RingElement T>
RowCharPoly<T> solve_row_exact(RowSystem<T> sys, std::size_t row, const ToleranceConfig& cfg) {
  const std::size_t n = sys.b.size();
  const T zero = zero_like(sys.b.front());

  struct Step {
    std::size_t k, j;
    std::vector<T> mcol;  // M[.][j] at elimination time
    T bj, inv;
  };
  std::vector<Step> steps;
  std::vector<bool> unknown_done(n, false), eq_done(n, false);

  for (;;) {
    std::optional<T> inv;
    std::size_t pk = 0, pj = 0;
    for (std::size_t j = 0; j < n && !inv; ++j) {
      if (eq_done[j]) continue;
      for (std::size_t k = 0; k < n && !inv; ++k) {
        if (unknown_done[k]) continue;
        if (auto v = try_inverse(sys.m[k][j], cfg)) {
          inv = std::move(v);
          pk = k;
          pj = j;
        }
      }
    }
    if (!inv) break;

    Step st{pk, pj, {}, sys.b[pj], *inv};
    for (std::size_t l = 0; l < n; ++l) st.mcol.push_back(sys.m[l][pj]);
    for (std::size_t j2 = 0; j2 < n; ++j2) {
      if (eq_done[j2] || j2 == pj) continue;
      const T f = *inv * sys.m[pk][j2];
      for (std::size_t l = 0; l < n; ++l) {
        if (unknown_done[l] || l == pk) continue;
        sys.m[l][j2] = sys.m[l][j2] - sys.m[l][pj] * f;
      }
      sys.m[pk][j2] = zero;
      sys.b[j2] = sys.b[j2] - sys.b[pj] * f;
    }
    unknown_done[pk] = true;
    eq_done[pj] = true;
    steps.push_back(std::move(st));
  }

  for (std::size_t j = 0; j < n; ++j) {
    if (eq_done[j]) continue;
    for (std::size_t k = 0; k < n; ++k)
      if (!unknown_done[k] && !is_zero(sys.m[k][j], cfg))
        throw Inconsistent("row " + std::to_string(row) + ": remaining coefficient has no inverse");
    if (!is_zero(sys.b[j], cfg)) throw Inconsistent("row " + std::to_string(row) + ": system has no solution");
  }

  std::vector<T> c(n, zero);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    T acc = it->bj;
    for (std::size_t l = 0; l < n; ++l)
      if (l != it->k) acc = acc - c[l] * it->mcol[l];
    c[it->k] = acc * it->inv;
  }

  RowCharPoly<T> out{row, std::move(c), false, std::nullopt};
  std::string free;
  for (std::size_t k = 0; k < n; ++k)
    if (!unknown_done[k]) free += (free.empty() ? "" : ", ") + ("C_(" + std::to_string(row) + ")" + std::to_string(k + 1));
  if (!free.empty()) {
    out.degenerate = true;
    out.free_parameter_note = "underdetermined; free coefficients " + free + " set to zero";
  }
  return out;
}

// Diagonal ansatz C_k = c_k(N). For output level m the reduced equations are
//   sum_k c_k(m) g^{M_kj}_s(m - s) = g^{b_j}_s(m - s)
// for every column j and band s; each level is solved in the least-squares
// sense, taking the minimum-norm solution.
inline RowCharPoly<BandOperator> solve_row_band(const RowSystem<BandOperator>& sys, std::size_t row,
                                                const ToleranceConfig& cfg) {
  const std::size_t n = sys.b.size();
  const long top = cfg.table_levels();

  std::vector<std::pair<std::size_t, int>> eqs;
  for (std::size_t j = 0; j < n; ++j) {
    std::set<int> shifts;
    for (const auto& [s, g] : sys.b[j].reduced_bands()) shifts.insert(s);
    for (std::size_t k = 0; k < n; ++k)
      for (const auto& [s, g] : sys.m[k][j].reduced_bands()) shifts.insert(s);
    for (int s : shifts) eqs.emplace_back(j, s);
  }

  auto reduced = [](const BandOperator& x, int s, long level) -> Complex {
    auto it = x.reduced_bands().find(s);
    return it == x.reduced_bands().end() ? Complex(0.0, 0.0) : it->second.eval(level);
  };
  auto chop = [](Complex v) {
    if (std::abs(v.real()) < 1e-11) v.real(0.0);
    if (std::abs(v.imag()) < 1e-11) v.imag(0.0);
    return v;
  };

  std::vector<std::vector<std::optional<Complex>>> vals(n, std::vector<std::optional<Complex>>(top + 1));
  std::vector<long> rank_deficient;
  for (long m = 0; m <= top; ++m) {
    std::vector<std::vector<Complex>> rows;
    std::vector<Complex> rhs;
    for (const auto& [j, s] : eqs) {
      try {
        std::vector<Complex> r(n);
        for (std::size_t k = 0; k < n; ++k) r[k] = reduced(sys.m[k][j], s, m - s);
        Complex v = reduced(sys.b[j], s, m - s);
        rows.push_back(std::move(r));
        rhs.push_back(v);
      } catch (const EvalError&) {
      }
    }
    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(std::max<std::size_t>(rows.size(), 1)),
                                                  static_cast<Eigen::Index>(n));
    Eigen::VectorXcd rv = Eigen::VectorXcd::Zero(lhs.rows());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t k = 0; k < n; ++k) lhs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][k];
      rv(static_cast<Eigen::Index>(r)) = rhs[r];
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(lhs);
    cod.setThreshold(1e-10);
    if (cod.rank() < static_cast<Eigen::Index>(n)) rank_deficient.push_back(m);
    Eigen::VectorXcd sol = cod.solve(rv);
    for (std::size_t k = 0; k < n; ++k) vals[k][static_cast<std::size_t>(m)] = chop(sol(static_cast<Eigen::Index>(k)));
  }

  RowCharPoly<BandOperator> out;
  out.row = row;
  for (std::size_t k = 0; k < n; ++k) out.coeffs.push_back(BandOperator::diagonal(WeightExpr::table(0, vals[k])));

  for (std::size_t j = 0; j < n; ++j) {
    BandOperator res = sys.b[j];
    for (std::size_t k = 0; k < n; ++k) res = res - out.coeffs[k] * sys.m[k][j];
    double scale = std::max(1.0, band_max_abs(sys.b[j], cfg));
    double r;
    try {
      r = band_max_abs(res, cfg);
    } catch (const EvalError& e) {
      throw UnsupportedDivision(std::string("row ") + std::to_string(row) + ": residual not evaluable: " + e.what());
    }
    if (r > cfg.abs_tol * scale)
      throw UnsupportedDivision("row " + std::to_string(row) + ": diagonal ansatz residual " + std::to_string(r) +
                                " exceeds tolerance");
  }

  if (!rank_deficient.empty()) {
    out.degenerate = true;
    out.free_parameter_note = "rank-deficient at " + std::to_string(rank_deficient.size()) + " of " +
                              std::to_string(top + 1) + " levels (first " + std::to_string(rank_deficient.front()) +
                              "); minimum-norm solution taken, free parameter set to zero";
  }
  return out;
}

}  // namespace detail

template <RingElement T>
RowCharPoly<T> char_poly_row(const NcMatrix<T>& a, std::size_t i, const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("char_poly_row needs a square matrix");
  if (i < 1 || i > a.rows()) throw IndexOutOfRange("row index");
  auto sys = detail::row_system(a, i);
  if constexpr (std::is_same_v<T, BandOperator>)
    return detail::solve_row_band(sys, i, cfg);
  else
    return detail::solve_row_exact(std::move(sys), i, cfg);
}

template <RingElement T>
std::vector<RowCharPoly<T>> char_poly_all(const NcMatrix<T>& a, const ToleranceConfig& cfg) {
  std::vector<RowCharPoly<T>> out;
  for (std::size_t i = 1; i <= a.rows(); ++i) out.push_back(char_poly_row(a, i, cfg));
  return out;
}

/// lambda^n - sum_k C_k lambda^{n-k}, coefficients acting from the left.
template <RingElement T>
T eval_row_poly(const RowCharPoly<T>& p, const T& lambda) {
  const std::size_t n = p.coeffs.size();
  std::vector<T> pw{one_like(lambda)};
  for (std::size_t q = 1; q <= n; ++q) pw.push_back(pw.back() * lambda);
  T acc = pw[n];
  for (std::size_t k = 1; k <= n; ++k) acc = acc - p.coeffs[k - 1] * pw[n - k];
  return acc;
}

/// The bordered quasideterminant: first row (row i of A^n, lambda^n), then
/// (row i of A^{n-k}, lambda^{n-k}) for k = 1..n, taken at (1, n+1).
template <RingElement T>
std::optional<T> char_poly_row_bordered(const NcMatrix<T>& a, std::size_t i, const T& lambda,
                                        const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("char_poly_row_bordered needs a square matrix");
  if (i < 1 || i > a.rows()) throw IndexOutOfRange("row index");
  const std::size_t n = a.rows();
  auto sys = detail::row_system(a, i);
  std::vector<T> lp{one_like(lambda)};
  for (std::size_t q = 1; q <= n; ++q) lp.push_back(lp.back() * lambda);

  std::vector<T> e;
  for (std::size_t j = 0; j < n; ++j) e.push_back(sys.b[j]);
  e.push_back(lp[n]);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) e.push_back(sys.m[k][j]);
    e.push_back(lp[n - 1 - k]);
  }
  return quasideterminant(NcMatrix<T>(n + 1, n + 1, std::move(e)), 1, n + 1, cfg);
}

/// A^n - sum_k diag(C_(1)k, ..., C_(n)k) A^{n-k}.
template <RingElement T>
NcMatrix<T> cayley_hamilton_residual(const NcMatrix<T>& a, const std::vector<RowCharPoly<T>>& polys) {
  const std::size_t n = a.rows();
  if (polys.size() != n) throw DimensionMismatch("need one polynomial per row");
  std::vector<const RowCharPoly<T>*> by_row(n, nullptr);
  for (const auto& p : polys) {
    if (p.row < 1 || p.row > n || p.coeffs.size() != n) throw DimensionMismatch("polynomial does not match matrix");
    by_row[p.row - 1] = &p;
  }
  for (auto* p : by_row)
    if (!p) throw DimensionMismatch("rows missing from polynomial list");

  std::vector<NcMatrix<T>> pw{NcMatrix<T>::identity(n, a.sample())};
  for (std::size_t q = 1; q <= n; ++q) pw.push_back(pw.back() * a);
  NcMatrix<T> res = pw[n];
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<T> d;
    for (std::size_t r = 0; r < n; ++r) d.push_back(by_row[r]->coeffs[k - 1]);
    res = res - NcMatrix<T>::diagonal(d) * pw[n - k];
  }
  return res;
}

/// True when two rows carry different coefficient lists.
template <RingElement T>
bool row_poly_divergence(const std::vector<RowCharPoly<T>>& polys, const ToleranceConfig& cfg) {
  for (std::size_t p = 1; p < polys.size(); ++p) {
    const auto& x = polys[0].coeffs;
    const auto& y = polys[p].coeffs;
    if (x.size() != y.size()) return true;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (!approx_equal(x[k], y[k], cfg)) return true;
  }
  return false;
}

}  // namespace ncspec
