#pragma once

// Quasideterminants |A|_ij = a_ij - r_i^j (A^{ij})^{-1} c_j^i and the
// identities they satisfy (Sylvester, homological relations, scaling).

#include "ncspec/errors.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/ring.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

namespace ncspec {

/// |A|_ij, or empty when the minor A^{ij} has no inverse.
template <RingElement T>
std::optional<T> quasideterminant(const NcMatrix<T>& a, std::size_t i, std::size_t j, const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("quasideterminant needs a square matrix");
  if (i < 1 || i > a.rows() || j < 1 || j > a.cols()) throw IndexOutOfRange("quasideterminant index");
  if (a.rows() == 1) return a(1, 1);
  auto minor_inv = mat_inverse_elimination(delete_row_col(a, i, j), cfg);
  if (!minor_inv) return std::nullopt;
  NcMatrix<T> corr = extract_row_without(a, i, j) * *minor_inv * extract_col_without(a, j, i);
  return a(i, j) - corr(1, 1);
}

/// A^{-1} assembled entrywise as (A^{-1})_ij = |A|_ji^{-1}. An undefined
/// |A|_ji (singular minor) contributes 0, the value its inverse takes when A is
/// invertible; the assembled matrix is checked by multiplying back.
template <RingElement T>
std::optional<NcMatrix<T>> mat_inverse_quasidet(const NcMatrix<T>& a, const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("inverse needs a square matrix");
  const std::size_t n = a.rows();
  NcMatrix<T> out = NcMatrix<T>::zeros(n, n, a.sample());
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      auto q = quasideterminant(a, j, i, cfg);
      if (!q) continue;
      auto qi = try_inverse(*q, cfg);
      if (!qi) return std::nullopt;
      out(i, j) = *qi;
    }
  const NcMatrix<T> id = NcMatrix<T>::identity(n, a.sample());
  if (!mat_approx_equal(a * out, id, cfg) || !mat_approx_equal(out * a, id, cfg)) return std::nullopt;
  return out;
}

/// With the leading k x k block A0 as pivot, returns the (n-k) x (n-k) matrix
/// c_pq = a_pq - row_p(A, cols 1..k) A0^{-1} col_q(A, rows 1..k).
template <RingElement T>
NcMatrix<T> sylvester_reduce(const NcMatrix<T>& a, std::size_t k, const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("sylvester_reduce needs a square matrix");
  const std::size_t n = a.rows();
  if (k == 0) return a;
  if (k >= n) throw DimensionMismatch("pivot block must leave at least one row");

  std::vector<T> block;
  for (std::size_t r = 1; r <= k; ++r)
    for (std::size_t c = 1; c <= k; ++c) block.push_back(a(r, c));
  auto a0_inv = mat_inverse_elimination(NcMatrix<T>(k, k, std::move(block)), cfg);
  if (!a0_inv) throw PivotSingular("leading " + std::to_string(k) + "x" + std::to_string(k) + " block is not invertible");

  const std::size_t m = n - k;
  NcMatrix<T> out = NcMatrix<T>::zeros(m, m, a.sample());
  for (std::size_t p = 1; p <= m; ++p) {
    std::vector<T> row;
    for (std::size_t c = 1; c <= k; ++c) row.push_back(a(k + p, c));
    NcMatrix<T> left = NcMatrix<T>(1, k, std::move(row)) * *a0_inv;
    for (std::size_t q = 1; q <= m; ++q) {
      T acc = a(k + p, k + q);
      for (std::size_t c = 1; c <= k; ++c) acc = acc - left(1, c) * a(c, k + q);
      out(p, q) = std::move(acc);
    }
  }
  return out;
}

/// |A|_ij - |C|_{i-k,j-k} for every position outside the pivot block.
/// Positions where either side is undefined are omitted.
template <RingElement T>
std::vector<T> sylvester_residuals(const NcMatrix<T>& a, std::size_t k, const ToleranceConfig& cfg) {
  NcMatrix<T> c = sylvester_reduce(a, k, cfg);
  std::vector<T> out;
  for (std::size_t i = k + 1; i <= a.rows(); ++i)
    for (std::size_t j = k + 1; j <= a.cols(); ++j) {
      auto lhs = quasideterminant(a, i, j, cfg);
      auto rhs = quasideterminant(c, i - k, j - k, cfg);
      if (lhs && rhs) out.push_back(*lhs - *rhs);
    }
  return out;
}

template <RingElement T>
struct HomologicalReport {
  std::vector<T> row_residuals;
  std::vector<T> column_residuals;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
};

struct HomologicalOptions {
  /// Upper bound on tuples per relation family; 0 means all.
  std::size_t max_tuples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Quasideterminants of A and of its (n-1)-minors, memoised by original labels.
template <RingElement T>
class QdetCache {
 public:
  QdetCache(const NcMatrix<T>& a, const ToleranceConfig& cfg) : a_(a), cfg_(cfg) {}

  std::optional<T> full(std::size_t i, std::size_t j) { return lookup(0, 0, i, j); }

  /// |A^{dr,dc}|_{r,c} with r, c given as labels of A.
  std::optional<T> minor(std::size_t dr, std::size_t dc, std::size_t r, std::size_t c) {
    return lookup(dr, dc, r, c);
  }

 private:
  std::optional<T> lookup(std::size_t dr, std::size_t dc, std::size_t r, std::size_t c) {
    auto key = std::make_tuple(dr, dc, r, c);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::optional<T> v;
    if (dr == 0) {
      v = quasideterminant(a_, r, c, cfg_);
    } else {
      auto sub = minors_.find({dr, dc});
      if (sub == minors_.end()) sub = minors_.emplace(std::make_pair(dr, dc), delete_row_col(a_, dr, dc)).first;
      v = quasideterminant(sub->second, r - (r > dr ? 1 : 0), c - (c > dc ? 1 : 0), cfg_);
    }
    memo_.emplace(key, v);
    return v;
  }

  const NcMatrix<T>& a_;
  const ToleranceConfig& cfg_;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::optional<T>> memo_;
  std::map<std::pair<std::size_t, std::size_t>, NcMatrix<T>> minors_;
};

inline std::vector<std::array<std::size_t, 4>> pick_tuples(std::vector<std::array<std::size_t, 4>> all,
                                                           const HomologicalOptions& opt, std::uint64_t salt) {
  if (opt.max_tuples == 0 || all.size() <= opt.max_tuples) return all;
  std::mt19937_64 rng(opt.seed ^ salt);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(opt.max_tuples);
  return all;
}

}  // namespace detail

/// Row relations  -|A|_ij |A^{il}|_sj^{-1} - |A|_il |A^{ij}|_sl^{-1}   (l != j, s != i)
/// column relations -|A^{kj}|_it^{-1} |A|_ij - |A^{ij}|_kt^{-1} |A|_kj (k != i, t != j).
/// Every residual should vanish. Tuples with an undefined factor are counted
/// in `skipped`.
template <RingElement T>
HomologicalReport<T> homological_residuals(const NcMatrix<T>& a, const ToleranceConfig& cfg,
                                           const HomologicalOptions& opt = {}) {
  if (!a.is_square()) throw DimensionMismatch("homological relations need a square matrix");
  const std::size_t n = a.rows();
  if (n < 2) throw DimensionMismatch("homological relations need n >= 2");

  std::vector<std::array<std::size_t, 4>> all;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      for (std::size_t x = 1; x <= n; ++x)
        for (std::size_t y = 1; y <= n; ++y)
          if (x != j && y != i) all.push_back({i, j, x, y});

  detail::QdetCache<T> cache(a, cfg);
  HomologicalReport<T> rep;

  auto inv = [&](const std::optional<T>& v) -> std::optional<T> {
    if (!v) return std::nullopt;
    return try_inverse(*v, cfg);
  };

  for (const auto& [i, j, l, s] : detail::pick_tuples(all, opt, 0x1)) {
    auto aij = cache.full(i, j), ail = cache.full(i, l);
    auto m1 = inv(cache.minor(i, l, s, j)), m2 = inv(cache.minor(i, j, s, l));
    if (!aij || !ail || !m1 || !m2) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    rep.row_residuals.push_back(-(*aij * *m1) - *ail * *m2);
  }

  // Column family: reuse the same index pool with (k, t) = (y, x).
  for (const auto& [i, j, t, k] : detail::pick_tuples(all, opt, 0x2)) {
    auto aij = cache.full(i, j), akj = cache.full(k, j);
    auto m1 = inv(cache.minor(k, j, i, t)), m2 = inv(cache.minor(i, j, k, t));
    if (!aij || !akj || !m1 || !m2) {
      ++rep.skipped;
      continue;
    }
    ++rep.evaluated;
    rep.column_residuals.push_back(-(*m1 * *aij) - *m2 * *akj);
  }
  return rep;
}

template <RingElement T>
struct ScalingReport {
  std::vector<T> row_residuals;     // row i multiplied on the left by lambda
  std::vector<T> column_residuals;  // column j multiplied on the right by mu
  std::size_t skipped = 0;
};

/// Row case: |B|_kj = lambda |A|_ij for k = i and |A|_kj otherwise.
/// Column case: |C|_il = |A|_ij mu for l = j and |A|_il otherwise.
template <RingElement T>
ScalingReport<T> scaling_check(const NcMatrix<T>& a, const T& lambda, const T& mu, std::size_t i, std::size_t j,
                               const ToleranceConfig& cfg) {
  if (!a.is_square()) throw DimensionMismatch("scaling_check needs a square matrix");
  const std::size_t n = a.rows();
  if (i < 1 || i > n || j < 1 || j > n) throw IndexOutOfRange("scaling_check index");

  NcMatrix<T> b = a, c = a;
  for (std::size_t col = 1; col <= n; ++col) b(i, col) = lambda * a(i, col);
  for (std::size_t row = 1; row <= n; ++row) c(row, j) = a(row, j) * mu;

  ScalingReport<T> rep;
  for (std::size_t k = 1; k <= n; ++k) {
    auto lhs = quasideterminant(b, k, j, cfg);
    auto base = quasideterminant(a, k, j, cfg);
    if (!lhs || !base) {
      ++rep.skipped;
      continue;
    }
    rep.row_residuals.push_back(*lhs - (k == i ? lambda * *base : *base));
  }
  for (std::size_t l = 1; l <= n; ++l) {
    auto lhs = quasideterminant(c, i, l, cfg);
    auto base = quasideterminant(a, i, l, cfg);
    if (!lhs || !base) {
      ++rep.skipped;
      continue;
    }
    rep.column_residuals.push_back(*lhs - (l == j ? *base * mu : *base));
  }
  return rep;
}

}  // namespace ncspec
