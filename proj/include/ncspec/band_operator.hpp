#pragma once

// Weighted-shift operators on the Fock basis: X|n> = sum_s d_s(n) |n+s>.
//
// Each band is stored in reduced form d_s(n) = g_s(n) * u_s(n), where u_s is
// the matrix element of the bare shift (a^dagger)^s or a^|s|:
//   u_s(n)^2 = (n+1)...(n+s)      for s > 0,
//   u_s(n)^2 = n(n-1)...(n+s+1)   for s < 0.
// Products of the u factors reduce to u times a polynomial, so g stays free of
// square roots of the level and extends to every level as a closed form.

#include "ncspec/errors.hpp"
#include "ncspec/ring.hpp"
#include "ncspec/weight_expr.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

namespace ncspec {

class BandOperator {
 public:
  BandOperator() = default;

  static BandOperator identity() { return diagonal(WeightExpr(1)); }
  static BandOperator scalar(const WeightExpr& c) { return diagonal(c); }
  static BandOperator diagonal(const WeightExpr& g) { return from_reduced(0, g); }
  /// a: a|n> = sqrt(n)|n-1>.
  static BandOperator annihilation() { return from_reduced(-1, WeightExpr(1)); }
  /// a^dagger: a^dagger|n> = sqrt(n+1)|n+1>.
  static BandOperator creation() { return from_reduced(1, WeightExpr(1)); }
  /// N = a^dagger a.
  static BandOperator number() { return diagonal(WeightExpr::level()); }

  /// Band s with reduced weight g, i.e. (bare shift)^s composed after g(N).
  static BandOperator from_reduced(int s, const WeightExpr& g) {
    BandOperator op;
    if (!g.is_zero_constant()) op.bands_.emplace(s, g);
    return op;
  }

  const std::map<int, WeightExpr>& reduced_bands() const { return bands_; }
  bool is_zero() const { return bands_.empty(); }
  bool is_diagonal() const { return bands_.empty() || (bands_.size() == 1 && bands_.begin()->first == 0); }

  /// Squared bare-shift factor u_s(n)^2 as a polynomial in n.
  static WeightExpr shift_factor_squared(int s) {
    WeightExpr p(1);
    if (s > 0)
      for (int i = 1; i <= s; ++i) p = p * (WeightExpr::level() + WeightExpr(i));
    else
      for (int i = s + 1; i <= 0; ++i) p = p * (WeightExpr::level() + WeightExpr(i));
    return p;
  }

  /// Numeric u_s(n); zero whenever n + s < 0.
  static double shift_factor(int s, long n) {
    double p = 1.0;
    if (s > 0)
      for (int i = 1; i <= s; ++i) p *= static_cast<double>(n + i);
    else
      for (int i = s + 1; i <= 0; ++i) p *= static_cast<double>(n + i);
    return p <= 0.0 ? 0.0 : std::sqrt(p);
  }

  /// Full weight d_s as an expression tree (zero expression if absent).
  WeightExpr weight(int s) const {
    auto it = bands_.find(s);
    if (it == bands_.end()) return WeightExpr(0);
    if (s == 0) return it->second;
    return it->second * sqrt(shift_factor_squared(s));
  }

  /// <m| X |n>.
  Complex matrix_element(long m, long n) const {
    if (m < 0 || n < 0) throw IndexOutOfRange("Fock levels must be nonnegative");
    auto it = bands_.find(static_cast<int>(m - n));
    if (it == bands_.end()) return {0.0, 0.0};
    double u = shift_factor(it->first, n);
    if (u == 0.0) return {0.0, 0.0};
    return u * it->second.eval(n);
  }

  friend BandOperator operator+(const BandOperator& x, const BandOperator& y) { return combine(x, y, 1); }
  friend BandOperator operator-(const BandOperator& x, const BandOperator& y) { return combine(x, y, -1); }
  friend BandOperator operator-(const BandOperator& x) {
    BandOperator r;
    for (const auto& [s, g] : x.bands_) r.bands_.emplace(s, -g);
    return r;
  }

  /// Composition X*Y (Y acts first). Band s of the product has weight
  /// sum_{j+k=s} d_k(n+j) e_j(n).
  friend BandOperator operator*(const BandOperator& x, const BandOperator& y) {
    BandOperator r;
    for (const auto& [j, gy] : y.bands_) {
      for (const auto& [k, gx] : x.bands_) {
        WeightExpr term = gx.shifted(j) * gy * overlap_polynomial(j, k);
        int s = j + k;
        auto it = r.bands_.find(s);
        if (it == r.bands_.end())
          r.bands_.emplace(s, term);
        else
          it->second = it->second + term;
      }
    }
    r.prune();
    return r;
  }

  friend BandOperator operator*(const WeightExpr& c, const BandOperator& x) { return scalar(c) * x; }

  /// Renders X as sum_s shift^s * (g_s(N)) in entry-grammar syntax; empty if
  /// some weight has no grammar form.
  std::optional<std::string> to_grammar() const {
    if (bands_.empty()) return std::string("0");
    auto atomic = [](const std::string& t) {
      if (t.find(' ') == std::string::npos) return true;
      if (t.front() != '(' || t.back() != ')') return false;
      int depth = 0;
      for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        depth += t[i] == '(' ? 1 : t[i] == ')' ? -1 : 0;
        if (depth == 0) return false;
      }
      return true;
    };
    std::string out;
    for (const auto& [s, g] : bands_) {
      auto body = g.to_grammar();
      if (!body) return std::nullopt;
      if (!out.empty()) out += " + ";
      std::string shift;
      if (s != 0) shift = (s > 0 ? "ad" : "a") + (std::abs(s) > 1 ? "^" + std::to_string(std::abs(s)) : std::string());
      const std::string w = atomic(*body) ? *body : "(" + *body + ")";
      if (shift.empty())
        out += w;
      else
        out += *body == "1" ? shift : shift + "*" + w;
    }
    return out;
  }

  // u_k(n+j) u_j(n) = u_{j+k}(n) * p(n): p collects the factors of edges the
  // path n -> n+j -> n+j+k traverses twice.
  static WeightExpr overlap_polynomial(int j, int k) {
    WeightExpr p(1);
    int lo = 0, hi = -1;
    if (j > 0 && k < 0) {
      lo = std::max(0, j + k);
      hi = j - 1;
    } else if (j < 0 && k > 0) {
      lo = j;
      hi = std::min(0, j + k) - 1;
    }
    for (int l = lo; l <= hi; ++l) p = p * (WeightExpr::level() + WeightExpr(l + 1));
    return p;
  }

 private:
  static BandOperator combine(const BandOperator& x, const BandOperator& y, int sign) {
    BandOperator r = x;
    for (const auto& [s, g] : y.bands_) {
      auto it = r.bands_.find(s);
      if (it == r.bands_.end())
        r.bands_.emplace(s, sign > 0 ? g : -g);
      else
        it->second = sign > 0 ? it->second + g : it->second - g;
    }
    r.prune();
    return r;
  }

  void prune() {
    for (auto it = bands_.begin(); it != bands_.end();) {
      if (it->second.is_zero_constant())
        it = bands_.erase(it);
      else
        ++it;
    }
  }

  std::map<int, WeightExpr> bands_;
};

/// All matrix elements with both levels in [0, probe_levels] agree within abs_tol.
inline bool band_equal(const BandOperator& x, const BandOperator& y, const ToleranceConfig& cfg) {
  BandOperator d = x - y;
  for (const auto& [s, g] : d.reduced_bands()) {
    for (long n = 0; n <= cfg.probe_levels; ++n) {
      long m = n + s;
      if (m < 0 || m > cfg.probe_levels) continue;
      Complex v = d.matrix_element(m, n);
      if (std::abs(v.real()) > cfg.abs_tol || std::abs(v.imag()) > cfg.abs_tol) return false;
    }
  }
  return true;
}

/// Largest |component| of a matrix element on the probe window.
inline double band_max_abs(const BandOperator& x, const ToleranceConfig& cfg) {
  double best = 0.0;
  for (const auto& [s, g] : x.reduced_bands()) {
    for (long n = 0; n <= cfg.probe_levels; ++n) {
      long m = n + s;
      if (m < 0 || m > cfg.probe_levels) continue;
      Complex v = x.matrix_element(m, n);
      best = std::max({best, std::abs(v.real()), std::abs(v.imag())});
    }
  }
  return best;
}

/// Inverse of a diagonal operator whose weight does not vanish on
/// [0, probe_levels + guard_band]; empty otherwise.
inline std::optional<BandOperator> band_try_inverse(const BandOperator& x, const ToleranceConfig& cfg) {
  if (x.is_zero() || !x.is_diagonal()) return std::nullopt;
  const WeightExpr& g = x.reduced_bands().begin()->second;
  try {
    for (long n = 0; n <= cfg.probe_levels + cfg.guard_band; ++n)
      if (std::abs(g.eval(n)) < cfg.abs_tol) return std::nullopt;
  } catch (const EvalError&) {
    return std::nullopt;
  }
  return BandOperator::diagonal(WeightExpr(1) / g);
}

enum class DivisionSide { left, right };

struct BandDivision {
  BandOperator value;
  bool kernel_flag = false;
};

/// Solves X*c = b (right) or c*X = b (left) for a single-band or
/// diagonal-invertible divisor c. Empty when b has a component outside the
/// image of c on the probe window. Levels of the unknown that c never reaches
/// keep the closed form of the solution and set kernel_flag.
inline std::optional<BandDivision> band_divide(const BandOperator& b, const BandOperator& c, DivisionSide side,
                                               const ToleranceConfig& cfg) {
  if (c.reduced_bands().size() != 1)
    throw UnsupportedDivision("band_divide requires a single-band or diagonal divisor");
  const int t = c.reduced_bands().begin()->first;
  const WeightExpr& w = c.reduced_bands().begin()->second;
  const long top = cfg.probe_levels;

  BandDivision out;
  for (const auto& [s, gb] : b.reduced_bands()) {
    const int k = s - t;
    WeightExpr gx;
    if (side == DivisionSide::right) {
      // g_X,k(n+t) w(n) p_{t,k}(n) = g_b,s(n)
      gx = (gb / (w * BandOperator::overlap_polynomial(t, k))).shifted(-t);
    } else {
      // w(n+k) g_X,k(n) p_{k,t}(n) = g_b,s(n)
      gx = gb / (w.shifted(k) * BandOperator::overlap_polynomial(k, t));
    }
    out.value = out.value + BandOperator::from_reduced(k, gx);
  }

  auto coeff = [&](long n) -> double {
    double u = BandOperator::shift_factor(t, n);
    if (u == 0.0) return 0.0;
    try {
      return u * std::abs(w.eval(n));
    } catch (const EvalError&) {
      return 0.0;
    }
  };
  auto column_vanishes = [&](long n) {
    for (const auto& band : b.reduced_bands()) {
      long m = n + band.first;
      if (m >= 0 && std::abs(b.matrix_element(m, n)) > cfg.abs_tol) return false;
    }
    return true;
  };
  auto row_vanishes = [&](long q) {
    for (const auto& band : b.reduced_bands()) {
      long n = q - band.first;
      if (n >= 0 && std::abs(b.matrix_element(q, n)) > cfg.abs_tol) return false;
    }
    return true;
  };

  if (side == DivisionSide::right) {
    // Column n of b equals d_c(n) times column n+t of X.
    for (long n = 0; n <= top; ++n) {
      if (coeff(n) > cfg.abs_tol) continue;
      if (!column_vanishes(n)) return std::nullopt;
      if (n + t >= 0) out.kernel_flag = true;
    }
    for (long m = 0; m <= top && m - t < 0; ++m) out.kernel_flag = true;
  } else {
    // Row q of b equals d_c(q-t) times row q-t of X.
    for (long q = 0; q <= top; ++q) {
      long r = q - t;
      if (r >= 0 && coeff(r) > cfg.abs_tol) continue;
      if (!row_vanishes(q)) return std::nullopt;
    }
    for (long r = 0; r <= top; ++r)
      if (coeff(r) <= cfg.abs_tol) out.kernel_flag = true;
  }
  return out;
}

template <>
struct ring_traits<BandOperator> {
  static constexpr Exactness exactness = Exactness::approximate;
  static BandOperator zero_like(const BandOperator&) { return {}; }
  static BandOperator one_like(const BandOperator&) { return BandOperator::identity(); }
  static std::optional<BandOperator> try_inverse(const BandOperator& x, const ToleranceConfig& cfg) {
    return band_try_inverse(x, cfg);
  }
  static bool approx_equal(const BandOperator& a, const BandOperator& b, const ToleranceConfig& cfg) {
    return band_equal(a, b, cfg);
  }
  static double magnitude(const BandOperator& x, const ToleranceConfig& cfg) { return band_max_abs(x, cfg); }
};

}  // namespace ncspec
