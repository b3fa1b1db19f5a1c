#pragma once

// Expression trees over the Fock level n. Used as diagonal weights of band
// operators; evaluated at integer levels to complex numbers.

#include "ncspec/errors.hpp"
#include "ncspec/ring.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ncspec {

class WeightExpr {
 public:
  enum class Kind { rational, floating, level, add, sub, mul, div, sqrt, shift, table };

  WeightExpr() : WeightExpr(Rational(0)) {}
  WeightExpr(const Rational& r) {
    auto n = std::make_shared<Node>(Kind::rational);
    n->rat = r;
    n->value = Complex(r.convert_to<double>(), 0.0);
    node_ = std::move(n);
  }
  WeightExpr(long v) : WeightExpr(Rational(v)) {}
  WeightExpr(int v) : WeightExpr(Rational(v)) {}

  static WeightExpr floating(Complex v) {
    auto n = std::make_shared<Node>(Kind::floating);
    n->value = v;
    return WeightExpr(std::move(n));
  }

  /// The level variable n.
  static WeightExpr level() { return WeightExpr(std::make_shared<Node>(Kind::level)); }

  /// Per-level numeric values on [first_level, first_level + values.size()).
  /// Levels whose optional is empty raise EvalError when evaluated.
  static WeightExpr table(long first_level, std::vector<std::optional<Complex>> values) {
    bool all_zero = !values.empty();
    for (const auto& v : values) all_zero = all_zero && v.has_value() && *v == Complex(0.0, 0.0);
    if (all_zero) return WeightExpr(Rational(0));
    auto n = std::make_shared<Node>(Kind::table);
    n->offset = first_level;
    n->samples = std::move(values);
    return WeightExpr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_constant() const { return kind() == Kind::rational || kind() == Kind::floating; }
  bool is_rational() const { return kind() == Kind::rational; }
  bool is_table() const { return kind() == Kind::table; }
  const Rational& rational_value() const { return node_->rat; }
  Complex constant_value() const { return node_->value; }
  bool is_zero_constant() const { return is_constant() && node_->value == Complex(0.0, 0.0) && (!is_rational() || node_->rat == 0); }
  bool is_one_constant() const {
    return is_rational() ? node_->rat == 1 : (kind() == Kind::floating && node_->value == Complex(1.0, 0.0));
  }

  /// Level range of a table node: [first, last]. Unbounded otherwise.
  std::pair<long, long> domain() const {
    if (!is_table()) return {std::numeric_limits<long>::min(), std::numeric_limits<long>::max()};
    return {node_->offset, node_->offset + static_cast<long>(node_->samples.size()) - 1};
  }

  Complex eval(long n) const { return eval_node(*node_, n); }

  /// Substitute n -> n + k.
  WeightExpr shifted(long k) const {
    if (k == 0 || is_constant()) return *this;
    if (kind() == Kind::table) {
      auto t = std::make_shared<Node>(*node_);
      t->offset = node_->offset - k;
      return WeightExpr(std::move(t));
    }
    if (kind() == Kind::shift) return node_->lhs_expr().shifted(k + node_->offset);
    if (auto p = as_poly(*node_, k)) return from_poly(*p);
    auto s = std::make_shared<Node>(Kind::shift);
    s->offset = k;
    s->lhs = node_;
    return WeightExpr(std::move(s));
  }

  friend WeightExpr operator+(const WeightExpr& a, const WeightExpr& b) { return binary(Kind::add, a, b); }
  friend WeightExpr operator-(const WeightExpr& a, const WeightExpr& b) { return binary(Kind::sub, a, b); }
  friend WeightExpr operator*(const WeightExpr& a, const WeightExpr& b) { return binary(Kind::mul, a, b); }
  friend WeightExpr operator/(const WeightExpr& a, const WeightExpr& b) { return binary(Kind::div, a, b); }
  friend WeightExpr operator-(const WeightExpr& a) { return binary(Kind::mul, WeightExpr(-1), a); }

  friend WeightExpr sqrt(const WeightExpr& a) {
    if (a.is_constant()) {
      if (a.is_rational() && a.rational_value() >= 0) {
        Rational r = a.rational_value();
        auto num = boost::multiprecision::numerator(r);
        auto den = boost::multiprecision::denominator(r);
        auto sn = boost::multiprecision::sqrt(num);
        auto sd = boost::multiprecision::sqrt(den);
        if (sn * sn == num && sd * sd == den) return WeightExpr(Rational(sn, sd));
      }
      Complex v = a.constant_value();
      if (!(v.imag() == 0.0 && v.real() < 0.0)) return floating(std::sqrt(v));
    }
    if (a.is_table()) {
      return map_table(a, [](Complex v) -> std::optional<Complex> {
        if (v.imag() == 0.0 && v.real() < 0.0) return std::nullopt;
        return std::sqrt(v);
      });
    }
    auto s = std::make_shared<Node>(Kind::sqrt);
    s->lhs = a.node_;
    return WeightExpr(std::move(s));
  }

  /// Renders the expression with the level written as `N`, using only the
  /// entry grammar's constructs. Empty when the tree holds tables, divisions
  /// or non-real constants.
  std::optional<std::string> to_grammar() const { return print(*node_, 0); }

 private:
  struct Node {
    explicit Node(Kind k) : kind(k) {}
    Kind kind;
    Rational rat;
    Complex value{0.0, 0.0};
    long offset = 0;
    std::shared_ptr<const Node> lhs, rhs;
    std::vector<std::optional<Complex>> samples;
    WeightExpr lhs_expr() const { return WeightExpr(lhs); }
  };

  explicit WeightExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Complex checked_div(Complex a, Complex b, long n) {
    if (b == Complex(0.0, 0.0)) throw EvalError(n, "division by zero");
    return a / b;
  }

  static Complex eval_node(const Node& nd, long n) {
    switch (nd.kind) {
      case Kind::rational:
      case Kind::floating:
        return nd.value;
      case Kind::level:
        return Complex(static_cast<double>(n), 0.0);
      case Kind::add:
        return eval_node(*nd.lhs, n) + eval_node(*nd.rhs, n);
      case Kind::sub:
        return eval_node(*nd.lhs, n) - eval_node(*nd.rhs, n);
      case Kind::mul: {
        // An exact zero factor absorbs an undefined one: product weights carry
        // overlap factors that vanish exactly where a path leaves the Fock space.
        const Complex zero(0.0, 0.0);
        Complex l;
        try {
          l = eval_node(*nd.lhs, n);
        } catch (const EvalError&) {
          if (eval_node(*nd.rhs, n) == zero) return zero;
          throw;
        }
        return l == zero ? zero : l * eval_node(*nd.rhs, n);
      }
      case Kind::div:
        return checked_div(eval_node(*nd.lhs, n), eval_node(*nd.rhs, n), n);
      case Kind::sqrt: {
        Complex v = eval_node(*nd.lhs, n);
        if (v.imag() == 0.0 && v.real() < 0.0) throw EvalError(n, "negative radicand");
        return std::sqrt(v);
      }
      case Kind::shift:
        return eval_node(*nd.lhs, n + nd.offset);
      case Kind::table: {
        long idx = n - nd.offset;
        if (idx < 0 || idx >= static_cast<long>(nd.samples.size()))
          throw EvalError(n, "level outside tabulated window");
        if (!nd.samples[static_cast<std::size_t>(idx)]) throw EvalError(n, "undefined tabulated value");
        return *nd.samples[static_cast<std::size_t>(idx)];
      }
    }
    return {};
  }

  template <class F>
  static WeightExpr map_table(const WeightExpr& a, F f) {
    const auto& s = a.node_->samples;
    std::vector<std::optional<Complex>> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i]) out[i] = f(*s[i]);
    return table(a.node_->offset, std::move(out));
  }

  static std::optional<Complex> apply(Kind k, Complex a, Complex b) {
    switch (k) {
      case Kind::add: return a + b;
      case Kind::sub: return a - b;
      case Kind::mul: return a * b;
      case Kind::div:
        if (b == Complex(0.0, 0.0)) return std::nullopt;
        return a / b;
      default: return std::nullopt;
    }
  }

  // Pointwise combination when either side is tabulated, over the union of the
  // table domains; levels where a factor is undefined stay undefined.
  static WeightExpr fold_table(Kind k, const WeightExpr& a, const WeightExpr& b) {
    auto [lo, hi] = a.is_table() ? a.domain() : b.domain();
    if (a.is_table() && b.is_table()) {
      lo = std::min(lo, b.domain().first);
      hi = std::max(hi, b.domain().second);
    }
    std::vector<std::optional<Complex>> out;
    if (hi >= lo) out.resize(static_cast<std::size_t>(hi - lo + 1));
    auto try_eval = [](const WeightExpr& e, long n) -> std::optional<Complex> {
      try {
        return e.eval(n);
      } catch (const EvalError&) {
        return std::nullopt;
      }
    };
    const Complex zero(0.0, 0.0);
    for (long n = lo; n <= hi; ++n) {
      auto x = try_eval(a, n), y = try_eval(b, n);
      auto& slot = out[static_cast<std::size_t>(n - lo)];
      if (x && y)
        slot = apply(k, *x, *y);
      else if (k == Kind::mul && ((x && *x == zero) || (y && *y == zero)))
        slot = zero;  // 0 * undefined, e.g. an edge a path never traverses
    }
    return table(lo, std::move(out));
  }

  static WeightExpr binary(Kind k, const WeightExpr& a, const WeightExpr& b) {
    if (a.is_constant() && b.is_constant()) {
      if (a.is_rational() && b.is_rational()) {
        const Rational &x = a.rational_value(), &y = b.rational_value();
        switch (k) {
          case Kind::add: return WeightExpr(Rational(x + y));
          case Kind::sub: return WeightExpr(Rational(x - y));
          case Kind::mul: return WeightExpr(Rational(x * y));
          case Kind::div:
            if (y != 0) return WeightExpr(Rational(x / y));
            break;
          default: break;
        }
      } else if (auto v = apply(k, a.constant_value(), b.constant_value())) {
        return floating(*v);
      }
    }
    switch (k) {
      case Kind::add:
        if (a.is_zero_constant()) return b;
        if (b.is_zero_constant()) return a;
        break;
      case Kind::sub:
        if (b.is_zero_constant()) return a;
        break;
      case Kind::mul:
        if (a.is_zero_constant() || b.is_zero_constant()) return WeightExpr(0);
        if (a.is_one_constant()) return b;
        if (b.is_one_constant()) return a;
        break;
      case Kind::div:
        if (b.is_one_constant()) return a;
        if (a.is_zero_constant()) return WeightExpr(0);
        break;
      default: break;
    }
    if (a.is_table() || b.is_table()) return fold_table(k, a, b);
    if (k != Kind::div) {
      auto pa = as_poly(*a.node_, 0), pb = as_poly(*b.node_, 0);
      if (pa && pb) return from_poly(k == Kind::add ? poly_add(*pa, *pb, 1) : k == Kind::sub ? poly_add(*pa, *pb, -1) : poly_mul(*pa, *pb));
    }
    auto n = std::make_shared<Node>(k);
    n->lhs = a.node_;
    n->rhs = b.node_;
    return WeightExpr(std::move(n));
  }

  // Polynomials in n with rational coefficients, lowest degree first.
  using Poly = std::vector<Rational>;

  static Poly poly_add(const Poly& a, const Poly& b, int sign) {
    Poly out(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    while (!out.empty() && out.back() == 0) out.pop_back();
    return out;
  }

  static Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
  }

  static std::optional<Poly> as_poly(const Node& nd, long offset) {
    switch (nd.kind) {
      case Kind::rational:
        return nd.rat == 0 ? Poly{} : Poly{nd.rat};
      case Kind::level:
        return offset == 0 ? Poly{Rational(0), Rational(1)} : Poly{Rational(offset), Rational(1)};
      case Kind::add:
      case Kind::sub:
      case Kind::mul: {
        auto l = as_poly(*nd.lhs, offset), r = as_poly(*nd.rhs, offset);
        if (!l || !r) return std::nullopt;
        if (nd.kind == Kind::mul) return poly_mul(*l, *r);
        return poly_add(*l, *r, nd.kind == Kind::add ? 1 : -1);
      }
      case Kind::shift:
        return as_poly(*nd.lhs, offset + nd.offset);
      default:
        return std::nullopt;
    }
  }

  static std::shared_ptr<const Node> join(Kind k, std::shared_ptr<const Node> l, std::shared_ptr<const Node> r) {
    auto n = std::make_shared<Node>(k);
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  // Canonical tree c0 + c1*N + c2*N*N + ..., leading terms first when c0 = 0.
  static WeightExpr from_poly(const Poly& p) {
    if (p.empty()) return WeightExpr(0);
    if (p.size() == 1) return WeightExpr(p[0]);
    std::shared_ptr<const Node> acc;
    const auto lvl = std::make_shared<Node>(Kind::level);
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (p[d] == 0) continue;
      std::shared_ptr<const Node> mono;
      for (std::size_t e = 0; e < d; ++e) mono = mono ? join(Kind::mul, mono, lvl) : lvl;
      const Rational c = abs(p[d]);
      const bool neg = p[d] < 0 && acc;
      std::shared_ptr<const Node> term;
      if (!mono)
        term = WeightExpr(Rational(neg ? c : p[d])).node_;
      else if (c == 1 && (neg || p[d] > 0))
        term = mono;
      else
        term = join(Kind::mul, WeightExpr(Rational(neg ? c : p[d])).node_, mono);
      acc = !acc ? term : join(neg ? Kind::sub : Kind::add, acc, term);
    }
    return WeightExpr(acc);
  }

  static std::string number_text(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (v < 0) return "(" + s + ")";
    return s;
  }

  static std::optional<std::string> print(const Node& nd, long offset) {
    switch (nd.kind) {
      case Kind::rational:
        if (boost::multiprecision::denominator(nd.rat) == 1) {
          std::string s = nd.rat.str();
          return nd.rat < 0 ? "(" + s + ")" : s;
        }
        return number_text(nd.value.real());
      case Kind::floating:
        if (nd.value.imag() != 0.0) return std::nullopt;
        return number_text(nd.value.real());
      case Kind::level:
        if (offset == 0) return std::string("N");
        return "(N" + std::string(offset > 0 ? "+" : "-") + std::to_string(offset > 0 ? offset : -offset) + ")";
      case Kind::add:
      case Kind::sub: {
        auto l = print(*nd.lhs, offset), r = print(*nd.rhs, offset);
        if (!l || !r) return std::nullopt;
        return "(" + *l + (nd.kind == Kind::add ? " + " : " - ") + *r + ")";
      }
      case Kind::mul: {
        auto l = print(*nd.lhs, offset), r = print(*nd.rhs, offset);
        if (!l || !r) return std::nullopt;
        return *l + "*" + *r;
      }
      case Kind::sqrt: {
        auto l = print(*nd.lhs, offset);
        if (!l) return std::nullopt;
        return "sqrt(" + *l + ")";
      }
      case Kind::shift:
        return print(*nd.lhs, offset + nd.offset);
      case Kind::div:
      case Kind::table:
        return std::nullopt;
    }
    return std::nullopt;
  }

  std::shared_ptr<const Node> node_;
};

WeightExpr sqrt(const WeightExpr& a);

}  // namespace ncspec
