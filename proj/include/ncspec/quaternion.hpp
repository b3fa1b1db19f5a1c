#pragma once

#include "ncspec/ring.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <type_traits>

namespace ncspec {

/// w + x i + y j + z k over an exact (Rational) or floating (double) scalar.
template <class S>
struct Quaternion {
  S w{0}, x{0}, y{0}, z{0};

  Quaternion() = default;
  Quaternion(S w_, S x_ = S(0), S y_ = S(0), S z_ = S(0))
      : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  static Quaternion i() { return {S(0), S(1), S(0), S(0)}; }
  static Quaternion j() { return {S(0), S(0), S(1), S(0)}; }
  static Quaternion k() { return {S(0), S(0), S(0), S(1)}; }

  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  S norm2() const { return w * w + x * x + y * y + z * z; }
  bool is_real() const { return x == 0 && y == 0 && z == 0; }

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend Quaternion operator*(const S& s, const Quaternion& q) {
    return {s * q.w, s * q.x, s * q.y, s * q.z};
  }
  friend Quaternion operator*(const Quaternion& q, const S& s) { return s * q; }
  friend bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
  }

  friend std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
  }
};

using QuaternionQ = Quaternion<Rational>;
using QuaternionF = Quaternion<double>;

template <>
struct ring_traits<QuaternionQ> {
  static constexpr Exactness exactness = Exactness::exact;
  static QuaternionQ zero_like(const QuaternionQ&) { return {}; }
  static QuaternionQ one_like(const QuaternionQ&) { return QuaternionQ(Rational(1)); }
  static std::optional<QuaternionQ> try_inverse(const QuaternionQ& q, const ToleranceConfig&) {
    Rational n = q.norm2();
    if (n == 0) return std::nullopt;
    Rational s = Rational(1) / n;
    return s * q.conjugate();
  }
  static bool approx_equal(const QuaternionQ& a, const QuaternionQ& b, const ToleranceConfig&) {
    return a == b;
  }
  static double magnitude(const QuaternionQ& q, const ToleranceConfig&) {
    double m = 0;
    for (const Rational* c : {&q.w, &q.x, &q.y, &q.z}) m = std::max(m, std::abs(c->convert_to<double>()));
    return m;
  }
};

template <>
struct ring_traits<QuaternionF> {
  static constexpr Exactness exactness = Exactness::approximate;
  static QuaternionF zero_like(const QuaternionF&) { return {}; }
  static QuaternionF one_like(const QuaternionF&) { return QuaternionF(1.0); }
  static std::optional<QuaternionF> try_inverse(const QuaternionF& q, const ToleranceConfig& cfg) {
    double n = q.norm2();
    if (std::sqrt(n) < cfg.abs_tol) return std::nullopt;
    return (1.0 / n) * q.conjugate();
  }
  static bool approx_equal(const QuaternionF& a, const QuaternionF& b, const ToleranceConfig& cfg) {
    return std::abs(a.w - b.w) <= cfg.abs_tol && std::abs(a.x - b.x) <= cfg.abs_tol &&
           std::abs(a.y - b.y) <= cfg.abs_tol && std::abs(a.z - b.z) <= cfg.abs_tol;
  }
  static double magnitude(const QuaternionF& q, const ToleranceConfig&) {
    return std::max({std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)});
  }
};

inline QuaternionF to_floating(const QuaternionQ& q) {
  return {q.w.convert_to<double>(), q.x.convert_to<double>(), q.y.convert_to<double>(),
          q.z.convert_to<double>()};
}

/// exp(a + v) = e^a (cos|v| + v/|v| sin|v|) for the pure-imaginary part v.
inline QuaternionF quaternion_exp(const QuaternionF& q) {
  const double ea = std::exp(q.w);
  const double len = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  if (len == 0.0) return QuaternionF(ea);
  const double s = ea * std::sin(len) / len;
  return {ea * std::cos(len), s * q.x, s * q.y, s * q.z};
}

}  // namespace ncspec
