#pragma once

// Ring-element contract shared by every backend, plus the two commutative
// scalar backends (exact rationals and floating complex numbers).

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>

namespace ncspec {

using Rational =
    boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;
using Complex = std::complex<double>;

/// Tolerances for approximate backends and the Fock probe window.
struct ToleranceConfig {
  double abs_tol = 1e-9;
  int probe_levels = 16;
  int guard_band = 4;

  /// Highest level stored by tabulated (per-level numeric) weights.
  int table_levels() const { return probe_levels + 2 * guard_band; }
};

enum class Exactness { exact, approximate };

/// Specialised per backend. Provides zero_like/one_like (shape taken from an
/// existing element), try_inverse, approx_equal, magnitude and exactness.
template <class T>
struct ring_traits;

template <class T>
concept RingElement = requires(const T& a, const T& b, const ToleranceConfig& cfg) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { -a } -> std::convertible_to<T>;
  { ring_traits<T>::zero_like(a) } -> std::convertible_to<T>;
  { ring_traits<T>::one_like(a) } -> std::convertible_to<T>;
  { ring_traits<T>::try_inverse(a, cfg) } -> std::convertible_to<std::optional<T>>;
  { ring_traits<T>::approx_equal(a, b, cfg) } -> std::convertible_to<bool>;
  { ring_traits<T>::magnitude(a, cfg) } -> std::convertible_to<double>;
  { ring_traits<T>::exactness } -> std::convertible_to<Exactness>;
};

template <>
struct ring_traits<Rational> {
  static constexpr Exactness exactness = Exactness::exact;
  static Rational zero_like(const Rational&) { return Rational(0); }
  static Rational one_like(const Rational&) { return Rational(1); }
  static std::optional<Rational> try_inverse(const Rational& x, const ToleranceConfig&) {
    if (x == 0) return std::nullopt;
    return Rational(1) / x;
  }
  static bool approx_equal(const Rational& a, const Rational& b, const ToleranceConfig&) {
    return a == b;
  }
  static double magnitude(const Rational& x, const ToleranceConfig&) {
    return std::abs(x.convert_to<double>());
  }
};

template <>
struct ring_traits<Complex> {
  static constexpr Exactness exactness = Exactness::approximate;
  static Complex zero_like(const Complex&) { return {0.0, 0.0}; }
  static Complex one_like(const Complex&) { return {1.0, 0.0}; }
  static std::optional<Complex> try_inverse(const Complex& x, const ToleranceConfig& cfg) {
    if (std::abs(x) < cfg.abs_tol) return std::nullopt;
    return 1.0 / x;
  }
  static bool approx_equal(const Complex& a, const Complex& b, const ToleranceConfig& cfg) {
    return std::abs(a.real() - b.real()) <= cfg.abs_tol &&
           std::abs(a.imag() - b.imag()) <= cfg.abs_tol;
  }
  static double magnitude(const Complex& x, const ToleranceConfig&) {
    return std::max(std::abs(x.real()), std::abs(x.imag()));
  }
};

template <RingElement T>
T zero_like(const T& x) {
  return ring_traits<T>::zero_like(x);
}

template <RingElement T>
T one_like(const T& x) {
  return ring_traits<T>::one_like(x);
}

template <RingElement T>
std::optional<T> try_inverse(const T& x, const ToleranceConfig& cfg) {
  return ring_traits<T>::try_inverse(x, cfg);
}

template <RingElement T>
bool approx_equal(const T& a, const T& b, const ToleranceConfig& cfg) {
  return ring_traits<T>::approx_equal(a, b, cfg);
}

template <RingElement T>
bool is_zero(const T& x, const ToleranceConfig& cfg) {
  return ring_traits<T>::approx_equal(x, ring_traits<T>::zero_like(x), cfg);
}

template <RingElement T>
double magnitude(const T& x, const ToleranceConfig& cfg) {
  return ring_traits<T>::magnitude(x, cfg);
}

template <RingElement T>
constexpr bool is_exact_v = ring_traits<T>::exactness == Exactness::exact;

/// x^m by repeated squaring; x^0 is the identity of x's shape.
template <RingElement T>
T power(const T& x, std::size_t m) {
  T result = one_like(x);
  T base = x;
  while (m > 0) {
    if (m & 1U) result = result * base;
    m >>= 1U;
    if (m > 0) base = base * base;
  }
  return result;
}

}  // namespace ncspec
