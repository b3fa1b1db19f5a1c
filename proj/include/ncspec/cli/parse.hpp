#pragma once

// Entry literals for every ring: rationals ("3", "-1/2", "0.25"), complex
// numbers ("1 - 2i", [re, im]), quaternions ([w,x,y,z] or "1/2 - 1/2 k") and
// oscillator expressions in the grammar
//
//   EXPR   := ['+'|'-'] TERM (('+'|'-') TERM)*
//   TERM   := FACTOR ('*' FACTOR)*
//   FACTOR := NUMBER | 'a' | 'ad' | 'N' | 'sqrt' '(' EXPR ')' | '(' EXPR ')' | FACTOR '^' UINT
//
// Products compose right to left: the rightmost factor acts first.

#include "ncspec/band_operator.hpp"
#include "ncspec/errors.hpp"
#include "ncspec/quaternion.hpp"
#include "ncspec/ring.hpp"

#include "json.hpp"

#include <cctype>
#include <string>
#include <string_view>

namespace ncspec::cli {

using json = nlohmann::json;

enum class RingKind { rational, complex, quaternion_exact, quaternion_float, fock };

inline RingKind parse_ring(const std::string& s) {
  if (s == "rational") return RingKind::rational;
  if (s == "complex") return RingKind::complex;
  if (s == "quaternion-exact") return RingKind::quaternion_exact;
  if (s == "quaternion-float") return RingKind::quaternion_float;
  if (s == "fock") return RingKind::fock;
  throw Error("unknown ring '" + s + "'");
}

inline std::string to_string(RingKind r) {
  switch (r) {
    case RingKind::rational: return "rational";
    case RingKind::complex: return "complex";
    case RingKind::quaternion_exact: return "quaternion-exact";
    case RingKind::quaternion_float: return "quaternion-float";
    case RingKind::fock: return "fock";
  }
  return "?";
}

namespace detail {

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }
  bool starts_number() {
    char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  /// Unsigned decimal with optional fraction, exponent or "/denominator", exact.
  Rational number() {
    skip_ws();
    const std::size_t start = pos_;
    std::string digits;
    long frac = 0;
    bool seen = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      digits += s_[pos_++];
      seen = true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        digits += s_[pos_++];
        ++frac;
        seen = true;
      }
    }
    if (!seen) {
      pos_ = start;
      fail("number");
    }
    long exp10 = -frac;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_++;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      std::string ed;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ed += s_[pos_++];
      if (ed.empty())
        pos_ = save;
      else
        exp10 += neg ? -std::stol(ed) : std::stol(ed);
    }
    // mpz_int reads a leading 0 as an octal prefix.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational v{boost::multiprecision::mpz_int(digits)};
    Rational ten(10);
    for (long k = 0; k < std::abs(exp10); ++k) v = exp10 > 0 ? v * ten : v / ten;
    std::size_t save = pos_;
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == '/' && frac == 0) {
      ++pos_;
      skip_ws();
      std::string den;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) den += s_[pos_++];
      if (den.empty()) fail("denominator");
      den.erase(0, std::min(den.find_first_not_of('0'), den.size() - 1));
      Rational d{boost::multiprecision::mpz_int(den)};
      if (d == 0) fail("nonzero denominator");
      v /= d;
    } else {
      pos_ = save;
    }
    return v;
  }

  bool accept_word(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) != w) return false;
    std::size_t end = pos_ + w.size();
    if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) return false;
    pos_ = end;
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) { throw ParseError(pos_, expected); }
  std::size_t position() const { return pos_; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

// Signed sum of terms  [coef] unit  with units from `units` ("" = real part).
// Returns the coefficient per unit slot (slot 0 = real).
inline std::vector<Rational> parse_linear(std::string_view text, std::string_view units) {
  Cursor c(text);
  std::vector<Rational> out(units.size() + 1, Rational(0));
  bool first = true;
  if (c.done()) c.fail("literal");
  while (!c.done()) {
    Rational sign = 1;
    if (c.accept('-'))
      sign = -1;
    else if (!c.accept('+') && !first)
      c.fail("'+' or '-'");
    first = false;
    Rational coef = 1;
    bool has_coef = false;
    if (c.starts_number()) {
      coef = c.number();
      has_coef = true;
    }
    c.accept('*');
    std::size_t slot = 0;
    char u = c.peek();
    auto at = units.find(u);
    if (u != '\0' && at != std::string_view::npos) {
      c.accept(u);
      slot = at + 1;
    } else if (!has_coef) {
      c.fail("number or unit");
    }
    out[slot] += sign * coef;
  }
  return out;
}

inline Rational rational_from_json(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<long long>());
  if (v.is_number_float()) {
    Cursor c(v.dump());
    Rational sign = c.accept('-') ? -1 : 1;
    return sign * c.number();
  }
  if (v.is_string()) {
    auto parts = parse_linear(v.get<std::string>(), "");
    return parts[0];
  }
  throw ParseError(0, "number or rational string");
}

inline double real_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  return rational_from_json(v).convert_to<double>();
}

// Oscillator grammar.
class FockParser {
 public:
  explicit FockParser(std::string_view s) : c_(s) {}

  BandOperator parse() {
    BandOperator v = expr();
    if (!c_.done()) c_.fail("end of input");
    return v;
  }

 private:
  BandOperator expr() {
    bool neg = false;
    if (c_.accept('-'))
      neg = true;
    else
      c_.accept('+');
    BandOperator v = term();
    if (neg) v = -v;
    for (;;) {
      if (c_.accept('+'))
        v = v + term();
      else if (c_.accept('-'))
        v = v - term();
      else
        return v;
    }
  }

  BandOperator term() {
    BandOperator v = factor();
    while (c_.accept('*')) v = v * factor();
    return v;
  }

  BandOperator factor() {
    BandOperator v = primary();
    while (c_.accept('^')) {
      if (!std::isdigit(static_cast<unsigned char>(c_.peek()))) c_.fail("unsigned integer exponent");
      Rational e = c_.number();
      if (boost::multiprecision::denominator(e) != 1 || e > 64) c_.fail("unsigned integer exponent");
      v = power(v, static_cast<std::size_t>(e.convert_to<long>()));
    }
    return v;
  }

  BandOperator primary() {
    if (c_.starts_number()) return BandOperator::scalar(WeightExpr(c_.number()));
    if (c_.accept('(')) {
      BandOperator v = expr();
      c_.expect(')');
      return v;
    }
    if (c_.accept_word("sqrt")) {
      c_.expect('(');
      const std::size_t at = c_.position();
      BandOperator v = expr();
      c_.expect(')');
      if (!v.is_diagonal()) throw ParseError(at, "diagonal argument to sqrt");
      if (v.is_zero()) return v;
      return BandOperator::diagonal(sqrt(v.reduced_bands().at(0)));
    }
    if (c_.accept_word("ad")) return BandOperator::creation();
    if (c_.accept_word("a")) return BandOperator::annihilation();
    if (c_.accept_word("N")) return BandOperator::number();
    c_.fail("number, 'a', 'ad', 'N', 'sqrt' or '('");
  }

  Cursor c_;
};

}  // namespace detail

inline Rational parse_rational(const json& v) { return detail::rational_from_json(v); }

inline Complex parse_complex(const json& v) {
  if (v.is_array()) {
    if (v.size() != 2) throw ParseError(0, "[re, im]");
    return {detail::real_from_json(v[0]), detail::real_from_json(v[1])};
  }
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_string()) {
    auto p = detail::parse_linear(v.get<std::string>(), "i");
    return {p[0].convert_to<double>(), p[1].convert_to<double>()};
  }
  throw ParseError(0, "complex literal");
}

inline QuaternionQ parse_quaternion_exact(const json& v) {
  if (v.is_array()) {
    if (v.size() != 4) throw ParseError(0, "[w, x, y, z]");
    return {detail::rational_from_json(v[0]), detail::rational_from_json(v[1]), detail::rational_from_json(v[2]),
            detail::rational_from_json(v[3])};
  }
  if (v.is_number()) return QuaternionQ(detail::rational_from_json(v));
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    auto first = s.find_first_not_of(" \t");
    if (first != std::string::npos && s[first] == '[') return parse_quaternion_exact(json::parse(s));
    auto p = detail::parse_linear(s, "ijk");
    return {p[0], p[1], p[2], p[3]};
  }
  throw ParseError(0, "quaternion literal");
}

inline QuaternionF parse_quaternion_float(const json& v) {
  if (v.is_array()) {
    if (v.size() != 4) throw ParseError(0, "[w, x, y, z]");
    return {detail::real_from_json(v[0]), detail::real_from_json(v[1]), detail::real_from_json(v[2]),
            detail::real_from_json(v[3])};
  }
  return to_floating(parse_quaternion_exact(v));
}

inline BandOperator parse_fock(const json& v) {
  if (v.is_number()) return BandOperator::scalar(WeightExpr(detail::rational_from_json(v)));
  if (v.is_object() && v.contains("expr") && v["expr"].is_string()) return parse_fock(v["expr"]);
  if (v.is_string()) return detail::FockParser(v.get<std::string>()).parse();
  throw ParseError(0, "oscillator expression string");
}

template <class T>
T parse_entry(const json& v);

template <>
inline Rational parse_entry<Rational>(const json& v) {
  return parse_rational(v);
}
template <>
inline Complex parse_entry<Complex>(const json& v) {
  return parse_complex(v);
}
template <>
inline QuaternionQ parse_entry<QuaternionQ>(const json& v) {
  return parse_quaternion_exact(v);
}
template <>
inline QuaternionF parse_entry<QuaternionF>(const json& v) {
  return parse_quaternion_float(v);
}
template <>
inline BandOperator parse_entry<BandOperator>(const json& v) {
  return parse_fock(v);
}

}  // namespace ncspec::cli
