#pragma once

// JSON output. Floats carry 12 significant digits; magnitudes below 1e-12
// print as 0 and negative zero is normalized.

#include "ncspec/band_operator.hpp"
#include "ncspec/nc_matrix.hpp"
#include "ncspec/quaternion.hpp"
#include "ncspec/ring.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace ncspec::cli {

using json = nlohmann::json;

struct OutputStyle {
  bool pretty = false;
  long sample_levels = 6;  // oscillator entries list matrix elements for n < sample_levels
};

inline double round12(double v) {
  if (!std::isfinite(v)) return v;
  if (std::abs(v) < 1e-12) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

inline std::string format12(double v) {
  v = round12(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline json number_json(double v) {
  v = round12(v);
  if (!std::isfinite(v)) return std::isnan(v) ? json("nan") : json(v > 0 ? "inf" : "-inf");
  return json(v);
}

inline std::string rational_text(const Rational& r) { return r.str(); }

inline json rational_json(const Rational& r) {
  if (boost::multiprecision::denominator(r) == 1 && abs(boost::multiprecision::numerator(r)) < (1LL << 53))
    return json(boost::multiprecision::numerator(r).convert_to<long long>());
  return json(rational_text(r));
}

namespace detail {

// Joins coefficient texts into "w + xi - yj + zk" style strings.
inline std::string join_units(const std::vector<std::pair<std::string, std::string>>& parts) {
  std::string out;
  for (const auto& [coef, unit] : parts) {
    if (coef == "0") continue;
    bool neg = coef.front() == '-';
    std::string mag = neg ? coef.substr(1) : coef;
    if (!unit.empty() && mag == "1") mag.clear();
    if (out.empty())
      out = (neg ? "-" : "") + mag + unit;
    else
      out += (neg ? " - " : " + ") + mag + unit;
  }
  return out.empty() ? "0" : out;
}

}  // namespace detail

inline json to_json(const Rational& r, const OutputStyle&) { return rational_json(r); }

inline json to_json(const Complex& c, const OutputStyle& st) {
  if (st.pretty) return detail::join_units({{format12(c.real()), ""}, {format12(c.imag()), "i"}});
  return json::array({number_json(c.real()), number_json(c.imag())});
}

inline json to_json(const QuaternionQ& q, const OutputStyle& st) {
  if (st.pretty)
    return detail::join_units({{rational_text(q.w), ""}, {rational_text(q.x), "i"}, {rational_text(q.y), "j"},
                               {rational_text(q.z), "k"}});
  return json::array({rational_json(q.w), rational_json(q.x), rational_json(q.y), rational_json(q.z)});
}

inline json to_json(const QuaternionF& q, const OutputStyle& st) {
  if (st.pretty)
    return detail::join_units(
        {{format12(q.w), ""}, {format12(q.x), "i"}, {format12(q.y), "j"}, {format12(q.z), "k"}});
  return json::array({number_json(q.w), number_json(q.x), number_json(q.y), number_json(q.z)});
}

/// {"expr": grammar string or null, "bands": {"s": [d_s(0), d_s(1), ...]}}.
/// Entries of a band list are [re, im], or null where the weight is undefined.
inline json to_json(const BandOperator& b, const OutputStyle& st) {
  auto expr = b.to_grammar();
  if (st.pretty && expr) return *expr;
  json bands = json::object();
  for (const auto& [s, g] : b.reduced_bands()) {
    json vals = json::array();
    for (long n = 0; n < st.sample_levels; ++n) {
      if (n + s < 0) {
        vals.push_back(json::array({0, 0}));
        continue;
      }
      try {
        Complex v = b.matrix_element(n + s, n);
        vals.push_back(json::array({number_json(v.real()), number_json(v.imag())}));
      } catch (const EvalError&) {
        vals.push_back(nullptr);
      }
    }
    bands[std::to_string(s)] = std::move(vals);
  }
  return json{{"expr", expr ? json(*expr) : json(nullptr)}, {"bands", std::move(bands)}};
}

template <RingElement T>
json to_json(const NcMatrix<T>& m, const OutputStyle& st) {
  json rows = json::array();
  for (std::size_t i = 1; i <= m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 1; j <= m.cols(); ++j) row.push_back(to_json(m(i, j), st));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ncspec::cli
