#pragma once

// JobSpec -> Report. See README for both schemas.

#include "ncspec/cli/parse.hpp"
#include "ncspec/cli/serialize.hpp"
#include "ncspec/ncspec.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ncspec::cli {

struct RunOptions {
  std::optional<std::string> ring;
  std::optional<std::string> command;
  std::optional<double> tol;
  std::optional<int> probe;
  bool pretty = false;
};

struct Outcome {
  json report;
  int exit_code = 0;
};

enum class Status { ok, degenerate, undefined, error };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::degenerate: return "degenerate";
    case Status::undefined: return "undefined";
    case Status::error: return "error";
  }
  return "error";
}

inline int exit_code(Status s) {
  switch (s) {
    case Status::ok: return 0;
    case Status::degenerate:
    case Status::undefined: return 2;
    case Status::error: return 1;
  }
  return 1;
}

namespace detail {

struct Partial {
  json results = json::object();
  json residuals = json::object();
  Status status = Status::ok;
  std::string message;

  void worsen(Status s, const std::string& why) {
    if (static_cast<int>(s) > static_cast<int>(status)) status = s;
    if (!why.empty()) message += (message.empty() ? "" : "; ") + why;
  }
};

template <class T>
struct Job {
  NcMatrix<T> a;
  json opts;
  ToleranceConfig cfg;
  OutputStyle style;
};

inline std::size_t index_opt(const json& o, const char* key, std::optional<std::size_t> fallback = std::nullopt) {
  if (o.contains(key)) {
    const auto& v = o[key];
    if (!v.is_number_integer() || v.get<long long>() < 1) throw Error(std::string("option '") + key + "' must be a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
  }
  if (fallback) return *fallback;
  throw Error(std::string("missing option '") + key + "'");
}

template <class T>
json poly_json(const RowCharPoly<T>& p, const OutputStyle& st) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs) coeffs.push_back(to_json(c, st));
  json out{{"row", p.row}, {"coeffs", std::move(coeffs)}, {"degenerate", p.degenerate}};
  out["note"] = p.free_parameter_note ? json(*p.free_parameter_note) : json(nullptr);
  return out;
}

template <class T>
std::vector<T> parse_list(const json& v) {
  if (!v.is_array()) throw Error("expected an array of entries");
  std::vector<T> out;
  for (const auto& e : v) out.push_back(parse_entry<T>(e));
  return out;
}

template <class T>
double max_abs(const std::vector<T>& v, const ToleranceConfig& cfg) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, magnitude(x, cfg));
  return m;
}

template <class T>
RootStrategy pick_strategy(const json& o) {
  if (o.contains("strategy")) {
    const auto s = o["strategy"].template get<std::string>();
    if (s == "zero_root_factoring") return RootStrategy::zero_root_factoring;
    if (s == "pointwise_numeric") return RootStrategy::pointwise_numeric;
    if (s == "user_supplied") return RootStrategy::user_supplied;
    throw Error("unknown root strategy '" + s + "'");
  }
  if (o.contains("roots")) return RootStrategy::user_supplied;
  if constexpr (std::is_same_v<T, Complex> || std::is_same_v<T, BandOperator>)
    return RootStrategy::pointwise_numeric;
  else
    return RootStrategy::zero_root_factoring;
}

template <class T>
void cmd_qdet(const Job<T>& job, Partial& out) {
  const std::size_t i = index_opt(job.opts, "i"), j = index_opt(job.opts, "j");
  auto v = quasideterminant(job.a, i, j, job.cfg);
  out.results["i"] = i;
  out.results["j"] = j;
  out.results["value"] = v ? to_json(*v, job.style) : json(nullptr);
  if (!v) out.worsen(Status::undefined, "minor A^{" + std::to_string(i) + std::to_string(j) + "} is not invertible");
}

template <class T>
void cmd_inverse(const Job<T>& job, Partial& out) {
  auto e = mat_inverse_elimination(job.a, job.cfg);
  auto q = mat_inverse_quasidet(job.a, job.cfg);
  out.results["elimination"] = e ? to_json(*e, job.style) : json(nullptr);
  out.results["quasidet"] = q ? to_json(*q, job.style) : json(nullptr);
  const auto id = NcMatrix<T>::identity(job.a.rows(), job.a.sample());
  if (e) out.residuals["elimination_check"] = number_json(mat_max_abs(job.a * *e - id, job.cfg));
  if (q) out.residuals["quasidet_check"] = number_json(mat_max_abs(job.a * *q - id, job.cfg));
  if (e && q) out.residuals["route_difference"] = number_json(mat_max_abs(*e - *q, job.cfg));
  if (!e) out.worsen(Status::undefined, "matrix is singular");
  else if (!q) out.worsen(Status::undefined, "some quasideterminant or its inverse is undefined");
}

// Row i of A^n - sum_k C_k A^{n-k}.
template <class T>
double row_residual(const NcMatrix<T>& a, const RowCharPoly<T>& p, const ToleranceConfig& cfg) {
  const std::size_t n = a.rows();
  std::vector<NcMatrix<T>> pw{NcMatrix<T>::identity(n, a.sample())};
  for (std::size_t q = 1; q <= n; ++q) pw.push_back(pw.back() * a);
  double m = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    T acc = pw[n](p.row, j);
    for (std::size_t k = 1; k <= n; ++k) acc = acc - p.coeffs[k - 1] * pw[n - k](p.row, j);
    m = std::max(m, magnitude(acc, cfg));
  }
  return m;
}

template <class T>
std::vector<RowCharPoly<T>> polys_into(const Job<T>& job, Partial& out) {
  auto polys = char_poly_all(job.a, job.cfg);
  json rows = json::array();
  for (const auto& p : polys) {
    rows.push_back(poly_json(p, job.style));
    if (p.degenerate) out.worsen(Status::degenerate, "row " + std::to_string(p.row) + " is degenerate");
  }
  out.results["charpoly"] = std::move(rows);
  return polys;
}

template <class T>
void cmd_charpoly(const Job<T>& job, Partial& out) {
  std::vector<RowCharPoly<T>> polys;
  if (job.opts.contains("row")) {
    polys.push_back(char_poly_row(job.a, index_opt(job.opts, "row"), job.cfg));
  } else {
    polys = char_poly_all(job.a, job.cfg);
    out.results["divergent"] = row_poly_divergence(polys, job.cfg);
  }
  json rows = json::array();
  double coef1 = 0.0, bordered_gap = 0.0;
  bool any_bordered = false;
  for (const auto& p : polys) {
    json r = poly_json(p, job.style);
    coef1 = std::max(coef1, row_residual(job.a, p, job.cfg));
    if (p.degenerate) out.worsen(Status::degenerate, "row " + std::to_string(p.row) + " is degenerate");
    if (job.opts.contains("lambda")) {
      const T lambda = parse_entry<T>(job.opts["lambda"]);
      auto b = char_poly_row_bordered(job.a, p.row, lambda, job.cfg);
      r["bordered"] = b ? to_json(*b, job.style) : json(nullptr);
      if (b) {
        any_bordered = true;
        bordered_gap = std::max(bordered_gap, magnitude(*b - eval_row_poly(p, lambda), job.cfg));
      }
    }
    rows.push_back(std::move(r));
  }
  out.results["rows"] = std::move(rows);
  out.residuals["coef1"] = number_json(coef1);
  if (any_bordered) out.residuals["bordered_vs_coeffs"] = number_json(bordered_gap);
}

template <class T>
void cmd_ch_verify(const Job<T>& job, Partial& out) {
  auto polys = polys_into(job, out);
  auto res = cayley_hamilton_residual(job.a, polys);
  out.results["residual_matrix"] = to_json(res, job.style);
  out.results["divergent"] = row_poly_divergence(polys, job.cfg);
  out.residuals["cayley_hamilton"] = number_json(mat_max_abs(res, job.cfg));
}

template <class T>
SpectralDecomposition<T> decompose(const Job<T>& job, Partial& out) {
  auto polys = polys_into(job, out);
  std::vector<std::vector<T>> user;
  if (job.opts.contains("roots"))
    for (const auto& row : job.opts["roots"]) user.push_back(parse_list<T>(row));
  auto xs = solve_eigen_diagonals(job.a, polys, pick_strategy<T>(job.opts), job.cfg, user);
  auto d = spectral_decompose(job.a, xs, job.cfg);
  const auto& r = d.residuals;
  out.residuals["idempotence"] = number_json(r.idempotence);
  out.residuals["orthogonality"] = number_json(r.orthogonality);
  out.residuals["completeness"] = number_json(r.completeness);
  out.residuals["vm_bordered"] = number_json(r.vm_bordered);
  out.residuals["vm_expanded"] = number_json(r.vm_expanded);
  if (r.vm_undefined > 0) out.results["vm_undefined"] = r.vm_undefined;
  return d;
}

template <class T>
void cmd_spectral(const Job<T>& job, Partial& out) {
  auto d = decompose(job, out);
  json xs = json::array(), ps = json::array();
  for (const auto& x : d.xs.xs) xs.push_back(to_json(x, job.style));
  for (const auto& p : d.projectors) ps.push_back(to_json(p, job.style));
  out.results["eigen_diagonals"] = std::move(xs);
  out.results["projectors"] = std::move(ps);
}

template <class T>
void cmd_funcmat(const Job<T>& job, Partial& out) {
  const FunctionTag f = parse_function_tag(job.opts.value("function", std::string("exp")));
  const Complex scale = job.opts.contains("scale") ? parse_complex(job.opts["scale"]) : Complex(1.0, 0.0);
  auto d = decompose(job, out);
  auto m = matrix_function(job.a, d, f, scale, job.cfg);
  out.results["function"] = to_string(f);
  out.results["scale"] = to_json(scale, OutputStyle{});
  out.results["matrix"] = to_json(m, job.style);
}

template <class T>
void cmd_identities(const Job<T>& job, Partial& out) {
  const auto& o = job.opts;
  const std::size_t n = job.a.rows();
  std::vector<std::string> which;
  if (o.contains("which")) {
    for (const auto& w : o["which"]) which.push_back(w.template get<std::string>());
  } else {
    which = {"sylvester", "homological", "scaling"};
    if (o.contains("nodes") && o.contains("z")) {
      which.push_back("main-identity");
      which.push_back("interpolation");
    }
  }
  bool passed = true;
  auto record = [&](const std::string& name, double r, json detail) {
    out.residuals[name] = number_json(r);
    detail["residual"] = number_json(r);
    out.results[name] = std::move(detail);
    if (r > job.cfg.abs_tol) passed = false;
  };

  for (const auto& w : which) {
    if (w == "sylvester") {
      const std::size_t k = index_opt(o, "k", std::size_t{1});
      auto r = sylvester_residuals(job.a, k, job.cfg);
      record("sylvester", max_abs(r, job.cfg), json{{"k", k}, {"evaluated", r.size()}});
    } else if (w == "homological") {
      HomologicalOptions ho;
      ho.max_tuples = o.value("max_tuples", std::size_t{0});
      ho.seed = o.value("seed", std::uint64_t{0});
      auto r = homological_residuals(job.a, job.cfg, ho);
      double m = std::max(max_abs(r.row_residuals, job.cfg), max_abs(r.column_residuals, job.cfg));
      record("homological", m, json{{"evaluated", r.evaluated}, {"skipped", r.skipped}});
    } else if (w == "scaling") {
      const T lambda = o.contains("lambda") ? parse_entry<T>(o["lambda"]) : job.a(1, 1);
      const T mu = o.contains("mu") ? parse_entry<T>(o["mu"]) : job.a(1, 1);
      const std::size_t i = index_opt(o, "i", std::size_t{1}), j = index_opt(o, "j", std::size_t{1});
      auto r = scaling_check(job.a, lambda, mu, i, j, job.cfg);
      double m = std::max(max_abs(r.row_residuals, job.cfg), max_abs(r.column_residuals, job.cfg));
      record("scaling", m, json{{"i", i}, {"j", j}, {"skipped", r.skipped}});
    } else if (w == "main-identity" || w == "interpolation") {
      if (!o.contains("nodes") || !o.contains("z")) throw Error(w + " needs options 'nodes' and 'z'");
      const auto xs = parse_list<T>(o["nodes"]);
      const T z = parse_entry<T>(o["z"]);
      const std::size_t k = xs.size();
      if (w == "main-identity") {
        double m = 0.0;
        std::size_t undefined = 0;
        for (std::size_t p = k; p <= k + 4; ++p) {
          auto r = main_identity_residual(xs, z, p, job.cfg);
          if (r)
            m = std::max(m, magnitude(*r, job.cfg));
          else
            ++undefined;
        }
        record("main_identity", m, json{{"m_range", json::array({k, k + 4})}, {"undefined", undefined}});
      } else {
        auto wc = lagrange_coeffs(xs, job.cfg);
        double m = 0.0;
        const T one = one_like(z), zero = zero_like(z);
        for (std::size_t a = 1; a <= k; ++a)
          for (std::size_t b = 0; b < k; ++b)
            m = std::max(m, magnitude(lagrange_eval(wc, a, xs[b]) - (a == b + 1 ? one : zero), job.cfg));
        for (std::size_t p = 0; p < k; ++p) {
          T acc = power(z, p);
          for (std::size_t a = 0; a < k; ++a) acc = acc - power(xs[a], p) * lagrange_eval(wc, a + 1, z);
          m = std::max(m, magnitude(acc, job.cfg));
        }
        record("interpolation", m, json{{"nodes", k}});
      }
    } else {
      throw Error("unknown identity '" + w + "'");
    }
  }
  (void)n;
  out.results["passed"] = passed;
}

template <class T>
Partial run_typed(const std::string& command, const json& matrix, const json& opts, const ToleranceConfig& cfg,
                  const OutputStyle& style) {
  if (!matrix.is_array() || matrix.empty()) throw Error("'matrix' must be a non-empty array of rows");
  const std::size_t n = matrix.size();
  std::vector<T> e;
  for (const auto& row : matrix) {
    if (!row.is_array() || row.size() != n) throw DimensionMismatch("'matrix' must be square");
    for (const auto& v : row) e.push_back(parse_entry<T>(v));
  }
  Job<T> job{NcMatrix<T>(n, n, std::move(e)), opts, cfg, style};

  Partial out;
  if (command == "qdet")
    cmd_qdet(job, out);
  else if (command == "inverse")
    cmd_inverse(job, out);
  else if (command == "charpoly")
    cmd_charpoly(job, out);
  else if (command == "ch-verify")
    cmd_ch_verify(job, out);
  else if (command == "spectral")
    cmd_spectral(job, out);
  else if (command == "funcmat")
    cmd_funcmat(job, out);
  else if (command == "identities")
    cmd_identities(job, out);
  else
    throw Error("unknown command '" + command + "'");
  return out;
}

}  // namespace detail

inline Outcome run(const json& job, const RunOptions& ro = {}) {
  json report = json::object();
  std::string command = ro.command.value_or(job.value("command", std::string()));
  std::string ring = ro.ring.value_or(job.value("ring", std::string()));
  report["command"] = command;
  report["ring"] = ring;

  detail::Partial out;
  try {
    if (command.empty()) throw Error("no command given");
    if (ring.empty()) throw Error("no ring given");
    ToleranceConfig cfg;
    cfg.abs_tol = ro.tol.value_or(job.value("tolerance", cfg.abs_tol));
    cfg.probe_levels = ro.probe.value_or(job.value("probe_levels", cfg.probe_levels));
    cfg.guard_band = job.value("guard_band", cfg.guard_band);
    if (!(cfg.abs_tol > 0) || cfg.probe_levels < 1 || cfg.guard_band < 0) throw Error("invalid tolerance settings");

    const json opts = job.value("options", json::object());
    OutputStyle style;
    style.pretty = ro.pretty;
    style.sample_levels = opts.value("sample_levels", style.sample_levels);
    const json matrix = job.value("matrix", json());

    switch (parse_ring(ring)) {
      case RingKind::rational: out = detail::run_typed<Rational>(command, matrix, opts, cfg, style); break;
      case RingKind::complex: out = detail::run_typed<Complex>(command, matrix, opts, cfg, style); break;
      case RingKind::quaternion_exact: out = detail::run_typed<QuaternionQ>(command, matrix, opts, cfg, style); break;
      case RingKind::quaternion_float: out = detail::run_typed<QuaternionF>(command, matrix, opts, cfg, style); break;
      case RingKind::fock: out = detail::run_typed<BandOperator>(command, matrix, opts, cfg, style); break;
    }
  } catch (const Error& e) {
    out.results = json::object();
    out.residuals = json::object();
    out.status = Status::error;
    out.message = e.what();
  } catch (const json::exception& e) {
    out.results = json::object();
    out.residuals = json::object();
    out.status = Status::error;
    out.message = std::string("malformed job: ") + e.what();
  }

  report["status"] = to_string(out.status);
  if (!out.message.empty()) report["message"] = out.message;
  report["results"] = std::move(out.results);
  report["residuals"] = std::move(out.residuals);
  return {std::move(report), exit_code(out.status)};
}

}  // namespace ncspec::cli
