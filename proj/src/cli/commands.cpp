#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kk/cli.hpp"

namespace kk::cli {

namespace {

struct PointFlags {
  std::string a = "1";
  std::string b = "2";
  std::string alpha = "0";
  std::string beta = "0";
  std::string zeta = "0";
  std::string kappa = "zero";
  std::optional<std::string> kappa0;
  std::string z = "0";
  std::optional<std::string> rel_tol;
  std::optional<std::string> abs_tol;
  std::optional<std::string> tail_tol;
  std::optional<int> max_depth;
  std::optional<int> panel_cap;

  PointConfig build() const {
    PointConfig c;
    c.params.a = parse_decimal(a);
    c.params.b = parse_decimal(b);
    c.params.alpha = parse_decimal(alpha);
    c.params.beta = parse_decimal(beta);
    c.params.zeta = parse_decimal(zeta);
    c.kappa_spec = kappa;
    if (kappa0) c.kappa0 = parse_decimal(*kappa0);
    c.z = parse_complex(z);
    if (rel_tol) c.quad.rel_tol = parse_decimal(*rel_tol);
    if (abs_tol) c.quad.abs_tol = parse_decimal(*abs_tol);
    if (tail_tol) c.quad.tail_tol = parse_decimal(*tail_tol);
    if (max_depth) c.quad.max_depth = *max_depth;
    if (panel_cap) c.quad.unit_interval_cap = *panel_cap;
    c.quad.validate();
    c.coeffs();  // reject bad family text before any evaluation
    return c;
  }
};

void add_m_flags(CLI::App* sub, PointFlags& f) {
  sub->add_option("--a", f.a, "first parameter a");
  sub->add_option("--b", f.b, "second parameter b");
  sub->add_option("--z", f.z, "argument, e.g. -1+0.3i");
}

void add_quad_flags(CLI::App* sub, PointFlags& f) {
  sub->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
  sub->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
  sub->add_option("--tail-tol", f.tail_tol, "semi-infinite tail tolerance");
  sub->add_option("--max-depth", f.max_depth, "tanh-sinh refinement levels");
  sub->add_option("--panel-cap", f.panel_cap, "maximum unit panels");
}

void add_kk_flags(CLI::App* sub, PointFlags& f, bool kappa_required) {
  add_m_flags(sub, f);
  sub->add_option("--alpha", f.alpha, "alpha >= 0");
  sub->add_option("--beta", f.beta, "beta >= alpha");
  sub->add_option("--zeta", f.zeta, "zeta");
  auto* k = sub->add_option("--kappa", f.kappa, "geometric:<w> | expdecay:<c> | polygeom:<w>,<p> | delta | zero");
  if (kappa_required) k->required();
  sub->add_option("--kappa0", f.kappa0, "value of kappa_0 (default 0)");
  add_quad_flags(sub, f);
}

std::string join_flags(const std::vector<std::string>& flags, const char* sep) {
  std::string s;
  for (const auto& f : flags) {
    if (!s.empty()) s += sep;
    s += f;
  }
  return s;
}

std::string format_err(double e) { return fmt::format("{:.3e}", e); }

int status_of(const EvalReport& r) { return r.clean() ? 0 : 2; }

void print_report(std::ostream& out, Route route, const EvalReport& r) {
  out << fmt::format("route         {}\n", route_name(route));
  out << fmt::format("value_re      {}\n", format_value(r.value.real()));
  out << fmt::format("value_im      {}\n", format_value(r.value.imag()));
  out << fmt::format("err_estimate  {}\n", format_err(r.err_estimate));
  out << fmt::format("evaluations   {}\n", r.evaluations);
  out << fmt::format("flags         {}\n", r.flags.empty() ? "none" : join_flags(r.flags, ","));
}

Route require_route(const std::string& name, bool m_only) {
  const auto r = route_from_name(name);
  const bool is_m = r && (*r == Route::kMSeries || *r == Route::kMIntegral);
  if (!r || (m_only && !is_m)) throw Error(ErrorKind::kParse, fmt::format("unknown method '{}'", name));
  return *r;
}

// Route accuracy the comparison allows on top of the routes' own estimates.
double route_tolerance(Route r) {
  switch (r) {
    case Route::kDirect: return 1e-12;
    case Route::kDirichlet: return 1e-8;
    case Route::kCahen: return 1e-5;
    case Route::kCaseD: return 1e-5;
    default: return 1e-4;
  }
}

std::vector<Route> applicable_routes(const PointConfig& c) {
  const KKParams& p = c.params;
  const bool no_k0 = !c.kappa0 || *c.kappa0 == 0.0;
  std::vector<Route> rs{Route::kDirect};
  if (p.zeta != 0.0) {
    rs.push_back(Route::kDirichlet);
    // With alpha = 0 the Laplace-type integral loses its decay as t -> 0.
    if (p.alpha > 0.0) {
      rs.push_back(Route::kCahen);
      rs.push_back(Route::kMaster);
    }
    if (p.alpha == 0.0 && p.beta > 0.0 && no_k0) rs.push_back(Route::kCaseA);
    if (p.alpha == 0.0 && p.beta == 0.0 && no_k0) rs.push_back(Route::kCaseD);
  } else if (p.beta > 0.0 && no_k0) {
    rs.push_back(Route::kCaseB);
    if (p.alpha == 0.0) rs.push_back(Route::kCaseC);
  }
  return rs;
}

int cmd_compare(const PointConfig& c, std::ostream& out, std::ostream& err) {
  struct Row {
    Route route;
    EvalReport rep;
  };
  std::vector<Row> rows;
  std::optional<std::string> failure;
  for (Route r : applicable_routes(c)) {
    try {
      rows.push_back({r, evaluate_route(r, c)});
    } catch (const Error& e) {
      failure = fmt::format("route {} failed ({}): {}", route_name(r), to_string(e.kind()), e.what());
      break;
    }
  }

  out << fmt::format("{:<10} {:<25} {:<25} {:<10} {}\n", "route", "value_re", "value_im", "err", "flags");
  bool flagged = false;
  for (const auto& row : rows) {
    flagged = flagged || !row.rep.clean();
    out << fmt::format("{:<10} {:<25} {:<25} {:<10} {}\n", route_name(row.route),
                       format_value(row.rep.value.real()), format_value(row.rep.value.imag()),
                       format_err(row.rep.err_estimate),
                       row.rep.flags.empty() ? "none" : join_flags(row.rep.flags, ","));
  }
  if (failure) {
    err << "error: " << *failure << "\n";
    return 1;
  }

  bool all_ok = true;
  out << fmt::format("\n{:<20} {:<10} {:<10} {}\n", "pair", "rel_diff", "limit", "status");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const auto& x = rows[i].rep;
      const auto& y = rows[j].rep;
      const double scale = std::max(std::abs(x.value), std::abs(y.value));
      const double diff = scale > 0.0 ? std::abs(x.value - y.value) / scale : 0.0;
      double limit = std::max(route_tolerance(rows[i].route), route_tolerance(rows[j].route));
      if (scale > 0.0) limit += (x.err_estimate + y.err_estimate) / scale;
      const bool ok = diff <= limit;
      all_ok = all_ok && ok;
      out << fmt::format("{:<20} {:<10} {:<10} {}\n",
                         fmt::format("{}/{}", route_name(rows[i].route), route_name(rows[j].route)),
                         format_err(diff), format_err(limit), ok ? "ok" : "MISMATCH");
    }
  }
  if (!all_ok) return 1;
  return flagged ? 2 : 0;
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return format_value(v);
}

int cmd_region(const PointConfig& c, std::ostream& out, std::ostream& err) {
  const CoeffFn kappa = c.coeffs();
  if (!(kappa.root_limit < 1.0)) {
    err << fmt::format("error: {} has root limit {} >= 1; the convergence region is empty\n", kappa.name,
                       format_value(kappa.root_limit));
    return 1;
  }
  const double zeta = c.params.zeta;
  out << fmt::format("family        {}\n", kappa.name);
  out << fmt::format("root_limit    {}\n", format_value(kappa.root_limit));
  out << fmt::format("zeta          {}\n", format_value(zeta));
  for (RegionKind kind : {RegionKind::kRPrime, RegionKind::kR}) {
    const auto [lo, hi] = convergence_region(kappa, zeta, kind).re_z_interval(zeta);
    const char* label = kind == RegionKind::kRPrime ? "R'" : "R ";
    if (std::isnan(lo)) {
      out << fmt::format("{}            empty\n", label);
    } else {
      out << fmt::format("{}            {} < Re z < {}\n", label, format_bound(lo), format_bound(hi));
    }
  }
  return 0;
}

struct SweepRow {
  double x = 0.0;
  EvalReport rep;
  std::optional<std::string> error;
};

void apply_sweep_var(PointConfig& c, const std::string& var, double x) {
  if (var == "z_re") c.z = {x, c.z.imag()};
  else if (var == "z_im") c.z = {c.z.real(), x};
  else if (var == "a") c.params.a = x;
  else if (var == "b") c.params.b = x;
  else if (var == "alpha") c.params.alpha = x;
  else if (var == "beta") c.params.beta = x;
  else if (var == "zeta") c.params.zeta = x;
  else throw Error(ErrorKind::kParse, fmt::format("unknown sweep variable '{}'", var));
}

int cmd_sweep(const PointConfig& base, Route route, const std::string& var, double from, double to, int steps,
              bool csv, std::ostream& out, std::ostream& err) {
  if (steps < 2) throw Error(ErrorKind::kParse, "sweep: --steps must be >= 2");
  if (!(from < to)) throw Error(ErrorKind::kParse, "sweep: --from must be < --to");
  {
    PointConfig probe = base;
    apply_sweep_var(probe, var, from);
  }

  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k)
    rows[static_cast<std::size_t>(k)].x =
        k == steps - 1 ? to : from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < rows.size();) {
      SweepRow& row = rows[k];
      try {
        PointConfig c = base;
        apply_sweep_var(c, var, row.x);
        row.rep = evaluate_route(route, c);
      } catch (const Error& e) {
        row.error = fmt::format("{}: {}", to_string(e.kind()), e.what());
      }
    }
  };
  const auto n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, rows.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = 0;
  const char* fmt_line = csv ? "{},{},{},{},{},{}\n" : "{:<24} {:<25} {:<25} {:<12} {:<10} {}\n";
  out << fmt::format(fmt::runtime(fmt_line), "sweep_var", "value_re", "value_im", "err_estimate", "route", "flags");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const SweepRow& row = rows[k];
    std::string re = "nan", im = "nan", e = "nan", flags;
    if (row.error) {
      flags = "error";
      err << fmt::format("error at {}={}: {}\n", var, format_value(row.x), *row.error);
      status = 1;
    } else {
      re = format_value(row.rep.value.real());
      im = format_value(row.rep.value.imag());
      e = format_err(row.rep.err_estimate);
      flags = join_flags(row.rep.flags, ";");
      if (!row.rep.clean() && status == 0) status = 2;
    }
    if (!csv && flags.empty()) flags = "none";
    out << fmt::format(fmt::runtime(fmt_line), format_value(row.x), re, im, e, route_name(route), flags);
  }
  return status;
}

int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << fmt::format("error: cannot open goldens file '{}'\n", path);
    return 1;
  }
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  const auto vectors = parse_goldens(text);

  std::size_t passed = 0;
  for (const auto& v : vectors) {
    const Cx golden{parse_decimal(v.value_re), parse_decimal(v.value_im)};
    const double tol = parse_decimal(v.tol);
    std::string detail;
    bool ok = false;
    try {
      const Cx got = evaluate_golden(v);
      const double scale = std::abs(golden);
      const double e = scale > 0.0 ? std::abs(got - golden) / scale : std::abs(got);
      ok = e < tol;
      detail = fmt::format("err={} tol={}", format_err(e), format_err(tol));
    } catch (const Error& e) {
      detail = fmt::format("error ({}): {}", to_string(e.kind()), e.what());
    }
    if (ok) ++passed;
    out << fmt::format("{} line {} {} {}\n", ok ? "PASS" : "FAIL", v.line, v.function, detail);
  }
  out << fmt::format("{}/{} vectors passed\n", passed, vectors.size());
  return passed == vectors.size() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kapteyn-Kummer series evaluator", "kk"};
  app.require_subcommand(1, 1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  PointFlags flags;
  std::string method;
  bool csv = false;
  std::string output = "text";
  std::string var, from, to;
  int steps = 0;
  std::string goldens;

  auto* eval_m = app.add_subcommand("eval-m", "evaluate the confluent hypergeometric M(a,b,z)");
  add_m_flags(eval_m, flags);
  eval_m->add_option("--method", method, "series | integral")->required();
  add_quad_flags(eval_m, flags);

  auto* eval_kk = app.add_subcommand("eval-kk", "evaluate a Kapteyn-Kummer series by one route");
  add_kk_flags(eval_kk, flags, true);
  eval_kk->add_option("--method", method,
                      "direct | dirichlet | cahen | master | case-a | case-b | case-c | case-d | bound")
      ->required();

  auto* compare = app.add_subcommand("compare", "evaluate every applicable route and compare");
  add_kk_flags(compare, flags, true);

  auto* region = app.add_subcommand("region", "report the convergence strips in Re z");
  region->add_option("--kappa", flags.kappa, "coefficient family")->required();
  region->add_option("--zeta", flags.zeta, "zeta");

  auto* sweep = app.add_subcommand("sweep", "evaluate one route along a parameter grid");
  add_kk_flags(sweep, flags, false);
  sweep->add_option("--method", method, "series | integral | any eval-kk method")->required();
  sweep->add_option("--var", var, "z_re | z_im | a | b | alpha | beta | zeta")->required();
  sweep->add_option("--from", from, "first value")->required();
  sweep->add_option("--to", to, "last value")->required();
  sweep->add_option("--steps", steps, "number of points (>= 2)")->required();
  sweep->add_option("--output", output, "text | csv")->check(CLI::IsMember({"text", "csv"}));

  auto* verify = app.add_subcommand("verify", "re-evaluate golden vectors from a JSON file");
  verify->add_option("--goldens", goldens, "path to the golden-vector JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*verify) return cmd_verify(goldens, out, err);
    const PointConfig cfg = flags.build();
    if (*eval_m) {
      const Route r = require_route(method, true);
      const EvalReport rep = evaluate_route(r, cfg);
      print_report(out, r, rep);
      return status_of(rep);
    }
    if (*eval_kk) {
      const Route r = require_route(method, false);
      if (r == Route::kMSeries || r == Route::kMIntegral)
        throw Error(ErrorKind::kParse, fmt::format("method '{}' belongs to eval-m", method));
      const EvalReport rep = evaluate_route(r, cfg);
      print_report(out, r, rep);
      return status_of(rep);
    }
    if (*compare) return cmd_compare(cfg, out, err);
    if (*region) return cmd_region(cfg, out, err);
    if (*sweep) {
      csv = output == "csv";
      return cmd_sweep(cfg, require_route(method, false), var, parse_decimal(from), parse_decimal(to), steps, csv,
                       out, err);
    }
  } catch (const Error& e) {
    err << fmt::format("error ({}): {}\n", to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    err << fmt::format("error: {}\n", e.what());
    return 1;
  }
  return 1;
}

}  // namespace kk::cli
