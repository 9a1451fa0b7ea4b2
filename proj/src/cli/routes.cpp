#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "kk/cli.hpp"

namespace kk::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v, std::chars_format::general);
  if (s.empty() || ec != std::errc{} || ptr != end)
    throw Error(ErrorKind::kParse, fmt::format("malformed number '{}'", whole));
  return v;
}

constexpr std::array<std::pair<Route, const char*>, 11> kRouteNames{{
    {Route::kMSeries, "series"},
    {Route::kMIntegral, "integral"},
    {Route::kDirect, "direct"},
    {Route::kDirichlet, "dirichlet"},
    {Route::kCahen, "cahen"},
    {Route::kMaster, "master"},
    {Route::kCaseA, "case-a"},
    {Route::kCaseB, "case-b"},
    {Route::kCaseC, "case-c"},
    {Route::kCaseD, "case-d"},
    {Route::kBound, "bound"},
}};

}  // namespace

double parse_decimal(std::string_view text) { return parse_number(trim(text), text); }

Cx parse_complex(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw Error(ErrorKind::kParse, "empty complex number");
  if (s.back() != 'i') return {parse_number(s, text), 0.0};

  const std::string_view body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](std::string_view im) {
    if (im.empty() || im == "+") return 1.0;
    if (im == "-") return -1.0;
    return parse_number(im, text);
  };
  if (split == std::string_view::npos) return {0.0, imag_part(body)};
  return {parse_number(trim(body.substr(0, split)), text), imag_part(body.substr(split))};
}

std::string format_value(double v) {
  if (v == 0.0) return "0";  // folds -0
  return fmt::format("{:.17g}", v);
}

std::optional<Route> route_from_name(std::string_view name) {
  for (const auto& [r, n] : kRouteNames)
    if (name == n) return r;
  return std::nullopt;
}

const char* route_name(Route r) {
  for (const auto& [rr, n] : kRouteNames)
    if (rr == r) return n;
  return "?";
}

CoeffFn PointConfig::coeffs() const {
  CoeffFn k = parse_coeff_family(kappa_spec);
  return kappa0 ? k.with_kappa0(*kappa0) : k;
}

EvalReport evaluate_route(Route route, const PointConfig& cfg) {
  const KKParams& p = cfg.params;
  switch (route) {
    case Route::kMSeries:
      return kummer_m_series(p.a, p.b, cfg.z);
    case Route::kMIntegral:
      return kummer_m_integral(p.a, p.b, cfg.z, cfg.quad);
    default:
      break;
  }
  const CoeffFn kappa = cfg.coeffs();
  switch (route) {
    case Route::kDirect:
      return kk_direct(p, kappa, cfg.z);
    case Route::kDirichlet:
      return kk_via_dirichlet(p, kappa, cfg.z, cfg.quad, InnerRoute::kDirect);
    case Route::kCahen:
      return kk_via_dirichlet(p, kappa, cfg.z, cfg.quad, InnerRoute::kCahen);
    case Route::kMaster:
      return kk_master(p, kappa, cfg.z, cfg.quad);
    case Route::kCaseA:
      return kk_case_A(p, kappa, cfg.z, cfg.quad);
    case Route::kCaseB:
      return kk_case_B(p, kappa, cfg.z, cfg.quad);
    case Route::kCaseC:
      return kk_case_C(p, kappa, cfg.z, cfg.quad);
    case Route::kCaseD:
      return kk_case_D(p, kappa, cfg.z, cfg.quad);
    case Route::kBound: {
      EvalReport rep;
      rep.value = kk_bound(p, kappa, cfg.z);
      rep.evaluations = 1;
      return rep;
    }
    default:
      break;
  }
  throw Error(ErrorKind::kDomain, "unknown route");
}

}  // namespace kk::cli
