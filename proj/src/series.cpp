#include "kk/series.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include "kk/detail/summation.hpp"

namespace kk {

void KKParams::validate(bool alpha_positive) const {
  for (double v : {a, b, alpha, beta, zeta})
    if (!std::isfinite(v)) throw Error(ErrorKind::kDomain, "KKParams: non-finite parameter");
  if (!(a > 0.0) || !(b > a)) throw Error(ErrorKind::kDomain, "KKParams: requires b > a > 0");
  if (!(alpha >= 0.0) || !(beta >= alpha))
    throw Error(ErrorKind::kDomain, "KKParams: requires beta >= alpha >= 0");
  if (alpha_positive && !(alpha > 0.0))
    throw Error(ErrorKind::kDomain, "KKParams: requires alpha > 0");
}

CoeffFn CoeffFn::with_kappa0(double k0) const {
  CoeffFn c = *this;
  c.kappa0 = k0;
  return c;
}

namespace {

// w^u extended to real u: |w|^u, times cos(pi u) when w < 0 so that the
// integer samples are (-|w|)^n.
double signed_power(double w, double u) {
  const double m = std::pow(std::abs(w), u);
  return w < 0.0 ? m * std::cos(std::numbers::pi * u) : m;
}

double signed_power_deriv(double w, double u) {
  if (w == 0.0) return 0.0;
  const double m = std::pow(std::abs(w), u);
  const double lw = std::log(std::abs(w));
  if (w > 0.0) return lw * m;
  const double pu = std::numbers::pi * u;
  return m * (lw * std::cos(pu) - std::numbers::pi * std::sin(pu));
}

}  // namespace

CoeffFn geometric_coeffs(double w) {
  CoeffFn c;
  c.name = "geometric";
  c.eval = [w](double u) { return signed_power(w, u); };
  c.deriv = [w](double u) { return signed_power_deriv(w, u); };
  c.root_limit = std::abs(w);
  c.ratio_bound = [w](std::int64_t) { return std::abs(w); };
  return c;
}

CoeffFn expdecay_coeffs(double rate) {
  CoeffFn c;
  c.name = "expdecay";
  c.eval = [rate](double u) { return std::exp(-rate * u); };
  c.deriv = [rate](double u) { return -rate * std::exp(-rate * u); };
  c.root_limit = std::exp(-rate);
  c.ratio_bound = [rate](std::int64_t) { return std::exp(-rate); };
  return c;
}

CoeffFn polygeom_coeffs(double w, double p) {
  if (!(p >= 0.0)) throw Error(ErrorKind::kDomain, "polygeom: exponent p must be nonnegative");
  CoeffFn c;
  c.name = "polygeom";
  c.eval = [w, p](double u) { return (p == 0.0 ? 1.0 : std::pow(u, p)) * signed_power(w, u); };
  c.deriv = [w, p](double u) {
    if (p == 0.0) return signed_power_deriv(w, u);
    return p * std::pow(u, p - 1.0) * signed_power(w, u) + std::pow(u, p) * signed_power_deriv(w, u);
  };
  c.root_limit = std::abs(w);
  c.ratio_bound = [w, p](std::int64_t n) {
    if (n < 1) return std::numeric_limits<double>::infinity();
    const double nd = static_cast<double>(n);
    return std::pow((nd + 1.0) / nd, p) * std::abs(w);
  };
  return c;
}

CoeffFn delta_coeffs() {
  CoeffFn c;
  c.name = "delta";
  // cos^2(pi u / 2) on [0, 1): C^1, zero at every n >= 1, and its second
  // derivative jumps only at u = 1, which is a panel boundary.
  c.eval = [](double u) {
    if (u < 0.0 || u >= 1.0) return 0.0;
    const double v = std::cos(0.5 * std::numbers::pi * u);
    return v * v;
  };
  c.deriv = [](double u) {
    if (u < 0.0 || u >= 1.0) return 0.0;
    return -0.5 * std::numbers::pi * std::sin(std::numbers::pi * u);
  };
  c.root_limit = 0.0;
  c.kappa0 = 1.0;
  c.ratio_bound = [](std::int64_t) { return 0.0; };
  return c;
}

CoeffFn zero_coeffs() {
  CoeffFn c;
  c.name = "zero";
  c.eval = [](double) { return 0.0; };
  c.deriv = [](double) { return 0.0; };
  c.root_limit = 0.0;
  c.ratio_bound = [](std::int64_t) { return 0.0; };
  return c;
}

namespace {

double parse_number(std::string_view text, std::string_view whole) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v))
    throw Error(ErrorKind::kParse, "coefficient family '" + std::string(whole) + "': bad number '" +
                                       std::string(text) + "'");
  return v;
}

}  // namespace

CoeffFn parse_coeff_family(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view family = text.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  std::vector<std::string_view> parts;
  if (colon != std::string_view::npos) {
    std::size_t start = 0;
    for (;;) {
      const auto comma = args.find(',', start);
      parts.push_back(args.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  auto expect = [&](std::size_t n) {
    if (parts.size() != n)
      throw Error(ErrorKind::kParse, "coefficient family '" + std::string(text) + "': expected " +
                                         std::to_string(n) + " argument(s)");
  };
  if (family == "geometric") {
    expect(1);
    return geometric_coeffs(parse_number(parts[0], text));
  }
  if (family == "expdecay") {
    expect(1);
    return expdecay_coeffs(parse_number(parts[0], text));
  }
  if (family == "polygeom") {
    expect(2);
    return polygeom_coeffs(parse_number(parts[0], text), parse_number(parts[1], text));
  }
  if (family == "delta") {
    expect(0);
    return delta_coeffs();
  }
  if (family == "zero") {
    expect(0);
    return zero_coeffs();
  }
  throw Error(ErrorKind::kParse, "unknown coefficient family '" + std::string(text) + "'");
}

double coeff_tail_bound(const CoeffFn& kappa, std::int64_t n, double g) {
  const double next = std::abs(kappa.at(n + 1));
  double ratio = 0.0;
  if (kappa.ratio_bound) {
    ratio = kappa.ratio_bound(n + 1);
  } else {
    const double after = std::abs(kappa.at(n + 2));
    ratio = std::max(kappa.root_limit, next > 0.0 ? after / next : kappa.root_limit);
  }
  if (next == 0.0 && ratio == 0.0) return 0.0;
  const double q = ratio * g;
  if (!(q < 1.0)) return std::numeric_limits<double>::infinity();
  const double lead = next * std::exp(static_cast<double>(n + 1) * std::log(g));
  return lead / (1.0 - q);
}

bool ConvergenceRegion::contains(double zeta, Cx z) const {
  const double c = zeta * z.real();
  return c > strip_lo + kBoundaryGuard && c < strip_hi - kBoundaryGuard;
}

std::pair<double, double> ConvergenceRegion::re_z_interval(double zeta) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (zeta == 0.0) return (strip_lo < 0.0 && strip_hi > 0.0) ? std::pair{-inf, inf} : std::pair{nan, nan};
  if (zeta > 0.0) return {strip_lo / zeta, strip_hi / zeta};
  return {strip_hi / zeta, strip_lo / zeta};
}

ConvergenceRegion convergence_region(const CoeffFn& kappa, double zeta, RegionKind kind) {
  if (!(kappa.root_limit >= 0.0) || !(kappa.root_limit < 1.0))
    throw Error(ErrorKind::kRegion, "coefficient root limit >= 1: convergence region is empty");
  const double log_l = std::log(kappa.root_limit);  // -inf when L = 0
  ConvergenceRegion r;
  r.kind = kind;
  if (kind == RegionKind::kRPrime) {
    r.strip_lo = log_l;
    r.strip_hi = -log_l;
  } else {
    r.strip_lo = log_l;
    r.strip_hi = 0.0;
  }
  (void)zeta;
  return r;
}

void require_region(const CoeffFn& kappa, double zeta, Cx z, RegionKind kind, const char* where) {
  const auto region = convergence_region(kappa, zeta, kind);
  if (!region.contains(zeta, z)) {
    const char* name = kind == RegionKind::kRPrime ? "|zeta Re z| < -log L" : "log L < zeta Re z < 0";
    throw Error(ErrorKind::kRegion, std::string(where) + ": z outside the convergence strip (" + name + ")");
  }
}

EvalReport kk_direct(const KKParams& p, const CoeffFn& kappa, Cx z, double tol) {
  p.validate();
  require_region(kappa, p.zeta, z, RegionKind::kRPrime, "kk_direct");

  const double lead_bound = std::exp(std::abs(z.real()));
  const double g = std::exp(std::abs(p.zeta * z.real()));

  EvalReport rep;
  detail::ComplexNeumaierSum sum;
  double err = 0.0;
  if (kappa.kappa0 != 0.0) {
    const auto m = kummer_m(p.a, p.b, z);
    sum.add(kappa.kappa0 * m.value);
    err += std::abs(kappa.kappa0) * m.err_estimate;
    rep.absorb_flags(m);
  }
  std::int64_t n = 1;
  double tail = 0.0;
  bool converged = false;
  for (; n <= kSeriesTermCap; ++n) {
    const double kn = kappa.at(n);
    if (kn != 0.0) {
      const double nd = static_cast<double>(n);
      const auto m = kummer_m(p.a + p.alpha * nd, p.b + p.beta * nd, z * (1.0 + p.zeta * nd));
      sum.add(kn * m.value);
      err += std::abs(kn) * m.err_estimate;
      rep.absorb_flags(m);
    }
    tail = lead_bound * coeff_tail_bound(kappa, n, g);
    if (tail == 0.0 || tail <= tol * std::abs(sum.value())) {
      converged = true;
      break;
    }
  }
  rep.value = require_finite(sum.value(), "kk_direct");
  rep.evaluations = std::min(n, kSeriesTermCap);
  rep.err_estimate = err + (std::isfinite(tail) ? tail : 0.0);
  if (!converged) rep.add_flag(flag::kTermCap);
  return rep;
}

double kk_bound(const KKParams& p, const CoeffFn& kappa, Cx z) {
  p.validate();
  require_region(kappa, p.zeta, z, RegionKind::kRPrime, "kk_bound");
  const double g = std::exp(std::abs(p.zeta * z.real()));
  detail::NeumaierSum sum;
  sum.add(std::abs(kappa.kappa0));
  double tail = std::numeric_limits<double>::infinity();
  for (std::int64_t n = 1; n <= kSeriesTermCap; ++n) {
    sum.add(std::abs(kappa.at(n)) * std::exp(static_cast<double>(n) * std::log(g)));
    tail = coeff_tail_bound(kappa, n, g);
    if (tail <= 1e-17 * sum.value()) break;
  }
  // The tail majorant is added, so the result stays an upper bound.
  return require_finite(std::exp(std::abs(z.real())) * (sum.value() + tail), "kk_bound");
}

}  // namespace kk
