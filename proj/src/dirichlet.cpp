#include "kk/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "kk/detail/summation.hpp"

namespace kk {

double growth_constant(const KKParams& p) {
  return detail::xlogx(p.beta) - detail::xlogx(p.beta - p.alpha) - detail::xlogx(p.alpha);
}

PtValue pt(const KKParams& p, Cx z, double t) { return pt(p, z, t, 1.0 - t); }

PtValue pt(const KKParams& p, Cx z, double t, double tc) {
  if (!(t > 0.0) || !(tc > 0.0) || !(t <= 1.0) || !(tc <= 1.0))
    throw Error(ErrorKind::kDomain, "pt: t must lie in (0, 1)");
  // alpha = 0 or beta = alpha drop the corresponding log term entirely.
  double re = 0.0;
  if (p.alpha != 0.0) re -= p.alpha * std::log(t);
  if (p.beta != p.alpha) re -= (p.beta - p.alpha) * std::log(tc);
  PtValue v;
  v.value = Cx{re, 0.0} - z * p.zeta * t;
  v.real_part = v.value.real();
  v.growth_margin = v.real_part - growth_constant(p);
  return v;
}

double log_weight(const KKParams& p, double u) {
  return ln_gamma(p.b + p.beta * u) - ln_gamma(p.b - p.a + (p.beta - p.alpha) * u) -
         ln_gamma(p.a + p.alpha * u);
}

Density weighted_density(const KKParams& p, const CoeffFn& kappa) {
  return [p, kappa](double u) {
    const double k = kappa.eval(u);
    const double dk = kappa.deriv(u);
    if (k == 0.0 && dk == 0.0) return DensityValue{};
    const double w = std::exp(log_weight(p, u));
    double dlogw = p.beta * digamma(p.b + p.beta * u);
    if (p.beta != p.alpha) dlogw -= (p.beta - p.alpha) * digamma(p.b - p.a + (p.beta - p.alpha) * u);
    if (p.alpha != 0.0) dlogw -= p.alpha * digamma(p.a + p.alpha * u);
    return DensityValue{k * w, dk * w + k * w * dlogw};
  };
}

CountingSums::CountingSums(Density density, QuadSpec quad)
    : density_(std::move(density)), quad_(quad) {
  quad_.validate();
}

void CountingSums::extend_to(std::int64_t n) {
  while (static_cast<std::int64_t>(values_.size()) <= n) {
    const double k = static_cast<double>(values_.size() - 1);
    // On [k, k+1], {u} = t.
    const auto unit = integrate_unit(
        [&](double t, double) {
          const auto d = density_(k + t);
          return Cx{d.f + t * d.df, 0.0};
        },
        quad_);
    values_.push_back(values_.back() + unit.value.real());
    errs_.push_back(errs_.back() + unit.err_estimate);
    diag_.evaluations += unit.evaluations;
    diag_.absorb_flags(unit);
  }
}

double CountingSums::at(std::int64_t n) {
  if (n <= 0) return 0.0;
  extend_to(n);
  return values_[static_cast<std::size_t>(n)];
}

double CountingSums::err_at(std::int64_t n) {
  if (n <= 0) return 0.0;
  extend_to(n);
  return errs_[static_cast<std::size_t>(n)];
}

namespace {

std::int64_t floor_index(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::kDomain, "counting sum: s must be >= 0");
  return static_cast<std::int64_t>(std::floor(s));
}

}  // namespace

EvalReport counting_sum(const KKParams& p, const CoeffFn& kappa, double s, const QuadSpec& quad) {
  p.validate();
  const auto n = floor_index(s);
  CountingSums sums(weighted_density(p, kappa), quad);
  EvalReport rep;
  rep.value = sums.at(n);
  rep.err_estimate = sums.err_at(n);
  rep.evaluations = sums.diagnostics().evaluations;
  rep.absorb_flags(sums.diagnostics());
  return rep;
}

double counting_sum_weighted(const KKParams& p, const CoeffFn& kappa, double s) {
  p.validate();
  const auto n = floor_index(s);
  detail::NeumaierSum sum;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double kn = kappa.at(k);
    if (kn != 0.0) sum.add(kn * std::exp(log_weight(p, static_cast<double>(k))));
  }
  return sum.value();
}

namespace detail {

EvalReport dirichlet_direct_at(const KKParams& p, const CoeffFn& kappa, Cx z, double t, double tc,
                               double tol) {
  const auto e = pt(p, z, t, tc);
  const double asym_ratio = kappa.root_limit * std::exp(growth_constant(p) - e.real_part);

  EvalReport rep;
  ComplexNeumaierSum sum;
  const Cx lead = kappa.kappa0 * std::exp(log_weight(p, 0.0));
  sum.add(lead);
  double prev = std::abs(lead);
  double abs_sum = prev;
  double tail = 0.0;
  bool converged = false;
  std::int64_t n = 1;
  for (; n <= kSeriesTermCap; ++n) {
    const double kn = kappa.at(n);
    Cx term{};
    if (kn != 0.0) {
      const double nd = static_cast<double>(n);
      term = kn * std::exp(log_weight(p, nd) - e.value * nd);
      if (!is_finite(term)) throw Error(ErrorKind::kOverflow, "dirichlet_direct: term overflow");
    }
    sum.add(term);
    const double mag = std::abs(term);
    abs_sum += mag;
    const double ratio = std::max(asym_ratio, prev > 0.0 ? mag / prev : 0.0);
    prev = mag;
    if (ratio < 1.0) {
      tail = mag * ratio / (1.0 - ratio);
      if (tail <= tol * std::abs(sum.value())) {
        converged = true;
        break;
      }
    }
  }
  rep.value = sum.value();
  rep.evaluations = std::min(n, kSeriesTermCap) + 1;
  rep.err_estimate = tail + 4.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (!converged) rep.add_flag(flag::kTermCap);
  return rep;
}

EvalReport dirichlet_cahen_at(const KKParams& p, const CoeffFn& kappa, Cx z, double t, double tc,
                              const QuadSpec& quad, CountingSums& sums) {
  const auto e = pt(p, z, t, tc);
  if (!(e.real_part > 0.0) || !(e.growth_margin > 0.0))
    throw Error(ErrorKind::kDivergence,
                "dirichlet_cahen: Re p_t - C_w must be positive for the Cahen integral to converge");
  const Cx lead = kappa.kappa0 * std::exp(log_weight(p, 0.0));
  std::int64_t last_panel = 0;
  auto integral = integrate_semiinf_unitwise(
      [&](std::int64_t n, double s) {
        last_panel = n;
        const double a = sums.at(n);
        return a == 0.0 ? Cx{} : a * std::exp(-e.value * s);
      },
      e.growth_margin, quad);
  EvalReport rep;
  rep.value = lead + e.value * integral.value;
  rep.err_estimate = std::abs(e.value) * integral.err_estimate + sums.err_at(last_panel);
  rep.evaluations = integral.evaluations;
  rep.absorb_flags(integral);
  rep.absorb_flags(sums.diagnostics());
  return rep;
}

}  // namespace detail

EvalReport dirichlet_direct(const KKParams& p, const CoeffFn& kappa, Cx z, double t, double tol) {
  p.validate();
  require_region(kappa, p.zeta, z, RegionKind::kR, "dirichlet_direct");
  return detail::dirichlet_direct_at(p, kappa, z, t, 1.0 - t, tol);
}

EvalReport dirichlet_cahen(const KKParams& p, const CoeffFn& kappa, Cx z, double t, const QuadSpec& quad) {
  p.validate();
  require_region(kappa, p.zeta, z, RegionKind::kR, "dirichlet_cahen");
  CountingSums sums(weighted_density(p, kappa), quad);
  return detail::dirichlet_cahen_at(p, kappa, z, t, 1.0 - t, quad, sums);
}

EvalReport kk_via_dirichlet(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad,
                            InnerRoute inner) {
  p.validate();
  quad.validate();
  require_region(kappa, p.zeta, z, RegionKind::kR, "kk_via_dirichlet");

  // Inner values are resolved two orders tighter than the outer rule asks for,
  // so their noise does not stall the outer level-difference test.
  QuadSpec inner_quad = quad;
  inner_quad.rel_tol = std::max(quad.rel_tol * 1e-2, 1e-15);
  inner_quad.tail_tol = std::max(quad.tail_tol * 1e-2, 1e-15);
  CountingSums sums(weighted_density(p, kappa), inner_quad);

  EvalReport inner_diag;
  std::int64_t inner_evals = 0;
  std::unordered_map<double, double> inner_err;  // node t -> |kernel| * inner error
  auto outer = integrate_unit(
      [&](double t, double tc) {
        const auto d = inner == InnerRoute::kDirect
                           ? detail::dirichlet_direct_at(p, kappa, z, t, tc, kDirichletTol)
                           : detail::dirichlet_cahen_at(p, kappa, z, t, tc, inner_quad, sums);
        inner_diag.absorb_flags(d);
        inner_evals += d.evaluations;
        const Cx kernel = std::exp(z * t + (p.a - 1.0) * std::log(t) + (p.b - p.a - 1.0) * std::log(tc));
        inner_err[t] = std::abs(kernel) * d.err_estimate;
        return kernel * d.value;
      },
      quad);
  outer.evaluations += inner_evals;
  // Same nodes again, so every lookup hits; a miss only means a deeper level was never visited.
  const auto propagated = integrate_unit(
      [&](double t, double) {
        const auto it = inner_err.find(t);
        return Cx(it == inner_err.end() ? 0.0 : it->second);
      },
      quad);
  outer.err_estimate += propagated.value.real();
  if (!inner_diag.clean()) {
    outer.add_flag(flag::kInner);
    outer.absorb_flags(inner_diag);
  }
  return outer;
}

}  // namespace kk
