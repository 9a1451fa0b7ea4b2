#include "kk/master.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kk {
namespace {

struct Shifted {
  double a, b, bma;  // a + alpha s, b + beta s, b - a + (beta - alpha) s
  Cx w;              // z (1 + zeta s)
};

Shifted shift(const KKParams& p, Cx z, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw Error(ErrorKind::kDomain, "master: s must be >= 0");
  return {p.a + p.alpha * s, p.b + p.beta * s, p.b - p.a + (p.beta - p.alpha) * s, z * (1.0 + p.zeta * s)};
}

}  // namespace

double gamma_rho(const KKParams& p, double s, int rho) {
  p.validate();
  if (rho != 0 && rho != 1) throw Error(ErrorKind::kDomain, "gamma_rho: rho must be 0 or 1");
  const auto sh = shift(p, Cx{}, s);
  return require_finite(std::exp(ln_gamma(sh.bma) + ln_gamma(sh.a + rho) - ln_gamma(sh.b + rho)),
                        "gamma_rho");
}

GammaDerivs dgamma0(const KKParams& p, double s) {
  const double g0 = gamma_rho(p, s, 0);
  const auto sh = shift(p, Cx{}, s);
  const double psi_bma = digamma(sh.bma);
  return {g0 * (digamma(sh.a) - psi_bma), g0 * (psi_bma - digamma(sh.b))};
}

JIntegral j_integral(const KKParams& p, Cx z, double s, int rho, const QuadSpec& quad) {
  const double g = gamma_rho(p, s, rho);
  const auto sh = shift(p, z, s);
  JIntegral j;
  j.quadrature = integrate_unit(
      [&](double t, double tc) {
        return std::exp(sh.w * t + (sh.a + rho - 1.0) * std::log(t) + (sh.bma - 1.0) * std::log(tc));
      },
      quad);
  j.closed_form = kummer_m(sh.a + rho, sh.b + rho, sh.w);
  j.closed_form.value *= g;
  j.closed_form.err_estimate *= g;

  const double combined = j.quadrature.err_estimate + j.closed_form.err_estimate +
                          64.0 * std::numeric_limits<double>::epsilon() * std::abs(j.closed_form.value);
  if (std::abs(j.quadrature.value - j.closed_form.value) > 10.0 * combined)
    throw Error(ErrorKind::kConsistency, "j_integral: quadrature and closed form disagree");
  return j;
}

MasterBlocks master_blocks(const KKParams& p, Cx z, double s) {
  const auto sh = shift(p, z, s);
  MasterBlocks mb;
  mb.gamma0 = gamma_rho(p, s, 0);
  mb.gamma1 = gamma_rho(p, s, 1);
  const auto dg = dgamma0(p, s);
  mb.dgamma0_da = dg.da;
  mb.dgamma0_db = dg.db;

  auto take = [&mb](const EvalReport& r) {
    for (const auto& f : r.flags)
      if (std::find(mb.flags.begin(), mb.flags.end(), f) == mb.flags.end()) mb.flags.push_back(f);
    return r.value;
  };
  mb.mstar = take(kummer_m(sh.a, sh.b, sh.w));
  mb.mshift = take(kummer_m(sh.a + 1.0, sh.b + 1.0, sh.w));
  mb.dmstar_da = take(dM_da(sh.a, sh.b, sh.w));
  mb.dmstar_db = take(dM_db(sh.a, sh.b, sh.w));
  return mb;
}

Cx master_bracket(const KKParams& p, Cx z, const MasterBlocks& mb) {
  return p.zeta * z * mb.gamma1 * mb.mshift +
         mb.mstar * (p.beta * mb.dgamma0_db + p.alpha * mb.dgamma0_da) +
         mb.gamma0 * (p.beta * mb.dmstar_db + p.alpha * mb.dmstar_da);
}

double master_decay_rate(const KKParams& p, Cx z) {
  // Re p_t is convex in t; golden-section search on (0, 1).
  auto re_pt = [&](double t) { return pt(p, z, t, 1.0 - t).real_part; };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1e-12, hi = 1.0 - 1e-12;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = re_pt(x1), f2 = re_pt(x2);
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = re_pt(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = re_pt(x2);
    }
  }
  const double min_re = std::min({f1, f2, re_pt(1e-12), re_pt(1.0 - 1e-12)});
  return 0.5 * (min_re - growth_constant(p));
}

EvalReport kk_master(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad) {
  p.validate(/*alpha_positive=*/true);
  quad.validate();
  require_region(kappa, p.zeta, z, RegionKind::kR, "kk_master");
  const double decay = master_decay_rate(p, z);
  if (!(decay > 0.0))
    throw Error(ErrorKind::kDivergence, "kk_master: no positive decay margin for the s-integral");

  EvalReport rep;
  Cx lead{};
  if (kappa.kappa0 != 0.0) {
    const auto m = kummer_m(p.a, p.b, z);
    lead = kappa.kappa0 * m.value;
    rep.err_estimate += std::abs(kappa.kappa0) * m.err_estimate;
    rep.absorb_flags(m);
  }

  CountingSums sums(weighted_density(p, kappa), quad);
  std::int64_t last_panel = 0;
  EvalReport block_diag;
  const auto integral = integrate_semiinf_unitwise(
      [&](std::int64_t n, double s) {
        last_panel = n;
        const double a = sums.at(n);
        if (a == 0.0) return Cx{};
        const auto mb = master_blocks(p, z, s);
        for (const auto& f : mb.flags) block_diag.add_flag(f);
        return a * master_bracket(p, z, mb);
      },
      decay, quad);

  rep.value = require_finite(lead - integral.value, "kk_master");
  rep.err_estimate += integral.err_estimate + sums.err_at(last_panel);
  rep.evaluations = integral.evaluations + sums.diagnostics().evaluations;
  rep.absorb_flags(integral);
  rep.absorb_flags(sums.diagnostics());
  rep.absorb_flags(block_diag);
  return rep;
}

namespace {

// K = -int_0^inf A(s) c B(s) ds with c B(s) = d/ds closure(s) and
// closure(s) -> 0; the tail past the last panel is closed analytically.
struct CaseForm {
  Density density;
  std::function<Cx(double s)> weighted_bracket;
  std::function<Cx(double s)> closure;
};

EvalReport evaluate_case(const CaseForm& form, const KKParams& p, const CoeffFn& kappa, Cx z,
                         const QuadSpec& quad) {
  quad.validate();
  CountingSums sums(form.density, quad);
  // kappa_m M(a+alpha m, b+beta m, w_m) is what freezing A(s) at panel n drops;
  // |M| <= e^{max(0, Re w)} for b > a > 0.
  const double lead = std::exp(std::max(0.0, z.real()));
  const double g = std::exp(std::max(0.0, p.zeta * z.real()));
  TailClosure tail{
      [&](std::int64_t n) {
        const double a = sums.at(n);
        return a == 0.0 ? Cx{} : a * form.closure(static_cast<double>(n));
      },
      [&](std::int64_t n) { return lead * coeff_tail_bound(kappa, n, g); }};
  std::int64_t last_panel = 0;
  auto rep = integrate_semiinf_closed(
      [&](std::int64_t n, double s) {
        last_panel = n;
        const double a = sums.at(n);
        return a == 0.0 ? Cx{} : -a * form.weighted_bracket(s);
      },
      tail, quad);
  rep.err_estimate += sums.err_at(last_panel + 1);
  rep.evaluations += sums.diagnostics().evaluations;
  rep.absorb_flags(sums.diagnostics());
  require_finite(rep.value, "kk_case");
  return rep;
}

void require_vanishing_kappa0(const CoeffFn& kappa, const char* where) {
  if (kappa.kappa0 != 0.0)
    throw Error(ErrorKind::kDomain, std::string(where) + ": the special cases require kappa0 = 0");
}

// kappa(u) Gamma(b + beta u) / Gamma(b - a + beta u), the alpha = 0 density
// with 1/Gamma(a) taken outside.
Density alpha_free_density(const KKParams& p, const CoeffFn& kappa) {
  return [p, kappa](double u) {
    const double k = kappa.eval(u);
    const double dk = kappa.deriv(u);
    if (k == 0.0 && dk == 0.0) return DensityValue{};
    const double bu = p.b + p.beta * u;
    const double cu = p.b - p.a + p.beta * u;
    const double w = std::exp(ln_gamma(bu) - ln_gamma(cu));
    const double dlogw = p.beta * (digamma(bu) - digamma(cu));
    return DensityValue{k * w, dk * w + k * w * dlogw};
  };
}

}  // namespace

EvalReport kk_case_A(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad) {
  p.validate();
  if (p.alpha != 0.0 || !(p.beta > 0.0))
    throw Error(ErrorKind::kDomain, "kk_case_A: requires alpha = 0 and beta > 0");
  require_vanishing_kappa0(kappa, "kk_case_A");
  require_region(kappa, p.zeta, z, RegionKind::kR, "kk_case_A");
  // With alpha = 0 the Gamma(a + rho) factors leave G_rho:
  //   g_rho(s) = Gamma(b - a + beta s) / Gamma(b + beta s + rho).
  auto g_rho = [&p](double s, int rho) {
    return std::exp(ln_gamma(p.b - p.a + p.beta * s) - ln_gamma(p.b + p.beta * s + rho));
  };
  CaseForm form{
      alpha_free_density(p, kappa),
      [&](double s) {
        const Cx w = z * (1.0 + p.zeta * s);
        const double bs = p.b + p.beta * s;
        const double g0 = g_rho(s, 0);
        const double dg0_db = g0 * (digamma(p.b - p.a + p.beta * s) - digamma(bs));
        const Cx mstar = kummer_m(p.a, bs, w).value;
        const Cx dm_db = dM_db(p.a, bs, w).value;
        return p.zeta * z * p.a * g_rho(s, 1) * kummer_m(p.a + 1.0, bs + 1.0, w).value +
               p.beta * (mstar * dg0_db + g0 * dm_db);
      },
      [&](double s) { return g_rho(s, 0) * kummer_m(p.a, p.b + p.beta * s, z * (1.0 + p.zeta * s)).value; }};
  return evaluate_case(form, p, kappa, z, quad);
}

EvalReport kk_case_B(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad) {
  p.validate();
  if (p.zeta != 0.0 || !(p.beta > 0.0))
    throw Error(ErrorKind::kDomain, "kk_case_B: requires zeta = 0 and beta > 0");
  require_vanishing_kappa0(kappa, "kk_case_B");
  require_region(kappa, p.zeta, z, RegionKind::kRPrime, "kk_case_B");
  CaseForm form{
      weighted_density(p, kappa),
      [&](double s) {
        const double as = p.a + p.alpha * s, bs = p.b + p.beta * s;
        const double g0 = gamma_rho(p, s, 0);
        const auto dg = dgamma0(p, s);
        const Cx mstar = kummer_m(as, bs, z).value;
        Cx dm = p.beta * dM_db(as, bs, z).value;
        if (p.alpha != 0.0) dm += p.alpha * dM_da(as, bs, z).value;
        return mstar * (p.beta * dg.db + p.alpha * dg.da) + g0 * dm;
      },
      [&](double s) { return gamma_rho(p, s, 0) * kummer_m(p.a + p.alpha * s, p.b + p.beta * s, z).value; }};
  return evaluate_case(form, p, kappa, z, quad);
}

EvalReport kk_case_C(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad) {
  p.validate();
  if (p.alpha != 0.0 || p.zeta != 0.0 || !(p.beta > 0.0))
    throw Error(ErrorKind::kDomain, "kk_case_C: requires alpha = zeta = 0 and beta > 0");
  require_vanishing_kappa0(kappa, "kk_case_C");
  require_region(kappa, p.zeta, z, RegionKind::kRPrime, "kk_case_C");
  const double inv_gamma_a = std::exp(-ln_gamma(p.a));
  CaseForm form{
      alpha_free_density(p, kappa),
      [&](double s) {
        const double bs = p.b + p.beta * s;
        const double g0 = gamma_rho(p, s, 0);
        const auto dg = dgamma0(p, s);
        return p.beta * inv_gamma_a * (kummer_m(p.a, bs, z).value * dg.db + g0 * dM_db(p.a, bs, z).value);
      },
      [&](double s) { return inv_gamma_a * gamma_rho(p, s, 0) * kummer_m(p.a, p.b + p.beta * s, z).value; }};
  return evaluate_case(form, p, kappa, z, quad);
}

EvalReport kk_case_D(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad) {
  p.validate();
  if (p.alpha != 0.0 || p.beta != 0.0 || p.zeta == 0.0)
    throw Error(ErrorKind::kDomain, "kk_case_D: requires alpha = beta = 0 and zeta != 0");
  require_vanishing_kappa0(kappa, "kk_case_D");
  require_region(kappa, p.zeta, z, RegionKind::kR, "kk_case_D");
  CaseForm form{
      [&kappa](double u) { return DensityValue{kappa.eval(u), kappa.deriv(u)}; },
      [&](double s) {
        return p.a * p.zeta * z / p.b * kummer_m(p.a + 1.0, p.b + 1.0, z * (1.0 + p.zeta * s)).value;
      },
      [&](double s) { return kummer_m(p.a, p.b, z * (1.0 + p.zeta * s)).value; }};
  return evaluate_case(form, p, kappa, z, quad);
}

}  // namespace kk
