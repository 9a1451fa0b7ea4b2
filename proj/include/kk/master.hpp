#pragma once

// The master double-integral representation
//   K(z) = kappa0 M(a, b, z) - int_0^inf A(s) B(s) ds,
//   B(s) = zeta z G1(s) M(a+alpha s+1, b+beta s+1, w)
//        + M* (beta dG0/db + alpha dG0/da) + G0 (beta dM*/db + alpha dM*/da),
// with w = z(1 + zeta s), M* = M(a + alpha s, b + beta s, w) and
//   G_rho(s) = Gamma(b-a+(beta-alpha)s) Gamma(a+alpha s+rho) / Gamma(b+beta s+rho),
// plus its Neumann-Kummer and Schlomilch-Kummer degenerations (cases A-D).
//
// B(s) is the s-derivative of J(s) = G0(s) M*(s); A(s) is the counting sum of
// the Dirichlet route.

#include "kk/dirichlet.hpp"

namespace kk {

struct MasterBlocks {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double dgamma0_da = 0.0;
  double dgamma0_db = 0.0;
  Cx mstar;
  Cx mshift;
  Cx dmstar_da;
  Cx dmstar_db;
  std::vector<std::string> flags;
};

double gamma_rho(const KKParams& p, double s, int rho);

struct GammaDerivs {
  double da = 0.0;
  double db = 0.0;
};
GammaDerivs dgamma0(const KKParams& p, double s);

struct JIntegral {
  EvalReport quadrature;
  EvalReport closed_form;
};

// int_0^1 e^{wt} t^{a+alpha s-1+rho} (1-t)^{b-a+(beta-alpha)s-1} dt by
// quadrature and as G_rho(s) M(a+alpha s+rho, b+beta s+rho, w). Throws
// kConsistency if they differ by more than 10x the combined estimate.
JIntegral j_integral(const KKParams& p, Cx z, double s, int rho, const QuadSpec& quad = {});

MasterBlocks master_blocks(const KKParams& p, Cx z, double s);
Cx master_bracket(const KKParams& p, Cx z, const MasterBlocks& blocks);

// Half of min_{0<t<1} (Re p_t) - C_w: the a-priori decay rate of the
// s-integrand.
double master_decay_rate(const KKParams& p, Cx z);

EvalReport kk_master(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad = {});

// alpha = 0 (two-parameter Kapteyn-Kummer).
EvalReport kk_case_A(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad = {});
// zeta = 0 (two-parameter Neumann-Kummer).
EvalReport kk_case_B(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad = {});
// alpha = zeta = 0 (one-parameter Neumann-Kummer).
EvalReport kk_case_C(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad = {});
// alpha = beta = 0 (Schlomilch-Kummer).
EvalReport kk_case_D(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad = {});

}  // namespace kk
