#pragma once

// Direct evaluation of the Kapteyn-Kummer series
//   K(z) = sum_{n>=0} kappa_n M(a + alpha n, b + beta n, z (1 + zeta n)),
// its convergence strips, and the a-priori majorant
//   |K(z)| <= e^{|Re z|} sum_n |kappa_n| e^{|zeta Re z| n}.

#include <functional>
#include <limits>
#include <string>
#include <string_view>

#include "kk/core.hpp"
#include "kk/special.hpp"

namespace kk {

struct KKParams {
  double a = 1.0;
  double b = 2.0;
  double alpha = 0.0;
  double beta = 0.0;
  double zeta = 0.0;

  // b > a > 0 and beta >= alpha >= 0; with `alpha_positive`, alpha > 0.
  void validate(bool alpha_positive = false) const;
};

// A coefficient sequence kappa_n extended to a C^1 function of u >= 0.
// Only eval(n) for integers n >= 1 and kappa0 define the series; eval(0) is
// irrelevant to every route.
struct CoeffFn {
  std::string name;
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  double root_limit = 0.0;  // lim |kappa_n|^{1/n}, in [0, 1)
  double kappa0 = 0.0;
  // sup_{k >= n} |kappa_{k+1} / kappa_k|. When empty, a geometric ratio is
  // estimated from root_limit and the last observed ratio.
  std::function<double(std::int64_t)> ratio_bound;

  double at(std::int64_t n) const { return n == 0 ? kappa0 : eval(static_cast<double>(n)); }
  CoeffFn with_kappa0(double k0) const;
};

// Built-in families of the coefficient mini-language:
//   geometric:<w>      kappa(u) = |w|^u cos(pi u)^[w<0],  L = |w|
//   expdecay:<c>       kappa(u) = e^{-c u},               L = e^{-c}
//   polygeom:<w>,<p>   kappa(u) = u^p times the geometric form, p >= 0, L = |w|
//   delta              C^1 bump cos^2(pi u / 2) on [0, 1), kappa0 = 1, L = 0
//   zero               kappa = 0, L = 0
// kappa0 is 0 unless stated.
CoeffFn geometric_coeffs(double w);
CoeffFn expdecay_coeffs(double c);
CoeffFn polygeom_coeffs(double w, double p);
CoeffFn delta_coeffs();
CoeffFn zero_coeffs();

// Throws kParse on malformed text and kRegion when root_limit >= 1.
CoeffFn parse_coeff_family(std::string_view text);

// Bound on sum_{k>n} |kappa_k| g^k. Infinity when no geometric majorant with
// ratio < 1 exists.
double coeff_tail_bound(const CoeffFn& kappa, std::int64_t n, double g);

enum class RegionKind { kRPrime, kR };

// {z : lo < zeta Re z < hi}. For kRPrime the strip is symmetric.
struct ConvergenceRegion {
  double strip_lo = -std::numeric_limits<double>::infinity();
  double strip_hi = 0.0;
  RegionKind kind = RegionKind::kRPrime;

  bool contains(double zeta, Cx z) const;
  // The same strip in the Re z coordinate; both infinite when zeta == 0 and
  // the strip contains 0, both NaN when it is empty.
  std::pair<double, double> re_z_interval(double zeta) const;
};

inline constexpr double kBoundaryGuard = 1e-12;

ConvergenceRegion convergence_region(const CoeffFn& kappa, double zeta, RegionKind kind);

// Throws kRegion if z is not strictly inside the strip.
void require_region(const CoeffFn& kappa, double zeta, Cx z, RegionKind kind, const char* where);

inline constexpr double kDirectTol = 1e-15;

EvalReport kk_direct(const KKParams& p, const CoeffFn& kappa, Cx z, double tol = kDirectTol);
double kk_bound(const KKParams& p, const CoeffFn& kappa, Cx z);

}  // namespace kk
