#pragma once

// The Dirichlet series attached to a Kapteyn-Kummer series,
//   D(t) = sum_n kappa_n W(n) e^{-p_t n},
//   W(u) = Gamma(b + beta u) / (Gamma(b - a + (beta - alpha) u) Gamma(a + alpha u)),
//   p_t  = -alpha log t - (beta - alpha) log(1 - t) - z zeta t,
// evaluated directly and through Cahen's Laplace integral over the counting
// sum A(s) = sum_{1 <= n <= s} kappa_n W(n), and the reconstruction
//   K(z) = int_0^1 e^{zt} t^{a-1} (1-t)^{b-a-1} D(t) dt.

#include <functional>
#include <utility>
#include <vector>

#include "kk/quadrature.hpp"
#include "kk/series.hpp"

namespace kk {

struct PtValue {
  Cx value;
  double real_part = 0.0;
  double growth_margin = 0.0;  // real_part - C_w
};

// C_w = beta log beta - (beta - alpha) log(beta - alpha) - alpha log alpha,
// the exponential growth rate of W(u); 0 log 0 = 0.
double growth_constant(const KKParams& p);

PtValue pt(const KKParams& p, Cx z, double t);
// Same, with 1 - t supplied separately for nodes that round to t == 1.
PtValue pt(const KKParams& p, Cx z, double t, double tc);

double log_weight(const KKParams& p, double u);

// A C^1 density f and its derivative f'; the counting sum integrates
// d_u f = f + {u} f' over [0, [s]].
struct DensityValue {
  double f = 0.0;
  double df = 0.0;
};
using Density = std::function<DensityValue(double u)>;

// f(u) = kappa(u) W(u), with W' = W (beta psi(b + beta u)
//   - (beta - alpha) psi(b - a + (beta - alpha) u) - alpha psi(a + alpha u)).
Density weighted_density(const KKParams& p, const CoeffFn& kappa);

// Partial integrals of d_u f over [0, n], built one unit interval at a time
// and memoized. Not thread-safe; copy per thread.
class CountingSums {
 public:
  CountingSums(Density density, QuadSpec quad);

  double at(std::int64_t n);
  double err_at(std::int64_t n);
  const EvalReport& diagnostics() const { return diag_; }

 private:
  void extend_to(std::int64_t n);

  Density density_;
  QuadSpec quad_;
  std::vector<double> values_{0.0};
  std::vector<double> errs_{0.0};
  EvalReport diag_;
};

// int_0^{[s]} d_u(kappa W)(u) du by unit-interval quadrature.
EvalReport counting_sum(const KKParams& p, const CoeffFn& kappa, double s, const QuadSpec& quad = {});
// sum_{n=1}^{[s]} kappa(n) W(n), the cross-check path.
double counting_sum_weighted(const KKParams& p, const CoeffFn& kappa, double s);

inline constexpr double kDirichletTol = 1e-16;

EvalReport dirichlet_direct(const KKParams& p, const CoeffFn& kappa, Cx z, double t,
                            double tol = kDirichletTol);
EvalReport dirichlet_cahen(const KKParams& p, const CoeffFn& kappa, Cx z, double t,
                           const QuadSpec& quad = {});

enum class InnerRoute { kDirect, kCahen };

EvalReport kk_via_dirichlet(const KKParams& p, const CoeffFn& kappa, Cx z, const QuadSpec& quad,
                            InnerRoute inner);

namespace detail {

EvalReport dirichlet_direct_at(const KKParams& p, const CoeffFn& kappa, Cx z, double t, double tc,
                               double tol);
EvalReport dirichlet_cahen_at(const KKParams& p, const CoeffFn& kappa, Cx z, double t, double tc,
                              const QuadSpec& quad, CountingSums& sums);

}  // namespace detail
}  // namespace kk
