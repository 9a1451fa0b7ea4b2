#pragma once

#include <functional>

#include "kk/core.hpp"

namespace kk {

// Integrand on (0, 1). The rule passes both t and tc = 1 - t; tc is formed
// without cancellation, so factors like (1-t)^{c} and log(1-t) stay accurate
// at nodes that round to t == 1.
using UnitIntegrand = std::function<Cx(double t, double tc)>;

// Tanh-sinh (double exponential) trapezoid on (0, 1), halving the step until
// two successive levels agree to max(rel_tol*|I|, abs_tol). Tolerates
// algebraic and logarithmic endpoint singularities of exponent > -1.
EvalReport integrate_unit(const UnitIntegrand& f, const QuadSpec& spec = {});

// Integrand on (0, inf) that is smooth on each [n, n+1) but may jump or kink
// at the integers. `panel` is floor(s) as seen by the caller.
using PanelIntegrand = std::function<Cx(std::int64_t panel, double s)>;

// Sum of integrate_unit over the unit panels [n, n+1), stopped once
// |last panel| / (1 - e^{-decay_rate}) < tail_tol * |sum|.
EvalReport integrate_semiinf_unitwise(const PanelIntegrand& f, double decay_rate,
                                      const QuadSpec& spec = {});

// Analytic completion of a unit-panel integral whose piecewise factor has
// settled. Used when the integrand decays only algebraically.
struct TailClosure {
  // int_n^inf f(s) ds, exact once the piecewise factor is frozen at panel n.
  std::function<Cx(std::int64_t n)> remainder;
  // Bound on the error made by freezing the piecewise factor at panel n.
  std::function<double(std::int64_t n)> settle_bound;
};

// Integrates panels [0, n) and closes with tail.remainder(n) at the first
// n >= 1 with settle_bound(n) < tail_tol * |result|.
EvalReport integrate_semiinf_closed(const PanelIntegrand& f, const TailClosure& tail,
                                    const QuadSpec& spec = {});

}  // namespace kk
