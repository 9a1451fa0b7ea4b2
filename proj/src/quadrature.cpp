#include "kk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kk/detail/summation.hpp"

namespace kk {
namespace {

// Nodes whose distance to an endpoint drops below this are discarded; the
// transformed weight there is far below any integrand growth we accept.
constexpr double kEndpointFloor = 1e-300;
constexpr int kMinLevel = 3;
constexpr double kRoundoff = 4.0 * std::numeric_limits<double>::epsilon();
constexpr std::int64_t kMinPanels = 2;

struct Node {
  double t, tc, w;
};

// x >= 0. Returns false once the node is closer to the endpoint than the floor.
bool tanh_sinh_node(double x, Node& node) {
  const double u = std::numbers::pi / 2.0 * std::sinh(x);
  const double e = std::exp(-2.0 * u);
  node.t = 1.0 / (1.0 + e);
  node.tc = e / (1.0 + e);
  node.w = std::numbers::pi * std::cosh(x) * node.t * node.tc;
  return node.tc >= kEndpointFloor;
}

Cx checked_eval(const UnitIntegrand& f, double t, double tc) {
  const Cx v = f(t, tc);
  if (!is_finite(v)) throw Error(ErrorKind::kIntegrand, "integrate_unit: non-finite integrand value");
  return v;
}

}  // namespace

EvalReport integrate_unit(const UnitIntegrand& f, const QuadSpec& spec) {
  spec.validate();
  EvalReport rep;
  detail::ComplexNeumaierSum sum;
  double abs_sum = 0.0;  // sum of |w f|, for the rounding floor of the estimate
  auto add = [&](double w, Cx v) {
    sum.add(w * v);
    abs_sum += w * std::abs(v);
  };

  // Level 0: h = 1, nodes at the integers.
  {
    Node n{};
    tanh_sinh_node(0.0, n);
    add(n.w, checked_eval(f, n.t, n.tc));
    ++rep.evaluations;
    for (int k = 1; tanh_sinh_node(static_cast<double>(k), n); ++k) {
      add(n.w, checked_eval(f, n.t, n.tc));
      add(n.w, checked_eval(f, n.tc, n.t));
      rep.evaluations += 2;
    }
  }
  Cx prev = sum.value();
  double diff = std::abs(prev);

  double h = 1.0;
  for (int level = 1; level <= spec.max_depth; ++level) {
    h *= 0.5;
    Node n{};
    for (std::int64_t j = 0; tanh_sinh_node((2 * j + 1) * h, n); ++j) {
      add(n.w, checked_eval(f, n.t, n.tc));
      add(n.w, checked_eval(f, n.tc, n.t));
      rep.evaluations += 2;
    }
    const Cx cur = h * sum.value();
    diff = std::abs(cur - prev);
    prev = cur;
    if (level >= std::min(kMinLevel, spec.max_depth) &&
        diff <= std::max(spec.rel_tol * std::abs(cur), spec.abs_tol)) {
      rep.value = cur;
      rep.err_estimate = diff + kRoundoff * h * abs_sum;
      return rep;
    }
  }
  rep.value = prev;
  rep.err_estimate = diff + kRoundoff * h * abs_sum;
  rep.add_flag(flag::kMaxDepth);
  return rep;
}

EvalReport integrate_semiinf_unitwise(const PanelIntegrand& f, double decay_rate,
                                      const QuadSpec& spec) {
  spec.validate();
  if (!(decay_rate > 0.0))
    throw Error(ErrorKind::kDomain, "integrate_semiinf_unitwise: decay_rate must be positive");
  const double geometric = -std::expm1(-decay_rate);

  EvalReport rep;
  detail::ComplexNeumaierSum acc;
  double last = 0.0;
  for (std::int64_t n = 0;; ++n) {
    if (n >= spec.unit_interval_cap) {
      rep.err_estimate += last / geometric;
      rep.add_flag(flag::kPanelCap);
      break;
    }
    const auto panel = integrate_unit(
        [&](double t, double) { return f(n, static_cast<double>(n) + t); }, spec);
    acc.add(panel.value);
    rep.err_estimate += panel.err_estimate;
    rep.evaluations += panel.evaluations;
    rep.absorb_flags(panel);
    last = std::abs(panel.value);
    const double tail = last / geometric;
    if (n + 1 >= kMinPanels &&
        tail <= std::max(spec.tail_tol * std::abs(acc.value()), spec.abs_tol)) {
      rep.err_estimate += tail;
      break;
    }
  }
  rep.value = acc.value();
  return rep;
}

EvalReport integrate_semiinf_closed(const PanelIntegrand& f, const TailClosure& tail,
                                    const QuadSpec& spec) {
  spec.validate();
  EvalReport rep;
  detail::ComplexNeumaierSum acc;
  for (std::int64_t n = 0;; ++n) {
    if (n >= 1) {
      const double settle = tail.settle_bound(n);
      const Cx closed = acc.value() + tail.remainder(n);
      if (settle <= std::max(spec.tail_tol * std::abs(closed), spec.abs_tol) ||
          n >= spec.unit_interval_cap) {
        if (n >= spec.unit_interval_cap && settle > spec.abs_tol) rep.add_flag(flag::kPanelCap);
        rep.value = closed;
        rep.err_estimate += settle;
        return rep;
      }
    }
    const auto panel = integrate_unit(
        [&](double t, double) { return f(n, static_cast<double>(n) + t); }, spec);
    acc.add(panel.value);
    rep.err_estimate += panel.err_estimate;
    rep.evaluations += panel.evaluations;
    rep.absorb_flags(panel);
  }
}

}  // namespace kk
