#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "kk/core.hpp"

namespace kk::test {

inline double rel_err(Cx got, Cx want) {
  const double scale = std::abs(want);
  return scale > 0.0 ? std::abs(got - want) / scale : std::abs(got);
}

// Central difference with one Richardson step: O(h^4) truncation.
inline Cx richardson(const std::function<Cx(double)>& f, double x, double h = 1e-2) {
  auto central = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

}  // namespace kk::test
