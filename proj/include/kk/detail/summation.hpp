#pragma once

#include <cmath>

#include "kk/core.hpp"

namespace kk::detail {

// Neumaier's variant of Kahan summation, applied to each component.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexNeumaierSum {
 public:
  void add(Cx v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  Cx value() const { return {re_.value(), im_.value()}; }

 private:
  NeumaierSum re_, im_;
};

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// x log x with the convention 0 log 0 = 0.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace kk::detail
