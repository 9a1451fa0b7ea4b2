#include "kk/core.hpp"

#include <algorithm>
#include <cmath>

namespace kk {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kRegion: return "region error";
    case ErrorKind::kOverflow: return "overflow";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kIntegrand: return "integrand error";
    case ErrorKind::kConsistency: return "consistency error";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

void EvalReport::add_flag(const std::string& f) {
  if (std::find(flags.begin(), flags.end(), f) == flags.end()) flags.push_back(f);
}

void EvalReport::absorb_flags(const EvalReport& other) {
  for (const auto& f : other.flags) add_flag(f);
}

void QuadSpec::validate() const {
  if (!(rel_tol > 0) || !(abs_tol > 0) || !(tail_tol > 0))
    throw Error(ErrorKind::kDomain, "QuadSpec: rel_tol, abs_tol and tail_tol must be positive");
  if (max_depth < 0 || max_depth > 30)
    throw Error(ErrorKind::kDomain, "QuadSpec: max_depth must lie in [0, 30]");
  if (unit_interval_cap < 0 || unit_interval_cap > 100000)
    throw Error(ErrorKind::kDomain, "QuadSpec: unit_interval_cap must lie in [0, 100000]");
}

Cx require_finite(Cx v, const char* where) {
  if (!is_finite(v)) throw Error(ErrorKind::kOverflow, std::string(where) + ": non-finite result");
  return v;
}

double require_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw Error(ErrorKind::kOverflow, std::string(where) + ": non-finite result");
  return v;
}

}  // namespace kk
