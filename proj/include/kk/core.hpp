#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk {

using Cx = std::complex<double>;

enum class ErrorKind {
  kDomain,       // argument outside the operation's domain
  kRegion,       // z outside the convergence strip
  kOverflow,     // an intermediate left the representable range
  kDivergence,   // series or integral diverges at these arguments
  kIntegrand,    // integrand returned a non-finite value at an interior node
  kConsistency,  // two routes that must agree did not
  kParse,        // malformed user input
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Diagnostic tags carried by EvalReport. An empty flag list means every
// tolerance requested for that evaluation was met.
namespace flag {
inline constexpr const char* kTermCap = "term_cap";
inline constexpr const char* kMaxDepth = "max_depth";
inline constexpr const char* kPanelCap = "panel_cap";
inline constexpr const char* kBlockCap = "block_cap";
inline constexpr const char* kInner = "inner_flagged";
}  // namespace flag

struct EvalReport {
  Cx value{0.0, 0.0};
  double err_estimate = 0.0;
  std::int64_t evaluations = 0;
  std::vector<std::string> flags;

  bool clean() const { return flags.empty(); }
  void add_flag(const std::string& f);
  // Merges the flags of `other` into this report (deduplicated).
  void absorb_flags(const EvalReport& other);
};

struct QuadSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_depth = 10;
  std::int64_t unit_interval_cap = 5000;
  double tail_tol = 1e-12;

  // Throws kDomain when an invariant is violated.
  void validate() const;
};

inline bool is_finite(Cx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

// Throws kOverflow if `v` is not finite; `where` names the operation.
Cx require_finite(Cx v, const char* where);
double require_finite(double v, const char* where);

}  // namespace kk
