#pragma once

// Scalar special-function kernels on the positive real parameter axis:
// log-gamma, digamma, Pochhammer, Beta, the Kummer function M(a, b, z) by
// power series and by its Euler integral, a Kampe de Feriet double-series
// evaluator, and the first/second parameter derivatives of M.

#include <vector>

#include "kk/core.hpp"

namespace kk {

double ln_gamma(double x);
double digamma(double x);
double pochhammer(double a, std::int64_t n);
double beta(double p, double q);

// Sign-aware ln Gamma(x) - ln Gamma(y) - ln Gamma(w) for positive arguments,
// exponentiated once. Used for every Gamma ratio so that Gamma(170+) never
// appears on its own.
double gamma_ratio(double num, double den1, double den2);

inline constexpr double kSeriesTol = 1e-17;
inline constexpr std::int64_t kSeriesTermCap = 10000;

// M(a, b, z) by its defining power series with compensated accumulation.
EvalReport kummer_m_series(double a, double b, Cx z, double tol = kSeriesTol);

// M(a, b, z) via Gamma(b)/(Gamma(b-a)Gamma(a)) * int_0^1 e^{zt} t^{a-1}(1-t)^{b-a-1} dt.
EvalReport kummer_m_integral(double a, double b, Cx z, const QuadSpec& quad = {});

// General-purpose M used by the series and integral engines: the power series
// directly for Re z >= 0, and e^z M(b-a, b, -z) for Re z < 0 where the plain
// series would cancel catastrophically at large |z|.
EvalReport kummer_m(double a, double b, Cx z, double tol = kSeriesTol);

// Parameters of F^{h:a;b}_{g:c;d}[(H):(A);(B) / (G):(C);(D) | x, y].
struct KdFSpec {
  std::vector<double> H, G, A, B, C, D;

  // Throws kDomain if an entry of G, C or D is a nonpositive integer.
  void validate() const;
};

inline constexpr int kKdFBlockCap = 600;

// Double series summed by anti-diagonal blocks m + n = k. Stops once three
// consecutive, non-increasing blocks fall below tol * |sum|.
EvalReport kdf_eval(const KdFSpec& spec, Cx x, Cx y, double tol = kSeriesTol);

// The Kampe de Feriet closed forms for dM/da and dM/db:
//   dM/da = (z/b)     F[a+1 : 1; 1, a / 2, b+1 : -; a+1 | z, z]
//   dM/db = -(az/b^2) F[a+1 : 1; 1, b / 2, b+1 : -; b+1 | z, z]
KdFSpec dm_da_spec(double a, double b);
KdFSpec dm_db_spec(double a, double b);

// For Re z < 0 (and b > a) both are evaluated after Kummer's transformation,
// which keeps the double series free of cancellation; the KdF forms above are
// used on the transformed parameters.
EvalReport dM_da(double a, double b, Cx z, double tol = kSeriesTol);
EvalReport dM_db(double a, double b, Cx z, double tol = kSeriesTol);

}  // namespace kk
