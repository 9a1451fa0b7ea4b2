#include "kk/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "kk/detail/summation.hpp"
#include "kk/quadrature.hpp"

namespace kk {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Lanczos approximation, g = 7, nine terms.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double ln_gamma_lanczos(double x) {
  x -= 1.0;
  double acc = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  return kHalfLog2Pi + (x + 0.5) * std::log(t) - t + std::log(acc);
}

// Stirling series, accurate to a few ulp for x >= 10.
double ln_gamma_stirling(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  const double series =
      r * (1.0 / 12 +
           r2 * (-1.0 / 360 +
                 r2 * (1.0 / 1260 +
                       r2 * (-1.0 / 1680 + r2 * (1.0 / 1188 + r2 * (-691.0 / 360360 + r2 / 156))))));
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

void require_positive(double x, const char* where) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw Error(ErrorKind::kDomain, std::string(where) + ": argument must be positive and finite");
}

}  // namespace

double ln_gamma(double x) {
  require_positive(x, "ln_gamma");
  if (x < 0.5) return ln_gamma(x + 1.0) - std::log(x);
  if (x < 10.0) return ln_gamma_lanczos(x);
  return ln_gamma_stirling(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r2 = 1.0 / (x * x);
  const double series =
      r2 * (1.0 / 12 -
            r2 * (1.0 / 120 -
                  r2 * (1.0 / 252 -
                        r2 * (1.0 / 240 - r2 * (1.0 / 132 - r2 * (691.0 / 32760 - r2 / 12))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double pochhammer(double a, std::int64_t n) {
  if (n < 0) throw Error(ErrorKind::kDomain, "pochhammer: n must be nonnegative");
  double p = 1.0;
  for (std::int64_t k = 0; k < n; ++k) {
    p *= a + static_cast<double>(k);
    if (p == 0.0) return 0.0;
  }
  return require_finite(p, "pochhammer");
}

double beta(double p, double q) {
  require_positive(p, "beta");
  require_positive(q, "beta");
  return require_finite(std::exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q)), "beta");
}

double gamma_ratio(double num, double den1, double den2) {
  return require_finite(std::exp(ln_gamma(num) - ln_gamma(den1) - ln_gamma(den2)), "gamma_ratio");
}

EvalReport kummer_m_series(double a, double b, Cx z, double tol) {
  if (detail::is_nonpositive_integer(b))
    throw Error(ErrorKind::kDomain, "kummer_m_series: b must not be a nonpositive integer");
  if (!is_finite(z) || !std::isfinite(a) || !std::isfinite(b))
    throw Error(ErrorKind::kDomain, "kummer_m_series: non-finite argument");

  EvalReport rep;
  detail::ComplexNeumaierSum sum;
  Cx term{1.0, 0.0};
  sum.add(term);
  double abs_sum = 1.0;
  double tail = 0.0;
  bool converged = false;
  std::int64_t k = 0;  // index of the last term added
  for (; k < kSeriesTermCap;) {
    const double n = static_cast<double>(k);
    term *= (a + n) / (b + n) * z / (n + 1.0);
    ++k;
    if (!is_finite(term)) throw Error(ErrorKind::kOverflow, "kummer_m_series: term overflow");
    sum.add(term);
    abs_sum += std::abs(term);
    if (term == Cx{}) {  // z == 0 or a hit a nonpositive integer
      tail = 0.0;
      converged = true;
      break;
    }
    const double kd = static_cast<double>(k);
    if (a + kd > 0.0 && b + kd > 0.0) {
      // For j >= k, |t_{j+1}/t_j| <= |z| max(1, (a+k)/(b+k)) / (k+1).
      const double r = std::abs(z) * std::max(1.0, (a + kd) / (b + kd)) / (kd + 1.0);
      if (r < 1.0) {
        tail = std::abs(term) * r / (1.0 - r);
        if (tail <= tol * std::abs(sum.value())) {
          converged = true;
          break;
        }
      } else {
        tail = std::numeric_limits<double>::infinity();
      }
    }
  }
  rep.value = sum.value();
  rep.evaluations = k + 1;
  rep.err_estimate = 4.0 * kEps * abs_sum + (converged ? tail : std::abs(term));
  if (!converged) rep.add_flag(flag::kTermCap);
  return rep;
}

EvalReport kummer_m_integral(double a, double b, Cx z, const QuadSpec& quad) {
  if (!(a > 0.0) || !(b > a))
    throw Error(ErrorKind::kDomain, "kummer_m_integral: requires b > a > 0");
  const double pre = gamma_ratio(b, b - a, a);
  auto rep = integrate_unit(
      [&](double t, double tc) {
        return std::exp(z * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log(tc));
      },
      quad);
  rep.value = require_finite(pre * rep.value, "kummer_m_integral");
  rep.err_estimate *= pre;
  return rep;
}

namespace {

// Past this relative roundoff the series has cancelled badly (large |Im z|)
// and the Euler integral is tried as well.
constexpr double kCancellationTol = 1e-12;

bool cancelled(const EvalReport& r) { return r.err_estimate > kCancellationTol * std::abs(r.value); }

// Gamma(b)/(Gamma(a)Gamma(b-a)) int_0^1 e^{zt} t^{a-1} (1-t)^{b-a-1} g(t, 1-t) dt
EvalReport euler_integral(double a, double b, Cx z, const std::function<double(double, double)>& g) {
  const double pre = gamma_ratio(b, b - a, a);
  auto rep = integrate_unit(
      [&](double t, double tc) {
        return g(t, tc) * std::exp(z * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log(tc));
      },
      QuadSpec{});
  rep.value *= pre;
  rep.err_estimate *= pre;
  return rep;
}

EvalReport prefer_integral(EvalReport series, double a, double b, Cx z,
                           const std::function<double(double, double)>& g) {
  if (!cancelled(series) || !(a > 0.0) || !(b > a)) return series;
  auto alt = euler_integral(a, b, z, g);
  alt.evaluations += series.evaluations;
  if (!alt.clean() || !is_finite(alt.value) || alt.err_estimate >= series.err_estimate) return series;
  return alt;
}

}  // namespace

EvalReport kummer_m(double a, double b, Cx z, double tol) {
  EvalReport rep;
  if (z.real() >= 0.0) {
    rep = kummer_m_series(a, b, z, tol);
  } else {
    rep = kummer_m_series(b - a, b, -z, tol);
    const Cx ez = std::exp(z);
    rep.value *= ez;
    rep.err_estimate *= std::abs(ez);
  }
  return prefer_integral(std::move(rep), a, b, z, [](double, double) { return 1.0; });
}

void KdFSpec::validate() const {
  for (const auto* list : {&G, &C, &D})
    for (double v : *list)
      if (detail::is_nonpositive_integer(v))
        throw Error(ErrorKind::kDomain, "kdf_eval: denominator parameter is a nonpositive integer");
}

namespace {

// Ratio of Pochhammer increments: prod(num_i + k) / prod(den_i + k).
double pochhammer_step(const std::vector<double>& num, const std::vector<double>& den, double k) {
  double r = 1.0;
  for (double v : num) r *= v + k;
  for (double v : den) r /= v + k;
  return r;
}

}  // namespace

EvalReport kdf_eval(const KdFSpec& spec, Cx x, Cx y, double tol) {
  spec.validate();
  if (!is_finite(x) || !is_finite(y)) throw Error(ErrorKind::kDomain, "kdf_eval: non-finite argument");

  // Factor c^{m+n} out of x^m y^n into the shared Pochhammer ratio so the
  // single-index sequences stay bounded.
  const double c = std::max({1.0, std::abs(x), std::abs(y)});
  const Cx xs = x / c, ys = y / c;

  std::vector<Cx> alpha{Cx{1.0}}, beta{Cx{1.0}};
  alpha.reserve(kKdFBlockCap);
  beta.reserve(kKdFBlockCap);
  double shared = 1.0;  // ((H))_k / ((G))_k * c^k

  EvalReport rep;
  detail::ComplexNeumaierSum sum;
  sum.add(Cx{1.0});
  int quiet = 0;
  double abs_total = 1.0;  // sum of |terms|, for the roundoff part of the estimate
  double prev_block = 1.0;
  double last_blocks[2] = {0.0, 0.0};
  bool converged = false;
  int k = 1;
  for (; k < kKdFBlockCap; ++k) {
    const double km1 = static_cast<double>(k - 1);
    alpha.push_back(alpha.back() * pochhammer_step(spec.A, spec.C, km1) * xs / (km1 + 1.0));
    beta.push_back(beta.back() * pochhammer_step(spec.B, spec.D, km1) * ys / (km1 + 1.0));
    shared *= pochhammer_step(spec.H, spec.G, km1) * c;
    detail::ComplexNeumaierSum diag;
    double diag_abs = 0.0;
    for (int m = 0; m <= k; ++m) {
      const Cx t = alpha[m] * beta[k - m];
      diag.add(t);
      diag_abs += std::abs(t);
    }
    const Cx block = shared * diag.value();
    abs_total += std::abs(shared) * diag_abs;
    if (!is_finite(block)) throw Error(ErrorKind::kDivergence, "kdf_eval: block overflow");
    sum.add(block);
    rep.evaluations += k + 1;

    const double mag = std::abs(block);
    last_blocks[0] = last_blocks[1];
    last_blocks[1] = mag;
    const double scale = std::max(std::abs(sum.value()), std::numeric_limits<double>::min());
    if (mag <= tol * scale && mag <= prev_block)
      ++quiet;
    else
      quiet = 0;
    prev_block = mag;
    if (quiet >= 3) {
      converged = true;
      break;
    }
  }
  rep.value = sum.value();
  rep.err_estimate = prev_block + 8.0 * kEps * abs_total;
  if (!converged) {
    if (last_blocks[1] >= last_blocks[0])
      throw Error(ErrorKind::kDivergence, "kdf_eval: block magnitudes not decreasing at the block cap");
    rep.add_flag(flag::kBlockCap);
  }
  return rep;
}

KdFSpec dm_da_spec(double a, double b) {
  return KdFSpec{.H = {a + 1.0}, .G = {2.0, b + 1.0}, .A = {1.0}, .B = {1.0, a}, .C = {}, .D = {a + 1.0}};
}

KdFSpec dm_db_spec(double a, double b) {
  return KdFSpec{.H = {a + 1.0}, .G = {2.0, b + 1.0}, .A = {1.0}, .B = {1.0, b}, .C = {}, .D = {b + 1.0}};
}

namespace {

void check_derivative_params(double b, const char* where) {
  if (!(b > 0.0) || detail::is_nonpositive_integer(b))
    throw Error(ErrorKind::kDomain, std::string(where) + ": requires b > 0");
}

EvalReport dm_da_direct(double a, double b, Cx z, double tol) {
  if (z == Cx{}) return {};
  auto rep = kdf_eval(dm_da_spec(a, b), z, z, tol);
  const Cx pre = z / b;
  rep.value *= pre;
  rep.err_estimate *= std::abs(pre);
  return rep;
}

EvalReport dm_db_direct(double a, double b, Cx z, double tol) {
  if (z == Cx{}) return {};
  auto rep = kdf_eval(dm_db_spec(a, b), z, z, tol);
  const Cx pre = -a * z / (b * b);
  rep.value *= pre;
  rep.err_estimate *= std::abs(pre);
  return rep;
}

bool use_kummer_transform(double a, double b, Cx z) { return z.real() < 0.0 && b - a > 0.0; }

}  // namespace

// With M(a, b, z) = e^z M(c, b, -z), c = b - a:
//   dM/da = -e^z M_1(c, b, -z),   dM/db = e^z (M_1 + M_2)(c, b, -z).
// Under the Euler integral, d/da brings down log t - log(1-t) - psi(a) + psi(b-a)
// and d/db brings down log(1-t) - psi(b-a) + psi(b).

EvalReport dM_da(double a, double b, Cx z, double tol) {
  check_derivative_params(b, "dM_da");
  EvalReport rep;
  if (!use_kummer_transform(a, b, z)) {
    rep = dm_da_direct(a, b, z, tol);
  } else {
    rep = dm_da_direct(b - a, b, -z, tol);
    const Cx ez = std::exp(z);
    rep.value *= -ez;
    rep.err_estimate *= std::abs(ez);
  }
  if (!cancelled(rep) || !(a > 0.0) || !(b > a)) return rep;
  const double shift = digamma(b - a) - digamma(a);
  return prefer_integral(std::move(rep), a, b, z,
                         [shift](double t, double tc) { return std::log(t) - std::log(tc) + shift; });
}

namespace {

EvalReport finish_dm_db(EvalReport rep, double a, double b, Cx z) {
  if (!cancelled(rep) || !(a > 0.0) || !(b > a)) return rep;
  const double shift = digamma(b) - digamma(b - a);
  return prefer_integral(std::move(rep), a, b, z, [shift](double, double tc) { return std::log(tc) + shift; });
}

}  // namespace

EvalReport dM_db(double a, double b, Cx z, double tol) {
  check_derivative_params(b, "dM_db");
  if (!use_kummer_transform(a, b, z)) return finish_dm_db(dm_db_direct(a, b, z, tol), a, b, z);
  const double c = b - a;
  auto m1 = dm_da_direct(c, b, -z, tol);
  const auto m2 = dm_db_direct(c, b, -z, tol);
  const Cx ez = std::exp(z);
  m1.value = ez * (m1.value + m2.value);
  m1.err_estimate = std::abs(ez) * (m1.err_estimate + m2.err_estimate);
  m1.evaluations += m2.evaluations;
  m1.absorb_flags(m2);
  return finish_dm_db(std::move(m1), a, b, z);
}

}  // namespace kk
