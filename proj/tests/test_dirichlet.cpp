#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "kk/dirichlet.hpp"
#include "support.hpp"

using namespace kk;
using kk::test::rel_err;

namespace {

const KKParams p1{1.0, 2.5, 0.25, 0.5, 1.0};
const KKParams p2{0.8, 2.0, 0.3, 0.3, 0.5};

CoeffFn scaled_geometric(double eps) {
  CoeffFn k = geometric_coeffs(0.5);
  k.eval = [eps](double u) { return eps * std::pow(0.5, u); };
  k.deriv = [eps](double u) { return eps * std::log(0.5) * std::pow(0.5, u); };
  k.ratio_bound = [](std::int64_t) { return 0.5; };
  return k;
}

}  // namespace

TEST_CASE("exponent p_t") {
  const KKParams q{1.0, 3.0, 1.0, 2.0, 1.0};
  CHECK(pt(q, -1.0, 0.5).value.real() == doctest::Approx(2.0 * std::log(2.0) + 0.5));
  const KKParams flat{1.0, 2.0, 0.0, 0.0, 1.0};
  for (double t : {0.1, 0.5, 0.9}) CHECK(rel_err(pt(flat, -1.0, t).value, t) < 1e-15);
  CHECK(pt(p1, -0.25, 0.3).real_part > 0.0);
  CHECK(rel_err(pt(p1, -0.25, 0.4).value, 0.4567790889100364370972603270179182515821) < 1e-14);
  CHECK_THROWS_AS(pt(p1, -0.25, 0.0), Error);
  CHECK_THROWS_AS(pt(p1, -0.25, 1.0), Error);
  CHECK(growth_constant(p1) == doctest::Approx(0.3465735902799726547).epsilon(1e-14));
  CHECK(growth_constant(KKParams{1.0, 2.0, 0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("positivity of Re p_t inside the strip") {
  for (const KKParams& p : {p1, p2, KKParams{1.0, 2.0, 0.0, 0.0, 1.0}, KKParams{1.0, 2.5, 0.0, 0.5, -2.0}}) {
    for (double re : {-0.6, -0.2, -0.01, 0.01, 0.2, 0.6}) {
      if (!(p.zeta * re < 0.0)) continue;
      for (double t = 0.01; t < 1.0; t += 0.049) {
        const auto v = pt(p, Cx{re, 0.7}, t);
        CHECK(v.real_part > 0.0);
        CHECK(v.growth_margin > 0.0);
      }
    }
  }
}

TEST_CASE("counting sum basics") {
  const CoeffFn g = geometric_coeffs(0.5);
  CHECK(counting_sum(p1, g, 0.7).value == Cx{});
  const KKParams flat{1.0, 2.0, 0.0, 0.0, 0.0};
  CHECK(rel_err(counting_sum(flat, geometric_coeffs(1.0), 2.7).value, 2.0) < 1e-13);
  CHECK(rel_err(counting_sum(p1, g, 5.5).value, 3.816622980902217627800135047179366080807) < 1e-10);
  CHECK_THROWS_AS(counting_sum(p1, g, -1.0), Error);
}

TEST_CASE("counting sum integral form equals the weighted sum") {
  const KKParams grid[] = {p1, p2, {1.0, 2.0, 0.0, 0.0, 1.0}, {0.5, 3.0, 0.0, 1.2, 0.0}, {2.0, 2.5, 0.5, 0.5, 0.0}};
  for (const char* spec : {"geometric:0.5", "geometric:-0.6", "expdecay:1.3", "polygeom:0.5,2", "delta", "zero"}) {
    const CoeffFn k = parse_coeff_family(spec);
    for (const KKParams& p : grid) {
      for (double s : {0.5, 1.5, 3.2, 7.9}) {
        CAPTURE(spec);
        CAPTURE(s);
        const double want = counting_sum_weighted(p, k, s);
        const Cx got = counting_sum(p, k, s).value;
        if (want == 0.0) {
          CHECK(std::abs(got) < 1e-14);
        } else {
          CHECK(rel_err(got, want) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("Dirichlet direct sum") {
  const Cx z{-0.3, 0.2};
  const auto lead = dirichlet_direct(p1, zero_coeffs().with_kappa0(1.0), z, 0.4);
  CHECK(rel_err(lead.value, std::exp(log_weight(p1, 0.0))) < 1e-15);

  // alpha = beta = 0: W constant, geometric closed form.
  const KKParams flat{1.0, 2.5, 0.0, 0.0, 1.0};
  const double w = std::exp(log_weight(flat, 0.0));
  const Cx zf{-0.15, 0.2};
  for (double x : {0.5, -0.8}) {
    for (double t : {0.2, 0.7}) {
      const Cx q = x * std::exp(-pt(flat, zf, t).value);
      const Cx want = w / (1.0 - q);
      CHECK(rel_err(dirichlet_direct(flat, geometric_coeffs(x).with_kappa0(1.0), zf, t).value, want) < 1e-13);
    }
  }

  CHECK(rel_err(dirichlet_direct(p1, geometric_coeffs(0.5), -0.25, 0.4).value,
                1.486539550889805796588556372789524022825) < 1e-10);
  CHECK_THROWS_AS(dirichlet_direct(p1, geometric_coeffs(0.5), 0.25, 0.4), Error);
  CHECK_THROWS_AS(dirichlet_direct(p1, geometric_coeffs(0.5), -0.25, 1.2), Error);
}

TEST_CASE("Dirichlet sum is linear in the coefficients past the lead") {
  const Cx z{-0.2, 0.1};
  const Cx base = dirichlet_direct(p1, scaled_geometric(0.0), z, 0.35).value;
  const Cx unit = dirichlet_direct(p1, scaled_geometric(1.0), z, 0.35).value - base;
  for (double eps : {1e-6, 1e-3, 0.3}) {
    const Cx got = dirichlet_direct(p1, scaled_geometric(eps), z, 0.35).value - base;
    CHECK(rel_err(got, eps * unit) < 1e-10);
  }
}

TEST_CASE("Cahen route") {
  const auto lead = dirichlet_cahen(p1, zero_coeffs().with_kappa0(1.0), -0.25, 0.4);
  CHECK(lead.value == Cx{std::exp(log_weight(p1, 0.0))});

  // r int_0^inf e^{-rt} sum_{n <= t} a_n dt with a_n = 0.5^n, lambda_n = n, r = 1.
  const auto toy = integrate_semiinf_unitwise(
      [](std::int64_t n, double s) { return Cx{(1.0 - std::pow(0.5, static_cast<double>(n))) * std::exp(-s)}; },
      1.0);
  CHECK(rel_err(toy.value, 0.2253996735605640789661911692888623385609) < 1e-10);

  const auto c = dirichlet_cahen(p1, geometric_coeffs(0.5), -0.25, 0.4);
  CHECK(rel_err(c.value, 1.486539550889805796588556372789524022825) < 1e-6);
  CHECK(c.clean());
}

TEST_CASE("Cahen route rejects a nonpositive margin") {
  CountingSums sums(weighted_density(p1, geometric_coeffs(0.5)), QuadSpec{});
  try {
    detail::dirichlet_cahen_at(p1, geometric_coeffs(0.5), 0.25, 0.5, 0.5, QuadSpec{}, sums);
    FAIL("expected a divergence error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDivergence);
  }
}

TEST_CASE("Cahen matches direct within combined estimates") {
  const CoeffFn g = geometric_coeffs(0.5);
  for (double z : {-0.1, -0.4}) {
    for (double t : {0.3, 0.75}) {
      const auto d = dirichlet_direct(p1, g, z, t);
      const auto c = dirichlet_cahen(p1, g, z, t);
      CHECK(std::abs(d.value - c.value) <= d.err_estimate + c.err_estimate + 1e-13 * std::abs(d.value));
    }
  }
}

TEST_CASE("series via the Dirichlet route") {
  const Cx z{-0.3, 0.4};
  const QuadSpec q;
  CHECK(rel_err(kk_via_dirichlet(p1, delta_coeffs(), z, q, InnerRoute::kDirect).value, kummer_m(p1.a, p1.b, z).value) <
        1e-12);
  const Cx direct = kk_direct(p1, geometric_coeffs(0.5), -0.25).value;
  CHECK(rel_err(kk_via_dirichlet(p1, geometric_coeffs(0.5), -0.25, q, InnerRoute::kDirect).value, direct) < 1e-8);
  const auto cahen = kk_via_dirichlet(p1, geometric_coeffs(0.5), -0.25, q, InnerRoute::kCahen);
  CHECK(rel_err(cahen.value, direct) < 1e-5);
  CHECK(cahen.clean());
  CHECK_THROWS_AS(kk_via_dirichlet(p1, geometric_coeffs(0.5), 0.0, q, InnerRoute::kDirect), Error);
}

TEST_CASE("flagged inner evaluations flag the outer result") {
  QuadSpec tight;
  tight.unit_interval_cap = 3;
  const auto r = kk_via_dirichlet(KKParams{1.0, 2.0, 0.0, 0.0, 1.0}, geometric_coeffs(0.5), -0.3, tight,
                                  InnerRoute::kCahen);
  CHECK_FALSE(r.clean());
  CHECK(std::find(r.flags.begin(), r.flags.end(), std::string(flag::kInner)) != r.flags.end());
}
