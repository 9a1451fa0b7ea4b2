#include <doctest.h>

#include <cmath>

#include "kk/series.hpp"
#include "support.hpp"

using namespace kk;
using kk::test::rel_err;

namespace {

const KKParams p1{1.0, 2.5, 0.25, 0.5, 1.0};
const KKParams p2{0.8, 2.0, 0.3, 0.3, 0.5};

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(p1.validate());
  CHECK_THROWS_AS((KKParams{2.0, 1.0, 0.0, 0.0, 0.0}.validate()), Error);
  CHECK_THROWS_AS((KKParams{0.0, 1.0, 0.0, 0.0, 0.0}.validate()), Error);
  CHECK_THROWS_AS((KKParams{1.0, 2.0, 0.5, 0.25, 0.0}.validate()), Error);
  CHECK_THROWS_AS((KKParams{1.0, 2.0, -0.1, 0.25, 0.0}.validate()), Error);
  CHECK_THROWS_AS((KKParams{1.0, 2.0, 0.0, 0.5, 0.0}.validate(true)), Error);
  CHECK_THROWS_AS((KKParams{1.0, std::nan(""), 0.0, 0.0, 0.0}.validate()), Error);
}

TEST_CASE("coefficient mini-language") {
  CHECK(parse_coeff_family("geometric:0.5").at(3) == doctest::Approx(0.125));
  CHECK(parse_coeff_family("geometric:-0.5").at(3) == doctest::Approx(-0.125));
  CHECK(parse_coeff_family("expdecay:1").root_limit == doctest::Approx(std::exp(-1.0)));
  CHECK(parse_coeff_family("polygeom:0.5,2").at(3) == doctest::Approx(9.0 / 8.0));
  CHECK(parse_coeff_family("delta").kappa0 == 1.0);
  CHECK(parse_coeff_family("zero").at(5) == 0.0);
  CHECK(parse_coeff_family("geometric:0.5").kappa0 == 0.0);
  for (const char* bad : {"", "geometric", "geometric:", "geometric:x", "geometric:0.5,1", "polygeom:0.5",
                          "polygeom:0.5,-1", "expdecay:1:2", "fourier:1", "delta:1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_coeff_family(bad), Error);
  }
}

TEST_CASE("family derivatives match finite differences") {
  for (const char* spec : {"geometric:0.5", "geometric:-0.6", "expdecay:1.3", "polygeom:0.5,2", "polygeom:-0.4,1.5",
                           "delta", "zero"}) {
    const CoeffFn k = parse_coeff_family(spec);
    for (double u : {0.2, 0.3, 0.8, 1.7, 4.2}) {
      for (double h : {1e-3, 1e-4}) {
        CAPTURE(spec);
        CAPTURE(u);
        const double fd = (k.eval(u + h) - k.eval(u - h)) / (2.0 * h);
        CHECK(std::abs(k.deriv(u) - fd) <= 100.0 * h * h * (1.0 + std::abs(k.eval(u))));
      }
    }
  }
}

TEST_CASE("convergence regions") {
  const CoeffFn e1 = expdecay_coeffs(1.0);
  const auto rp = convergence_region(e1, 2.0, RegionKind::kRPrime).re_z_interval(2.0);
  CHECK(rp.first == doctest::Approx(-0.5));
  CHECK(rp.second == doctest::Approx(0.5));
  const auto r = convergence_region(e1, 2.0, RegionKind::kR).re_z_interval(2.0);
  CHECK(r.first == doctest::Approx(-0.5));
  CHECK(r.second == 0.0);
  const auto flipped = convergence_region(geometric_coeffs(0.5), -1.0, RegionKind::kR).re_z_interval(-1.0);
  CHECK(flipped.first == 0.0);
  CHECK(flipped.second == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(convergence_region(geometric_coeffs(1.0), 1.0, RegionKind::kR), Error);
  const auto empty = convergence_region(e1, 0.0, RegionKind::kR).re_z_interval(0.0);
  CHECK(std::isnan(empty.first));
}

TEST_CASE("direct sum trivial cases") {
  const Cx z{-0.4, 0.3};
  CHECK(rel_err(kk_direct(p1, delta_coeffs(), z).value, kummer_m(p1.a, p1.b, z).value) < 1e-15);
  const auto zero = kk_direct(p1, zero_coeffs(), z);
  CHECK(zero.value == Cx{});
  CHECK(zero.clean());
}

TEST_CASE("direct sum against high-precision values") {
  const CoeffFn g = geometric_coeffs(0.5);
  CHECK(rel_err(kk_direct(p1, g, -0.25).value, 0.7430432884182724477398392761902070947471) < 1e-10);
  CHECK(rel_err(kk_direct(p1, g.with_kappa0(1.0), -0.25).value, 1.64980668639400489653133104631417224159) < 1e-10);
  CHECK(rel_err(kk_direct(p2, g, -0.25).value, 0.7728117416622074505533165941682265134729) < 1e-10);
}

TEST_CASE("direct sum region membership") {
  const CoeffFn g = geometric_coeffs(0.5);
  const double edge = std::log(2.0);
  for (double re : {-1.0, -0.7, -0.69, -0.3, 0.0, 0.3, 0.69, 0.7, 1.0}) {
    CAPTURE(re);
    const bool inside = std::abs(re) < edge;
    if (inside) {
      CHECK_NOTHROW(kk_direct(p1, g, Cx{re, 0.2}));
    } else {
      CHECK_THROWS_AS(kk_direct(p1, g, Cx{re, 0.2}), Error);
    }
  }
  CHECK_THROWS_AS(kk_direct(p1, g, Cx{edge, 0.0}), Error);
}

TEST_CASE("bound examples and inequality") {
  const CoeffFn g1 = geometric_coeffs(0.5).with_kappa0(1.0);
  KKParams flat{1.0, 2.0, 0.0, 0.0, 0.0};
  CHECK(kk_bound(flat, g1, 0.0) == doctest::Approx(2.0).epsilon(1e-13));
  KKParams d{1.0, 2.0, 0.0, 0.0, 1.0};
  const double e = std::exp(0.3);
  CHECK(kk_bound(d, g1, -0.3) == doctest::Approx(e / (1.0 - e / 2.0)).epsilon(1e-12));
  CHECK(kk_bound(d, g1, -0.3) == doctest::Approx(4.152509711138799800532).epsilon(1e-12));

  for (const char* spec : {"geometric:0.5", "geometric:-0.7", "expdecay:0.8", "polygeom:0.4,2"}) {
    const CoeffFn k = parse_coeff_family(spec);
    for (const KKParams& p : {p1, p2, d}) {
      for (Cx z : {Cx{-0.2}, Cx{0.2, 1.0}, Cx{-0.1, -3.0}}) {
        if (!convergence_region(k, p.zeta, RegionKind::kRPrime).contains(p.zeta, z)) continue;
        CAPTURE(spec);
        CHECK(std::abs(kk_direct(p, k, z).value) <= kk_bound(p, k, z));
      }
    }
  }
}

TEST_CASE("direct sum truncation is covered by its estimate") {
  KKParams eq{0.7, 1.9, 0.4, 0.4, 0.5};
  for (double w : {0.3, 0.8, -0.6}) {
    const CoeffFn k = geometric_coeffs(w);
    const auto coarse = kk_direct(eq, k, Cx{-0.2, 0.4}, 1e-6);
    const auto fine = kk_direct(eq, k, Cx{-0.2, 0.4}, 1e-16);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.err_estimate);
  }
}
