#include <doctest.h>

#include <numbers>

#include "kk/quadrature.hpp"
#include "kk/special.hpp"
#include "support.hpp"

using namespace kk;
using kk::test::rel_err;
using kk::test::richardson;

TEST_CASE("ln_gamma known values") {
  CHECK(std::abs(ln_gamma(1.0)) < 1e-15);
  CHECK(std::abs(ln_gamma(2.0)) < 1e-15);
  CHECK(rel_err(ln_gamma(4.5), 2.453736570842442220504142503435716157332) < 1e-14);
  CHECK(rel_err(ln_gamma(0.5), 0.5 * std::log(std::numbers::pi)) < 1e-14);
  CHECK(rel_err(ln_gamma(171.5), 709.143163030928242272363904617) < 1e-14);
  CHECK_THROWS_AS(ln_gamma(0.0), Error);
  CHECK_THROWS_AS(ln_gamma(-1.5), Error);
}

TEST_CASE("digamma values and recurrence") {
  constexpr double euler_gamma = 0.57721566490153286061;
  CHECK(rel_err(digamma(1.0), -euler_gamma) < 1e-14);
  CHECK(rel_err(digamma(2.0), 1.0 - euler_gamma) < 1e-14);
  CHECK_THROWS_AS(digamma(0.0), Error);
  for (double x = 0.1; x <= 100.0; x *= 1.37)
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-12);
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(3.0, 4) == 360.0);
  CHECK(pochhammer(2.7, 0) == 1.0);
  CHECK(pochhammer(-2.0, 4) == 0.0);
}

TEST_CASE("beta values and consistency") {
  CHECK(rel_err(beta(2.0, 3.0), 1.0 / 12.0) < 1e-14);
  CHECK(rel_err(beta(1.0, 1.0), 1.0) < 1e-14);
  CHECK(rel_err(beta(0.5, 0.5), std::numbers::pi) < 1e-14);
  CHECK_THROWS_AS(beta(0.0, 1.0), Error);
  for (double p : {0.3, 1.0, 2.5, 7.0}) {
    for (double q : {0.6, 1.0, 3.0}) {
      const double viagamma = std::exp(ln_gamma(p) + ln_gamma(q) - ln_gamma(p + q));
      CHECK(rel_err(beta(p, q), viagamma) < 1e-13);
      const auto quad = integrate_unit(
          [&](double t, double tc) { return Cx{std::exp((p - 1) * std::log(t) + (q - 1) * std::log(tc))}; });
      CHECK(rel_err(quad.value, beta(p, q)) < 1e-10);
    }
  }
}

TEST_CASE("kummer series known values") {
  CHECK(rel_err(kummer_m_series(1.3, 2.1, 0.0).value, 1.0) < 1e-16);
  CHECK(rel_err(kummer_m_series(1.0, 1.0, 1.0).value, std::exp(1.0)) < 1e-14);
  CHECK(rel_err(kummer_m_series(1.0, 2.0, 1.0).value, std::exp(1.0) - 1.0) < 1e-14);
  CHECK_THROWS_AS(kummer_m_series(1.0, -2.0, 1.0), Error);
  CHECK_THROWS_AS(kummer_m_series(1.0, 0.0, 1.0), Error);
}

TEST_CASE("kummer M(a, a, z) = exp(z) on a disk") {
  for (double r : {0.5, 2.0, 5.0}) {
    for (int k = 0; k < 8; ++k) {
      const Cx z = std::polar(r, k * std::numbers::pi / 4.0);
      CHECK(rel_err(kummer_m_series(1.7, 1.7, z).value, std::exp(z)) < 1e-12);
      CHECK(rel_err(kummer_m(0.4, 0.4, z).value, std::exp(z)) < 1e-12);
    }
  }
}

TEST_CASE("kummer integral route") {
  CHECK(rel_err(kummer_m_integral(1.0, 2.0, 1.0).value, std::exp(1.0) - 1.0) < 1e-12);
  const Cx s = kummer_m_series(0.5, 1.7, -0.3).value;
  CHECK(rel_err(kummer_m_integral(0.5, 1.7, -0.3).value, s) < 1e-10);
  CHECK_THROWS_AS(kummer_m_integral(2.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(kummer_m_integral(0.0, 1.0, 1.0), Error);

  for (double a : {0.5, 1.0, 2.3})
    for (double d : {0.7, 1.0, 2.0})
      for (Cx z : {Cx{-2.0}, Cx{0.5}, Cx{0.0, 0.5}, Cx{-1.0, 0.3}, Cx{4.0, -3.0}}) {
        const Cx ser = kummer_m_series(a, a + d, z).value;
        const Cx itg = kummer_m_integral(a, a + d, z).value;
        CHECK(std::abs(ser - itg) <= 1e-10 * (1.0 + std::abs(ser)));
      }
}

TEST_CASE("kummer transformed evaluation matches the plain series") {
  for (Cx z : {Cx{-3.0}, Cx{-0.5, 1.0}, Cx{-8.0, 2.0}}) {
    CHECK(rel_err(kummer_m(0.8, 2.3, z).value, kummer_m_series(0.8, 2.3, z).value) < 1e-11);
  }
}

TEST_CASE("kdf trivial values") {
  const KdFSpec spec = dm_da_spec(1.0, 2.0);
  const auto r = kdf_eval(spec, 0.0, 0.0);
  CHECK(rel_err(r.value, 1.0) < 1e-16);

  KdFSpec zero_tops;
  zero_tops.H = {0.0};
  zero_tops.A = {0.0};
  zero_tops.B = {0.0};
  zero_tops.G = {1.5};
  zero_tops.C = {2.0};
  zero_tops.D = {2.5};
  for (Cx x : {Cx{0.7}, Cx{-2.0, 1.0}})
    CHECK(rel_err(kdf_eval(zero_tops, x, 0.3 * x).value, 1.0) < 1e-16);
}

TEST_CASE("kdf rejects nonpositive integer denominators") {
  KdFSpec bad;
  bad.G = {-1.0};
  CHECK_THROWS_AS(kdf_eval(bad, 0.1, 0.1), Error);
}

TEST_CASE("kdf divergence is reported") {
  // Both Pochhammer tops dominate, so blocks grow without bound.
  KdFSpec grows;
  grows.H = {1.0};
  grows.A = {1.0, 1.0};
  grows.B = {1.0, 1.0};
  CHECK_THROWS_AS(kdf_eval(grows, 2.0, 2.0), Error);
}

TEST_CASE("parameter derivatives of M") {
  CHECK(std::abs(dM_da(1.0, 2.0, 0.0).value) == 0.0);
  CHECK(std::abs(dM_db(1.0, 2.0, 0.0).value) == 0.0);
  CHECK(rel_err(dM_da(1.0, 2.0, 0.5).value, 0.3232409123032297281906111257217019652463) < 1e-13);
  CHECK(rel_err(dM_db(1.0, 2.0, 0.5).value, -0.1661012119461454919557972381705278265683) < 1e-13);

  // The derivative spec evaluated directly reproduces dM_da.
  const Cx direct = 0.5 / 2.0 * kdf_eval(dm_da_spec(1.0, 2.0), 0.5, 0.5).value;
  CHECK(rel_err(direct, dM_da(1.0, 2.0, 0.5).value) < 1e-14);

  for (auto [a, b] : {std::pair{1.0, 2.0}, std::pair{0.7, 1.9}, std::pair{2.0, 3.5}}) {
    for (Cx z : {Cx{0.5}, Cx{-0.5}, Cx{0.0, 0.5}, Cx{0.0, -0.5}, Cx{-1.0}}) {
      const Cx fa = richardson([&](double x) { return kummer_m_series(x, b, z).value; }, a);
      const Cx fb = richardson([&](double x) { return kummer_m_series(a, x, z).value; }, b);
      CHECK(rel_err(dM_da(a, b, z).value, fa) < 1e-6);
      CHECK(rel_err(dM_db(a, b, z).value, fb) < 1e-6);
    }
  }
}

TEST_CASE("no non-finite values escape") {
  CHECK_THROWS_AS(kummer_m_series(1.0, 2.0, 800.0), Error);
  CHECK_THROWS_AS(pochhammer(1000.0, 400), Error);
}

TEST_CASE("large imaginary arguments avoid series cancellation") {
  struct Ref {
    Cx z, m, da, db;
  };
  const Ref refs[] = {
      {{2.0, 40.0},
       {0.02897642103851727320377697, -0.002833170876961666725444035},
       {0.1653256085994210541049384, -0.01665462022482067902527481},
       {-0.1198934298107603499409453, -0.02289297740908775455453857}},
      {{-3.0, -60.0},
       {-0.003559941510370022211847946, -0.004489164375687834683472629},
       {0.007716550741184438172573814, 0.02222867226800860802259333},
       {-0.00294432886510894063076678, -0.003149820775864355206157304}},
  };
  for (const auto& r : refs) {
    CAPTURE(r.z);
    const auto m = kummer_m(1.5, 3.2, r.z);
    CHECK(rel_err(m.value, r.m) < 1e-10);
    CHECK(m.err_estimate < 1e-10 * std::abs(r.m));
    CHECK(rel_err(dM_da(1.5, 3.2, r.z).value, r.da) < 1e-10);
    CHECK(rel_err(dM_db(1.5, 3.2, r.z).value, r.db) < 1e-10);
  }
}
