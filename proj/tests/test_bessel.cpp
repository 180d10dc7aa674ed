#include "hml/bessel.hpp"

#include <doctest.h>

#include <cmath>

using namespace hml;

TEST_SUITE_BEGIN("bessel");

TEST_CASE("series trivial values") {
  CHECK(bessel_j_series(Real(0.0, 128), Real(0.0, 128), Precision(128)).to_double() == 1.0);
  CHECK(bessel_j_series(Real(11.0, 128), Real(0.0, 128), Precision(128)).to_double() == 0.0);
}

TEST_CASE("series against an independent quadrupled-precision evaluation") {
  Real z = pi(512) * 4L;
  Real lo = bessel_j_series(Real(11.0, 128), z.round_to(160), Precision(128));
  Real hi = bessel_j_series(Real(11.0, 512), z, Precision(512));
  CHECK(std::abs((lo - hi).to_double()) < 1e-30);
  // and against mpfr's own Bessel as a fully independent oracle
  mpfr_t ref;
  mpfr_init2(ref, 512);
  mpfr_jn(ref, 11, z.raw(), MPFR_RNDN);
  CHECK(std::abs((hi - Real(0.0, 512)).to_double() - mpfr_get_d(ref, MPFR_RNDN)) <
        1e-30 + std::abs(hi.to_double() - mpfr_get_d(ref, MPFR_RNDN)));
  CHECK(std::abs(hi.to_double() - mpfr_get_d(ref, MPFR_RNDN)) < 1e-30);
  mpfr_clear(ref);
}

TEST_CASE("regime classification partitions z >= 0") {
  for (double nu : {11.0, 49.0, 199.0}) {
    double boundaries[] = {(nu + 1.0) / 4.0,
                           (nu + 1.0) - std::pow(nu + 1.0, 1.0 / 3.0 + kBesselDelta),
                           nu + std::pow(nu, 1.0 / 3.0 + kBesselEps0)};
    CHECK(boundaries[0] < boundaries[1]);
    CHECK(boundaries[1] < boundaries[2]);
    CHECK(classify_bessel_regime(nu, boundaries[0] * 0.9) == BesselRegime::Tiny);
    CHECK(classify_bessel_regime(nu, (boundaries[0] + boundaries[1]) / 2) ==
          BesselRegime::Subtransition);
    CHECK(classify_bessel_regime(nu, (boundaries[1] + boundaries[2]) / 2) ==
          BesselRegime::Transition);
    CHECK(classify_bessel_regime(nu, boundaries[2] * 1.01) == BesselRegime::Oscillatory);
  }
}

TEST_CASE("oscillatory asymptotic agrees with the series within its envelope") {
  Precision prec(128);
  for (double nu : {11.0, 49.0}) {
    double zlo = nu + std::pow(nu, 0.4);
    for (double z : {zlo, zlo * 1.3, 2.0 * nu, 3.0 * nu}) {
      Real se = bessel_j_series(Real(nu, 128), Real(z, 128), prec);
      AsymptoticJ as = bessel_j_oscillatory(Real(nu, 128), Real(z, 128), prec);
      CHECK(std::abs((se - as.value).to_double()) <= as.error_bound.to_double());
    }
  }
  CHECK_THROWS_AS(bessel_j_oscillatory(Real(49.0, 128), Real(40.0, 128), prec),
                  std::domain_error);
}

TEST_CASE("amplitude bound of the asymptotic") {
  // |value| <= sqrt(2/pi) (z^2-nu^2)^{-1/4} * 1.01 + error_bound
  Precision prec(128);
  double nu = 199, z = 260;
  AsymptoticJ as = bessel_j_oscillatory(Real(nu, 128), Real(z, 128), prec);
  double cap = std::sqrt(2.0 / M_PI) * std::pow(z * z - nu * nu, -0.25) * 1.01 +
               as.error_bound.to_double();
  CHECK(std::abs(as.value.to_double()) <= cap);
}

TEST_CASE("dispatcher stays consistent with the series in the series regime") {
  Precision prec(128);
  Real z = pi(160) * 4L;
  Real a = bessel_j(Real(11.0, 128), z.round_to(128), prec).value;
  Real b = bessel_j_series(Real(11.0, 128), z.round_to(128), prec);
  CHECK(a.to_double() == b.to_double());
}

TEST_CASE("tiny-regime decay bound with a fitted constant") {
  // |J_nu(z)| <= C z^2 exp(-14 nu/13), single C across the grid
  Precision prec(128);
  double cfit = 0;
  for (double nu : {11.0, 49.0, 99.0}) {
    for (double frac : {0.2, 0.6, 1.0}) {
      double z = (nu + 1.0) / 4.0 * frac;
      if (z <= 0) continue;
      double j = std::abs(bessel_j_series(Real(nu, 128), Real(z, 128), prec).to_double());
      cfit = std::max(cfit, j / (z * z * std::exp(-14.0 * nu / 13.0)));
    }
  }
  CHECK(cfit < 100.0);
}

TEST_CASE("subtransition decay bound exp(-nu^delta) with fitted C <= 100") {
  Precision prec(128);
  double cfit = 0;
  for (double nu : {11.0, 49.0, 99.0, 199.0}) {
    double zmax = (nu + 1.0) - std::pow(nu + 1.0, 1.0 / 3.0 + kBesselDelta);
    for (double frac : {0.5, 0.8, 1.0}) {
      double z = zmax * frac;
      double j = std::abs(bessel_j_series(Real(nu, 128), Real(z, 128), prec).to_double());
      cfit = std::max(cfit, j / std::exp(-std::pow(nu, kBesselDelta)));
    }
  }
  CHECK(cfit <= 100.0);
}

TEST_CASE("uniform nu^{-1/3} bound and global max location") {
  Precision prec(96);
  for (double nu : {11.0, 49.0}) {
    double best = 0, best_z = 0;
    for (double z = nu - 3 * std::cbrt(nu); z <= nu + 6 * std::cbrt(nu); z += std::cbrt(nu) / 8) {
      double j = std::abs(bessel_j_series(Real(nu, 96), Real(z, 96), prec).to_double());
      if (j > best) { best = j; best_z = z; }
    }
    CHECK(best <= 2.0 * std::pow(nu, -1.0 / 3.0));
    CHECK(std::abs(best_z - nu) <= 5.0 * std::cbrt(nu));
  }
}

TEST_CASE("three-term recurrence residual") {
  Precision prec(128);
  for (double nu : {11.0, 49.0}) {
    for (double z : {nu * 0.8, nu * 1.1, nu * 2.0}) {
      Real a = bessel_j_series(Real(nu - 1, 160), Real(z, 160), Precision(160));
      Real b = bessel_j_series(Real(nu + 1, 160), Real(z, 160), Precision(160));
      Real c = bessel_j_series(Real(nu, 160), Real(z, 160), Precision(160));
      Real resid = a + b - Real(2.0 * nu / z, 160) * c;
      double scale = std::max({std::abs(a.to_double()), std::abs(b.to_double()),
                               std::abs(c.to_double()), 1e-300});
      CHECK(std::abs(resid.to_double()) <= scale * std::ldexp(1.0, -64));
    }
  }
}

TEST_CASE("phase omega closed forms") {
  Precision prec(128);
  for (double nu : {11.0, 49.0, 199.0}) {
    Real nuR(nu, 192);
    Real z = sqrt(Real(2.0, 192)) * nuR;
    Real om = omega_phase(nuR, z, prec);
    Real expect = nuR * (Real(1.0, 192) - pi(192) / 4L) - pi(192) / 4L;
    CHECK(std::abs((om - expect.round_to(128)).to_double()) < 1e-30);
  }
}

TEST_CASE("omega derivatives match finite differences") {
  Precision prec(192);
  double nu = 49, z = 80, h = 1e-6;
  double d1 = (omega_phase(Real(nu, 192), Real(z + h, 192), prec).to_double() -
               omega_phase(Real(nu, 192), Real(z - h, 192), prec).to_double()) /
              (2 * h);
  CHECK(std::abs(d1 - omega_d1(Real(nu, 192), Real(z, 192), prec).to_double()) < 1e-9);
  double d2 = (omega_d1(Real(nu, 192), Real(z + h, 192), prec).to_double() -
               omega_d1(Real(nu, 192), Real(z - h, 192), prec).to_double()) /
              (2 * h);
  CHECK(std::abs(d2 - omega_d2(Real(nu, 192), Real(z, 192), prec).to_double()) < 1e-9);
}

TEST_CASE("omega large-argument limit") {
  // omega(nu, z) - (z - nu pi/2 - pi/4) = nu^2/(2z) + O(z^{-3})
  Precision prec(256);
  double nu = 11;
  Real z(11.0e6, 256);
  Real om = omega_phase(Real(nu, 256), z, prec);
  Real lin = z - Real(nu, 256) * pi(256) / 2L - pi(256) / 4L;
  double diff = (om - lin).to_double();
  double expect = nu * nu / (2.0 * 11.0e6);
  CHECK(diff == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("precision exhaustion guard") {
  CHECK_THROWS_AS(bessel_j_series(Real(11.0, 128), Real(1e6, 128), Precision(128), 4096),
                  PrecisionExhausted);
}

TEST_SUITE_END();
