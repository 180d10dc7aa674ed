#include "hml/voronoi.hpp"

#include "hml/bessel.hpp"
#include "hml/moments.hpp"

#include <doctest.h>

#include <cmath>

using namespace hml;

TEST_SUITE_BEGIN("voronoi");

TEST_CASE("w_delta shape") {
  SmoothingParams p{12, Real(20.0, 128), Real(8.0, 128)};
  CHECK(w_delta(Real(1.5, 128), p).to_double() == 1.0);
  CHECK(w_delta(Real(0.99, 128), p).to_double() == 0.0);
  CHECK(w_delta(Real(2.0, 128), p).to_double() == 0.0);
  // t = 1 + 1/(2 Delta) hits the symmetric transition midpoint
  Real t = Real(1.0, 160) + Real(1.0, 160) / (Real(8.0, 160) * 2L);
  CHECK(w_delta(t, p).to_double() == doctest::Approx(0.5).epsilon(1e-30));
}

TEST_CASE("w_delta derivative scaling: |w^(j)| <= C_j Delta^j uniformly") {
  // finite differences at the transition midpoint, Delta in {10, 100, 1000}
  for (int j = 1; j <= 3; ++j) {
    double cj_max = 0, cj_min = 1e300;
    for (double delta : {10.0, 100.0, 1000.0}) {
      SmoothingParams p{12, Real(20.0, 256), Real(delta, 256)};
      double t0 = 1.0 + 0.5 / delta;
      double h = 0.02 / delta;
      auto w = [&](double t) { return w_delta(Real(t, 256), p).to_double(); };
      double d;
      if (j == 1) d = (w(t0 + h) - w(t0 - h)) / (2 * h);
      else if (j == 2) d = (w(t0 + h) - 2 * w(t0) + w(t0 - h)) / (h * h);
      else d = (w(t0 + 2 * h) - 2 * w(t0 + h) + 2 * w(t0 - h) - w(t0 - 2 * h)) / (2 * h * h * h);
      double cj = std::abs(d) / std::pow(delta, (double)j);
      cj_max = std::max(cj_max, cj);
      cj_min = std::min(cj_min, cj);
    }
    // constants comparable across three decades of Delta
    CHECK(cj_max <= 10.0 * std::max(cj_min, 1e-3));
    CHECK(cj_max < 100.0);
  }
}

TEST_CASE("big_omega envelope and precision doubling") {
  Precision prec(128);
  long kappa = 39;
  Real x(400.0, 256);
  for (long n : {1L, 2L, 17L, 1000L}) {
    Real om = big_omega(n, x, kappa, prec);
    double env = (2.0 * std::pow(24.0 * M_PI * M_PI, -0.75) + std::pow(8.0 * M_PI * M_PI, -0.75));
    CHECK(std::abs(om.to_double()) <= env);
    Real om4 = big_omega(n, x, kappa, Precision(512));
    CHECK(std::abs((om - om4).to_double()) < 1e-30);
  }
  CHECK_THROWS_AS(big_omega(1, Real(0.001, 128), 39, prec), std::domain_error);
}

TEST_CASE("big_omega large-n envelope limit") {
  Precision prec(128);
  long kappa = 39;
  Real x(400.0, 192);
  long n = 1000000;
  mpfr_prec_t wp = 192;
  Real om = big_omega(n, x, kappa, prec);
  Real nx = Real(n, wp) * x;
  Real pi2 = pi(wp) * pi(wp);
  Real kapR(kappa, wp);
  Real z1 = pi(wp) * 4L * sqrt(nx * 2L), z2 = pi(wp) * 4L * sqrt(nx);
  Real limit = Real(2L, wp) * pow(pi2 * 32L, Real(-0.75, wp)) *
                   sin(omega_phase(kapR, z1, Precision(wp))) -
               pow(pi2 * 16L, Real(-0.75, wp)) * sin(omega_phase(kapR, z2, Precision(wp)));
  double corr = (double)(kappa * kappa) / ((double)n * 400.0);
  CHECK(std::abs((om - limit).to_double()) <= 1e-3 * corr);
}

TEST_CASE("omega series partial sums are Cauchy with the stated tail") {
  Precision prec(96);
  long kappa = 39;
  Real x(400.0, 96);
  Real env = big_omega_envelope(x, kappa, prec);
  double partial_512 = 0, partial_2048 = 0;
  for (long n = 1; n <= 2048; ++n) {
    double term = std::pow(big_omega(n, x, kappa, prec).to_double(), 2.0) / std::pow((double)n, 1.5);
    if (n <= 512) partial_512 += term;
    partial_2048 += term;
  }
  double tail_bound = env.to_double() * env.to_double() * 2.0 / std::sqrt(512.0);
  CHECK(std::abs(partial_2048 - partial_512) <= tail_bound);
}

TEST_CASE("w_tilde explicit forms at weight 12") {
  // series-forced Bessel so the quadrature is the ground truth
  Precision prec(96);
  long k = 12;
  Real x(20.0, 128);
  Real delta(15.0, 128);
  SmoothingParams p{k, x, delta};
  long kappa = k - 1;

  double c_w2 = 0;      // (nx)^{-3/4} envelope constant (Lemma on the bound)
  double c_lemma41 = 0; // combined envelope for the Omega form
  for (long n = 1; n <= 20; ++n) {
    WTildeResult wt = w_tilde(n, p, prec, 0.0);
    double nx = (double)n * 20.0;
    c_w2 = std::max(c_w2, std::abs(wt.value.to_double()) * std::pow(nx, 0.75));
    Real main = Real(2.0, 128) * sqrt(Real(2.0, 128)) / sqrt(pi(128)) *
                big_omega(n, x, kappa, prec) * pow(Real(nx, 128), Real(-0.75, 128));
    double errterm = std::pow(nx, -1.25) + std::pow(nx, -0.25) / 15.0;
    c_lemma41 = std::max(c_lemma41,
                         std::abs((wt.value - main).to_double()) / errterm);
  }
  CHECK(c_w2 < 10.0);       // w~ << (nx)^{-3/4}
  CHECK(c_lemma41 < 10.0);  // w~ = (2sqrt2/sqrtpi) Omega (nx)^{-3/4} + O(...)
}

TEST_CASE("integrated-by-parts form agrees within the (nx)^{-5/4} envelope") {
  // w~ against (2sqrt2/sqrtpi) int {12pi^2 nxt/(16pi^2 nxt - kappa^2) t w - w - t w'} ...
  Precision prec(96);
  long k = 12;
  Real x(20.0, 160);
  Real delta(15.0, 160);
  SmoothingParams p{k, x, delta};
  long kappa = k - 1;
  mpfr_prec_t wp = 160;
  double worst = 0;
  for (long n : {1L, 2L, 3L, 5L, 8L, 12L, 17L, 23L, 30L, 40L,
                 52L, 64L, 80L, 100L, 120L, 140L, 160L, 180L, 200L, 220L}) {
    WTildeResult wt = w_tilde(n, p, prec, 0.0);
    Real nx = Real(n, wp) * x;
    Real pref = Real(2.0, wp) * sqrt(Real(2.0, wp)) / sqrt(pi(wp));
    Real kap2 = Real(kappa, wp) * Real(kappa, wp);
    Real pi2_16 = pi(wp) * pi(wp) * 16L;
    // numerically differentiated w via the transition structure
    auto wfun = [&](const Real& t) { return w_delta(t, p); };
    auto wprime = [&](const Real& t) {
      Real h(1e-9, wp);
      return (wfun(t + h) - wfun(t - h)) / (h * 2L);
    };
    auto f = [&](const Real& t) -> Real {
      Real base = pi2_16 * nx * t - kap2;
      Real amp = (pi2_16 * nx * Real(0.75, wp) * t * wfun(t) / base - wfun(t) -
                  t * wprime(t)) *
                 pow(base, Real(-0.75, wp));
      Real z = pi(wp) * 4L * sqrt(nx * t);
      return amp * sin(omega_phase(Real(kappa, wp), z, Precision(wp)));
    };
    double freq = 2.0 * M_PI * std::sqrt(nx.to_double());
    QuadratureResult q = oscillatory_integrate(f, Real(1.0, wp), Real(2.0, wp), freq,
                                               Precision(wp));
    double diff = std::abs((wt.value - pref * q.value).to_double());
    worst = std::max(worst, diff / std::pow(nx.to_double(), -1.25));
  }
  CHECK(worst < 10.0);
}

TEST_CASE("voronoi transform approximates the sharp sum") {
  Precision prec(96);
  long k = 12;
  auto forms = hecke_eigenforms(12, 400, prec);
  const Eigenform& f = forms[0];

  Real x(20.0, 128);
  SmoothingParams p1{k, x, Real(std::pow(20.0, 2.0 / 3.0), 128)};
  long cut1 = default_n_cutoff(p1);
  Real t1 = voronoi_transform(f, x, p1, cut1, prec);
  Real sharp = sharp_sum(f, x);
  double resid1 = std::abs((sharp - t1).to_double());
  CHECK(resid1 <= 10.0 * 20.0 * std::log(20.0) / p1.delta.to_double());

  // doubling Delta shrinks the residual by >= 1.5x
  SmoothingParams p2{k, x, p1.delta * 2L};
  long cut2 = default_n_cutoff(p2);
  Real t2 = voronoi_transform(f, x, p2, cut2, prec);
  double resid2 = std::abs((sharp - t2).to_double());
  CHECK(resid1 / resid2 >= 1.5);
}

TEST_CASE("empty sharp range gives a near-zero transform") {
  Precision prec(96);
  auto forms = hecke_eigenforms(12, 400, prec);
  Real x(0.4, 128);
  SmoothingParams p{12, x, Real(4.0, 128)};
  // S(x, f) = 0 (no integers in [0.4, 0.8]); transform must be small
  CHECK(sharp_sum(forms[0], x).to_double() == 0.0);
  Real t = voronoi_transform(forms[0], x, p, 600, prec);
  CHECK(std::abs(t.to_double()) < 0.5);
}

TEST_SUITE_END();
