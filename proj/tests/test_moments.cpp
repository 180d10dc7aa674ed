#include "hml/moments.hpp"

#include "hml/cache.hpp"

#include <doctest.h>

#include <cmath>

using namespace hml;

namespace {
HarmonicBasis basis12(long n_max) {
  auto forms = hecke_eigenforms(12, n_max, Precision(128));
  return solve_harmonic_weights(12, std::move(forms), default_c_max(1, 1, 12), Precision(128));
}
}  // namespace

TEST_SUITE_BEGIN("moments");

TEST_CASE("sharp sum ranges") {
  auto forms = hecke_eigenforms(12, 16, Precision(128));
  const Eigenform& f = forms[0];
  // x = 1: n in {1, 2}
  Real s1 = sharp_sum(f, Real(1.0, 128));
  CHECK(s1.to_double() ==
        doctest::Approx((f.lambda[1] + f.lambda[2]).to_double()).epsilon(1e-30));
  // x = 2.5: n in {3, 4, 5}
  Real s2 = sharp_sum(f, Real(2.5, 128));
  CHECK(s2.to_double() ==
        doctest::Approx((f.lambda[3] + f.lambda[4] + f.lambda[5]).to_double()).epsilon(1e-30));
  // 2x < 1: empty
  CHECK(sharp_sum(f, Real(0.3, 128)).to_double() == 0.0);
  CHECK_THROWS_AS(sharp_sum(f, Real(100.0, 128)), InsufficientTableError);
}

TEST_CASE("first moment at a one-dimensional weight") {
  HarmonicBasis b = basis12(64);
  Real x(20.0, 128);
  FirstMoment fm = first_moment(b, x, Precision(128));
  Real expect = b.weights[0] * sharp_sum(b.forms[0], x);
  CHECK(fm.value.to_double() == doctest::Approx(expect.to_double()).epsilon(1e-25));
  CHECK_THROWS_AS(first_moment(b, Real(0.5, 128), Precision(128)), std::domain_error);
}

TEST_CASE("first moment main term carries the parity sign") {
  // main / (4 sqrt(2pi) Omega(1,x) x^{1/4}) == (-1)^{k/2}
  for (long k : {12L, 14L, 16L, 18L}) {
    HarmonicBasis b;
    b.k = k;
    double x = (double)k * (double)k / 4.0;
    if (k != 14) {
      auto forms = hecke_eigenforms(k, (long)(2 * x) + 2, Precision(128));
      b = solve_harmonic_weights(k, std::move(forms), default_c_max(1, 1, k), Precision(128));
    }
    b.k = k;
    FirstMoment fm = first_moment(b, Real(x, 128), Precision(128));
    double denom = 4.0 * std::sqrt(2.0 * M_PI) *
                   big_omega(1, Real(x, 128), k - 1, Precision(128)).to_double() *
                   std::pow(x, 0.25);
    double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    CHECK(fm.main_term.to_double() / denom == doctest::Approx(sign).epsilon(1e-12));
    if (k == 14) CHECK(fm.value.to_double() == 0.0);  // empty basis averages to zero
  }
}

TEST_CASE("second moment basics at weight 12") {
  HarmonicBasis b = basis12(64);
  Real x(20.0, 128);
  SecondMoment sm = second_moment(b, x, 4000, Precision(128));
  Real s = sharp_sum(b.forms[0], x);
  CHECK(sm.value.to_double() ==
        doctest::Approx((b.weights[0] * s * s).to_double()).epsilon(1e-25));
  CHECK(sm.main_term.to_double() > 0.0);
  // doubling the cutoff moves the main term by at most the tail bound
  SecondMoment sm2 = second_moment(b, x, 8000, Precision(128));
  CHECK(std::abs(sm2.main_term.to_double() - sm.main_term.to_double()) <=
        sm.series_tail_bound.to_double());
}

TEST_CASE("variance identities") {
  HarmonicBasis b = basis12(64);
  Real x(20.0, 128);
  VarianceResult vr = variance(b, x, 4000, Precision(128));
  SecondMoment sm = second_moment(b, x, 4000, Precision(128));
  FirstMoment fm = first_moment(b, x, Precision(128));
  // main(variance) = main(second) - 32 pi sqrt(x) Omega(1,x)^2
  Real om1 = big_omega(1, x, 11, Precision(128));
  double expect_main = sm.main_term.to_double() -
                       32.0 * M_PI * std::sqrt(20.0) * om1.to_double() * om1.to_double();
  CHECK(vr.main_term.to_double() == doctest::Approx(expect_main).epsilon(1e-20));
  // value = <S^2> - <S>^2 <1>
  double expect_val = sm.value.to_double() -
                      fm.value.to_double() * fm.value.to_double() *
                          harmonic_one(b).to_double();
  CHECK(vr.value.to_double() == doctest::Approx(expect_val).epsilon(1e-20));
  // single atom: zero variance up to the <1> correction
  double one = harmonic_one(b).to_double();
  double s = sharp_sum(b.forms[0], x).to_double();
  double w = b.weights[0].to_double();
  CHECK(vr.value.to_double() ==
        doctest::Approx(w * s * s * (1.0 - w * one)).epsilon(1e-12));
}

TEST_CASE("uniform bound monitor") {
  HarmonicBasis b = basis12(64);
  std::vector<Real> grid = {Real(20.0, 128), Real(30.5, 128)};
  auto ratios = uniform_bound_monitor(b, grid);
  REQUIRE(ratios.size() == 2);
  Real expect = abs(sharp_sum(b.forms[0], grid[0])) / pow(grid[0], Real(1.0 / 3.0, 128));
  CHECK(ratios[0].to_double() == doctest::Approx(expect.to_double()).epsilon(1e-20));
  CHECK(uniform_bound_monitor(b, {}).empty());
  CHECK_THROWS_AS(uniform_bound_monitor(b, {Real(0.5, 128)}), std::domain_error);
}

TEST_SUITE_END();
