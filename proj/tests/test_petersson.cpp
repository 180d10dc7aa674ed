#include "hml/petersson.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numeric>

using namespace hml;

TEST_SUITE_BEGIN("petersson");

namespace {
// Independent double-precision brute force for cross-checking.
double kloosterman_brute(long m, long n, long c) {
  std::complex<double> s = 0;
  for (long a = 1; a <= c; ++a) {
    if (std::gcd(a, c) != 1) continue;
    long ainv = 0;
    for (long b = 1; b <= c; ++b)
      if ((a * b) % c == 1 % c) { ainv = b; break; }
    double arg = 2.0 * M_PI * (double)((ainv * m + a * n) % c) / (double)c;
    s += std::polar(1.0, arg);
  }
  return s.real();
}
}  // namespace

TEST_CASE("kloosterman closed values") {
  Precision prec(128);
  CHECK(kloosterman(1, 1, 1, prec).to_double() == 1.0);
  CHECK(kloosterman(1, 1, 2, prec).to_double() == doctest::Approx(1.0).epsilon(1e-30));
  // e(2/3) + e(4/3) = 2 cos(2 pi/3) = -1
  CHECK(kloosterman(1, 1, 3, prec).to_double() == doctest::Approx(-1.0).epsilon(1e-30));
}

TEST_CASE("kloosterman symmetry, trivial bound, brute-force agreement") {
  Precision prec(96);
  for (long c : {2L, 5L, 12L, 35L, 50L}) {
    for (long m : {1L, 3L, 7L, 20L}) {
      for (long n : {1L, 4L, 11L}) {
        double smn = kloosterman(m, n, c, prec).to_double();
        double snm = kloosterman(n, m, c, prec).to_double();
        CHECK(smn == doctest::Approx(snm).epsilon(1e-24));
        CHECK(std::abs(smn) <= (double)c + 1e-20);
        CHECK(smn == doctest::Approx(kloosterman_brute(m, n, c)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("trace formula linearity pins lambda(2) at weight 12") {
  // value(1,2)/value(1,1) = lambda_Delta(2) since dim = 1
  Precision prec(128);
  long cmax = default_c_max(1, 2, 12);
  TraceEval t11 = trace_rhs(1, 1, 12, cmax, prec);
  TraceEval t12 = trace_rhs(1, 2, 12, cmax, prec);
  double ratio = (t12.value / t11.value).to_double();
  double lam2 = -24.0 / std::pow(2.0, 5.5);
  CHECK(ratio == doctest::Approx(lam2).epsilon(1e-15));
  CHECK(t11.tail_bound.to_double() >= 0.0);
  // tail decreases as c_max grows
  TraceEval t11b = trace_rhs(1, 1, 12, 2 * cmax, prec);
  CHECK(t11b.tail_bound.to_double() < t11.tail_bound.to_double());
}

TEST_CASE("solved weights: dim 0 and dim 1") {
  Precision prec(128);
  HarmonicBasis empty = solve_harmonic_weights(14, {}, 30, prec);
  CHECK(empty.dim() == 0);
  CHECK(harmonic_one(empty).to_double() == 0.0);

  auto forms = hecke_eigenforms(12, 8, prec);
  long cmax = default_c_max(1, 1, 12);
  HarmonicBasis b = solve_harmonic_weights(12, std::move(forms), cmax, prec);
  REQUIRE(b.dim() == 1);
  TraceEval t11 = trace_rhs(1, 1, 12, cmax, prec);
  CHECK(b.weights[0].to_double() == doctest::Approx(t11.value.to_double()).epsilon(1e-25));
  CHECK(b.weights[0].to_double() > 0.0);
}

TEST_CASE("held-out trace identity at weight 24") {
  Precision prec(128);
  auto forms = hecke_eigenforms(24, 8, prec);
  HarmonicBasis b = solve_harmonic_weights(24, std::move(forms), default_c_max(1, 2, 24), prec);
  REQUIRE(b.dim() == 2);
  CHECK(b.weights[0].to_double() > 0.0);
  CHECK(b.weights[1].to_double() > 0.0);
  std::vector<Real> vals;
  for (const auto& f : b.forms) vals.push_back(f.lambda[2] * f.lambda[3]);
  Real lhs = harmonic_average(b, vals);
  TraceEval rhs = trace_rhs(2, 3, 24, default_c_max(2, 3, 24), prec);
  CHECK(std::abs((lhs - rhs.value).to_double()) < 1e-6);
}

TEST_CASE("c_max stability of the solved weights") {
  Precision prec(128);
  auto forms = hecke_eigenforms(24, 8, prec);
  long cmax = default_c_max(1, 2, 24);
  HarmonicBasis b1 = solve_harmonic_weights(24, forms, cmax, prec);
  HarmonicBasis b2 = solve_harmonic_weights(24, forms, 2 * cmax, prec);
  for (long j = 0; j < b1.dim(); ++j) {
    double change = std::abs((b1.weights[(size_t)j] - b2.weights[(size_t)j]).to_double());
    double allowance = std::max(trace_rhs(1, 1, 24, cmax, prec).tail_bound.to_double(),
                                std::abs(b1.weights[(size_t)j].to_double()) * std::ldexp(1.0, -64));
    CHECK(change <= allowance);
  }
}

TEST_CASE("harmonic_average basics") {
  Precision prec(128);
  auto forms = hecke_eigenforms(12, 8, prec);
  HarmonicBasis b = solve_harmonic_weights(12, std::move(forms), 30, prec);
  CHECK_THROWS_AS(harmonic_average(b, {}), std::invalid_argument);
  Real v(3.25, 128);
  CHECK(harmonic_average(b, {v}).to_double() ==
        doctest::Approx((b.weights[0] * v).to_double()).epsilon(1e-30));
}

TEST_SUITE_END();
