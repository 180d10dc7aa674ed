#include "hml/modforms.hpp"

#include <doctest.h>

#include <numeric>

using namespace hml;

TEST_SUITE_BEGIN("modforms");

TEST_CASE("cusp form dimensions") {
  CHECK(dim_cusp_forms(12) == 1);
  CHECK(dim_cusp_forms(14) == 0);
  CHECK(dim_cusp_forms(16) == 1);
  CHECK(dim_cusp_forms(24) == 2);
  CHECK(dim_cusp_forms(26) == 1);
  CHECK(dim_cusp_forms(36) == 3);
  CHECK(dim_cusp_forms(60) == 5);
  CHECK(dim_cusp_forms(200) == 16);
}

TEST_CASE("miller basis examples") {
  auto b12 = miller_basis(12, 4);
  REQUIRE(b12.size() == 1);
  CHECK(b12[0].c[0] == 0);
  CHECK(b12[0].c[1] == 1);
  CHECK(b12[0].c[2] == -24);
  CHECK(b12[0].c[3] == 252);

  auto b24 = miller_basis(24, 5);
  REQUIRE(b24.size() == 2);
  CHECK(b24[0].c[1] == 1);
  CHECK(b24[0].c[2] == 0);
  CHECK(b24[1].c[1] == 0);
  CHECK(b24[1].c[2] == 1);

  CHECK(miller_basis(14, 3).empty());
  CHECK_THROWS_AS(miller_basis(13, 10), std::invalid_argument);
  CHECK_THROWS_AS(miller_basis(10, 10), std::invalid_argument);
}

TEST_CASE("hecke matrix examples") {
  auto b12 = miller_basis(12, 8);
  auto t2 = hecke_matrix(12, 2, b12);
  CHECK(t2[0][0] == -24);
  auto t3 = hecke_matrix(12, 3, b12);
  CHECK(t3[0][0] == 252);
  auto b14 = miller_basis(14, 8);
  CHECK(hecke_matrix(14, 2, b14).empty());
  CHECK_THROWS_AS(hecke_matrix(12, 7, miller_basis(12, 4)), std::invalid_argument);
}

TEST_CASE("T_p matrices commute exactly for p <= 7") {
  for (long k : {24L, 36L}) {
    long d = dim_cusp_forms(k);
    auto basis = miller_basis(k, 7 * d + 2);
    std::vector<std::vector<std::vector<mpz_class>>> mats;
    for (long p : {2L, 3L, 5L, 7L}) mats.push_back(hecke_matrix(k, p, basis));
    auto mul = [&](const auto& a, const auto& b) {
      std::vector<std::vector<mpz_class>> r((size_t)d, std::vector<mpz_class>((size_t)d, mpz_class(0)));
      for (long i = 0; i < d; ++i)
        for (long l = 0; l < d; ++l)
          for (long j = 0; j < d; ++j)
            r[(size_t)i][(size_t)j] += a[(size_t)i][(size_t)l] * b[(size_t)l][(size_t)j];
      return r;
    };
    for (size_t a = 0; a < mats.size(); ++a)
      for (size_t b = a + 1; b < mats.size(); ++b) {
        auto ab = mul(mats[a], mats[b]);
        auto ba = mul(mats[b], mats[a]);
        CHECK(ab == ba);
      }
  }
}

TEST_CASE("char_poly on a known 2x2") {
  // [[1,2],[3,4]]: p(x) = x^2 - 5x - 2, adj(xI-M) = [[x-4,2],[3,x-1]]
  std::vector<std::vector<mpz_class>> m = {{1, 2}, {3, 4}};
  CharPoly cp = char_poly(m);
  CHECK(cp.coeff[0] == 1);
  CHECK(cp.coeff[1] == -5);
  CHECK(cp.coeff[2] == -2);
  CHECK(cp.adj[1][0][0] == -4);
  CHECK(cp.adj[1][0][1] == 2);
  CHECK(cp.adj[1][1][0] == 3);
  CHECK(cp.adj[1][1][1] == -1);
}

TEST_CASE("weight 12 eigenform") {
  auto forms = hecke_eigenforms(12, 12, Precision(128));
  REQUIRE(forms.size() == 1);
  const Eigenform& f = forms[0];
  CHECK(f.exact);
  CHECK(f.lambda[1].to_double() == 1.0);
  // tau(2) = -24 normalized
  Real expect = Real(-24.0, 160) / sqrt(pow(Real(2.0, 160), 11L));
  CHECK(std::abs((f.lambda[2] - expect).to_double()) < 1e-36);
  CHECK(f.a_int[2] == -24);
  CHECK(f.a_int[3] == 252);
  // lambda(4) = -1472/2^11 exactly
  CHECK(f.lambda[4].to_double() == -1472.0 / 2048.0);
}

TEST_CASE("weight 24 eigenvalues against exact trace and determinant") {
  auto forms = hecke_eigenforms(24, 8, Precision(128));
  REQUIRE(forms.size() == 2);
  CHECK(forms[0].lambda[2] < forms[1].lambda[2]);  // sorted ascending
  auto basis = miller_basis(24, 8);
  auto t2 = hecke_matrix(24, 2, basis);
  mpz_class tr = t2[0][0] + t2[1][1];
  mpz_class det = t2[0][0] * t2[1][1] - t2[0][1] * t2[1][0];
  mpfr_prec_t wp = 192;
  Real scale = sqrt(pow(Real(2.0, wp), 23L));
  Real sum = (forms[0].lambda[2] + forms[1].lambda[2]) * scale;
  Real prod = forms[0].lambda[2] * forms[1].lambda[2] * scale * scale;
  CHECK(std::abs((sum - Real(tr, wp)).to_double()) < 1e-25);
  CHECK(std::abs((prod - Real(det, wp)).to_double()) < 1e-18);
}

TEST_CASE("eigenvalue identities at a dim-3 weight") {
  const long n_max = 200;
  auto forms = hecke_eigenforms(36, n_max, Precision(128));
  REQUIRE(forms.size() == 3);
  auto d = divisor_counts(n_max);
  double tol = std::ldexp(1.0, -64);
  for (const auto& f : forms) {
    for (long m = 2; m * m <= n_max; ++m)
      for (long n = m + 1; m * n <= n_max; ++n) {
        if (std::gcd(m, n) != 1) continue;
        CHECK(std::abs((f.lambda[(size_t)(m * n)] - f.lambda[(size_t)m] * f.lambda[(size_t)n])
                           .to_double()) < tol);
      }
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L})
      for (long pj = p; pj * p <= n_max; pj *= p) {
        Real lhs = f.lambda[(size_t)p] * f.lambda[(size_t)pj];
        Real rhs = f.lambda[(size_t)(pj * p)] + f.lambda[(size_t)(pj / p)];
        CHECK(std::abs((lhs - rhs).to_double()) < tol);
      }
    for (long n = 1; n <= n_max; ++n)
      CHECK(std::abs(f.lambda[(size_t)n].to_double()) <= (double)d[(size_t)n] + tol);
  }
}

TEST_SUITE_END();
