#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

namespace hml {

// Exact integer q-expansion truncated at N coefficients (q^0 .. q^{N-1}).
// Arithmetic is exact; products are truncated back to the shorter target.
struct QSeries {
  long weight = 0;
  std::vector<mpz_class> c;

  long ncoeffs() const { return (long)c.size(); }
  const mpz_class& coeff(long n) const {
    static const mpz_class zero(0);
    return (n >= 0 && n < ncoeffs()) ? c[n] : zero;
  }
};

enum class EisensteinId { E4, E6 };

QSeries eisenstein(EisensteinId id, long N);
QSeries delta_series(long N);  // (E4^3 - E6^2)/1728

QSeries qs_add(const QSeries& a, const QSeries& b);
QSeries qs_sub(const QSeries& a, const QSeries& b);
// Truncated product, length min(N, la+lb-1). Schoolbook for short series,
// Kronecker substitution onto one GMP integer multiplication for long ones.
QSeries qs_mul(const QSeries& a, const QSeries& b, long N);
QSeries qs_mul_schoolbook(const QSeries& a, const QSeries& b, long N);
QSeries qs_mul_kronecker(const QSeries& a, const QSeries& b, long N);
QSeries qs_scalar_mul(const QSeries& a, const mpz_class& s);
QSeries qs_divexact(const QSeries& a, const mpz_class& s);  // throws if not exact

// sigma_e(n) = sum of d^e over divisors d of n, for n = 0..N-1 (entry 0 unused).
std::vector<mpz_class> divisor_power_sums(long e, long N);
// d(n) for n = 1..N (index 0 unused).
std::vector<long> divisor_counts(long N);

inline constexpr long kSchoolbookMax = 2048;

}  // namespace hml
