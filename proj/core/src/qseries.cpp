#include "hml/qseries.hpp"

#include <algorithm>
#include <cstring>

namespace hml {

std::vector<mpz_class> divisor_power_sums(long e, long N) {
  std::vector<mpz_class> s((size_t)std::max(N, 1L));
  mpz_class de;
  for (long d = 1; d < N; ++d) {
    mpz_ui_pow_ui(de.get_mpz_t(), (unsigned long)d, (unsigned long)e);
    for (long m = d; m < N; m += d) s[(size_t)m] += de;
  }
  return s;
}

std::vector<long> divisor_counts(long N) {
  std::vector<long> d((size_t)N + 1, 0);
  for (long i = 1; i <= N; ++i)
    for (long m = i; m <= N; m += i) d[(size_t)m]++;
  return d;
}

QSeries eisenstein(EisensteinId id, long N) {
  if (N < 1) throw std::invalid_argument("eisenstein: N >= 1 required");
  QSeries r;
  r.weight = (id == EisensteinId::E4) ? 4 : 6;
  r.c.assign((size_t)N, mpz_class(0));
  r.c[0] = 1;
  long e = (id == EisensteinId::E4) ? 3 : 5;
  long mult = (id == EisensteinId::E4) ? 240 : -504;
  auto sig = divisor_power_sums(e, N);
  for (long n = 1; n < N; ++n) r.c[(size_t)n] = mult * sig[(size_t)n];
  return r;
}

QSeries delta_series(long N) {
  QSeries e4 = eisenstein(EisensteinId::E4, N);
  QSeries e6 = eisenstein(EisensteinId::E6, N);
  QSeries e4sq = qs_mul(e4, e4, N);
  QSeries e4cb = qs_mul(e4sq, e4, N);
  QSeries e6sq = qs_mul(e6, e6, N);
  QSeries d = qs_divexact(qs_sub(e4cb, e6sq), mpz_class(1728));
  d.weight = 12;
  return d;
}

QSeries qs_add(const QSeries& a, const QSeries& b) {
  QSeries r;
  r.weight = a.weight;
  long n = std::min(a.ncoeffs(), b.ncoeffs());
  r.c.resize((size_t)n);
  for (long i = 0; i < n; ++i) r.c[(size_t)i] = a.c[(size_t)i] + b.c[(size_t)i];
  return r;
}

QSeries qs_sub(const QSeries& a, const QSeries& b) {
  QSeries r;
  r.weight = a.weight;
  long n = std::min(a.ncoeffs(), b.ncoeffs());
  r.c.resize((size_t)n);
  for (long i = 0; i < n; ++i) r.c[(size_t)i] = a.c[(size_t)i] - b.c[(size_t)i];
  return r;
}

QSeries qs_scalar_mul(const QSeries& a, const mpz_class& s) {
  QSeries r = a;
  for (auto& x : r.c) x *= s;
  return r;
}

QSeries qs_divexact(const QSeries& a, const mpz_class& s) {
  QSeries r = a;
  for (auto& x : r.c) {
    if (!mpz_divisible_p(x.get_mpz_t(), s.get_mpz_t()))
      throw std::runtime_error("qs_divexact: division not exact");
    mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
  }
  return r;
}

QSeries qs_mul_schoolbook(const QSeries& a, const QSeries& b, long N) {
  long la = a.ncoeffs(), lb = b.ncoeffs();
  long n = std::min(N, la + lb - 1);
  QSeries r;
  r.weight = a.weight + b.weight;
  r.c.assign((size_t)n, mpz_class(0));
  for (long i = 0; i < std::min(la, n); ++i) {
    if (a.c[(size_t)i] == 0) continue;
    long jmax = std::min(lb, n - i);
    const mpz_srcptr ai = a.c[(size_t)i].get_mpz_t();
    for (long j = 0; j < jmax; ++j)
      mpz_addmul(r.c[(size_t)(i + j)].get_mpz_t(), ai, b.c[(size_t)j].get_mpz_t());
  }
  return r;
}

namespace {

// Largest coefficient bit length in the series.
long max_coeff_bits(const QSeries& a) {
  size_t m = 1;
  for (const auto& x : a.c) m = std::max(m, mpz_sizeinbase(x.get_mpz_t(), 2));
  return (long)m;
}

long ceil_log2(long n) {
  long b = 0;
  while ((1L << b) < n) ++b;
  return b;
}

// Pack signed coefficients into one integer with a limb-aligned stride,
// two's-complement style: each chunk stores c_i + borrow_in (+2^B when
// negative, propagating a borrow). The overall value equals
// sum c_i 2^{B i} exactly.
mpz_class kron_pack(const QSeries& a, long stride_limbs) {
  const long B = stride_limbs * (long)(8 * sizeof(mp_limb_t));
  const long len = a.ncoeffs();
  std::vector<mp_limb_t> buf((size_t)(stride_limbs * len) + 1, 0);
  mpz_class two_B = mpz_class(1) << B;
  mpz_class stored;
  int borrow = 0;
  for (long i = 0; i < len; ++i) {
    stored = a.c[(size_t)i];
    if (borrow) stored -= 1;
    borrow = 0;
    if (stored < 0) {
      stored += two_B;
      borrow = 1;
    }
    if (stored != 0) {
      size_t words = 0;
      mpz_export(&buf[(size_t)(i * stride_limbs)], &words, -1, sizeof(mp_limb_t), 0, 0,
                 stored.get_mpz_t());
    }
  }
  mpz_class packed;
  mpz_import(packed.get_mpz_t(), buf.size(), -1, sizeof(mp_limb_t), 0, 0, buf.data());
  if (borrow) packed -= mpz_class(1) << (B * len);
  return packed;
}

void kron_unpack(const mpz_class& prod_in, long stride_limbs, long out_len,
                 std::vector<mpz_class>& out) {
  const long B = stride_limbs * (long)(8 * sizeof(mp_limb_t));
  mpz_class prod = prod_in;
  bool flipped = false;
  if (prod < 0) {
    prod += mpz_class(1) << (B * out_len);
    flipped = true;
  }
  std::vector<mp_limb_t> buf((size_t)(stride_limbs * out_len) + 1, 0);
  size_t words = 0;
  mpz_export(buf.data(), &words, -1, sizeof(mp_limb_t), 0, 0, prod.get_mpz_t());
  if ((long)words > stride_limbs * out_len + 1)
    throw std::runtime_error("kron_unpack: product wider than expected");

  mpz_class two_B = mpz_class(1) << B;
  mpz_class half = mpz_class(1) << (B - 1);
  mpz_class chunk;
  int carry = 0;
  out.assign((size_t)out_len, mpz_class(0));
  for (long i = 0; i < out_len; ++i) {
    mpz_import(chunk.get_mpz_t(), (size_t)stride_limbs, -1, sizeof(mp_limb_t), 0, 0,
               &buf[(size_t)(i * stride_limbs)]);
    if (carry) chunk += 1;
    carry = 0;
    if (chunk >= half) {
      chunk -= two_B;
      carry = 1;
    }
    out[(size_t)i] = chunk;
  }
  if (carry != (flipped ? 1 : 0))
    throw std::runtime_error("kron_unpack: borrow chain mismatch");
}

}  // namespace

QSeries qs_mul_kronecker(const QSeries& a, const QSeries& b, long N) {
  long la = a.ncoeffs(), lb = b.ncoeffs();
  long full = la + lb - 1;
  long n = std::min(N, full);
  // Product coefficients are bounded by 2^{bits(a)+bits(b)+log2(min len)}.
  long need = max_coeff_bits(a) + max_coeff_bits(b) + ceil_log2(std::min(la, lb)) + 2;
  long limb_bits = (long)(8 * sizeof(mp_limb_t));
  long stride_limbs = (need + limb_bits - 1) / limb_bits + 1;

  mpz_class pa = kron_pack(a, stride_limbs);
  mpz_class pb = kron_pack(b, stride_limbs);
  mpz_class prod = pa * pb;

  QSeries r;
  r.weight = a.weight + b.weight;
  std::vector<mpz_class> all;
  kron_unpack(prod, stride_limbs, full, all);
  all.resize((size_t)n);
  r.c = std::move(all);
  return r;
}

QSeries qs_mul(const QSeries& a, const QSeries& b, long N) {
  long n = std::min(N, a.ncoeffs() + b.ncoeffs() - 1);
  if (n <= kSchoolbookMax) return qs_mul_schoolbook(a, b, N);
  return qs_mul_kronecker(a, b, N);
}

}  // namespace hml
