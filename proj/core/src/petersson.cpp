#include "hml/petersson.hpp"

#include "hml/bessel.hpp"

#include <cmath>
#include <numeric>

namespace hml {

namespace {
// Inverse of a mod c for (a,c)=1, in [0,c).
long inv_mod(long a, long c) {
  long r0 = c, r1 = a % c, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    long r2 = r0 - q * r1;
    long s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  long inv = s0 % c;
  return inv < 0 ? inv + c : inv;
}
}  // namespace

Real kloosterman(long m, long n, long c, Precision prec) {
  if (c < 1) throw std::invalid_argument("kloosterman: c >= 1 required");
  mpfr_prec_t wp = prec.bits + 32;
  if (c == 1) return Real(1.0, prec.bits);
  Real sum(0.0, wp);
  Real two_pi_over_c = pi(wp) * 2L / Real(c, wp);
  long mm = ((m % c) + c) % c;
  long nn = ((n % c) + c) % c;
  Real angle(wp);
  for (long a = 1; a < c; ++a) {
    if (std::gcd(a, c) != 1) continue;
    long ainv = inv_mod(a, c);
    long r = (long)((((__int128)ainv * mm + (__int128)a * nn) % c));
    angle = two_pi_over_c * Real(r, wp);
    sum += cos(angle);
  }
  return sum.round_to(prec.bits);
}

long default_c_max(long m, long n, long k) {
  double c0 = 16.0 * M_PI * std::sqrt((double)m * (double)n) / (double)(k - 1);
  return (long)std::ceil(c0) + 20;
}

TraceEval trace_rhs(long m, long n, long k, long c_max, Precision prec) {
  if (m < 1 || n < 1 || k < 12 || k % 2 != 0)
    throw std::invalid_argument("trace_rhs: need m,n >= 1 and even k >= 12");
  mpfr_prec_t wp = prec.bits + 32;
  Real nu((double)(k - 1), wp);
  Real root_mn = sqrt(Real(m, wp) * Real(n, wp));
  Real four_pi_rmn = pi(wp) * 4L * root_mn;

  Real sum(0.0, wp);
  for (long c = 1; c <= c_max; ++c) {
    Real s = kloosterman(m, n, c, Precision(wp));
    if (s.is_zero()) continue;
    Real z = four_pi_rmn / Real(c, wp);
    Real j = bessel_j(nu, z, Precision(wp)).value;
    sum += s * j / Real(c, wp);
  }
  int sign = (k / 2) % 2 == 0 ? 1 : -1;
  Real value = pi(wp) * 2L * Real((long)sign, wp) * sum;
  if (m == n) value += 1L;

  // Tail: |S(m,n;c)| <= c and |J_nu(z)| <= (z/2)^nu e^{(z/2)^2}/Gamma(nu+1),
  // decreasing in c beyond the transition; geometric comparison from c_max+1.
  mpfr_prec_t tp = 128;
  Real u = (pi(tp) * 2L * root_mn.round_to(tp)) / Real(c_max + 1, tp);
  Real first = pow(u, Real(nu.to_double(), tp)) * exp(u * u) / gamma(Real((double)k, tp));
  Real ratio = pow(Real(c_max + 1, tp) / Real(c_max + 2, tp), Real(nu.to_double(), tp));
  Real tail = first / (Real(1.0, tp) - ratio) * pi(tp) * 2L;

  TraceEval out;
  out.m = m; out.n = n; out.c_max = c_max;
  out.value = value.round_to(prec.bits);
  out.tail_bound = tail.round_to(prec.bits);
  return out;
}

HarmonicBasis solve_harmonic_weights(long k, std::vector<Eigenform> forms, long c_max,
                                     Precision prec) {
  HarmonicBasis basis;
  basis.k = k;
  basis.c_max = c_max;
  basis.forms = std::move(forms);
  long d = basis.dim();
  if (d == 0) return basis;

  mpfr_prec_t wp = prec.bits + 32;
  // A[r][j] = lambda_j(r+1), rhs[r] = trace_rhs(1, r+1).
  std::vector<std::vector<Real>> a((size_t)d, std::vector<Real>((size_t)d, Real(wp)));
  std::vector<Real> rhs((size_t)d, Real(wp));
  for (long r = 0; r < d; ++r) {
    for (long j = 0; j < d; ++j)
      a[(size_t)r][(size_t)j] = basis.forms[(size_t)j].lambda[(size_t)(r + 1)].round_to(wp);
    rhs[(size_t)r] = trace_rhs(1, r + 1, k, c_max, Precision(wp)).value;
  }
  std::vector<std::vector<Real>> a0 = a;
  std::vector<Real> rhs0 = rhs;

  for (long col = 0; col < d; ++col) {
    long piv = col;
    for (long r = col + 1; r < d; ++r)
      if (abs(a[(size_t)r][(size_t)col]) > abs(a[(size_t)piv][(size_t)col])) piv = r;
    if (abs(a[(size_t)piv][(size_t)col]) <= pow2(-wp + 16, wp))
      throw SingularSystemError("solve_harmonic_weights: lambda matrix numerically rank-deficient");
    std::swap(a[(size_t)col], a[(size_t)piv]);
    std::swap(rhs[(size_t)col], rhs[(size_t)piv]);
    for (long r = col + 1; r < d; ++r) {
      Real f = a[(size_t)r][(size_t)col] / a[(size_t)col][(size_t)col];
      if (f.is_zero()) continue;
      for (long cc = col; cc < d; ++cc) a[(size_t)r][(size_t)cc] -= f * a[(size_t)col][(size_t)cc];
      rhs[(size_t)r] -= f * rhs[(size_t)col];
    }
  }
  std::vector<Real> w((size_t)d, Real(wp));
  for (long r = d - 1; r >= 0; --r) {
    Real acc = rhs[(size_t)r];
    for (long cc = r + 1; cc < d; ++cc) acc -= a[(size_t)r][(size_t)cc] * w[(size_t)cc];
    w[(size_t)r] = acc / a[(size_t)r][(size_t)r];
  }

  // Contract: relative residual of the solved system <= 1e-10.
  Real res(0.0, wp), scale(0.0, wp);
  for (long r = 0; r < d; ++r) {
    Real acc(0.0, wp);
    for (long j = 0; j < d; ++j) acc += a0[(size_t)r][(size_t)j] * w[(size_t)j];
    res = max(res, abs(acc - rhs0[(size_t)r]));
    scale = max(scale, abs(rhs0[(size_t)r]));
  }
  if (res > scale * Real(1e-10, wp))
    throw SingularSystemError("solve_harmonic_weights: residual above 1e-10");

  basis.weights.reserve((size_t)d);
  for (long j = 0; j < d; ++j) basis.weights.push_back(w[(size_t)j].round_to(prec.bits));
  return basis;
}

Real harmonic_average(const HarmonicBasis& basis, const std::vector<Real>& values) {
  if ((long)values.size() != basis.dim())
    throw std::invalid_argument("harmonic_average: values length != dim");
  if (basis.dim() == 0) return Real(0.0, 64);
  mpfr_prec_t wp = basis.weights[0].prec() + 16;
  Real sum(0.0, wp);
  for (size_t j = 0; j < values.size(); ++j) sum += basis.weights[j] * values[j];
  return sum;
}

Real harmonic_one(const HarmonicBasis& basis) {
  if (basis.dim() == 0) return Real(0.0, 64);
  std::vector<Real> ones((size_t)basis.dim(), Real(1.0, basis.weights[0].prec()));
  return harmonic_average(basis, ones);
}

}  // namespace hml
