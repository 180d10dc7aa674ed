#include "hml/bessel.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hml {

namespace {
// Gamma(nu+1) for integer nu, cached per (nu, prec); the series evaluates
// this once per call and integer orders dominate every use here.
Real integer_factorial(long nu, mpfr_prec_t wp) {
  static std::map<std::pair<long, mpfr_prec_t>, Real> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lk(mu);
  auto key = std::make_pair(nu, wp);
  auto it = cache.find(key);
  if (it == cache.end()) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), (unsigned long)nu);
    it = cache.emplace(key, Real(f, wp)).first;
  }
  return it->second;
}
}  // namespace

BesselRegime classify_bessel_regime(double nu, double z) {
  if (z <= (nu + 1.0) / 4.0) return BesselRegime::Tiny;
  if (z <= (nu + 1.0) - std::pow(nu + 1.0, 1.0 / 3.0 + kBesselDelta))
    return BesselRegime::Subtransition;
  if (z < nu + std::pow(nu, 1.0 / 3.0 + kBesselEps0)) return BesselRegime::Transition;
  return BesselRegime::Oscillatory;
}

namespace {
long series_boost(double z) { return (long)std::ceil(z * 1.4426950408889634) + 64; }
}

Real bessel_j_series(const Real& nu, const Real& z, Precision prec, long boost_cap) {
  if (z < 0.0) throw std::domain_error("bessel_j_series: z >= 0 required");
  long boost = series_boost(z.to_double());
  if (boost > boost_cap)
    throw PrecisionExhausted("bessel_j_series: cancellation boost exceeds cap");
  mpfr_prec_t wp = prec.bits + boost;

  if (z.is_zero()) return Real(nu.is_zero() ? 1.0 : 0.0, prec.bits);

  Real half_z = z.round_to(wp) / 2L;
  Real nu_w = nu.round_to(wp);
  // t_0 = (z/2)^nu / Gamma(nu+1); integer orders take the cached-factorial path
  bool integral_nu = mpfr_integer_p(nu.raw()) && nu >= 0.0 && nu < 1e6;
  Real term = integral_nu ? pow(half_z, nu.to_long()) / integer_factorial(nu.to_long(), wp)
                          : pow(half_z, nu_w) / gamma(nu_w + 1L);
  Real ratio_base = -(half_z * half_z);
  Real sum = term;
  Real max_mag = abs(term);
  Real stop = pow2(-prec.bits - 16, wp);
  for (long l = 0; l < 100000000L; ++l) {
    term *= ratio_base;
    term /= (Real(l + 1L, wp) * (nu_w + Real(l + 1L, wp)));
    sum += term;
    Real mag = abs(term);
    if (mag > max_mag) max_mag = mag;
    if (mag <= stop * max_mag) break;
  }
  return sum.round_to(prec.bits);
}

AsymptoticJ bessel_j_oscillatory(const Real& nu, const Real& z, Precision prec) {
  double nud = nu.to_double(), zd = z.to_double();
  if (zd < nud + std::pow(nud, 1.0 / 3.0 + kBesselEps0))
    throw std::domain_error("bessel_j_oscillatory: z below oscillatory regime");
  mpfr_prec_t wp = prec.bits + 32 + std::max(0L, (long)mpfr_get_exp(z.raw()));
  Real nw = nu.round_to(wp), zw = z.round_to(wp);
  Real w = zw * zw - nw * nw;
  Real r = sqrt(w);
  Real om = r - nw * atan(r / nw) - pi(wp) / 4L;
  Real so(wp), co(wp);
  mpfr_sin_cos(so.raw(), co.raw(), om.raw(), MPFR_RNDN);
  Real q = sqrt(r);  // w^{1/4}
  Real amp = sqrt(Real(2.0, wp) / pi(wp)) / q;
  Real corr = (Real(0.125, wp) + Real(5.0, wp) / 24L * nw * nw / w) / r;
  Real val = amp * (co + corr * so);
  // 10 z^4 / w^{13/4}
  Real z2 = zw * zw;
  Real err = Real(10L, wp) * z2 * z2 / (w * w * w * q);
  return AsymptoticJ{val.round_to(prec.bits), err.round_to(prec.bits)};
}

BesselEval bessel_j(const Real& nu, const Real& z, Precision prec, long affordable_boost) {
  if (!(nu > 0.0)) throw std::domain_error("bessel_j: nu > 0 required");
  BesselRegime reg = classify_bessel_regime(nu.to_double(), z.to_double());
  if (reg == BesselRegime::Oscillatory && series_boost(z.to_double()) > affordable_boost) {
    AsymptoticJ a = bessel_j_oscillatory(nu, z, prec);
    return BesselEval{a.value, a.error_bound};
  }
  Real v = bessel_j_series(nu, z, prec);
  Real eb = abs(v) * pow2(-prec.bits + 8, prec.bits) + pow2(-2 * prec.bits, prec.bits);
  return BesselEval{v, eb};
}

Real bessel_j_for_tol(const Real& nu, const Real& z, Precision prec, const Real& abs_tol) {
  double nud = nu.to_double(), zd = z.to_double();
  if (classify_bessel_regime(nud, zd) == BesselRegime::Oscillatory) {
    // Cheap envelope of the asymptotic error before committing to it.
    double w = zd * zd - nud * nud;
    double err = 10.0 * std::pow(zd, 4.0) / std::pow(w, 3.25);
    if (err <= abs_tol.to_double()) return bessel_j_oscillatory(nu, z, prec).value;
  }
  return bessel_j_series(nu, z, prec);
}

Real omega_phase(const Real& nu, const Real& z, Precision prec) {
  if (!(z > nu)) throw std::domain_error("omega_phase: z > nu required");
  mpfr_prec_t wp = prec.bits + 32 + std::max(0L, (long)mpfr_get_exp(z.raw()));
  Real nw = nu.round_to(wp), zw = z.round_to(wp);
  Real root = sqrt(zw * zw - nw * nw);
  Real om = root - nw * atan(root / nw) - pi(wp) / 4L;
  return om.round_to(prec.bits);
}

Real omega_d1(const Real& nu, const Real& z, Precision prec) {
  if (!(z > nu)) throw std::domain_error("omega_d1: z > nu required");
  mpfr_prec_t wp = prec.bits + 32;
  Real nw = nu.round_to(wp), zw = z.round_to(wp);
  return (sqrt(zw * zw - nw * nw) / zw).round_to(prec.bits);
}

Real omega_d2(const Real& nu, const Real& z, Precision prec) {
  if (!(z > nu)) throw std::domain_error("omega_d2: z > nu required");
  mpfr_prec_t wp = prec.bits + 32;
  Real nw = nu.round_to(wp), zw = z.round_to(wp);
  return (nw * nw / (zw * zw * sqrt(zw * zw - nw * nw))).round_to(prec.bits);
}

}  // namespace hml
