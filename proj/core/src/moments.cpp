#include "hml/moments.hpp"

#include <cmath>

namespace hml {

Real sharp_sum(const Eigenform& f, const Real& x) {
  mpfr_prec_t wp = x.prec() + 16;
  Real lo = x, hi = x * 2L;
  long n_lo = (long)std::ceil(lo.to_double() - 1e-12);
  {
    // exact ceiling/floor via mpfr to avoid double edge cases
    Real c(wp);
    mpfr_ceil(c.raw(), lo.raw());
    n_lo = c.to_long();
    mpfr_floor(c.raw(), hi.raw());
    long n_hi = c.to_long();
    if (n_hi < n_lo || n_hi < 1) return Real(0.0, x.prec());
    if (n_lo < 1) n_lo = 1;
    if (f.n_max() < n_hi)
      throw InsufficientTableError("sharp_sum: eigenvalue table shorter than 2x");
    Real sum(0.0, wp);
    for (long n = n_lo; n <= n_hi; ++n) sum += f.lambda[(size_t)n].round_to(wp);
    return sum.round_to(x.prec());
  }
}

namespace {
void check_regime(long k, const Real& x, double upper_exp) {
  double lo = (double)k * (double)k / (8.0 * M_PI * M_PI);
  double hi = std::pow((double)k, upper_exp);
  double xd = x.to_double();
  if (xd < lo * (1.0 - 1e-12))
    throw std::domain_error("moment: x below k^2/(8 pi^2)");
  if (xd > hi * (1.0 + 1e-12))
    throw std::domain_error("moment: x above theorem regime");
}
}  // namespace

FirstMoment first_moment(const HarmonicBasis& basis, const Real& x, Precision prec) {
  check_regime(basis.k, x, 4.0);
  mpfr_prec_t wp = prec.bits + 32;
  long kappa = basis.k - 1;
  std::vector<Real> sums;
  sums.reserve((size_t)basis.dim());
  for (const auto& f : basis.forms) sums.push_back(sharp_sum(f, x.round_to(wp)));
  Real value = basis.dim() ? harmonic_average(basis, sums) : Real(0.0, wp);
  int sign = (basis.k / 2) % 2 == 0 ? 1 : -1;
  Real main = Real((long)sign, wp) * 4L * sqrt(pi(wp) * 2L) *
              big_omega(1, x.round_to(wp), kappa, Precision(wp)) *
              pow(x.round_to(wp), Real(0.25, wp));
  return FirstMoment{value.round_to(prec.bits), main.round_to(prec.bits)};
}

SecondMoment second_moment(const HarmonicBasis& basis, const Real& x, long series_cutoff,
                           Precision prec) {
  check_regime(basis.k, x, 12.0 / 5.0);
  mpfr_prec_t wp = prec.bits + 32;
  long kappa = basis.k - 1;
  std::vector<Real> sq;
  sq.reserve((size_t)basis.dim());
  for (const auto& f : basis.forms) {
    Real s = sharp_sum(f, x.round_to(wp));
    sq.push_back(s * s);
  }
  Real value = basis.dim() ? harmonic_average(basis, sq) : Real(0.0, wp);

  Real series(0.0, wp);
  Real diag(0.0, wp);
  // Lemma 5.2(i) mirror: truncation at Delta^2 k^eps / x with Delta = x^{1/2} k^{3/5}.
  double keps = std::pow((double)basis.k, 0.001);
  long diag_cut = std::min(series_cutoff, (long)(std::pow((double)basis.k, 1.2) * keps));
  for (long n = 1; n <= series_cutoff; ++n) {
    Real om = big_omega(n, x.round_to(wp), kappa, Precision(wp));
    Real term = om * om / (Real(n, wp) * sqrt(Real(n, wp)));
    series += term;
    if (n <= diag_cut) diag += term;
  }
  Real pref = pi(wp) * 32L * sqrt(x.round_to(wp));
  Real env = big_omega_envelope(x, kappa, Precision(wp));
  Real tail = pref * env * env * 2L / sqrt(Real(series_cutoff, wp));

  return SecondMoment{value.round_to(prec.bits), (pref * series).round_to(prec.bits),
                      (pref * diag).round_to(prec.bits), tail.round_to(prec.bits)};
}

VarianceResult variance(const HarmonicBasis& basis, const Real& x, long series_cutoff,
                        Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  FirstMoment fm = first_moment(basis, x, Precision(wp));
  SecondMoment sm = second_moment(basis, x, series_cutoff, Precision(wp));
  Real one = basis.dim() ? harmonic_one(basis).round_to(wp) : Real(0.0, wp);
  Real value = sm.value - fm.value * fm.value * one;
  long kappa = basis.k - 1;
  Real om1 = big_omega(1, x.round_to(wp), kappa, Precision(wp));
  Real main = sm.main_term - pi(wp) * 32L * sqrt(x.round_to(wp)) * om1 * om1;
  return VarianceResult{value.round_to(prec.bits), main.round_to(prec.bits)};
}

std::vector<Real> uniform_bound_monitor(const HarmonicBasis& basis,
                                        const std::vector<Real>& x_grid) {
  std::vector<Real> out;
  out.reserve(x_grid.size());
  for (const auto& x : x_grid) {
    double lo = (double)basis.k * (double)basis.k / (8.0 * M_PI * M_PI);
    if (x.to_double() < lo * (1.0 - 1e-12))
      throw std::domain_error("uniform_bound_monitor: x below k^2/(8 pi^2)");
    mpfr_prec_t wp = x.prec();
    Real best(0.0, wp);
    for (const auto& f : basis.forms) best = max(best, abs(sharp_sum(f, x)));
    out.push_back(best / pow(x, Real(1.0, wp) / 3L));
  }
  return out;
}

MomentReport compute_moment_report(const HarmonicBasis& basis, const Real& x,
                                   long series_cutoff, double delta_used, Precision prec) {
  MomentReport r;
  r.k = basis.k;
  r.x = x.to_double();
  r.dim = basis.dim();
  r.delta_used = delta_used;
  r.prec_bits = prec.bits;
  FirstMoment fm = first_moment(basis, x, prec);
  SecondMoment sm = second_moment(basis, x, series_cutoff, prec);
  VarianceResult vr = variance(basis, x, series_cutoff, prec);
  r.first = fm.value.to_double();
  r.first_main = fm.main_term.to_double();
  r.first_err = (fm.value - fm.main_term).to_double();
  r.second = sm.value.to_double();
  r.second_main = sm.main_term.to_double();
  r.second_err = (sm.value - sm.main_term).to_double();
  r.variance = vr.value.to_double();
  r.variance_main = vr.main_term.to_double();
  std::vector<Real> ratios = uniform_bound_monitor(basis, {x});
  r.ratio_x13 = basis.dim() ? ratios[0].to_double() : 0.0;
  return r;
}

}  // namespace hml
