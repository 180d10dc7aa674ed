#include "hml/voronoi.hpp"

#include "hml/bessel.hpp"

#include <cmath>

namespace hml {

namespace {
Real clamp01(const Real& u) {
  if (u <= 0.0) return Real(0.0, u.prec());
  if (u >= 1.0) return Real(1.0, u.prec());
  return u;
}
}  // namespace

Real w_delta(const Real& t, const SmoothingParams& p) {
  mpfr_prec_t wp = t.prec();
  if (t <= 1.0 || t >= 2.0) return Real(0.0, wp);
  double td = t.to_double(), inv = 1.0 / p.delta.to_double();
  if (td > 1.0 + inv && td < 2.0 - inv) return Real(1.0, wp);  // plateau
  Real up = transition_h(clamp01(p.delta.round_to(wp) * (t - 1L)));
  Real down = transition_h(clamp01(p.delta.round_to(wp) * (Real(2.0, wp) - t)));
  return up * down;
}

WTildeResult w_tilde(long n, const SmoothingParams& p, Precision prec, double bessel_abs_tol) {
  if (n < 1) throw std::invalid_argument("w_tilde: n >= 1 required");
  mpfr_prec_t wp = prec.bits + 32;
  Real nx = Real(n, wp) * p.x.round_to(wp);
  Real nu((double)p.kappa(), wp);
  Real four_pi = pi(wp) * 4L;
  double freq = 2.0 * M_PI * std::sqrt(nx.to_double());

  // Default asymptotic switch point (nx)^{-5/4}: the two-term envelope is
  // ~0.02-0.17 of that here, the same order as the explicit-form error term.
  Real tol(wp);
  if (bessel_abs_tol < 0.0)
    tol = pow(nx, Real(-1.25, wp));
  else
    tol = Real(bessel_abs_tol, wp);

  auto f = [&](const Real& t) -> Real {
    Real w = w_delta(t, p);
    if (w.is_zero()) return Real(0.0, wp);
    Real z = four_pi * sqrt(nx * t);
    return w * bessel_j_for_tol(nu, z, Precision(wp), tol);
  };
  QuadratureResult q =
      oscillatory_integrate(f, Real(1.0, wp), Real(2.0, wp), freq, Precision(wp));
  return WTildeResult{q.value.round_to(prec.bits), q.error_estimate.round_to(prec.bits)};
}

Real big_omega(const Real& n, const Real& x, const Real& kappa, Precision prec) {
  mpfr_prec_t wp = prec.bits + 64;
  Real nx = n.round_to(wp) * x.round_to(wp);
  Real kap = kappa.round_to(wp);
  Real pi2 = pi(wp) * pi(wp);
  Real ratio = kap * kap / nx;
  if (!(pi2 * 16L * nx > kap * kap))
    throw std::domain_error("big_omega: nx <= kappa^2/(16 pi^2)");
  Real z1 = pi(wp) * 4L * sqrt(nx * 2L);
  Real z2 = pi(wp) * 4L * sqrt(nx);
  Real term1 = Real(2L, wp) * pow(pi2 * 32L - ratio, Real(-0.75, wp)) *
               sin(omega_phase(kap, z1, Precision(wp)));
  Real term2 = pow(pi2 * 16L - ratio, Real(-0.75, wp)) *
               sin(omega_phase(kap, z2, Precision(wp)));
  return (term1 - term2).round_to(prec.bits);
}

Real big_omega(long n, const Real& x, long kappa, Precision prec) {
  return big_omega(Real(n, prec.bits + 64), x, Real(kappa, prec.bits + 64), prec);
}

Real big_omega_envelope(const Real& x, long kappa, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  Real pi2 = pi(wp) * pi(wp);
  Real ratio = Real(kappa, wp) * Real(kappa, wp) / x.round_to(wp);  // worst case n = 1
  return (Real(2L, wp) * pow(pi2 * 32L - ratio, Real(-0.75, wp)) +
          pow(pi2 * 16L - ratio, Real(-0.75, wp)))
      .round_to(prec.bits);
}

OmegaTable build_omega_table(long n_max, const Real& x, long kappa, Precision prec) {
  OmegaTable t;
  t.x = x.to_double();
  t.kappa = (double)kappa;
  t.values.assign((size_t)n_max + 1, Real(prec.bits));
  for (long n = 1; n <= n_max; ++n) t.values[(size_t)n] = big_omega(n, x, kappa, prec);
  return t;
}

long default_n_cutoff(const SmoothingParams& p, double K) {
  double k2 = (double)p.k * (double)p.k;
  double d2 = p.delta.to_double() * p.delta.to_double();
  return (long)std::ceil((k2 + d2) * K / p.x.to_double());
}

double w_tilde_tail_estimate(const SmoothingParams& p, long n_cutoff, double c3) {
  double k2d2 = (double)p.k * (double)p.k + p.delta.to_double() * p.delta.to_double();
  double xi1 = p.x.to_double() / k2d2;
  // 2 pi x sum_{n>cut} d(n) c3 (xi1 n)^{-3}, d(n) <= 2 sqrt(n) crudely.
  double sum = 0.0;
  for (long n = n_cutoff + 1; n <= 4 * n_cutoff; ++n)
    sum += 2.0 * std::sqrt((double)n) * std::pow(xi1 * (double)n, -3.0);
  sum += std::pow(xi1, -3.0) * std::pow((double)(4 * n_cutoff), -1.5);
  return 2.0 * M_PI * p.x.to_double() * c3 * sum;
}

std::vector<Real> w_tilde_table(const SmoothingParams& p, long n_cutoff, Precision prec,
                                double bessel_abs_tol, long jobs) {
  std::vector<Real> t((size_t)n_cutoff + 1, Real(prec.bits));
  parallel_for_deterministic(n_cutoff, jobs, [&](long i) {
    t[(size_t)(i + 1)] = w_tilde(i + 1, p, prec, bessel_abs_tol).value;
  });
  return t;
}

Real voronoi_transform_with_table(const Eigenform& f, const Real& x,
                                  const std::vector<Real>& wtable, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  long n_cutoff = (long)wtable.size() - 1;
  if (f.n_max() < n_cutoff)
    throw std::invalid_argument("voronoi_transform: eigenvalue table shorter than n_cutoff");
  Real sum(0.0, wp);
  for (long n = 1; n <= n_cutoff; ++n)
    sum += f.lambda[(size_t)n].round_to(wp) * wtable[(size_t)n].round_to(wp);
  int sign = (f.k / 2) % 2 == 0 ? 1 : -1;
  return (pi(wp) * 2L * Real((long)sign, wp) * x.round_to(wp) * sum).round_to(prec.bits);
}

Real voronoi_transform(const Eigenform& f, const Real& x, const SmoothingParams& p,
                       long n_cutoff, Precision prec) {
  std::vector<Real> table = w_tilde_table(p, n_cutoff, prec);
  return voronoi_transform_with_table(f, x, table, prec);
}

}  // namespace hml
