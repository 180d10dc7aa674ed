#include "hml/equidist.hpp"

#include "hml/bessel.hpp"

#include <algorithm>
#include <cmath>

namespace hml {

Real h_value(long n, const Real& x, const Real& kappa, Precision prec) {
  mpfr_prec_t wp = prec.bits + 64;
  Real nx = Real(n, wp) * x.round_to(wp);
  Real kap = kappa.round_to(wp);
  Real z = pi(wp) * 4L * sqrt(nx * 2L);
  if (!(z > kap)) throw std::domain_error("h_value: 32 pi^2 n x <= kappa^2");
  return (omega_phase(kap, z, Precision(wp)) / (pi(wp) * 2L)).round_to(prec.bits);
}

long count_Z(long N, const Real& x, const Real& kappa, Precision prec) {
  if (N < 4) throw std::invalid_argument("count_Z: N >= 4 required");
  mpfr_prec_t wp = prec.bits + 16;
  long count = 0;
  for (long n = 4; n <= N; ++n) {
    Real f = frac(h_value(n, x, kappa, Precision(wp))) * 40L;
    if (f >= 9.0 && f <= 11.0) ++count;
  }
  return count;
}

double star_discrepancy(const std::vector<double>& sorted_points, double A) {
  // C(beta) jumps at each point; |C - beta A| attains its sup one-sided at
  // a jump or at beta = 1.
  double best = std::abs((double)sorted_points.size() - A);
  for (size_t i = 0; i < sorted_points.size(); ++i) {
    double au = A * sorted_points[i];
    best = std::max(best, (double)(i + 1) - au);
    best = std::max(best, au - (double)i);
  }
  return best;
}

DiscrepancyBracket discrepancy(long N, const Real& x, const Real& kappa, Precision prec) {
  if (N < 5) throw std::invalid_argument("discrepancy: N >= 5 required");
  std::vector<double> pts;
  pts.reserve((size_t)(N - 3));
  for (long n = 4; n <= N; ++n)
    pts.push_back(frac(h_value(n, x, kappa, prec)).to_double());
  std::sort(pts.begin(), pts.end());
  DiscrepancyBracket b;
  b.d_star = star_discrepancy(pts, (double)(N - 4));
  b.d_lower = b.d_star;
  b.d_upper = 2.0 * b.d_star;
  return b;
}

EtScan erdos_turan_scan(long N, long R_max, const Real& x, const Real& kappa, Precision prec) {
  mpfr_prec_t wp = prec.bits + 16;
  // h(n) once, then the r harmonics from cos/sin of r*2pi*h.
  std::vector<Real> hs;
  hs.reserve((size_t)N);
  for (long n = 1; n <= N; ++n) hs.push_back(h_value(n, x, kappa, Precision(wp)));

  Real two_pi = pi(wp) * 2L;
  EtScan scan;
  scan.bounds.assign((size_t)R_max, 0.0);
  Real harmonic_sum(0.0, wp);
  for (long r = 1; r <= R_max; ++r) {
    Real sr(0.0, wp), si(0.0, wp), ang(wp);
    for (long n = 1; n <= N; ++n) {
      ang = two_pi * Real(r, wp) * hs[(size_t)(n - 1)];
      sr += cos(ang);
      si += sin(ang);
    }
    harmonic_sum += sqrt(sr * sr + si * si) / Real(r, wp);
    Real bound = Real(N, wp) / Real(r + 1, wp) + harmonic_sum * 3L;
    scan.bounds[(size_t)(r - 1)] = bound.to_double();
  }
  scan.best_R = 1;
  scan.best = scan.bounds[0];
  for (long r = 2; r <= R_max; ++r)
    if (scan.bounds[(size_t)(r - 1)] < scan.best) {
      scan.best = scan.bounds[(size_t)(r - 1)];
      scan.best_R = r;
    }
  return scan;
}

Real erdos_turan_bound(long N, long R, const Real& x, const Real& kappa, Precision prec) {
  if (R < 1) throw std::invalid_argument("erdos_turan_bound: R >= 1 required");
  EtScan scan = erdos_turan_scan(N, R, x, kappa, prec);
  return Real(scan.bounds[(size_t)(R - 1)], prec.bits);
}

namespace {

// Term list c * (A xi - B)^{s} * xi^{t} with half-integer s (stored as 2s);
// closed under differentiation. h'(xi) = (1/(4pi)) (A xi - B)^{1/2} xi^{-1}
// with A = 32 pi^2 x, B = kappa^2.
struct PowerTerm {
  Real coeff;
  long two_s = 0;
  long t = 0;
};

std::vector<PowerTerm> differentiate(const std::vector<PowerTerm>& terms, const Real& A,
                                     mpfr_prec_t wp) {
  std::vector<PowerTerm> out;
  for (const auto& tm : terms) {
    if (tm.two_s != 0) {
      Real c = tm.coeff * A * Real(tm.two_s, wp) / 2L;
      out.push_back(PowerTerm{c, tm.two_s - 2, tm.t});
    }
    if (tm.t != 0) {
      out.push_back(PowerTerm{tm.coeff * Real(tm.t, wp), tm.two_s, tm.t - 1});
    }
  }
  // merge identical (2s, t) pairs to keep the list short
  std::vector<PowerTerm> merged;
  for (auto& tm : out) {
    bool found = false;
    for (auto& m : merged)
      if (m.two_s == tm.two_s && m.t == tm.t) {
        m.coeff += tm.coeff;
        found = true;
        break;
      }
    if (!found) merged.push_back(tm);
  }
  return merged;
}

Real eval_terms(const std::vector<PowerTerm>& terms, const Real& A, const Real& B,
                const Real& xi, mpfr_prec_t wp) {
  Real base = A * xi - B;
  if (!(base > 0.0)) throw std::domain_error("h_derivative: 32 pi^2 x xi <= kappa^2");
  Real sum(0.0, wp);
  Real sqrt_base = sqrt(base);
  for (const auto& tm : terms) {
    // base^{two_s/2} = base^{floor} * sqrt_base^{parity}
    long q = tm.two_s >= 0 ? tm.two_s / 2 : -((-tm.two_s + 1) / 2);
    long parity = tm.two_s - 2 * q;  // 0 or 1
    Real v = tm.coeff * pow(base, q) * pow(xi, tm.t);
    if (parity) v *= sqrt_base;
    sum += v;
  }
  return sum;
}

std::vector<PowerTerm> h_deriv_terms(long p, const Real& A, mpfr_prec_t wp) {
  std::vector<PowerTerm> terms{PowerTerm{Real(1.0, wp) / (pi(wp) * 4L), 1, -1}};
  for (long i = 2; i <= p; ++i) terms = differentiate(terms, A, wp);
  return terms;
}

}  // namespace

Real h_derivative(long p, const Real& xi, const Real& x, const Real& kappa, Precision prec) {
  if (p < 1) throw std::invalid_argument("h_derivative: p >= 1 required");
  mpfr_prec_t wp = prec.bits + 32;
  Real A = pi(wp) * pi(wp) * 32L * x.round_to(wp);
  Real B = kappa.round_to(wp) * kappa.round_to(wp);
  auto terms = h_deriv_terms(p, A, wp);
  return eval_terms(terms, A, B, xi.round_to(wp), wp).round_to(prec.bits);
}

Real vdc_bound(const Real& a, const Real& b, long r, long p, const Real& x, const Real& kappa,
               Precision prec) {
  if (p < 2) throw std::invalid_argument("vdc_bound: p >= 2 required");
  if (!(b - a >= 1.0)) throw std::invalid_argument("vdc_bound: b - a >= 1 required");
  mpfr_prec_t wp = prec.bits + 32;
  Real A = pi(wp) * pi(wp) * 32L * x.round_to(wp);
  Real B = kappa.round_to(wp) * kappa.round_to(wp);
  auto terms = h_deriv_terms(p, A, wp);

  // lambda = min, mu*lambda = max of |r h^{(p)}| by dense sampling with a
  // local ternary refinement at the coarse extrema.
  const long samples = 10000;
  Real lo = a.round_to(wp), hi = b.round_to(wp);
  Real step = (hi - lo) / Real(samples, wp);
  Real vmin(wp), vmax(wp);
  long imin = 0, imax = 0;
  bool first = true;
  int sign_seen = 0;
  for (long i = 0; i <= samples; ++i) {
    Real xi = lo + step * Real(i, wp);
    Real v = eval_terms(terms, A, B, xi, wp);
    int s = v.sign();
    if (s != 0) {
      if (sign_seen == 0) sign_seen = s;
      else if (sign_seen != s)
        throw DegeneratePhaseError("vdc_bound: h^{(p)} changes sign on [a,b]");
    }
    Real av = abs(v);
    if (first || av < vmin) { vmin = av; imin = i; }
    if (first || av > vmax) { vmax = av; imax = i; }
    first = false;
  }
  auto refine = [&](long idx, bool want_min) -> Real {
    Real l = lo + step * Real(std::max(0L, idx - 1), wp);
    Real r2 = lo + step * Real(std::min(samples, idx + 1), wp);
    for (int it = 0; it < 60; ++it) {
      Real m1 = l + (r2 - l) / 3L, m2 = r2 - (r2 - l) / 3L;
      Real f1 = abs(eval_terms(terms, A, B, m1, wp));
      Real f2 = abs(eval_terms(terms, A, B, m2, wp));
      bool move_left = want_min ? (f1 < f2) : (f1 > f2);
      if (move_left) r2 = m2; else l = m1;
    }
    return abs(eval_terms(terms, A, B, (l + r2) / 2L, wp));
  };
  vmin = min(vmin, refine(imin, true));
  vmax = max(vmax, refine(imax, false));

  Real lambda = vmin * Real(r, wp);
  Real mu = vmax / vmin;
  long P = 1L << (p - 1);
  Real len = hi - lo;
  Real term1 = len * pow(mu, Real(2.0 / (double)P, wp)) *
               pow(lambda, Real(1.0 / (double)(2 * P - 2), wp));
  Real term2 = pow(len, Real(1.0 - 2.0 / (double)P, wp)) *
               pow(lambda, Real(-1.0 / (double)(2 * P - 2), wp));
  return (term1 + term2).round_to(prec.bits);
}

PaperParams paper_parameters(const Real& x) {
  mpfr_prec_t wp = std::max<mpfr_prec_t>(x.prec(), 128) + 32;
  Real lx = log(x.round_to(wp));
  if (!(lx > 1.0)) throw std::domain_error("paper_parameters: x >= e^e required");
  Real llx = log(lx);
  if (!(llx > 1.0)) throw std::domain_error("paper_parameters: x >= e^e required");
  PaperParams pp;
  // Tiny nudge guards the floor against boundary rounding (e.g. x = e^{e^3}).
  Real nudge = pow2(-40, wp);
  pp.p = floor((llx + 3L) / 2L + nudge).to_long();
  pp.P = 1L << (pp.p - 1);
  pp.N = floor(exp(lx / Real(2 * pp.p - 3, wp)) + nudge).to_long();
  pp.R = floor(exp(lx / Real((2 * pp.p - 3) * (2 * pp.P - 1), wp)) + nudge).to_long();
  return pp;
}

EquidistReport compute_equidist_report(long N, const Real& x, const Real& kappa,
                                       long R_max, Precision prec) {
  EquidistReport r;
  r.x = x.to_double();
  r.kappa = kappa.to_double();
  r.N = N;
  r.z_count = count_Z(N, x, kappa, prec);
  r.z_expected = (double)(N - 4) / 20.0;
  DiscrepancyBracket d = discrepancy(N, x, kappa, prec);
  r.d_star = d.d_star;
  r.d_lower = d.d_lower;
  r.d_upper = d.d_upper;
  EtScan scan = erdos_turan_scan(N, R_max, x, kappa, prec);
  r.et_bound = scan.best;
  r.et_R = scan.best_R;
  PaperParams pp = paper_parameters(x);
  r.p = pp.p;
  r.N_choice = pp.N;
  r.R_choice = pp.R;
  return r;
}

}  // namespace hml
