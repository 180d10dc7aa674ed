#include "hml/numeric.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hml {

Real transition_h(const Real& u) {
  if (u < 0.0 || u > 1.0) throw std::domain_error("transition_h: u outside [0,1]");
  mpfr_prec_t p = u.prec();
  mpfr_prec_t wp = p + 32;
  if (u.is_zero()) return Real(0.0, p);
  Real one_minus(wp);
  mpfr_si_sub(one_minus.raw(), 1, u.raw(), MPFR_RNDN);
  if (one_minus.is_zero()) return Real(1.0, p);
  // sigma(u) = exp(-1/u)
  Real su = exp(-(Real(1L, wp) / u.round_to(wp)));
  Real sv = exp(-(Real(1L, wp) / one_minus));
  return (su / (su + sv)).round_to(p);
}

namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
void legendre_pair(int n, const Real& x, Real& pn, Real& pd) {
  mpfr_prec_t p = x.prec();
  Real p0(1.0, p), p1 = x;
  for (int j = 2; j <= n; ++j) {
    Real p2 = (Real(2 * j - 1L, p) * x * p1 - Real(j - 1L, p) * p0) / Real((long)j, p);
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  // (1-x^2) P_n'(x) = n (P_{n-1}(x) - x P_n(x))
  Real one(1.0, p);
  pd = Real((long)n, p) * (p0 - x * p1) / (one - x * x);
}

GaussRule build_rule(int order, mpfr_prec_t prec) {
  mpfr_prec_t wp = prec + 32;
  GaussRule r;
  r.nodes.resize(order, Real(prec));
  r.weights.resize(order, Real(prec));
  Real tol = pow2(-(long)wp + 8, wp);
  for (int i = 0; i < order; ++i) {
    // Chebyshev-like initial guess, then Newton.
    double guess = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    Real x(guess, wp), pn(wp), pd(wp);
    for (int it = 0; it < 200; ++it) {
      legendre_pair(order, x, pn, pd);
      Real dx = pn / pd;
      x -= dx;
      if (abs(dx) <= tol) break;
    }
    legendre_pair(order, x, pn, pd);
    Real w = Real(2L, wp) / ((Real(1.0, wp) - x * x) * pd * pd);
    r.nodes[i] = x.round_to(prec);
    r.weights[i] = w.round_to(prec);
  }
  return r;
}

std::map<std::pair<int, mpfr_prec_t>, GaussRule> g_rules;
std::mutex g_rules_mu;

}  // namespace

const GaussRule& gauss_legendre(int order, mpfr_prec_t prec) {
  std::lock_guard<std::mutex> lk(g_rules_mu);
  auto key = std::make_pair(order, prec);
  auto it = g_rules.find(key);
  if (it == g_rules.end()) it = g_rules.emplace(key, build_rule(order, prec)).first;
  return it->second;
}

long initial_panels(double length, double freq_hint) {
  double per = length * freq_hint / M_PI;
  long n = (per <= 0.0) ? 1 : (long)std::ceil(per);
  if (n < 1) n = 1;
  return 2 * n;
}

QuadratureResult oscillatory_integrate(const std::function<Real(const Real&)>& f,
                                       const Real& a, const Real& b,
                                       double freq_hint, Precision prec) {
  if (!(a < b)) throw std::invalid_argument("oscillatory_integrate: need a < b");
  mpfr_prec_t wp = prec.bits + 32;
  const GaussRule& g16 = gauss_legendre(16, wp);
  const GaussRule& g32 = gauss_legendre(32, wp);

  double length = (b - a).to_double();
  long panels = initial_panels(length, freq_hint);
  const long panel_cap = panels << 7;
  Real tol_rel = pow2(-prec.bits + 16, wp);

  Real half(0.5, wp);
  for (;;) {
    Real width = (b - a) / Real((long)panels, wp);
    Real hw = width * half;
    Real total(0.0, wp), err(0.0, wp), scale(0.0, wp);
    Real t(wp), fx(wp);
    for (long p = 0; p < panels; ++p) {
      Real mid = a + width * Real((double)p + 0.5, wp);
      Real s16(0.0, wp), s32(0.0, wp);
      for (int i = 0; i < 16; ++i) {
        t = mid + hw * g16.nodes[i];
        fx = f(t);
        s16 += g16.weights[i] * fx;
        Real m = abs(fx);
        if (m > scale) scale = m;
      }
      for (int i = 0; i < 32; ++i) {
        t = mid + hw * g32.nodes[i];
        fx = f(t);
        s32 += g32.weights[i] * fx;
        Real m = abs(fx);
        if (m > scale) scale = m;
      }
      total += s32 * hw;
      err += abs(s32 - s16) * hw;
    }
    scale *= (b - a);
    if (scale.is_zero() || err <= tol_rel * scale) {
      return QuadratureResult{total.round_to(prec.bits), err.round_to(prec.bits), panels};
    }
    if (panels >= panel_cap) {
      throw QuadratureError("oscillatory_integrate: error estimate stagnates above tolerance at panel cap");
    }
    panels *= 2;
  }
}

QuadratureResultC oscillatory_integrate_c(
    const std::function<void(const Real&, Real&, Real&)>& f, const Real& a, const Real& b,
    double freq_hint, Precision prec) {
  if (!(a < b)) throw std::invalid_argument("oscillatory_integrate_c: need a < b");
  mpfr_prec_t wp = prec.bits + 32;
  const GaussRule& g16 = gauss_legendre(16, wp);
  const GaussRule& g32 = gauss_legendre(32, wp);

  double length = (b - a).to_double();
  long panels = initial_panels(length, freq_hint);
  const long panel_cap = panels << 7;
  Real tol_rel = pow2(-prec.bits + 16, wp);

  Real half(0.5, wp);
  for (;;) {
    Real width = (b - a) / Real((long)panels, wp);
    Real hw = width * half;
    Real tot_re(0.0, wp), tot_im(0.0, wp), err(0.0, wp), scale(0.0, wp);
    Real t(wp), fre(wp), fim(wp);
    for (long p = 0; p < panels; ++p) {
      Real mid = a + width * Real((double)p + 0.5, wp);
      Real s16r(0.0, wp), s16i(0.0, wp), s32r(0.0, wp), s32i(0.0, wp);
      for (int i = 0; i < 16; ++i) {
        t = mid + hw * g16.nodes[i];
        f(t, fre, fim);
        s16r += g16.weights[i] * fre;
        s16i += g16.weights[i] * fim;
        Real m = max(abs(fre), abs(fim));
        if (m > scale) scale = m;
      }
      for (int i = 0; i < 32; ++i) {
        t = mid + hw * g32.nodes[i];
        f(t, fre, fim);
        s32r += g32.weights[i] * fre;
        s32i += g32.weights[i] * fim;
        Real m = max(abs(fre), abs(fim));
        if (m > scale) scale = m;
      }
      tot_re += s32r * hw;
      tot_im += s32i * hw;
      err += (abs(s32r - s16r) + abs(s32i - s16i)) * hw;
    }
    scale *= (b - a);
    if (scale.is_zero() || err <= tol_rel * scale) {
      return QuadratureResultC{tot_re.round_to(prec.bits), tot_im.round_to(prec.bits),
                               err.round_to(prec.bits), panels};
    }
    if (panels >= panel_cap) {
      throw QuadratureError("oscillatory_integrate_c: error estimate stagnates above tolerance at panel cap");
    }
    panels *= 2;
  }
}

}  // namespace hml
