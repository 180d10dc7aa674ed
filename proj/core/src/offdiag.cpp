#include "hml/offdiag.hpp"

#include "hml/bessel.hpp"

#include <cmath>
#include <numeric>

namespace hml {

double OffDiagParams::keps() const { return std::pow((double)k, epsilon); }
double OffDiagParams::g_lo() const { return (double)k / 10.0; }
double OffDiagParams::g_plateau_lo() const { return (double)k / 2.0; }
double OffDiagParams::g_plateau_hi() const {
  double d = delta.to_double();
  return 2.0 * d * d * keps() / x.to_double();
}
double OffDiagParams::g_hi() const {
  double d = delta.to_double();
  return 10.0 * d * d * keps() / x.to_double();
}

void OffDiagParams::validate() const {
  double xd = x.to_double(), dd = delta.to_double();
  if (xd < (double)k * (double)k / (8.0 * M_PI * M_PI) * (1.0 - 1e-12))
    throw std::domain_error("OffDiagParams: x below k^2/(8 pi^2)");
  if (dd * dd < xd * (1.0 - 1e-12))
    throw std::domain_error("OffDiagParams: Delta below x^{1/2}");
  if (m < 1 || c < 1 || n < 1) throw std::domain_error("OffDiagParams: m, c, n >= 1");
  double td = t.to_double();
  if (td < 1.0 - 1e-12 || td > 2.0 + 1e-12)
    throw std::domain_error("OffDiagParams: t outside [1,2]");
  // The amplitude factor (c^2 x t y^2/m - kappa^2)^{-3/4} must stay real on
  // supp g; fails only for inadmissible corners.
  double y_sing = (double)kappa() * std::sqrt((double)m) / ((double)c * std::sqrt(xd * td));
  if (y_sing >= g_lo())
    throw std::domain_error("OffDiagParams: amplitude singularity inside supp g");
}

namespace {
Real clamp01(const Real& u) {
  if (u <= 0.0) return Real(0.0, u.prec());
  if (u >= 1.0) return Real(1.0, u.prec());
  return u;
}
}  // namespace

Real g_window(const Real& y, const OffDiagParams& p) {
  mpfr_prec_t wp = y.prec();
  if (y <= p.g_lo() || y >= p.g_hi()) return Real(0.0, wp);
  Real log5 = log(Real(5.0, wp));
  Real up = transition_h(clamp01(log(y / Real(p.g_lo(), wp)) / log5));
  Real down =
      Real(1.0, wp) - transition_h(clamp01(log(y / Real(p.g_plateau_hi(), wp)) / log5));
  return up * down;
}

PhaseF phase_F(const Real& y, const OffDiagParams& p, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  Real yw = y.round_to(wp);
  Real xw = p.x.round_to(wp), tw = p.t.round_to(wp);
  Real kap((long)p.kappa(), wp);
  Real cxt_m = Real(p.c, wp) * Real(p.c, wp) * xw * tw / Real(p.m, wp);
  Real inner = cxt_m - kap * kap / (yw * yw);
  if (!(inner > 0.0)) throw std::domain_error("phase_F: c^2 x t y^2/m <= kappa^2");
  Real alpha = Real(p.c, wp) * sqrt(xw * tw / Real(p.m, wp));
  Real cn_4pim = Real(p.c, wp) * Real(p.n, wp) / (pi(wp) * 4L * Real(p.m, wp));
  PhaseF out;
  out.F = (cn_4pim / 2L * yw * yw - omega_phase(kap, alpha * yw, Precision(wp)))
              .round_to(prec.bits);
  out.F1 = (cn_4pim * yw - sqrt(inner)).round_to(prec.bits);
  out.F2 = (cn_4pim - kap * kap / (yw * yw * yw) / sqrt(inner)).round_to(prec.bits);
  return out;
}

Real stationary_point(const OffDiagParams& p, Precision prec) {
  p.validate();
  mpfr_prec_t wp = prec.bits + 32;
  double lo = p.g_lo(), hi = p.g_hi();
  const long grid = 4096;
  Real prev(wp);
  double prev_y = lo;
  bool have_bracket = false;
  double blo = 0, bhi = 0;
  for (long i = 0; i <= grid; ++i) {
    double yd = lo + (hi - lo) * (double)i / (double)grid;
    Real f1 = phase_F(Real(yd, wp), p, Precision(wp)).F1;
    if (i > 0 && (prev.sign() < 0) != (f1.sign() < 0)) {
      blo = prev_y;
      bhi = yd;
      have_bracket = true;
      break;
    }
    prev = f1;
    prev_y = yd;
  }
  if (!have_bracket)
    throw NoRootError("stationary_point: F' has constant sign on the g window");

  Real a(blo, wp), b(bhi, wp);
  Real fa = phase_F(a, p, Precision(wp)).F1;
  for (int it = 0; it < 80; ++it) {
    Real mid = (a + b) / 2L;
    Real fm = phase_F(mid, p, Precision(wp)).F1;
    if (fm.is_zero()) { a = mid; b = mid; break; }
    if ((fm.sign() < 0) == (fa.sign() < 0)) { a = mid; fa = fm; }
    else b = mid;
  }
  Real y0 = (a + b) / 2L;
  Real tol = pow2(-prec.bits / 2, wp);
  for (int it = 0; it < 60; ++it) {
    PhaseF ph = phase_F(y0, p, Precision(wp));
    Real dy = ph.F1 / ph.F2;
    y0 -= dy;
    if (abs(dy) <= tol) break;
  }

  // Paper envelope |y0 - 4 pi sqrt(mxt)/n| <= 10 k^{1.001} Delta^2 / x^2.
  Real ideal = pi(wp) * 4L * sqrt(Real(p.m, wp) * p.x.round_to(wp) * p.t.round_to(wp)) /
               Real(p.n, wp);
  Real envelope = Real(10.0, wp) * pow(Real((double)p.k, wp), Real(1.001, wp)) *
                  p.delta.round_to(wp) * p.delta.round_to(wp) /
                  (p.x.round_to(wp) * p.x.round_to(wp));
  if (abs(y0 - ideal) > envelope)
    throw std::runtime_error("stationary_point: root outside the paper envelope");
  return y0.round_to(prec.bits);
}

PartitionSpec partition_spec(const OffDiagParams& p, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  Real ratio = Real(p.m, wp) / (Real(p.c, wp) * Real(p.n, wp));
  Real scale(std::pow((double)p.k, p.window_epsilon), wp);
  Real L = scale * max(Real(1.0, wp), ratio);
  return PartitionSpec{L.round_to(prec.bits), stationary_point(p, prec)};
}

Real partition_bump(long l, const Real& L, const Real& alpha, const Real& xi) {
  mpfr_prec_t wp = xi.prec();
  Real one(1.0, wp);
  if (l == 0) {
    if (xi <= alpha - L * 2L || xi >= alpha + L * 2L) return Real(0.0, wp);
    if (xi >= alpha - L && xi <= alpha + L) return one;
    if (xi < alpha) return one - transition_h(clamp01((alpha - xi) / L - one));
    return one - transition_h(clamp01((xi - alpha) / L - one));
  }
  if (l < 0) {
    // b_l(xi) = b_{-l}(2 alpha - xi)
    return partition_bump(-l, L, alpha, alpha * 2L - xi);
  }
  Real lo = alpha + L * (1L << (l - 1));
  Real mid = alpha + L * (1L << l);
  Real hi = alpha + L * (1L << (l + 1));
  if (xi <= lo || xi >= hi) return Real(0.0, wp);
  if (xi <= mid) return transition_h(clamp01((xi - alpha) / (L * (1L << (l - 1))) - one));
  return one - transition_h(clamp01((xi - alpha) / (L * (1L << l)) - one));
}

namespace {

// G_i(y) = c^{3/2} m^{-3/4} y   (c^2xt/m y^2 - kappa^2)^{-3/4} g(y) J_kappa(y)   (i=1)
//          c^{7/2} m^{-7/4} x y^3 (c^2xt/m y^2 - kappa^2)^{-7/4} g(y) J_kappa(y)   (i=2)
struct GiEvaluator {
  const OffDiagParams& p;
  mpfr_prec_t wp;
  Real kap, cxt_m, pref;
  Real expo;
  bool second;

  GiEvaluator(const OffDiagParams& p_, int i, mpfr_prec_t wp_)
      : p(p_), wp(wp_), kap((long)p_.kappa(), wp_), cxt_m(wp_), pref(wp_),
        expo(i == 1 ? -0.75 : -1.75, wp_), second(i == 2) {
    Real c(p.c, wp), m(p.m, wp);
    cxt_m = c * c * p.x.round_to(wp) * p.t.round_to(wp) / m;
    if (!second)
      pref = pow(c, Real(1.5, wp)) * pow(m, Real(-0.75, wp));
    else
      pref = pow(c, Real(3.5, wp)) * pow(m, Real(-1.75, wp)) * p.x.round_to(wp);
  }

  Real operator()(const Real& y) const {
    Real g = g_window(y, p);
    if (g.is_zero()) return Real(0.0, wp);
    Real base = cxt_m * y * y - kap * kap;
    Real j = bessel_j(kap, y, Precision(wp), 4096).value;
    Real poly = second ? y * y * y : y;
    return pref * poly * pow(base, expo) * g * j;
  }
};

double max_abs_f1(const OffDiagParams& p, double a, double b, Precision prec) {
  double best = 0.0;
  for (int i = 0; i <= 16; ++i) {
    double y = a + (b - a) * (double)i / 16.0;
    double f1 = std::abs(phase_F(Real(y, prec.bits), p, prec).F1.to_double());
    best = std::max(best, f1);
  }
  return best;
}

}  // namespace

DualIntegral dual_integral(const OffDiagParams& p, int i, bool windowed, Precision prec) {
  p.validate();
  mpfr_prec_t wp = prec.bits + 32;
  GiEvaluator gi(p, i, wp);

  Real a(wp), b(wp);
  PartitionSpec ps{Real(0.0, wp), Real(0.0, wp)};
  if (windowed) {
    ps = partition_spec(p, Precision(wp));
    a = ps.y0 - ps.L * 2L;
    b = ps.y0 + ps.L * 2L;
  } else {
    a = Real(p.g_lo(), wp);
    b = Real(p.g_hi(), wp);
  }
  double freq = max_abs_f1(p, a.to_double(), b.to_double(), Precision(wp)) + 1.0;

  auto f = [&](const Real& y, Real& re, Real& im) {
    Real amp = gi(y);
    if (windowed && !amp.is_zero()) amp *= partition_bump(0, ps.L, ps.y0, y);
    if (amp.is_zero()) {
      mpfr_set_zero(re.raw(), 1);
      mpfr_set_zero(im.raw(), 1);
      return;
    }
    Real F = phase_F(y, p, Precision(wp)).F;
    re = amp * cos(F);
    im = amp * sin(F);
  };
  QuadratureResultC q = oscillatory_integrate_c(f, a, b, freq, Precision(wp));
  return DualIntegral{q.re.round_to(prec.bits), q.im.round_to(prec.bits),
                      q.error_estimate.round_to(prec.bits)};
}

Real s_sum_direct(const OffDiagParams& p, int i, long n_cap, Precision prec) {
  p.validate();
  mpfr_prec_t wp = prec.bits + 32;
  // n-range where g(4 pi sqrt(mn)/c) is supported.
  double c2_16pi2m = (double)p.c * (double)p.c / (16.0 * M_PI * M_PI * (double)p.m);
  long n_lo = (long)std::floor(p.g_lo() * p.g_lo() * c2_16pi2m);
  long n_hi = (long)std::ceil(p.g_hi() * p.g_hi() * c2_16pi2m);
  if (n_lo < 1) n_lo = 1;
  if (n_hi > n_cap)
    throw std::runtime_error("s_sum_direct: supp g needs n beyond n_cap");

  Real kap((long)p.kappa(), wp);
  Real xw = p.x.round_to(wp), tw = p.t.round_to(wp);
  Real pi2_16 = pi(wp) * pi(wp) * 16L;
  Real four_pi = pi(wp) * 4L;
  Real expo(i == 1 ? -0.75 : -1.75, wp);

  // Amplitudes are independent of the residue a.
  std::vector<Real> amp;
  std::vector<long> ns;
  for (long n = n_lo; n <= n_hi; ++n) {
    Real y = four_pi * sqrt(Real(p.m, wp) * Real(n, wp)) / Real(p.c, wp);
    Real g = g_window(y, p);
    if (g.is_zero()) continue;
    Real base = pi2_16 * Real(n, wp) * xw * tw - kap * kap;
    Real z = four_pi * sqrt(Real(n, wp) * xw * tw);
    Real v = pow(base, expo) * sin(omega_phase(kap, z, Precision(wp))) * g *
             bessel_j(kap, y, Precision(wp), 4096).value;
    if (i == 2) v *= Real(n, wp) * xw;
    amp.push_back(v);
    ns.push_back(n);
  }

  Real total(0.0, wp);
  Real two_pi_c = pi(wp) * 2L / Real(p.c, wp);
  for (long a = 1; a <= p.c; ++a) {
    if (std::gcd(a, p.c) != 1) continue;
    Real sr(0.0, wp), si(0.0, wp), ang(wp);
    for (size_t idx = 0; idx < ns.size(); ++idx) {
      long rmod = (long)(((__int128)a * ns[idx]) % p.c);
      ang = two_pi_c * Real(rmod, wp);
      sr += amp[idx] * cos(ang);
      si += amp[idx] * sin(ang);
    }
    total += sqrt(sr * sr + si * si);
  }
  return total.round_to(prec.bits);
}

Real poisson_check(const OffDiagParams& p, long a, Precision prec) {
  p.validate();
  if (std::gcd(a, p.c) != 1) throw std::invalid_argument("poisson_check: (a,c) != 1");
  mpfr_prec_t wp = prec.bits + 32;
  long c = p.c;
  Real kap((long)p.kappa(), wp);
  Real xw = p.x.round_to(wp), tw = p.t.round_to(wp);
  Real pi2_16 = pi(wp) * pi(wp) * 16L;
  Real four_pi = pi(wp) * 4L;

  double xtd = xw.to_double() * tw.to_double();
  double md = (double)p.m, cd = (double)c;
  double u_lo = p.g_lo() * p.g_lo() * cd * cd / (16.0 * M_PI * M_PI * md);
  double u_hi = p.g_hi() * p.g_hi() * cd * cd / (16.0 * M_PI * M_PI * md);

  // phi(u) = (16pi^2 u x t - kappa^2)^{-3/4} sin omega(4pi sqrt(uxt))
  //          g(4pi sqrt(mu)/c) J_kappa(4pi sqrt(mu)/c)
  auto phi = [&](const Real& u) -> Real {
    Real y = four_pi * sqrt(Real(p.m, wp) * u) / Real(c, wp);
    Real g = g_window(y, p);
    if (g.is_zero()) return Real(0.0, wp);
    Real base = pi2_16 * u * xw * tw - kap * kap;
    Real z = four_pi * sqrt(u * xw * tw);
    return pow(base, Real(-0.75, wp)) * sin(omega_phase(kap, z, Precision(wp))) * g *
           bessel_j(kap, y, Precision(wp), 4096).value;
  };

  // Left side: lattice sum over u = b + lc inside the support.
  long b = ((a % c) + c) % c;
  if (b == 0) b = c;
  Real lhs(0.0, wp);
  for (long u = b; u <= (long)std::ceil(u_hi); u += c)
    if ((double)u > u_lo && (double)u < u_hi) lhs += phi(Real(u, wp));

  // Right side: (1/c) sum_l~ e(l~ b/c) int phi(u) e(-l~ u/c) du. The modes
  // pair with the phase of sin omega near d omega/du = 2 pi l~/c, i.e.
  // l~ ~ c sqrt(xt/u); beyond that the integrals decay fast.
  long ltil_stat = (long)std::ceil(cd * std::sqrt(xtd / u_lo)) + 8;
  long ltil_cap = 2 * ltil_stat + 64;

  // Graded panels: width tracks the local combined frequency.
  struct Panel { double a, b; };
  std::vector<Panel> panels;
  {
    double u = u_lo;
    while (u < u_hi) {
      double f_loc = 2.0 * M_PI * std::sqrt(xtd / u) + 2.0 * M_PI * (double)ltil_cap / cd + 1.0;
      double w = M_PI / (2.0 * f_loc);
      double ub = std::min(u + w, u_hi);
      panels.push_back(Panel{u, ub});
      u = ub;
    }
  }

  const GaussRule& g16 = gauss_legendre(16, wp);
  const GaussRule& g32 = gauss_legendre(32, wp);
  struct Node { Real u, w, phi, er, ei; };  // (er,ei): running e(-l~ u/c)
  std::vector<Node> nodes;
  nodes.reserve(panels.size() * 48);
  Real two_pi_over_c = pi(wp) * 2L / Real(c, wp);
  for (const auto& pn : panels) {
    Real mid((pn.a + pn.b) / 2.0, wp), hw((pn.b - pn.a) / 2.0, wp);
    for (int s = 0; s < 48; ++s) {
      const GaussRule& g = s < 16 ? g16 : g32;
      int idx = s < 16 ? s : s - 16;
      Node nd{Real(wp), Real(wp), Real(wp), Real(wp), Real(wp)};
      nd.u = mid + hw * g.nodes[idx];
      nd.w = g.weights[idx] * hw;
      nd.phi = phi(nd.u);
      Real ang = two_pi_over_c * nd.u;
      nd.er = cos(ang);
      nd.ei = -sin(ang);
      nodes.push_back(std::move(nd));
    }
  }

  // Step factors for the l~ recurrence start at l~ = 0: current = e(0) = 1.
  std::vector<Real> cr(nodes.size(), Real(1.0, wp)), ci(nodes.size(), Real(0.0, wp));

  Real dual_re(0.0, wp), dual_im(0.0, wp), quad16_re(0.0, wp), quad16_im(0.0, wp);
  Real scale(0.0, wp);
  long consecutive_small = 0;
  bool truncated_ok = false;
  Real tiny = pow2(-60, wp);
  for (long lt = 0; lt <= ltil_cap; ++lt) {
    // I(l~) with order-32 panels and the 16-vs-32 refinement bookkeeping.
    Real i32r(0.0, wp), i32i(0.0, wp), i16r(0.0, wp), i16i(0.0, wp);
    for (size_t j = 0; j < nodes.size(); ++j) {
      Real pr = nodes[j].w * nodes[j].phi * cr[j];
      Real pi_ = nodes[j].w * nodes[j].phi * ci[j];
      if ((j % 48) < 16) { i16r += pr; i16i += pi_; }
      else { i32r += pr; i32i += pi_; }
    }
    // contribution e(l~ b/c) I(l~) (+ conjugate pair for l~ > 0, since
    // phi is real so I(-l~) = conj(I(l~)))
    long rmod = (long)(((__int128)lt * b) % c);
    Real ang = two_pi_over_c * Real(rmod, wp);
    Real eb_r = cos(ang), eb_i = sin(ang);
    Real contrib_re = eb_r * i32r - eb_i * i32i;
    Real contrib_im = eb_r * i32i + eb_i * i32r;
    if (lt == 0) {
      dual_re += contrib_re;
      dual_im += contrib_im;
    } else {
      dual_re += contrib_re * 2L;  // + conjugate
    }
    quad16_re += abs(i32r - i16r);
    quad16_im += abs(i32i - i16i);

    Real mag = sqrt(i32r * i32r + i32i * i32i);
    if (mag > scale) scale = mag;
    if (lt > ltil_stat && mag <= tiny * max(scale, Real(1.0, wp))) {
      if (++consecutive_small >= 8) { truncated_ok = true; break; }
    } else {
      consecutive_small = 0;
    }

    // advance e(-l~ u/c) -> e(-(l~+1) u/c)
    for (size_t j = 0; j < nodes.size(); ++j) {
      Real nr = cr[j] * nodes[j].er - ci[j] * nodes[j].ei;
      Real ni = cr[j] * nodes[j].ei + ci[j] * nodes[j].er;
      cr[j] = nr;
      ci[j] = ni;
    }
  }
  if (!truncated_ok)
    throw std::runtime_error("poisson_check: dual tail estimate exceeds tolerance at cap");

  dual_re /= Real(c, wp);
  dual_im /= Real(c, wp);
  Real diff = sqrt((lhs - dual_re) * (lhs - dual_re) + dual_im * dual_im);
  Real res = diff / (abs(lhs) + pow2(-40, wp));
  return res.round_to(prec.bits);
}

OffdiagBound offdiag_bound_report(long k, const Real& x, const Real& delta, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  double e = 0.001;
  double xd = x.to_double(), dd = delta.to_double();
  if (dd < std::sqrt(xd) * (1.0 - 1e-12) ||
      dd > std::pow(xd, 2.0 / 3.0) * std::pow((double)k, 1.0 / 3.0 - e) * (1.0 + 1e-12))
    throw std::domain_error("offdiag_bound_report: Delta outside [x^{1/2}, x^{2/3} k^{1/3-eps}]");
  Real kk((double)k, wp), xw = x.round_to(wp), dw = delta.round_to(wp);
  OffdiagBound b{Real(wp), Real(wp), Real(wp), Real(wp)};
  b.t1 = pow(kk, Real(-8.0 / 3.0, wp)) * dw * dw;
  b.t2 = pow(kk, Real(-1.5 + e, wp)) * pow(dw, Real(1.5, wp));
  b.t3 = pow(xw, Real(-0.5, wp)) * pow(kk, Real(1.0 / 6.0 + 2 * e, wp)) * dw;
  b.t4 = pow(xw, Real(-1.5, wp)) * pow(kk, Real(-5.0 / 6.0 + 4 * e, wp)) * dw * dw * dw;
  return b;
}

Real lemma510iii_bound(const OffDiagParams& p, Precision prec) {
  mpfr_prec_t wp = prec.bits + 32;
  Real xw = p.x.round_to(wp), tw = p.t.round_to(wp);
  Real kk((double)p.k, wp), mm(p.m, wp), cc(p.c, wp), nn(p.n, wp);
  Real gap = pi(wp) * 4L * sqrt(mm * xw * tw) / kk - nn;
  if (!(gap > 0.0))
    throw std::domain_error("lemma510iii_bound: 4 pi sqrt(mxt)/k <= n");
  Real term1 = pow(xw, Real(-9.0 / 8.0, wp)) * pow(kk, Real(-0.25, wp)) *
               pow(cc, Real(-0.5, wp)) * pow(mm, Real(0.125, wp)) * sqrt(nn) *
               pow(gap, Real(-0.25, wp));
  Real term2 = pow(xw, Real(-5.0 / 8.0, wp)) * pow(kk, Real(-2.25, wp)) *
               pow(mm, Real(0.125, wp)) * nn * nn * pow(gap, Real(-2.25, wp));
  return (term1 + term2).round_to(prec.bits);
}

}  // namespace hml
