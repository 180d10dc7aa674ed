#pragma once

#include "hml/numeric.hpp"
#include "hml/real.hpp"

#include <vector>

namespace hml {

struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter bundle of the off-diagonal analysis. Standing assumptions:
// x >= k^2/(8 pi^2), x^{1/2} <= Delta, m <= Delta^2 k^eps / x, t in [1,2];
// the k^eps factors are instantiated with epsilon = 0.001.
struct OffDiagParams {
  long k = 0;
  Real x;
  Real delta;
  long m = 1;
  long c = 1;
  Real t;
  long n = 1;
  double epsilon = 0.001;
  // Scale exponent of the stationary window L = k^{window_epsilon} max{1, m/(cn)}.
  // The proof takes it equal to epsilon; at desk scale k^{0.001} ~ 1 leaves the
  // window narrower than the stationary hump, so checks may widen it.
  double window_epsilon = 0.001;

  long kappa() const { return k - 1; }
  double keps() const;
  double g_lo() const;       // k/10
  double g_plateau_lo() const;  // k/2
  double g_plateau_hi() const;  // 2 Delta^2 k^eps / x
  double g_hi() const;       // 10 Delta^2 k^eps / x
  void validate() const;
};

// Truncation window g: log-scale transitions over [k/10, k/2] and
// [2 Delta^2 k^eps/x, 10 Delta^2 k^eps/x], plateau 1 between (when the two
// transitions overlap the product form stays smooth with sup < 1).
Real g_window(const Real& y, const OffDiagParams& p);

// Oscillatory phase F(y) = cn/(8 pi m) y^2 - omega_kappa(c sqrt(xt)/sqrt(m) y)
// and its first two derivatives in closed form.
struct PhaseF {
  Real F, F1, F2;
};
PhaseF phase_F(const Real& y, const OffDiagParams& p, Precision prec);

// Root of F' in [k/10, 10 Delta^2 k^eps/x] by bisection + Newton; asserted
// within 10 k^{1.001} Delta^2/x^2 of 4 pi sqrt(mxt)/n. Throws NoRootError
// when F' has constant sign on the window.
Real stationary_point(const OffDiagParams& p, Precision prec);

// Window scale L = k^eps max{1, m/(cn)} around y0.
struct PartitionSpec {
  Real L;
  Real y0;
};
PartitionSpec partition_spec(const OffDiagParams& p, Precision prec);

// Smooth dyadic partition of unity (b_l)_{l in Z} centered at alpha with
// scale L: supp b_0 = [alpha-2L, alpha+2L], supp b_l = [alpha+2^{l-1}L,
// alpha+2^{l+1}L] for l >= 1, mirrored for l <= -1; sum_l b_l = 1.
Real partition_bump(long l, const Real& L, const Real& alpha, const Real& xi);

// Poisson dual integral I_i'(n) = int G_i(y) e^{iF(y)} dy, i = 1 or 2,
// over supp g (windowed=false) or over [y0-2L, y0+2L] against the b_0 bump
// (windowed=true).
struct DualIntegral {
  Real re, im;
  Real quad_error;
  Real modulus() const { return sqrt(re * re + im * im); }
};
DualIntegral dual_integral(const OffDiagParams& p, int i, bool windowed, Precision prec);

// Direct evaluation of S_i(t; m, c) as a double sum over coprime residues
// and the n-range where g is supported (n capped by n_cap).
Real s_sum_direct(const OffDiagParams& p, int i, long n_cap, Precision prec);

// Relative residual of the Poisson identity sum_l phi(b+lc) =
// (1/c) sum_l~ e(l~ b/c) int phi(u) e(-l~ u/c) du for the S_1 amplitude phi
// and residue b = a; both sides computed by independent code paths.
Real poisson_check(const OffDiagParams& p, long a, Precision prec);

// The four terms of the off-diagonal bound
// k^{-8/3} D^2 + k^{-3/2+e} D^{3/2} + x^{-1/2} k^{1/6+2e} D + x^{-3/2} k^{-5/6+4e} D^3.
struct OffdiagBound {
  Real t1, t2, t3, t4;
  Real total() const { return t1 + t2 + t3 + t4; }
};
OffdiagBound offdiag_bound_report(long k, const Real& x, const Real& delta, Precision prec);

// Right side of the regime-(iii) spot bound for |I_i'(n)| (safety factor
// excluded; the caller applies it).
Real lemma510iii_bound(const OffDiagParams& p, Precision prec);

}  // namespace hml
