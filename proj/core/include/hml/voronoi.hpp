#pragma once

#include "hml/modforms.hpp"
#include "hml/numeric.hpp"
#include "hml/real.hpp"

#include <map>
#include <vector>

namespace hml {

struct CutoffTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of the smoothing w_Delta from the Voronoi setup: supp w = [1,2],
// w = 1 on [1+1/Delta, 2-1/Delta], transitions built from transition_h.
struct SmoothingParams {
  long k = 0;
  Real x;
  Real delta;

  long kappa() const { return k - 1; }
};

Real w_delta(const Real& t, const SmoothingParams& p);

// Transformed weight w~(nx/(k^2+Delta^2)) = int_1^2 w(t) J_{k-1}(4 pi sqrt(nxt)) dt,
// evaluated by panel quadrature with freq_hint 2 pi sqrt(nx). bessel_abs_tol
// controls when the two-term Bessel asymptotic may replace the series
// inside the integrand (0 forces the series).
struct WTildeResult {
  Real value;
  Real quad_error;
};
WTildeResult w_tilde(long n, const SmoothingParams& p, Precision prec,
                     double bessel_abs_tol = -1.0);

// Omega(n,x) = 2(32pi^2 - kappa^2/(nx))^{-3/4} sin omega(4 pi sqrt(2nx))
//            -  (16pi^2 - kappa^2/(nx))^{-3/4} sin omega(4 pi sqrt(nx)),
// defined for nx > kappa^2/(16 pi^2); omega = omega_kappa.
Real big_omega(const Real& n, const Real& x, const Real& kappa, Precision prec);
Real big_omega(long n, const Real& x, long kappa, Precision prec);

// Closed-form envelope max_n |Omega(n,x)| (attained bounds at n=1).
Real big_omega_envelope(const Real& x, long kappa, Precision prec);

struct OmegaTable {
  double x = 0, kappa = 0;
  std::vector<Real> values;  // values[n], index 0 unused
};
OmegaTable build_omega_table(long n_max, const Real& x, long kappa, Precision prec);

// 2 pi (-1)^{k/2} x sum_{n<=n_cutoff} lambda_f(n) w~(nx/(k^2+Delta^2)).
// The w~ table may be shared across eigenforms of the same (x, Delta, k).
Real voronoi_transform(const Eigenform& f, const Real& x, const SmoothingParams& p,
                       long n_cutoff, Precision prec);
Real voronoi_transform_with_table(const Eigenform& f, const Real& x,
                                  const std::vector<Real>& wtable, Precision prec);
std::vector<Real> w_tilde_table(const SmoothingParams& p, long n_cutoff, Precision prec,
                                double bessel_abs_tol = -1.0, long jobs = 1);

// ceil((k^2+Delta^2) K / x); the dual sum is truncated here and the
// remainder estimated through the xi^{-A} envelope with a fitted constant.
long default_n_cutoff(const SmoothingParams& p, double K = 16.0);

// Estimated absolute tail of 2 pi x sum_{n>n_cutoff} d(n) |w~|, using the
// A=3 envelope with constant c3.
double w_tilde_tail_estimate(const SmoothingParams& p, long n_cutoff, double c3);

}  // namespace hml
