#pragma once

#include "hml/real.hpp"

#include <vector>

namespace hml {

// Phase sequence h(n) = omega_kappa(4 pi sqrt(2nx)) / (2 pi), defined for
// 32 pi^2 n x > kappa^2.
Real h_value(long n, const Real& x, const Real& kappa, Precision prec);

// #{4 <= n <= N : {h(n)} in [9/40, 11/40]}.
long count_Z(long N, const Real& x, const Real& kappa, Precision prec);

// Count-scale star discrepancy sup_beta |#{u_i < beta} - beta * A| for
// sorted points in [0,1) against expected mass A (A need not equal the
// point count; the paper normalizes by N-4 while counting N-3 points).
double star_discrepancy(const std::vector<double>& sorted_points, double A);

// Bracket [D*, 2D*] for the interval discrepancy D(N) of {h(n)}, n = 4..N,
// with the paper's (N-4) normalization; count scale.
struct DiscrepancyBracket {
  double d_star = 0;
  double d_lower = 0;
  double d_upper = 0;
};
DiscrepancyBracket discrepancy(long N, const Real& x, const Real& kappa, Precision prec);

// Erdos-Turan right side N/(R+1) + 3 sum_{r<=R} (1/r) |sum_{n<=N} e(r h(n))|
// with exact exponential sums at working precision.
Real erdos_turan_bound(long N, long R, const Real& x, const Real& kappa, Precision prec);
// All bounds for R = 1..R_max in one O(N R_max) pass, plus the argmin.
struct EtScan {
  std::vector<double> bounds;  // index r-1
  long best_R = 1;
  double best = 0;
};
EtScan erdos_turan_scan(long N, long R_max, const Real& x, const Real& kappa, Precision prec);

struct DegeneratePhaseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// van der Corput bound (b-a) mu^{2/P} lambda^{1/(2P-2)} + (b-a)^{1-2/P}
// lambda^{-1/(2P-2)}, P = 2^{p-1}, with lambda/mu estimated by dense
// sampling of the exactly differentiated phase r h^{(p)}.
Real vdc_bound(const Real& a, const Real& b, long r, long p, const Real& x, const Real& kappa,
               Precision prec);

// h^{(p)}(xi) via exact term-list differentiation of
// h'(xi) = (32 pi^2 x xi - kappa^2)^{1/2} / (4 pi xi).
Real h_derivative(long p, const Real& xi, const Real& x, const Real& kappa, Precision prec);

// Parameter schedule p = floor((log log x + 3)/2), N = floor(x^{1/(2p-3)}),
// R = floor(x^{1/((2p-3)(2P-1))}), P = 2^{p-1}; requires x >= e^e.
struct PaperParams {
  long p = 0;
  long P = 0;
  long N = 0;
  long R = 0;
};
PaperParams paper_parameters(const Real& x);

struct EquidistReport {
  double x = 0, kappa = 0;
  long N = 0;
  long z_count = 0;
  double z_expected = 0;
  double d_star = 0, d_lower = 0, d_upper = 0;
  double et_bound = 0;
  long et_R = 0;
  long p = 0, N_choice = 0, R_choice = 0;
};
EquidistReport compute_equidist_report(long N, const Real& x, const Real& kappa,
                                       long R_max, Precision prec);

}  // namespace hml
