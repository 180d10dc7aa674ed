#pragma once

#include "hml/petersson.hpp"
#include "hml/voronoi.hpp"

#include <vector>

namespace hml {

struct InsufficientTableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sharp-cutoff sum S(x,f) = sum_{x<=n<=2x} lambda_f(n), endpoints included
// when integral.
Real sharp_sum(const Eigenform& f, const Real& x);

// First moment <S(x,f)> against the main term
// (-1)^{k/2} 4 sqrt(2 pi) Omega(1,x) x^{1/4}; valid for k^2/(8pi^2) <= x <= k^4.
struct FirstMoment {
  Real value;
  Real main_term;
};
FirstMoment first_moment(const HarmonicBasis& basis, const Real& x, Precision prec);

// Second moment <S(x,f)^2> against 32 pi x^{1/2} sum_n Omega(n,x)^2/n^{3/2}
// truncated at series_cutoff (tail bounded by the Omega envelope), plus the
// diagonal-term mirror truncated at Delta^2 k^eps / x with Delta = x^{1/2} k^{3/5}.
struct SecondMoment {
  Real value;
  Real main_term;
  Real diag_term;
  Real series_tail_bound;
};
SecondMoment second_moment(const HarmonicBasis& basis, const Real& x, long series_cutoff,
                           Precision prec);

// Variance via <S^2> - <S>^2 <1> with the computed <1>; main term is the
// second-moment main term with the n=1 term removed.
struct VarianceResult {
  Real value;
  Real main_term;
};
VarianceResult variance(const HarmonicBasis& basis, const Real& x, long series_cutoff,
                        Precision prec);

// Per-point max_f |S(x,f)|/x^{1/3} over a grid (the Theorem-1.1 monitor).
std::vector<Real> uniform_bound_monitor(const HarmonicBasis& basis,
                                        const std::vector<Real>& x_grid);

struct MomentReport {
  long k = 0;
  double x = 0;
  long dim = 0;
  double first = 0, first_main = 0, first_err = 0;
  double second = 0, second_main = 0, second_err = 0;
  double variance = 0, variance_main = 0;
  double ratio_x13 = 0;
  double delta_used = 0;
  long prec_bits = 0;
};
MomentReport compute_moment_report(const HarmonicBasis& basis, const Real& x,
                                   long series_cutoff, double delta_used, Precision prec);

}  // namespace hml
