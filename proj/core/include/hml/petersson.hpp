#pragma once

#include "hml/modforms.hpp"
#include "hml/real.hpp"

#include <vector>

namespace hml {

// Kloosterman sum S(m,n;c) = sum_{a mod c, (a,c)=1} e((a*m + a n)/c),
// a* the inverse of a mod c. Real by conjugate-pair symmetry; computed by a
// direct residue loop with extended-gcd inverses.
Real kloosterman(long m, long n, long c, Precision prec);

// Truncated Petersson right side
//   delta_{mn} + 2 pi (-1)^{k/2} sum_{c<=c_max} c^{-1} S(m,n;c) J_{k-1}(4 pi sqrt(mn)/c)
// with a rigorous tail bound from |J_nu(z)| <= (z/2)^nu e^{(z/2)^2}/Gamma(nu+1).
struct TraceEval {
  long m = 0, n = 0, c_max = 0;
  Real value;
  Real tail_bound;
};
TraceEval trace_rhs(long m, long n, long k, long c_max, Precision prec);

// Smallest c with 4 pi sqrt(mn)/c <= (k-1)/4, plus 20 safety terms.
long default_c_max(long m, long n, long k);

// The eigenbasis with harmonic weights omega(f), obtained by inverting the
// trace formula on the pairs (1,n), n = 1..dim (never via Petersson norms).
struct HarmonicBasis {
  long k = 0;
  long c_max = 0;
  std::vector<Eigenform> forms;
  std::vector<Real> weights;

  long dim() const { return (long)forms.size(); }
};

struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HarmonicBasis solve_harmonic_weights(long k, std::vector<Eigenform> forms, long c_max,
                                     Precision prec);

Real harmonic_average(const HarmonicBasis& basis, const std::vector<Real>& values);
Real harmonic_one(const HarmonicBasis& basis);  // <1> = sum of weights

}  // namespace hml
