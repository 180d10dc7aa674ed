#pragma once

#include "hml/qseries.hpp"
#include "hml/real.hpp"

#include <vector>

namespace hml {

struct EigenvalueClusteringError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BasisDescriptor {
  long k = 0;
  long dim = 0;
  long n_max = 0;
};

// Hecke eigenform of level one: normalized eigenvalues lambda(n) = a(n) /
// n^{(k-1)/2} with lambda(1) = 1. For one-dimensional weights the integer
// coefficients a(n) are kept exactly.
struct Eigenform {
  long k = 0;
  int index = 0;
  bool exact = false;
  std::vector<mpz_class> a_int;  // a(n), index 0 unused; dim-1 weights only
  std::vector<Real> lambda;      // lambda(n), index 0 unused

  long n_max() const { return (long)lambda.size() - 1; }
};

long dim_cusp_forms(long k);

// Echelon ("Miller") basis of S_k: the i-th returned series has integer
// coefficients with c(j) = delta_{ij} for 1 <= j <= dim, built from
// Delta^i E4^a E6^b monomials. Requires N >= dim + 2.
std::vector<QSeries> miller_basis(long k, long N);

// Matrix of T_p on the echelon basis: column j holds the coordinates of
// T_p f_j, i.e. entry (i,j) = a(f_j, p*i) + p^{k-1} a(f_j, i/p). Exact.
// Requires basis precision >= p*dim + 1.
std::vector<std::vector<mpz_class>> hecke_matrix(long k, long p,
                                                 const std::vector<QSeries>& basis);

// Characteristic polynomial of an exact integer matrix together with the
// adjugate expansion adj(xI - M) = sum_k N_k x^{d-1-k} (Faddeev-LeVerrier).
struct CharPoly {
  std::vector<mpz_class> coeff;                       // c[0]=1, p(x)=sum c[k] x^{d-k}
  std::vector<std::vector<std::vector<mpz_class>>> adj;  // N_0..N_{d-1}
};
CharPoly char_poly(const std::vector<std::vector<mpz_class>>& m);

// All dim S_k eigenforms with lambda(n) for n <= n_max, sorted ascending by
// lambda(2). Diagonalizes T_2 via its exact characteristic polynomial; the
// roots are isolated and refined at working precision, eigenvectors come
// from adjugate columns. Throws EigenvalueClusteringError if two T_2
// eigenvalues are closer than 2^{-prec.bits/2} in normalized scale.
std::vector<Eigenform> hecke_eigenforms(long k, long n_max, Precision prec);

}  // namespace hml
