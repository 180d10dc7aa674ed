#include "hml/modforms.hpp"

#include <algorithm>
#include <cmath>

namespace hml {

long dim_cusp_forms(long k) {
  if (k < 12 || k % 2 != 0) return 0;
  long dim_mk = (k % 12 == 2) ? k / 12 : k / 12 + 1;
  return dim_mk - 1;
}

std::vector<QSeries> miller_basis(long k, long N) {
  if (k % 2 != 0 || k < 12) throw std::invalid_argument("miller_basis: need even k >= 12");
  long d = dim_cusp_forms(k);
  if (d == 0) return {};
  if (N < d + 2) throw std::invalid_argument("miller_basis: need N >= dim + 2");

  QSeries e4 = eisenstein(EisensteinId::E4, N);
  QSeries e6 = eisenstein(EisensteinId::E6, N);
  QSeries dl = delta_series(N);

  // k - 12i = 4a + 6b with b fixed by k mod 4 (12i = 0 mod 4).
  long b = (k % 4 == 2) ? 1 : 0;
  auto a_of = [&](long i) { return (k - 12 * i - 6 * b) / 4; };

  // E4^{a_d} (+ E6 factor) by binary powering, then climb by E4^3 as the
  // exponent increases by 3 per step down in i.
  long a_min = a_of(d);
  QSeries ep;  // E4^a_min * E6^b
  {
    QSeries acc;
    acc.weight = 0;
    acc.c.assign((size_t)N, mpz_class(0));
    acc.c[0] = 1;
    QSeries base = e4;
    long e = a_min;
    while (e > 0) {
      if (e & 1) acc = qs_mul(acc, base, N);
      e >>= 1;
      if (e) base = qs_mul(base, base, N);
    }
    ep = b ? qs_mul(acc, e6, N) : acc;
  }
  QSeries e4cube = qs_mul(qs_mul(e4, e4, N), e4, N);

  std::vector<QSeries> eparts((size_t)d + 1);
  eparts[(size_t)d] = ep;
  for (long i = d - 1; i >= 1; --i) eparts[(size_t)i] = qs_mul(eparts[(size_t)(i + 1)], e4cube, N);

  std::vector<QSeries> basis((size_t)d);
  QSeries dpow = dl;
  for (long i = 1; i <= d; ++i) {
    basis[(size_t)(i - 1)] = qs_mul(dpow, eparts[(size_t)i], N);
    basis[(size_t)(i - 1)].weight = k;
    if (i < d) dpow = qs_mul(dpow, dl, N);
  }

  // Echelon reduction; every pivot is exactly 1, so this stays integral.
  for (long i = 0; i < d; ++i) {
    for (long j = i + 1; j < d; ++j) {
      mpz_class cf = basis[(size_t)i].c[(size_t)(j + 1)];
      if (cf == 0) continue;
      QSeries& gi = basis[(size_t)i];
      const QSeries& gj = basis[(size_t)j];
      for (long m = 0; m < N; ++m)
        mpz_submul(gi.c[(size_t)m].get_mpz_t(), cf.get_mpz_t(), gj.c[(size_t)m].get_mpz_t());
    }
  }
  return basis;
}

std::vector<std::vector<mpz_class>> hecke_matrix(long k, long p,
                                                 const std::vector<QSeries>& basis) {
  long d = (long)basis.size();
  std::vector<std::vector<mpz_class>> m((size_t)d, std::vector<mpz_class>((size_t)d));
  if (d == 0) return m;
  if (basis[0].ncoeffs() < p * d + 1)
    throw std::invalid_argument("hecke_matrix: basis precision < p*dim + 1");
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(), (unsigned long)p, (unsigned long)(k - 1));
  for (long j = 1; j <= d; ++j) {
    for (long i = 1; i <= d; ++i) {
      mpz_class v = basis[(size_t)(j - 1)].coeff(p * i);
      if (i % p == 0) v += pk * basis[(size_t)(j - 1)].coeff(i / p);
      m[(size_t)(i - 1)][(size_t)(j - 1)] = v;
    }
  }
  return m;
}

CharPoly char_poly(const std::vector<std::vector<mpz_class>>& m) {
  long d = (long)m.size();
  CharPoly cp;
  cp.coeff.assign((size_t)d + 1, mpz_class(0));
  cp.coeff[0] = 1;
  std::vector<std::vector<mpz_class>> n((size_t)d, std::vector<mpz_class>((size_t)d, mpz_class(0)));
  for (long i = 0; i < d; ++i) n[(size_t)i][(size_t)i] = 1;

  for (long step = 1; step <= d; ++step) {
    cp.adj.push_back(n);
    // mn = m * n
    std::vector<std::vector<mpz_class>> mn((size_t)d, std::vector<mpz_class>((size_t)d, mpz_class(0)));
    for (long i = 0; i < d; ++i)
      for (long l = 0; l < d; ++l) {
        if (m[(size_t)i][(size_t)l] == 0) continue;
        for (long j = 0; j < d; ++j)
          mpz_addmul(mn[(size_t)i][(size_t)j].get_mpz_t(), m[(size_t)i][(size_t)l].get_mpz_t(),
                     n[(size_t)l][(size_t)j].get_mpz_t());
      }
    mpz_class tr(0);
    for (long i = 0; i < d; ++i) tr += mn[(size_t)i][(size_t)i];
    mpz_class ck;
    mpz_class stepz(step);
    if (!mpz_divisible_p(tr.get_mpz_t(), stepz.get_mpz_t()))
      throw std::runtime_error("char_poly: trace division not exact");
    mpz_divexact(ck.get_mpz_t(), tr.get_mpz_t(), stepz.get_mpz_t());
    ck = -ck;
    cp.coeff[(size_t)step] = ck;
    for (long i = 0; i < d; ++i) mn[(size_t)i][(size_t)i] += ck;
    n = std::move(mn);
  }
  // Cayley-Hamilton: the final matrix must vanish.
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j)
      if (n[(size_t)i][(size_t)j] != 0) throw std::runtime_error("char_poly: residual matrix nonzero");
  return cp;
}

namespace {

// p~(y) = p(s y)/s^d with s = 2^{(k-1+1)/2}; coefficients are exact binary
// shifts of the integer characteristic coefficients, so |roots| <= 2 by
// Deligne and the scaled coefficients are O(1).
std::vector<Real> scaled_charpoly(const CharPoly& cp, long k, mpfr_prec_t wp) {
  long d = (long)cp.coeff.size() - 1;
  long half = k / 2;  // (k-1+1)/2
  std::vector<Real> out((size_t)d + 1, Real(wp));
  for (long j = 0; j <= d; ++j) {
    // coefficient of y^{d-j} is c_j / s^j
    Real c(cp.coeff[(size_t)j], wp);
    mpfr_mul_2si(c.raw(), c.raw(), -half * j, MPFR_RNDN);
    out[(size_t)j] = c;
  }
  return out;
}

Real horner(const std::vector<Real>& coeff, const Real& x) {
  Real acc = coeff[0];
  for (size_t j = 1; j < coeff.size(); ++j) acc = acc * x + coeff[j];
  return acc;
}

Real horner_deriv(const std::vector<Real>& coeff, const Real& x) {
  long d = (long)coeff.size() - 1;
  Real acc = coeff[0] * d;
  for (long j = 1; j < d; ++j) acc = acc * x + coeff[(size_t)j] * (d - j);
  return acc;
}

std::vector<Real> isolate_real_roots(const std::vector<Real>& coeff, long d, mpfr_prec_t wp,
                                     long prec_bits) {
  // All roots lie in [-2,2]; sample for sign changes, refine grid on demand.
  long grid = 1L << 12;
  std::vector<std::pair<Real, Real>> brackets;
  for (int attempt = 0; attempt < 4; ++attempt) {
    brackets.clear();
    Real lo(-2.0, wp), prev_val = horner(coeff, lo), prev_x = lo;
    for (long i = 1; i <= grid; ++i) {
      Real x(-2.0 + 4.0 * (double)i / (double)grid, wp);
      Real val = horner(coeff, x);
      if ((prev_val.sign() < 0) != (val.sign() < 0) || val.is_zero())
        brackets.emplace_back(prev_x, x);
      prev_val = val;
      prev_x = x;
    }
    if ((long)brackets.size() == d) break;
    grid *= 8;
  }
  if ((long)brackets.size() != d)
    throw EigenvalueClusteringError("hecke_eigenforms: could not isolate all T_2 eigenvalues");

  std::vector<Real> roots;
  Real tol = pow2(-(long)wp + 16, wp);
  for (auto& [a0, b0] : brackets) {
    Real a = a0, b = b0;
    Real fa = horner(coeff, a);
    for (int it = 0; it < 80; ++it) {
      Real mid = (a + b) / 2L;
      Real fm = horner(coeff, mid);
      if (fm.is_zero()) { a = mid; b = mid; break; }
      if ((fm.sign() < 0) == (fa.sign() < 0)) { a = mid; fa = fm; }
      else b = mid;
    }
    Real x = (a + b) / 2L;
    for (int it = 0; it < 64; ++it) {
      Real dx = horner(coeff, x) / horner_deriv(coeff, x);
      x -= dx;
      if (abs(dx) <= tol) break;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end(), [](const Real& a, const Real& b) { return a < b; });
  Real sep = pow2(-prec_bits / 2, wp);
  for (size_t i = 1; i < roots.size(); ++i)
    if (abs(roots[i] - roots[i - 1]) < sep)
      throw EigenvalueClusteringError("hecke_eigenforms: T_2 eigenvalues closer than 2^{-prec/2}");
  return roots;
}

}  // namespace

std::vector<Eigenform> hecke_eigenforms(long k, long n_max, Precision prec) {
  if (n_max < 2) throw std::invalid_argument("hecke_eigenforms: n_max >= 2 required");
  long d = dim_cusp_forms(k);
  std::vector<Eigenform> out;
  if (d == 0) return out;

  long t = k - 1;
  long N = std::max(n_max + 1, 2 * d + 1);
  std::vector<QSeries> basis = miller_basis(k, N);

  if (d == 1) {
    Eigenform f;
    f.k = k;
    f.index = 0;
    f.exact = true;
    f.a_int.assign((size_t)n_max + 1, mpz_class(0));
    f.lambda.assign((size_t)n_max + 1, Real(prec.bits));
    mpfr_prec_t wp = prec.bits + 32;
    mpz_class nt;
    for (long n = 1; n <= n_max; ++n) {
      f.a_int[(size_t)n] = basis[0].coeff(n);
      mpz_ui_pow_ui(nt.get_mpz_t(), (unsigned long)n, (unsigned long)t);
      Real den(nt, wp);
      mpfr_sqrt(den.raw(), den.raw(), MPFR_RNDN);
      Real num(f.a_int[(size_t)n], wp);
      f.lambda[(size_t)n] = (num / den).round_to(prec.bits);
    }
    f.lambda[1] = Real(1.0, prec.bits);
    out.push_back(std::move(f));
    return out;
  }

  auto m2 = hecke_matrix(k, 2, basis);
  CharPoly cp = char_poly(m2);

  // Normalized eigenvectors (v_1 = 1) from the adjugate columns at working
  // precision wp. The Horner evaluation cancels heavily (the adjugate
  // coefficients dwarf the result), so callers certify by recomputing at a
  // higher precision and comparing.
  auto eigenvectors_at = [&](mpfr_prec_t wp) {
    std::vector<Real> scaled = scaled_charpoly(cp, k, wp);
    std::vector<Real> roots = isolate_real_roots(scaled, d, wp, prec.bits);
    std::vector<std::vector<Real>> vecs;
    for (long ri = 0; ri < d; ++ri) {
      Real a2 = roots[(size_t)ri];
      mpfr_mul_2si(a2.raw(), a2.raw(), k / 2, MPFR_RNDN);  // a(2) = y 2^{k/2}
      std::vector<std::vector<Real>> cols((size_t)d, std::vector<Real>((size_t)d, Real(wp)));
      for (long j = 0; j < d; ++j)
        for (long i = 0; i < d; ++i) {
          Real acc(0.0, wp);
          for (long s = 0; s < d; ++s) {
            acc *= a2;
            Real term(cp.adj[(size_t)s][(size_t)i][(size_t)j], wp);
            acc += term;
          }
          cols[(size_t)j][(size_t)i] = acc;
        }
      // All nonzero columns are parallel to the eigenvector; take the one
      // with the largest relative first coordinate.
      long best = -1;
      Real best_ratio(0.0, wp);
      for (long j = 0; j < d; ++j) {
        Real norm(0.0, wp);
        for (long i = 0; i < d; ++i) norm = max(norm, abs(cols[(size_t)j][(size_t)i]));
        if (norm.is_zero()) continue;
        Real ratio = abs(cols[(size_t)j][0]) / norm;
        if (best < 0 || ratio > best_ratio) { best_ratio = ratio; best = j; }
      }
      if (best < 0 || cols[(size_t)best][0].is_zero())
        throw std::runtime_error("hecke_eigenforms: vanishing adjugate eigenvector");
      std::vector<Real>& v = cols[(size_t)best];
      for (long i = d - 1; i >= 0; --i) v[(size_t)i] /= v[0];
      vecs.push_back(std::move(v));
    }
    return vecs;
  };

  // Start from the scale heuristic (top echelon coordinate ~ d^{t/2}) and
  // double the guard until two precisions agree to 2^{-prec-16} relative.
  long guard = (long)std::ceil(0.5 * (double)t * std::log2((double)d)) + 128;
  std::vector<std::vector<Real>> vecs;
  mpfr_prec_t wp = prec.bits;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 8) throw std::runtime_error("hecke_eigenforms: eigenvector precision exhausted");
    wp = prec.bits + guard;
    std::vector<std::vector<Real>> lo = eigenvectors_at(wp);
    std::vector<std::vector<Real>> hi = eigenvectors_at(wp + 192);
    Real tol = pow2(-prec.bits - 48, wp);
    bool ok = true;
    for (long ri = 0; ri < d && ok; ++ri)
      for (long j = 0; j < d && ok; ++j) {
        Real diff = abs(lo[(size_t)ri][(size_t)j] - hi[(size_t)ri][(size_t)j]);
        Real scale = max(abs(hi[(size_t)ri][(size_t)j]), Real(1.0, wp));
        if (diff > tol * scale) ok = false;
      }
    if (ok) { vecs = std::move(hi); break; }
    guard *= 2;
  }
  wp += 192;

  // Precompute sqrt(n^t) once per n.
  std::vector<Real> sqrt_nt((size_t)n_max + 1, Real(wp));
  mpz_class nt;
  for (long n = 1; n <= n_max; ++n) {
    mpz_ui_pow_ui(nt.get_mpz_t(), (unsigned long)n, (unsigned long)t);
    Real r(nt, wp);
    mpfr_sqrt(r.raw(), r.raw(), MPFR_RNDN);
    sqrt_nt[(size_t)n] = r;
  }

  for (long ri = 0; ri < d; ++ri) {
    const std::vector<Real>& v = vecs[(size_t)ri];
    Eigenform f;
    f.k = k;
    f.index = (int)ri;
    f.exact = false;
    f.lambda.assign((size_t)n_max + 1, Real(prec.bits));
    Real acc(wp), term(wp);
    for (long n = 1; n <= n_max; ++n) {
      mpfr_set_zero(acc.raw(), 1);
      for (long j = 0; j < d; ++j) {
        const mpz_class& aj = basis[(size_t)j].coeff(n);
        if (aj == 0) continue;
        mpfr_mul_z(term.raw(), v[(size_t)j].raw(), aj.get_mpz_t(), MPFR_RNDN);
        acc += term;
      }
      f.lambda[(size_t)n] = (acc / sqrt_nt[(size_t)n]).round_to(prec.bits);
    }
    f.lambda[1] = Real(1.0, prec.bits);
    out.push_back(std::move(f));
  }

  // Residual-noise tripwire: the Hecke relation at the smallest composite.
  if (n_max >= 6) {
    Real tol = pow2(-prec.bits / 2, prec.bits);
    for (const auto& f : out)
      if (abs(f.lambda[6] - f.lambda[2] * f.lambda[3]) > tol)
        throw std::runtime_error("hecke_eigenforms: multiplicativity spot check failed");
  }
  std::sort(out.begin(), out.end(),
            [](const Eigenform& a, const Eigenform& b) { return a.lambda[2] < b.lambda[2]; });
  for (long i = 0; i < d; ++i) out[(size_t)i].index = (int)i;
  return out;
}

}  // namespace hml
