#include "hml/real.hpp"

#include <memory>

namespace hml {

std::string Real::hex() const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Real Real::from_hex(const std::string& s, mpfr_prec_t prec) {
  Real r(prec);
  if (mpfr_set_str(r.v_, s.c_str(), 0, MPFR_RNDN) != 0)
    throw std::invalid_argument("Real::from_hex: unparsable '" + s + "'");
  return r;
}

namespace {
using mpfr_un_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);
Real un(const Real& a, mpfr_un_fn f) {
  Real r(a.prec());
  f(r.raw(), a.raw(), MPFR_RNDN);
  return r;
}
}  // namespace

Real abs(const Real& a) { return un(a, mpfr_abs); }
Real sqrt(const Real& a) { return un(a, mpfr_sqrt); }
Real cbrt(const Real& a) { return un(a, mpfr_cbrt); }
Real exp(const Real& a) { return un(a, mpfr_exp); }
Real log(const Real& a) { return un(a, mpfr_log); }
Real log2(const Real& a) { return un(a, mpfr_log2); }
Real sin(const Real& a) { return un(a, mpfr_sin); }
Real cos(const Real& a) { return un(a, mpfr_cos); }
Real atan(const Real& a) { return un(a, mpfr_atan); }
Real gamma(const Real& a) { return un(a, mpfr_gamma); }

Real floor(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.raw(), a.raw());
  return r;
}

Real atan2(const Real& y, const Real& x) {
  Real r(std::max(y.prec(), x.prec()));
  mpfr_atan2(r.raw(), y.raw(), x.raw(), MPFR_RNDN);
  return r;
}

Real frac(const Real& a) {
  Real r(a.prec());
  mpfr_floor(r.raw(), a.raw());
  mpfr_sub(r.raw(), a.raw(), r.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& a, long e) {
  Real r(a.prec());
  mpfr_pow_si(r.raw(), a.raw(), e, MPFR_RNDN);
  return r;
}

Real pow(const Real& a, const Real& e) {
  Real r(std::max(a.prec(), e.prec()));
  mpfr_pow(r.raw(), a.raw(), e.raw(), MPFR_RNDN);
  return r;
}

Real pow2(long e, mpfr_prec_t prec) {
  Real r(prec);
  mpfr_set_si_2exp(r.raw(), 1, e, MPFR_RNDN);
  return r;
}

Real pi(mpfr_prec_t prec) {
  Real r(prec);
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

Real sqrt_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t prec) {
  Real n(num, prec + 32), d(den, prec + 32);
  Real q = n / d;
  mpfr_sqrt(q.raw(), q.raw(), MPFR_RNDN);
  return q.round_to(prec);
}

}  // namespace hml
