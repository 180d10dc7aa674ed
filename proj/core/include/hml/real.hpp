#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace hml {

// Working mantissa precision in bits. All real-valued kernels in this
// library document their output error as <= 2^{-bits+g} for a stated
// guard g; callers pick the precision, kernels add their own guard bits
// internally where cancellation demands it.
struct Precision {
  long bits;
  explicit Precision(long b = 128) : bits(b) {
    if (b < 64) throw std::invalid_argument("Precision: bits must be >= 64");
  }
};

// Value-semantics wrapper over mpfr_t. Each Real carries its own mantissa
// precision; binary operations round to the wider of the two operand
// precisions. Rounding mode is round-to-nearest throughout.
class Real {
 public:
  Real() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }
  explicit Real(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_nan(v_); }
  Real(double x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(long x, mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(const mpz_class& z, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
  }
  Real(const mpq_class& q, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, 64); mpfr_swap(v_, o.v_); }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Exact hex-float serialization ("%Ra" prints the full mantissa).
  std::string hex() const;
  static Real from_hex(const std::string& s, mpfr_prec_t prec);

  Real round_to(mpfr_prec_t prec) const {
    Real r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
  }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(long s) { mpfr_mul_si(v_, v_, s, MPFR_RNDN); return *this; }
  Real& operator/=(long s) { mpfr_div_si(v_, v_, s, MPFR_RNDN); return *this; }
  Real& operator+=(long s) { mpfr_add_si(v_, v_, s, MPFR_RNDN); return *this; }
  Real& operator-=(long s) { mpfr_sub_si(v_, v_, s, MPFR_RNDN); return *this; }

  friend Real operator+(const Real& a, const Real& b) { return bin(a, b, mpfr_add); }
  friend Real operator-(const Real& a, const Real& b) { return bin(a, b, mpfr_sub); }
  friend Real operator*(const Real& a, const Real& b) { return bin(a, b, mpfr_mul); }
  friend Real operator/(const Real& a, const Real& b) { return bin(a, b, mpfr_div); }
  friend Real operator-(const Real& a) {
    Real r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, long s) {
    Real r(a.prec());
    mpfr_mul_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend Real operator*(long s, const Real& a) { return a * s; }
  friend Real operator/(const Real& a, long s) {
    Real r(a.prec());
    mpfr_div_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend Real operator/(long s, const Real& a) {
    Real r(a.prec());
    mpfr_si_div(r.v_, s, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator+(const Real& a, long s) {
    Real r(a.prec());
    mpfr_add_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, long s) {
    Real r(a.prec());
    mpfr_sub_si(r.v_, a.v_, s, MPFR_RNDN);
    return r;
  }
  friend Real operator-(long s, const Real& a) {
    Real r(a.prec());
    mpfr_si_sub(r.v_, s, a.v_, MPFR_RNDN);
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

 private:
  using mpfr_bin_fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  static Real bin(const Real& a, const Real& b, mpfr_bin_fn f) {
    Real r(std::max(a.prec(), b.prec()));
    f(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  mpfr_t v_;
};

// Elementary functions; result precision follows the argument.
Real abs(const Real& a);
Real sqrt(const Real& a);
Real cbrt(const Real& a);
Real exp(const Real& a);
Real log(const Real& a);
Real log2(const Real& a);
Real sin(const Real& a);
Real cos(const Real& a);
Real atan(const Real& a);
Real atan2(const Real& y, const Real& x);
Real floor(const Real& a);
Real frac(const Real& a);  // a - floor(a), in [0,1)
Real pow(const Real& a, long e);
Real pow(const Real& a, const Real& e);
Real pow2(long e, mpfr_prec_t prec);  // 2^e, exact
Real pi(mpfr_prec_t prec);
Real gamma(const Real& a);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

// sqrt of an exact integer ratio num/den, correctly rounded at prec.
Real sqrt_ratio(const mpz_class& num, const mpz_class& den, mpfr_prec_t prec);

}  // namespace hml
