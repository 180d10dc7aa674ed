#pragma once

#include "hml/real.hpp"

#include <atomic>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace hml {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  Real value;
  Real error_estimate;  // >= 0
  long panels_used = 1;
};

// C-infinity transition on [0,1]: h(0)=0, h(1)=1, strictly increasing,
// all one-sided derivatives vanish at the endpoints, and h(u)+h(1-u)=1.
// Realized as sigma(u)/(sigma(u)+sigma(1-u)) with sigma(u)=exp(-1/u).
Real transition_h(const Real& u);

// Gauss-Legendre nodes/weights on [-1,1] for the given order, computed by
// Newton iteration at the requested precision and cached. Nodes ascending.
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
const GaussRule& gauss_legendre(int order, mpfr_prec_t prec);

// Panel-based quadrature for smooth (possibly highly oscillatory)
// integrands. freq_hint estimates the maximal phase derivative in rad/unit;
// the initial panel count is ceil((b-a)*freq_hint/pi)*2, i.e. four order-16
// panels per oscillation period. Each panel is evaluated with order-16 and
// order-32 rules; their difference is the error estimate. Panels double
// until the estimate falls below 2^{-prec.bits+16} of the integrand scale.
QuadratureResult oscillatory_integrate(const std::function<Real(const Real&)>& f,
                                       const Real& a, const Real& b,
                                       double freq_hint, Precision prec);

// Complex-valued variant; the callback fills (re, im) at t. One integrand
// evaluation serves both components (the amplitudes are usually shared).
struct QuadratureResultC {
  Real re, im;
  Real error_estimate;
  long panels_used = 1;
};
QuadratureResultC oscillatory_integrate_c(
    const std::function<void(const Real&, Real&, Real&)>& f, const Real& a, const Real& b,
    double freq_hint, Precision prec);

long initial_panels(double length, double freq_hint);

// Index-driven parallel map; each index is computed exactly once and results
// land by index, so the output is independent of the schedule.
template <typename Fn>
void parallel_for_deterministic(long count, long jobs, Fn&& fn) {
  if (jobs <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      long i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  long nthreads = std::min(jobs, count);
  pool.reserve((size_t)nthreads);
  for (long t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace hml
