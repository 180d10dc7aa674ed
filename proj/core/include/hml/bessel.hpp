#pragma once

#include "hml/real.hpp"

#include <stdexcept>

namespace hml {

struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regime boundaries for J_nu(z), nu fixed:
//   Tiny          z <= (nu+1)/4
//   Subtransition z <= (nu+1) - (nu+1)^{1/3+delta},      delta = 0.3
//   Transition    up to nu + nu^{1/3+eps0},              eps0  = 0.05
//   Oscillatory   z >= nu + nu^{1/3+eps0}
enum class BesselRegime { Tiny, Subtransition, Transition, Oscillatory };

inline constexpr double kBesselDelta = 0.3;
inline constexpr double kBesselEps0 = 0.05;

BesselRegime classify_bessel_regime(double nu, double z);

// Power series sum_{l>=0} (-1)^l/(l! Gamma(nu+1+l)) (z/2)^{nu+2l}, evaluated
// with ceil(z*log2 e) + 64 guard bits against cancellation. Throws
// PrecisionExhausted when the boost would exceed boost_cap.
Real bessel_j_series(const Real& nu, const Real& z, Precision prec,
                     long boost_cap = 1L << 16);

// Two-term oscillatory asymptotic with its explicit error envelope
// 10 z^4/(z^2-nu^2)^{13/4}; requires z >= nu + nu^{1/3+eps0}.
struct AsymptoticJ {
  Real value;
  Real error_bound;
};
AsymptoticJ bessel_j_oscillatory(const Real& nu, const Real& z, Precision prec);

// Dispatcher: series in the three left regimes and, in the oscillatory
// regime, series while the cancellation boost stays affordable, otherwise
// the asymptotic. error_bound records the realized bound either way.
struct BesselEval {
  Real value;
  Real error_bound;
};
BesselEval bessel_j(const Real& nu, const Real& z, Precision prec,
                    long affordable_boost = 1024);

// Like bessel_j but lets the caller trade accuracy for speed: uses the
// asymptotic whenever its error envelope is below abs_tol.
Real bessel_j_for_tol(const Real& nu, const Real& z, Precision prec, const Real& abs_tol);

// Phase of the oscillatory regime (z > nu):
//   omega(z) = sqrt(z^2-nu^2) - nu arctan(sqrt(z^2/nu^2-1)) - pi/4
// with omega'(z) = sqrt(z^2-nu^2)/z and omega''(z) = nu^2/(z^2 sqrt(z^2-nu^2)).
Real omega_phase(const Real& nu, const Real& z, Precision prec);
Real omega_d1(const Real& nu, const Real& z, Precision prec);
Real omega_d2(const Real& nu, const Real& z, Precision prec);

}  // namespace hml
