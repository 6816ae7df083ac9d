#pragma once

#include <functional>

#include "dtripod/medium.hpp"
#include "dtripod/transfer.hpp"

namespace dtripod {

// z-evolution generator G such that dE/dz~ = i G E, z~ = z/L.
using Generator = Matrix2c;

// Closed-form exponential of a complex 2x2 matrix via the trace/traceless
// split: for A = mu I + B with tr B = 0, B^2 = q^2 I, so
// exp(A) = e^mu [cosh(q) I + sinhc(q) B]. Branch-free (cosh and sinhc are
// even) and well conditioned near non-normal generators.
Matrix2c expm2(const Matrix2c& a);

// Exact monochromatic linear-response generator, no adiabatic elimination.
// The monochromatic ansatz applied to the full atomic equations gives
//   G = xi eps I - M^{-1},
//   M = (2 xi/(alpha gamma_tilde) + 2i/alpha) I
//       + Omega diag(1/(delta1 - xi), 1/(delta2 - xi)) Omega^dagger,
// which for zero two-photon detuning reduces to
//   M = (2 xi/(alpha gamma_tilde) + 2i/alpha) I - v/xi.
// gamma_tilde = +infinity selects the infinite-decay-rate limit of the same
// closed form (used by the non-adiabatic error-scaling tests).
// Throws SingularElimination when delta_i ~= xi or when M is ill-conditioned
// (condition number > 1e12).
Generator exact_generator(double rho, double phi, const MediumParams& p);

// Adiabatic second-order generator G = xi eps I + xi v^{-1} + i (2 xi^2/alpha) v^{-2},
// assembled by direct matrix inversion of the velocity matrix. Must agree
// with the k_coefficients eigen-decomposition route to 1e-12.
// Throws DegenerateVelocity; rejects nonzero two-photon detuning.
Generator analytic_generator(double rho, double phi, const MediumParams& p);

// Classical fixed-step RK4 integration of dE/dz~ = i G(z~) E from z~ = 0 to 1.
// For z-independent G converges to exp(iG) e0 with global error O(steps^-4).
// Requires steps >= 16.
Vector2c ode_propagate(const std::function<Generator(double)>& generator,
                       const Vector2c& e0, int steps);

// Transmissions from the exact generator: columns of exp(i G) applied to
// E(0) = (1, 0)^T. Ground truth for the analytic transfer results.
TransferResult exact_transmissions(double rho, double phi, const MediumParams& p);

} // namespace dtripod
