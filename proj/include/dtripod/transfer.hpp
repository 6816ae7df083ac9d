#pragma once

#include <utility>

#include "dtripod/medium.hpp"

namespace dtripod {

// Pauli-form propagation generator, K * L for each component. The probe
// column obeys dE/dz~ = i (k0L + kxL sigma_x + kyL sigma_y) E with z~ = z/L.
struct KCoefficients {
    complexd k0L;
    complexd kxL;
    complexd kyL;
    // 2 xi^2 / alpha exceeded 0.2: the second-order loss expansion degrades.
    bool validity_warning = false;
};

struct TransferResult {
    complexd t1;  // transmitted amplitude of the incident component
    complexd t2;  // amplitude of the generated (vortex) component
    double i1;    // |t1|^2
    double i2;    // |t2|^2
    bool validity_warning = false;
};

// Dimensionless K coefficients at one spatial point:
//   k0L = xi eps + (xi/2)[u+ + u- + i (2 xi/alpha)(u+^2 + u-^2)]
//   BL  =          (xi/2)[u+ - u- + i (2 xi/alpha)(u+^2 - u-^2)]
//   kxL = BL cos(S + l phi),  kyL = -BL sin(S + l phi)
// The analytic path is derived for zero two-photon detuning; nonzero
// delta1/delta2 is rejected with std::invalid_argument (the exact solve in
// the oracle module handles it). Throws DegenerateVelocity at v- -> 0.
KCoefficients k_coefficients(double rho, double phi, const MediumParams& p);

// Plane-wave dispersion branches (k0L + kperpL, k0L - kperpL), with kperpL
// the principal square root of kxL^2 + kyL^2. The pair is branch-symmetric.
std::pair<complexd, complexd> dispersion(const KCoefficients& k);

// Closed-form transfer matrix across the cloud,
//   M = e^{i k0L} [cos(kperpL) I + i (kxL sigma_x + kyL sigma_y) sinc(kperpL)],
// identical to exp(i (k0L I + kxL sigma_x + kyL sigma_y)).
Matrix2c transfer_matrix(const KCoefficients& k);

// Transmission amplitudes for the incident state E(0) = (1, 0)^T:
//   t1 = e^{i k0L} cos(kperpL)
//   t2 = i (kxL + i kyL) e^{i k0L} sinc(kperpL)
// Both are independent of the square-root branch.
TransferResult transmissions(double rho, double phi, const MediumParams& p);

// Leading-order expansion of t2 near the vortex core (rho/sigma <~ 0.2):
//   t2 ~ -2i xi a rho cos(S)
//        * exp[-i l phi - i S + i xi eps + i xi (1 + 2i xi/alpha)]
//        * (1 + 4i xi/alpha)
complexd t2_small_rho(double rho, double phi, const MediumParams& p);

// sin(z)/z with a series fallback below |z| = 1e-4 to avoid cancellation at
// the kperp -> 0 limits (vortex core, decoupled tripods). Even in z.
complexd sinc(complexd z);

} // namespace dtripod
