#pragma once

#include <complex>
#include <Eigen/Dense>

#include "dtripod/errors.hpp"

namespace dtripod {

using complexd = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

// Relative tolerance for degeneracy / singularity detection. Far below any
// physically meaningful regime boundary, above double-precision noise.
inline constexpr double kTolSingular = 1e-9;

// Dimensionless configuration of the control beams and the atomic cloud.
//
// Conventions: lengths z in units of the cloud length L, radii in units of
// the vortex-beam width sigma, velocities in units of the on-axis group
// velocity v0(0), rates in units of v0(0)/L. The non-vortex control
// amplitude is the normalization unit, |Omega_12| = 1.
struct MediumParams {
    double a = 1.0;            // relative vortex / non-vortex control strength
    double S = 0.0;            // half the phase difference of the non-vortex beams (rad)
    int l = 1;                 // vortex winding number
    double alpha = 100.0;      // optical density
    double xi = 0.0;           // scaled probe detuning, Delta_omega * L / v0(0)
    double epsilon = 0.0;      // slow-light ratio v0(0)/c
    double gamma_tilde = 1e4;  // excited-state decay, gamma * L / v0(0)
    double delta1 = 0.0;       // two-photon detuning, delta_1 * L / v0(0)
    double delta2 = 0.0;       // two-photon detuning, delta_2 * L / v0(0)
    bool lossless = false;     // drop the 1/alpha loss terms (alpha -> infinity limit)

    // Throws std::invalid_argument on out-of-range values.
    void validate() const;
};

// Laguerre-Gaussian amplitude ratio f(rho) = a * rho * exp(-rho^2), the local
// ratio of vortex to non-vortex control amplitudes. Maximal at rho = 1/sqrt(2).
double lg_ratio(double rho, double a);

// Normalized control Rabi matrix at (rho, phi):
//   [ f e^{+i l phi}     1          ]
//   [ e^{-2iS}           f e^{-i l phi} ]
Matrix2c rabi_matrix(double rho, double phi, const MediumParams& p);

// Total control Rabi frequency sqrt(1 + f^2) in units of |Omega_12|.
double total_rabi(double rho, const MediumParams& p);

// Group-velocity matrix v = Omega Omega^dagger in units of v0(0).
// Hermitian, positive semidefinite.
Matrix2c velocity_matrix(double rho, double phi, const MediumParams& p);

struct VelocityDecomposition {
    double v_plus;     // 1 + f^2 + 2 f cos S, units of v0(0)
    double v_minus;    // 1 + f^2 - 2 f cos S
    double u_plus;     // 1 / v_plus
    double u_minus;    // 1 / v_minus
    double theta_mix;  // atan(f), local vortex/non-vortex mixing angle (rad)
    double v0_local;   // v0(rho)/v0(0) = 1 + f^2
};

// Eigenstructure of the velocity matrix. Throws DegenerateVelocity when
// v_minus < kTolSingular (double-Lambda limit).
VelocityDecomposition eigen_velocities(double rho, const MediumParams& p);

// Two-photon detuning matrix D = Omega diag(delta) Omega^{-1}. Similar to
// diag(delta1, delta2), so its eigenvalues are exactly the detunings.
// Throws SingularRabi when |det Omega| < kTolSingular.
Matrix2c detuning_matrix(double rho, double phi, const MediumParams& p);

enum class Regime {
    Generic,
    DoubleLambda,       // Omega_22/Omega_21 == Omega_12/Omega_11 (det Omega = 0)
    IndependentTripods, // Omega_11 Omega_21^* + Omega_12 Omega_22^* == 0
    VortexCore,         // f == 0: independent tripods for any S
};

Regime classify_regime(double rho, const MediumParams& p);

const char* to_string(Regime r);

// Physical configuration of a slow-light cell, SI units.
struct PhysicalMedium {
    double coupling_g;   // atom-light coupling g = mu sqrt(omega / 2 eps0 hbar)
    double density;      // atomic density n (g^2 n must come out in s^-2)
    double gamma;        // excited-state decay rate, s^-1
    double length;       // cloud length L, m
    double light_speed;  // c, m/s
    double omega12;      // non-vortex control Rabi frequency |Omega_12|, s^-1
    double delta_omega;  // probe detuning, s^-1
};

struct DimensionlessGroups {
    double xi;
    double alpha;
    double gamma_tilde;
    double epsilon;
    double v0;  // on-axis group velocity v0(0) = c |Omega_12|^2 / (g^2 n), m/s
};

// Maps a physical configuration onto the dimensionless parameter groups that
// the transmissions actually depend on:
//   v0    = c |Omega_12|^2 / (g^2 n)
//   alpha = 2 g^2 n L / (c gamma)
//   xi    = delta_omega L / v0
//   gamma_tilde = gamma L / v0
//   epsilon     = v0 / c
DimensionlessGroups nondimensionalize(const PhysicalMedium& m);

} // namespace dtripod
