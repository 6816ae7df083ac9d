#pragma once

#include <optional>
#include <vector>

#include "dtripod/medium.hpp"
#include "dtripod/transfer.hpp"

namespace dtripod {

struct ScanRecord {
    double rho;
    double i1;
    double i2;
    double phase2;  // arg t2 at phi = 0
    unsigned flags; // bitmask, see kFlag* below
};

inline constexpr unsigned kFlagValidityWarning = 1u; // 2 xi^2/alpha > 0.2
inline constexpr unsigned kFlagDegenerate = 2u;      // v- singular, point skipped (NaN values)

enum class Status { Pass, Warn, Fail, NotApplicable };

const char* to_string(Status s);

// Optional physical beam geometry for the diffraction criterion.
struct BeamGeometry {
    double length_um; // cloud length L
    double sigma_um;  // transverse beam width
    double lambda_um; // probe wavelength
};

// Evaluated validity inequalities of the scheme.
//
// Thresholds: adiabaticity passes below 0.1, warns below 0.5; optical density
// passes at alpha >= 40 (twice the 2 pi^2 bound, which the source inequality
// only gives asymptotically), warns at >= 20; degeneracy margin passes at
// >= 0.1, warns above the singularity tolerance; diffraction number passes
// below 0.5, warns below 1.
struct ConstraintReport {
    double adiabaticity;         // 2 xi^2 / alpha, must be << 1
    Status adiabaticity_status;

    double optical_density;      // alpha, must be >> 2 pi^2 ~ 20
    bool optical_density_ok;
    Status optical_density_status;

    double degeneracy_margin;    // min over rho of v-(rho)/v0(0) = min(1 + f^2 - 2 f |cos S|)
    Status degeneracy_status;

    double diffraction_number;   // L lambda / sigma^2 (NaN when geometry not supplied)
    Status diffraction_status;

    double lifetime_ratio;       // tau_pol / tau = (2 xi^2/alpha) v0(0)/v_min, true grid minimum
    double lifetime_ratio_core;  // same with the v_min ~ v0(0) core approximation

    Status overall() const;
};

// Power per integer winding number m in [-m_max, m_max], normalized to 1.
struct OamSpectrum {
    int m_max;
    std::vector<double> power; // index m + m_max

    double at(int m) const { return power.at(static_cast<size_t>(m + m_max)); }
};

// Detuning xi* for which xi (u-(rho*) - u+(rho*)) = pi at rho* = 1/sqrt(2),
// the radius where the eigen-velocity splitting is maximal. Throws NoSolution
// when the splitting vanishes (a = 0 or cos S <= 0) or v- is singular there.
double solve_xi_condition(double a, double S);

// Uniform grid helper, n points over [lo, hi] inclusive.
std::vector<double> uniform_grid(double lo, double hi, int n);

// Transmission intensities and t2 phase at phi = 0 across the radial grid.
// Degenerate points are flagged and filled with NaN rather than aborting the
// scan. The grid must be strictly increasing and nonnegative.
std::vector<ScanRecord> radial_scan(const MediumParams& p,
                                    const std::vector<double>& rho_grid);

// Discrete azimuthal Fourier decomposition of a field sampled on n_phi
// uniform points of [0, 2 pi). Power at winding m is
// |(1/n_phi) sum_k field_k e^{-i m phi_k}|^2, normalized to total 1.
// Requires n_phi a power of two with n_phi >= 4 m_max.
OamSpectrum oam_spectrum(const std::vector<complexd>& field_samples, int m_max);

inline constexpr int kDefaultMMax = 8;
inline constexpr int kDefaultNPhi = 256;

// Samples transmissions(rho, phi_k).t2 on n_phi uniform azimuth points.
std::vector<complexd> sample_t2_azimuth(double rho, const MediumParams& p, int n_phi);

ConstraintReport lifetime_report(const MediumParams& p,
                                 const std::optional<BeamGeometry>& geometry = {});

// Parabolic refinement of the grid maximum of i2. Flagged (NaN) records are
// ignored. Returns (rho_peak, i2_peak).
std::pair<double, double> find_peak(const std::vector<ScanRecord>& scan);

// Default Fig.-2-style radial grid: 601 uniform points on [0, 3].
std::vector<double> default_rho_grid();

} // namespace dtripod
