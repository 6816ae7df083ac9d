#include "dtripod/transfer.hpp"

#include <cmath>

namespace dtripod {

namespace {

constexpr complexd kI{0.0, 1.0};

void reject_detuning(const MediumParams& p) {
    if (p.delta1 != 0.0 || p.delta2 != 0.0) {
        throw std::invalid_argument(
            "analytic transfer path requires zero two-photon detuning; "
            "use the exact oracle solve for delta != 0");
    }
}

} // namespace

complexd sinc(complexd z) {
    if (std::abs(z) < 1e-4) {
        const complexd z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

KCoefficients k_coefficients(double rho, double phi, const MediumParams& p) {
    reject_detuning(p);
    const VelocityDecomposition v = eigen_velocities(rho, p);
    const double xi = p.xi;
    const double loss = p.lossless ? 0.0 : 2.0 * xi / p.alpha;
    const double up = v.u_plus, um = v.u_minus;

    KCoefficients k;
    k.k0L = xi * p.epsilon +
            0.5 * xi * ((up + um) + kI * loss * (up * up + um * um));
    const complexd radial = 0.5 * xi * ((up - um) + kI * loss * (up * up - um * um));
    const double angle = p.S + p.l * phi;
    k.kxL = radial * std::cos(angle);
    k.kyL = -radial * std::sin(angle);
    k.validity_warning = !p.lossless && 2.0 * xi * xi / p.alpha > 0.2;
    return k;
}

std::pair<complexd, complexd> dispersion(const KCoefficients& k) {
    const complexd kperp = std::sqrt(k.kxL * k.kxL + k.kyL * k.kyL);
    return {k.k0L + kperp, k.k0L - kperp};
}

Matrix2c transfer_matrix(const KCoefficients& k) {
    const complexd kperp = std::sqrt(k.kxL * k.kxL + k.kyL * k.kyL);
    const complexd phase = std::exp(kI * k.k0L);
    const complexd diag = phase * std::cos(kperp);
    // i (kx sigma_x + ky sigma_y) sin(kperp)/kperp; sinc keeps the kperp -> 0
    // limit finite and makes the branch of the square root irrelevant.
    const complexd s = phase * sinc(kperp);
    Matrix2c m;
    m << diag, kI * (k.kxL - kI * k.kyL) * s,
         kI * (k.kxL + kI * k.kyL) * s, diag;
    return m;
}

TransferResult transmissions(double rho, double phi, const MediumParams& p) {
    const KCoefficients k = k_coefficients(rho, phi, p);
    const complexd kperp = std::sqrt(k.kxL * k.kxL + k.kyL * k.kyL);
    const complexd phase = std::exp(kI * k.k0L);
    TransferResult r;
    r.t1 = phase * std::cos(kperp);
    r.t2 = kI * (k.kxL + kI * k.kyL) * phase * sinc(kperp);
    r.i1 = std::norm(r.t1);
    r.i2 = std::norm(r.t2);
    r.validity_warning = k.validity_warning;
    return r;
}

complexd t2_small_rho(double rho, double phi, const MediumParams& p) {
    const double xi = p.xi;
    const double inv_alpha = p.lossless ? 0.0 : 1.0 / p.alpha;
    const complexd arg = -kI * (p.l * phi + p.S) + kI * xi * p.epsilon +
                         kI * xi * (1.0 + kI * 2.0 * xi * inv_alpha);
    return -2.0 * kI * xi * p.a * rho * std::cos(p.S) * std::exp(arg) *
           (1.0 + kI * 4.0 * xi * inv_alpha);
}

} // namespace dtripod
