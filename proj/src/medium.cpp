#include "dtripod/medium.hpp"

#include <cmath>
#include <sstream>

namespace dtripod {

void MediumParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (!(a >= 0.0)) fail("a must be >= 0");
    if (!(alpha > 0.0)) fail("alpha must be > 0");
    if (!(epsilon >= 0.0)) fail("epsilon must be >= 0");
    if (!(gamma_tilde > 0.0)) fail("gamma_tilde must be > 0");
    if (!std::isfinite(S) || !std::isfinite(xi)) fail("S and xi must be finite");
    if (!std::isfinite(delta1) || !std::isfinite(delta2)) fail("detunings must be finite");
}

double lg_ratio(double rho, double a) {
    if (rho < 0.0) throw std::domain_error("lg_ratio: rho must be >= 0");
    return a * rho * std::exp(-rho * rho);
}

Matrix2c rabi_matrix(double rho, double phi, const MediumParams& p) {
    const double f = lg_ratio(rho, p.a);
    const complexd vortex = std::polar(f, p.l * phi);
    Matrix2c omega;
    omega << vortex, 1.0,
             std::polar(1.0, -2.0 * p.S), std::conj(vortex);
    return omega;
}

double total_rabi(double rho, const MediumParams& p) {
    const double f = lg_ratio(rho, p.a);
    return std::sqrt(1.0 + f * f);
}

Matrix2c velocity_matrix(double rho, double phi, const MediumParams& p) {
    const Matrix2c omega = rabi_matrix(rho, phi, p);
    return omega * omega.adjoint();
}

VelocityDecomposition eigen_velocities(double rho, const MediumParams& p) {
    const double f = lg_ratio(rho, p.a);
    const double cs = std::cos(p.S);
    VelocityDecomposition d;
    d.v0_local = 1.0 + f * f;
    d.v_plus = d.v0_local + 2.0 * f * cs;
    d.v_minus = d.v0_local - 2.0 * f * cs;
    const double v_min = std::min(d.v_plus, d.v_minus);
    if (v_min < kTolSingular) {
        std::ostringstream msg;
        msg << "eigen_velocities: v_min = " << v_min << " at rho = " << rho
            << " (double-Lambda degeneracy)";
        throw DegenerateVelocity(msg.str());
    }
    d.u_plus = 1.0 / d.v_plus;
    d.u_minus = 1.0 / d.v_minus;
    d.theta_mix = std::atan(f);
    return d;
}

Matrix2c detuning_matrix(double rho, double phi, const MediumParams& p) {
    const Matrix2c omega = rabi_matrix(rho, phi, p);
    const complexd det = omega.determinant(); // f^2 - e^{-2iS}
    if (std::abs(det) < kTolSingular) {
        std::ostringstream msg;
        msg << "detuning_matrix: |det Omega| = " << std::abs(det) << " at rho = " << rho;
        throw SingularRabi(msg.str());
    }
    Matrix2c delta = Matrix2c::Zero();
    delta(0, 0) = p.delta1;
    delta(1, 1) = p.delta2;
    return omega * delta * omega.inverse();
}

Regime classify_regime(double rho, const MediumParams& p) {
    const double f = lg_ratio(rho, p.a);
    if (f < kTolSingular) return Regime::VortexCore;
    // det Omega = f^2 - e^{-2iS} vanishes in the double-Lambda limit.
    const complexd det = f * f - std::polar(1.0, -2.0 * p.S);
    if (std::abs(det) < kTolSingular) return Regime::DoubleLambda;
    // Omega_11 Omega_21^* + Omega_12 Omega_22^* = 2 f cos(S) e^{i(l phi + S)}.
    if (2.0 * f * std::abs(std::cos(p.S)) < kTolSingular) return Regime::IndependentTripods;
    return Regime::Generic;
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Generic: return "generic";
        case Regime::DoubleLambda: return "double-lambda";
        case Regime::IndependentTripods: return "independent-tripods";
        case Regime::VortexCore: return "vortex-core";
    }
    return "?";
}

DimensionlessGroups nondimensionalize(const PhysicalMedium& m) {
    const double g2n = m.coupling_g * m.coupling_g * m.density;
    if (!(g2n > 0.0) || !(m.length > 0.0) || !(m.light_speed > 0.0) ||
        !(m.gamma > 0.0) || !(m.omega12 > 0.0)) {
        throw std::invalid_argument("nondimensionalize: all scales must be positive");
    }
    DimensionlessGroups d;
    d.v0 = m.light_speed * m.omega12 * m.omega12 / g2n;
    d.alpha = 2.0 * g2n * m.length / (m.light_speed * m.gamma);
    d.xi = m.delta_omega * m.length / d.v0;
    d.gamma_tilde = m.gamma * m.length / d.v0;
    d.epsilon = d.v0 / m.light_speed;
    return d;
}

} // namespace dtripod
