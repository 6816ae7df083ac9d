#include "dtripod/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace dtripod {

namespace {

constexpr complexd kI{0.0, 1.0};

complexd sinhc(complexd q) {
    // sinh(q)/q, even in q
    if (std::abs(q) < 1e-4) {
        const complexd q2 = q * q;
        return 1.0 + q2 / 6.0 + q2 * q2 / 120.0;
    }
    return std::sinh(q) / q;
}

} // namespace

Matrix2c expm2(const Matrix2c& a) {
    const complexd mu = 0.5 * a.trace();
    const Matrix2c b = a - mu * Matrix2c::Identity();
    // traceless 2x2: b^2 = q^2 I with q^2 = b00^2 + b01 b10
    const complexd q2 = b(0, 0) * b(0, 0) + b(0, 1) * b(1, 0);
    const complexd q = std::sqrt(q2);
    return std::exp(mu) *
           (std::cosh(q) * Matrix2c::Identity() + sinhc(q) * b);
}

Generator exact_generator(double rho, double phi, const MediumParams& p) {
    const double xi = p.xi;
    if (xi == 0.0 && p.delta1 == 0.0 && p.delta2 == 0.0) {
        // exact EIT resonance: the elimination matrix diverges but its inverse
        // vanishes, leaving the transparent limit G = 0
        return Matrix2c::Zero();
    }
    for (double delta : {p.delta1, p.delta2}) {
        if (std::abs(delta - xi) < 1e-12 * std::max(1.0, std::abs(xi))) {
            throw SingularElimination(
                "exact_generator: two-photon detuning coincides with xi");
        }
    }
    const Matrix2c omega = rabi_matrix(rho, phi, p);
    Matrix2c resolvent = Matrix2c::Zero();
    resolvent(0, 0) = 1.0 / (p.delta1 - xi);
    resolvent(1, 1) = 1.0 / (p.delta2 - xi);
    const complexd core = 2.0 * xi / (p.alpha * p.gamma_tilde) + 2.0 * kI / p.alpha;
    const Matrix2c m = core * Matrix2c::Identity() +
                       omega * resolvent * omega.adjoint();

    Eigen::JacobiSVD<Matrix2c> svd(m);
    const double smin = svd.singularValues()(1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > 1e12) {
        std::ostringstream msg;
        msg << "exact_generator: elimination matrix ill-conditioned (cond = "
            << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity())
            << ") at rho = " << rho;
        throw SingularElimination(msg.str());
    }
    return xi * p.epsilon * Matrix2c::Identity() - m.inverse();
}

Generator analytic_generator(double rho, double phi, const MediumParams& p) {
    if (p.delta1 != 0.0 || p.delta2 != 0.0) {
        throw std::invalid_argument(
            "analytic_generator requires zero two-photon detuning");
    }
    eigen_velocities(rho, p); // degeneracy check with the shared tolerance
    const Matrix2c v = velocity_matrix(rho, phi, p);
    const Matrix2c vinv = v.inverse();
    const double xi = p.xi;
    const double loss = p.lossless ? 0.0 : 2.0 * xi * xi / p.alpha;
    return xi * p.epsilon * Matrix2c::Identity() + xi * vinv +
           kI * loss * vinv * vinv;
}

Vector2c ode_propagate(const std::function<Generator(double)>& generator,
                       const Vector2c& e0, int steps) {
    if (steps < 16) throw std::invalid_argument("ode_propagate: steps must be >= 16");
    const double h = 1.0 / steps;
    Vector2c e = e0;
    auto rhs = [&](double z, const Vector2c& y) -> Vector2c {
        return kI * (generator(z) * y);
    };
    for (int i = 0; i < steps; ++i) {
        const double z = i * h;
        const Vector2c k1 = rhs(z, e);
        const Vector2c k2 = rhs(z + 0.5 * h, e + 0.5 * h * k1);
        const Vector2c k3 = rhs(z + 0.5 * h, e + 0.5 * h * k2);
        const Vector2c k4 = rhs(z + h, e + h * k3);
        e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return e;
}

TransferResult exact_transmissions(double rho, double phi, const MediumParams& p) {
    const Generator g = exact_generator(rho, phi, p);
    const Matrix2c m = expm2(kI * g);
    TransferResult r;
    r.t1 = m(0, 0);
    r.t2 = m(1, 0);
    r.i1 = std::norm(r.t1);
    r.i2 = std::norm(r.t2);
    r.validity_warning = 2.0 * p.xi * p.xi / p.alpha > 0.2;
    return r;
}

} // namespace dtripod
