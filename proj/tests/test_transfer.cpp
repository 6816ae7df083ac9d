#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dtripod/transfer.hpp"
#include "expm_reference.hpp"

using namespace dtripod;
using doctest::Approx;

namespace {
constexpr double kRhoStar = 0.70710678118654752;
constexpr double kXiStar = 1.2195415448107962; // pi / (u- - u+) at rho*
constexpr complexd kImag{0.0, 1.0};

MediumParams fig2_params() {
    MediumParams p;
    p.a = 1.0;
    p.S = 0.0;
    p.l = 1;
    p.alpha = 100.0;
    p.xi = kXiStar;
    return p;
}

Matrix2c pauli_generator(const KCoefficients& k) {
    Matrix2c g;
    g << k.k0L, k.kxL - kImag * k.kyL,
         k.kxL + kImag * k.kyL, k.k0L;
    return g;
}
} // namespace

TEST_CASE("k_coefficients limits and frozen values") {
    MediumParams p = fig2_params();

    SUBCASE("xi = 0 kills every coefficient") {
        p.xi = 0.0;
        const KCoefficients k = k_coefficients(1.3, 0.7, p);
        CHECK(std::abs(k.k0L) == 0.0);
        CHECK(std::abs(k.kxL) == 0.0);
        CHECK(std::abs(k.kyL) == 0.0);
    }

    SUBCASE("vortex core: u+ = u- = 1") {
        const KCoefficients k = k_coefficients(0.0, 0.3, p);
        CHECK(std::abs(k.kxL) == 0.0);
        CHECK(std::abs(k.kyL) == 0.0);
        const complexd expect = p.xi * (1.0 + kImag * 2.0 * p.xi / p.alpha);
        CHECK(std::abs(k.k0L - expect) < 1e-14);
    }

    SUBCASE("frozen radial factor at rho*") {
        // by construction xi* (u- - u+) = pi, so Re kxL = -pi/2
        const KCoefficients k = k_coefficients(kRhoStar, 0.0, p);
        CHECK(k.kxL.real() == Approx(-std::numbers::pi / 2).epsilon(1e-12));
        CHECK(k.kxL.imag() == Approx(-0.13622649404798168).epsilon(1e-12));
        CHECK(std::abs(k.kyL) == 0.0);
    }

    SUBCASE("epsilon adds a common phase only") {
        p.epsilon = 1e-3;
        const KCoefficients with = k_coefficients(0.9, 0.2, p);
        p.epsilon = 0.0;
        const KCoefficients without = k_coefficients(0.9, 0.2, p);
        CHECK(std::abs((with.k0L - without.k0L) - p.xi * 1e-3) < 1e-15);
        CHECK(std::abs(with.kxL - without.kxL) == 0.0);
    }

    SUBCASE("radial direction invariant: kx sin(S + l phi) + ky cos(S + l phi) = 0") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> rho_d(0.0, 3.0), ang(-3.0, 3.0), a_d(0.1, 2.0);
        for (int i = 0; i < 100; ++i) {
            p.a = a_d(rng);
            p.S = ang(rng);
            p.l = 1 + i % 3;
            const double rho = rho_d(rng), phi = ang(rng);
            const KCoefficients k = k_coefficients(rho, phi, p);
            const double angle = p.S + p.l * phi;
            CHECK(std::abs(k.kxL * std::sin(angle) + k.kyL * std::cos(angle)) < 1e-14);
            CHECK(k.k0L.imag() >= 0.0);
        }
    }

    SUBCASE("two-photon detuning is rejected on the analytic path") {
        p.delta1 = 0.1;
        CHECK_THROWS_AS(k_coefficients(1.0, 0.0, p), std::invalid_argument);
    }

    SUBCASE("validity warning above 2 xi^2/alpha = 0.2") {
        CHECK_FALSE(k_coefficients(1.0, 0.0, p).validity_warning);
        p.xi = 4.0;
        CHECK(k_coefficients(1.0, 0.0, p).validity_warning);
    }
}

TEST_CASE("dispersion") {
    KCoefficients k;
    k.k0L = complexd(0.3, 0.01);

    SUBCASE("collapses to k0 when kperp = 0") {
        const auto [dp, dm] = dispersion(k);
        CHECK(dp == k.k0L);
        CHECK(dm == k.k0L);
    }

    SUBCASE("real kx splits symmetrically") {
        k.k0L = 0.0;
        k.kxL = 0.7;
        const auto [dp, dm] = dispersion(k);
        CHECK(dp.real() == Approx(0.7).epsilon(1e-15));
        CHECK(dm.real() == Approx(-0.7).epsilon(1e-15));
    }

    SUBCASE("branch flip permutes the pair") {
        k.kxL = complexd(0.2, -0.4);
        k.kyL = complexd(-1.1, 0.3);
        const auto [dp, dm] = dispersion(k);
        KCoefficients neg = k;
        neg.kxL = -k.kxL;
        neg.kyL = -k.kyL; // kperp^2 unchanged
        const auto [np, nm] = dispersion(neg);
        CHECK(std::abs(dp - np) < 1e-15);
        CHECK(std::abs(dm - nm) < 1e-15);
    }
}

TEST_CASE("transfer_matrix") {
    SUBCASE("identity at zero coefficients") {
        KCoefficients k;
        CHECK((transfer_matrix(k) - Matrix2c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    }

    SUBCASE("quarter-wave swap: kx = pi/2 gives i sigma_x") {
        KCoefficients k;
        k.kxL = std::numbers::pi / 2;
        const Matrix2c m = transfer_matrix(k);
        CHECK(std::abs(m(0, 0)) < 1e-15);
        CHECK(std::abs(m(0, 1) - kImag) < 1e-15);
        CHECK(std::abs(m(1, 0) - kImag) < 1e-15);
    }

    SUBCASE("equals the brute-force exponential of the Pauli generator") {
        std::mt19937 rng(17);
        for (int i = 0; i < 200; ++i) {
            KCoefficients k;
            const Matrix2c r = random_matrix2(rng, 2.0);
            k.k0L = r(0, 0);
            k.kxL = r(0, 1);
            k.kyL = r(1, 0);
            const Matrix2c direct = transfer_matrix(k);
            const Matrix2c ref = expm_reference(kImag * pauli_generator(k));
            CHECK((direct - ref).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
        }
    }

    SUBCASE("small kperp limit is smooth") {
        KCoefficients k;
        k.kxL = complexd(1e-9, 1e-10);
        const Matrix2c m = transfer_matrix(k);
        const Matrix2c ref = expm_reference(kImag * pauli_generator(k));
        CHECK((m - ref).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("transmissions") {
    MediumParams p = fig2_params();

    SUBCASE("transparent at exact resonance") {
        p.xi = 0.0;
        const TransferResult t = transmissions(1.0, 0.5, p);
        CHECK(std::abs(t.t1 - 1.0) < 1e-15);
        CHECK(std::abs(t.t2) == 0.0);
    }

    SUBCASE("lossless perfect swap at rho* with xi = xi*") {
        p.lossless = true;
        const TransferResult t = transmissions(kRhoStar, 0.0, p);
        CHECK(t.i2 == Approx(1.0).epsilon(1e-12));
        CHECK(t.i1 < 1e-24);
    }

    SUBCASE("frozen Fig.-2-peak-region values") {
        const TransferResult t = transmissions(kRhoStar, 0.0, p);
        CHECK(t.i1 == Approx(0.014017971045092026).epsilon(1e-10));
        CHECK(t.i2 == Approx(0.76473654825439574).epsilon(1e-10));
    }

    SUBCASE("no generated component at the core or for decoupled tripods") {
        CHECK(std::abs(transmissions(0.0, 1.0, p).t2) == 0.0);
        p.S = std::numbers::pi / 2;
        CHECK(std::abs(transmissions(1.2, 0.3, p).t2) < 1e-15);
    }

    SUBCASE("azimuthal factorization") {
        std::mt19937 rng(29);
        std::uniform_real_distribution<double> rho_d(0.05, 2.5), ang(-3.0, 3.0);
        for (int l : {1, 2, 3}) {
            p.l = l;
            p.S = 0.4;
            for (int i = 0; i < 30; ++i) {
                const double rho = rho_d(rng), phi = ang(rng);
                const TransferResult at_phi = transmissions(rho, phi, p);
                const TransferResult at_zero = transmissions(rho, 0.0, p);
                CHECK(std::abs(at_phi.t1 - at_zero.t1) < 1e-14);
                CHECK(std::abs(at_phi.t2 - std::polar(1.0, -l * phi) * at_zero.t2) < 1e-14);
            }
        }
    }

    SUBCASE("lossless unitarity and passive losses") {
        MediumParams lossless = p;
        lossless.lossless = true;
        for (double rho = 0.0; rho <= 3.0; rho += 0.05) {
            for (double phi = 0.0; phi < 6.2; phi += 0.77) {
                const TransferResult lt = transmissions(rho, phi, lossless);
                CHECK(std::abs(lt.i1 + lt.i2 - 1.0) < 1e-12);
                const TransferResult t = transmissions(rho, phi, p);
                CHECK(t.i1 + t.i2 <= 1.0 + 1e-12);
            }
        }
    }

    SUBCASE("square-root branch does not matter") {
        const KCoefficients k = k_coefficients(0.9, 0.6, p);
        const complexd kperp = std::sqrt(k.kxL * k.kxL + k.kyL * k.kyL);
        const TransferResult t = transmissions(0.9, 0.6, p);
        for (double sign : {1.0, -1.0}) {
            const complexd kp = sign * kperp;
            const complexd t1 = std::exp(kImag * k.k0L) * std::cos(kp);
            const complexd t2 = kImag * (k.kxL + kImag * k.kyL) / kp *
                                std::exp(kImag * k.k0L) * std::sin(kp);
            CHECK(std::abs(t1 - t.t1) < 1e-14);
            CHECK(std::abs(t2 - t.t2) < 1e-14);
        }
    }
}

TEST_CASE("t2_small_rho") {
    MediumParams p = fig2_params();

    SUBCASE("vanishes at the core and for decoupled tripods") {
        CHECK(std::abs(t2_small_rho(0.0, 0.4, p)) == 0.0);
        p.S = std::numbers::pi / 2;
        CHECK(std::abs(t2_small_rho(0.1, 0.4, p)) < 1e-16);
    }

    SUBCASE("magnitude error shrinks monotonically toward the core") {
        double prev = 1.0;
        for (double rho : {0.2, 0.1, 0.05, 0.025}) {
            const complexd exact = transmissions(rho, 0.0, p).t2;
            const double err = std::abs(std::abs(t2_small_rho(rho, 0.0, p)) - std::abs(exact)) /
                               std::abs(exact);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 1e-3); // at rho = 0.025
    }

    SUBCASE("vortex phase factor -l phi, overall phase up to a global sign") {
        // The leading-order expansion fixes the phi dependence exactly; the
        // constant phase is convention-bound, so it is checked modulo pi.
        p.l = 2;
        const double rho = 0.04;
        const complexd ratio0 = t2_small_rho(rho, 0.0, p) / transmissions(rho, 0.0, p).t2;
        for (double phi : {0.3, 1.7, 4.4}) {
            const complexd ratio = t2_small_rho(rho, phi, p) / transmissions(rho, phi, p).t2;
            CHECK(std::abs(ratio - ratio0) < 1e-2); // phi dependence identical
        }
        double residual = std::arg(ratio0);
        while (residual > std::numbers::pi / 2) residual -= std::numbers::pi;
        while (residual < -std::numbers::pi / 2) residual += std::numbers::pi;
        CHECK(std::abs(residual) < 0.05);
    }
}
