#include "dtripod/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dtripod {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// f(rho) peaks at rho = 1/sqrt(2) with value a e^{-1/2}/sqrt(2); the
// unit tests cross-check the maximizer by grid scan.
constexpr double kRhoStar = (1.0 / std::numbers::sqrt2);

double f_max(double a) { return a * std::exp(-0.5) * (1.0 / std::numbers::sqrt2); }

Status worst(Status x, Status y) {
    auto rank = [](Status s) {
        switch (s) {
            case Status::Fail: return 2;
            case Status::Warn: return 1;
            default: return 0;
        }
    };
    return rank(x) >= rank(y) ? x : y;
}

} // namespace

const char* to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Warn: return "warn";
        case Status::Fail: return "fail";
        case Status::NotApplicable: return "n/a";
    }
    return "?";
}

double solve_xi_condition(double a, double S) {
    if (!(a > 0.0)) throw NoSolution("solve_xi_condition: a must be positive");
    const double f = lg_ratio(kRhoStar, a);
    const double cs = std::cos(S);
    const double v_plus = 1.0 + f * f + 2.0 * f * cs;
    const double v_minus = 1.0 + f * f - 2.0 * f * cs;
    if (std::min(v_plus, v_minus) < kTolSingular) {
        throw NoSolution("solve_xi_condition: velocity matrix singular at rho*");
    }
    const double split = 1.0 / v_minus - 1.0 / v_plus;
    if (split < kTolSingular) {
        throw NoSolution("solve_xi_condition: eigen-velocities coincide (cos S <= 0?)");
    }
    return std::numbers::pi / split;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) throw std::invalid_argument("uniform_grid: need n >= 2, hi > lo");
    std::vector<double> g(static_cast<size_t>(n));
    const double h = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo + i * h;
    g.back() = hi;
    return g;
}

std::vector<double> default_rho_grid() { return uniform_grid(0.0, 3.0, 601); }

std::vector<ScanRecord> radial_scan(const MediumParams& p,
                                    const std::vector<double>& rho_grid) {
    if (rho_grid.empty()) throw std::invalid_argument("radial_scan: empty grid");
    for (size_t i = 0; i < rho_grid.size(); ++i) {
        if (rho_grid[i] < 0.0 || (i > 0 && rho_grid[i] <= rho_grid[i - 1])) {
            throw std::invalid_argument("radial_scan: grid must be strictly increasing and >= 0");
        }
    }
    std::vector<ScanRecord> out;
    out.reserve(rho_grid.size());
    for (double rho : rho_grid) {
        ScanRecord rec{rho, kNan, kNan, kNan, 0};
        try {
            const TransferResult t = transmissions(rho, 0.0, p);
            rec.i1 = t.i1;
            rec.i2 = t.i2;
            rec.phase2 = std::arg(t.t2);
            if (t.validity_warning) rec.flags |= kFlagValidityWarning;
        } catch (const DegenerateVelocity&) {
            rec.flags |= kFlagDegenerate;
        }
        out.push_back(rec);
    }
    return out;
}

std::vector<complexd> sample_t2_azimuth(double rho, const MediumParams& p, int n_phi) {
    std::vector<complexd> samples(static_cast<size_t>(n_phi));
    for (int k = 0; k < n_phi; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / n_phi;
        samples[static_cast<size_t>(k)] = transmissions(rho, phi, p).t2;
    }
    return samples;
}

OamSpectrum oam_spectrum(const std::vector<complexd>& field_samples, int m_max) {
    const int n = static_cast<int>(field_samples.size());
    if (m_max < 1) throw std::invalid_argument("oam_spectrum: m_max must be >= 1");
    if (n < 4 * m_max || (n & (n - 1)) != 0) {
        throw std::invalid_argument(
            "oam_spectrum: need a power-of-two sample count with n_phi >= 4 m_max");
    }
    OamSpectrum spec;
    spec.m_max = m_max;
    spec.power.assign(static_cast<size_t>(2 * m_max + 1), 0.0);
    double total = 0.0;
    for (int m = -m_max; m <= m_max; ++m) {
        complexd c = 0.0;
        for (int k = 0; k < n; ++k) {
            const double phase = -2.0 * std::numbers::pi * m * k / n;
            c += field_samples[static_cast<size_t>(k)] * std::polar(1.0, phase);
        }
        c /= static_cast<double>(n);
        const double pw = std::norm(c);
        spec.power[static_cast<size_t>(m + m_max)] = pw;
        total += pw;
    }
    if (total > 0.0) {
        for (double& pw : spec.power) pw /= total;
    }
    return spec;
}

ConstraintReport lifetime_report(const MediumParams& p,
                                 const std::optional<BeamGeometry>& geometry) {
    ConstraintReport r{};
    r.adiabaticity = 2.0 * p.xi * p.xi / p.alpha;
    r.adiabaticity_status = r.adiabaticity < 0.1   ? Status::Pass
                            : r.adiabaticity < 0.5 ? Status::Warn
                                                   : Status::Fail;

    r.optical_density = p.alpha;
    r.optical_density_ok = p.alpha >= 40.0;
    r.optical_density_status = p.alpha >= 40.0   ? Status::Pass
                               : p.alpha >= 20.0 ? Status::Warn
                                                 : Status::Fail;

    // min over rho of v-(rho) = min over f in [0, f_max] of (f - |cos S|)^2 + sin^2 S
    const double fm = f_max(p.a);
    const double c = std::abs(std::cos(p.S));
    const double sin2 = 1.0 - c * c;
    r.degeneracy_margin = fm >= c ? sin2 : (fm - c) * (fm - c) + sin2;
    r.degeneracy_status = r.degeneracy_margin >= 0.1          ? Status::Pass
                          : r.degeneracy_margin > kTolSingular ? Status::Warn
                                                               : Status::Fail;

    if (geometry) {
        r.diffraction_number = geometry->length_um * geometry->lambda_um /
                               (geometry->sigma_um * geometry->sigma_um);
        r.diffraction_status = r.diffraction_number < 0.5   ? Status::Pass
                               : r.diffraction_number < 1.0 ? Status::Warn
                                                            : Status::Fail;
    } else {
        r.diffraction_number = kNan;
        r.diffraction_status = Status::NotApplicable;
    }

    r.lifetime_ratio_core = r.adiabaticity; // v_min ~ v0(0) approximation
    r.lifetime_ratio =
        r.adiabaticity / std::max(r.degeneracy_margin, kTolSingular);
    return r;
}

Status ConstraintReport::overall() const {
    Status s = Status::Pass;
    s = worst(s, adiabaticity_status);
    s = worst(s, optical_density_status);
    s = worst(s, degeneracy_status);
    if (diffraction_status != Status::NotApplicable) s = worst(s, diffraction_status);
    return s;
}

std::pair<double, double> find_peak(const std::vector<ScanRecord>& scan) {
    if (scan.empty()) throw std::invalid_argument("find_peak: empty scan");
    size_t best = scan.size();
    for (size_t i = 0; i < scan.size(); ++i) {
        if (std::isnan(scan[i].i2)) continue;
        if (best == scan.size() || scan[i].i2 > scan[best].i2) best = i;
    }
    if (best == scan.size()) throw std::invalid_argument("find_peak: no valid records");

    const auto valid = [&](size_t i) { return i < scan.size() && !std::isnan(scan[i].i2); };
    if (best == 0 || !valid(best - 1) || !valid(best + 1)) {
        return {scan[best].rho, scan[best].i2};
    }
    const double y0 = scan[best - 1].i2, y1 = scan[best].i2, y2 = scan[best + 1].i2;
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom >= 0.0) return {scan[best].rho, scan[best].i2}; // flat or not concave
    const double h = 0.5 * (scan[best + 1].rho - scan[best - 1].rho);
    const double shift = 0.5 * (y0 - y2) / denom;
    return {scan[best].rho + shift * h, y1 - 0.25 * (y0 - y2) * shift};
}

} // namespace dtripod
