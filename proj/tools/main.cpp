// Command-line front end: runs constraint checks, radial/azimuthal
// transmission scans, oracle validation and parameter sweeps from a JSON
// config, emitting deterministic CSV/JSON artifacts.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtripod/analysis.hpp"
#include "dtripod/medium.hpp"
#include "dtripod/oracle.hpp"
#include "dtripod/transfer.hpp"

using json = nlohmann::ordered_json;
using namespace dtripod;

namespace {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepAxis {
    std::string name; // one of a, S, alpha, xi
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
};

struct RunConfig {
    MediumParams params;
    bool xi_explicit = false;

    double scan_rho_max = 3.0;
    int scan_points = 601;

    double map_rho_max = 3.0;
    int map_rho_points = 61;
    int map_phi_points = 64;

    std::vector<SweepAxis> axes;
    std::optional<BeamGeometry> physical;
    std::string out_dir = ".";
};

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError(where + ": unknown key '" + item.key() + "'");
        }
    }
}

double get_number(const json& obj, const std::string& where, const std::string& key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return obj.at(key).get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key,
            int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    return v.get<int>();
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }

    RunConfig cfg;
    require_keys(doc, "config",
                 {"params", "scan", "map", "sweep", "physical", "out_dir"});
    if (!doc.contains("params")) throw ConfigError("config: missing 'params'");

    const json& p = doc.at("params");
    require_keys(p, "params",
                 {"a", "S", "l", "alpha", "xi", "epsilon", "gamma_tilde",
                  "delta1", "delta2", "lossless"});
    cfg.params.a = get_number(p, "params", "a", 1.0);
    cfg.params.S = get_number(p, "params", "S", 0.0);
    cfg.params.l = get_int(p, "params", "l", 1);
    cfg.params.alpha = get_number(p, "params", "alpha", 100.0);
    cfg.params.epsilon = get_number(p, "params", "epsilon", 0.0);
    cfg.params.gamma_tilde = get_number(p, "params", "gamma_tilde", 1e4);
    cfg.params.delta1 = get_number(p, "params", "delta1", 0.0);
    cfg.params.delta2 = get_number(p, "params", "delta2", 0.0);
    if (p.contains("lossless")) {
        if (!p.at("lossless").is_boolean())
            throw ConfigError("params.lossless: expected a boolean");
        cfg.params.lossless = p.at("lossless").get<bool>();
    }
    if (p.contains("xi")) {
        cfg.params.xi = get_number(p, "params", "xi", 0.0);
        cfg.xi_explicit = true;
    } else {
        // default to the pi-swap condition at rho* = 1/sqrt(2)
        cfg.params.xi = solve_xi_condition(cfg.params.a, cfg.params.S);
    }
    try {
        cfg.params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }

    if (doc.contains("scan")) {
        const json& s = doc.at("scan");
        require_keys(s, "scan", {"rho_max", "points"});
        cfg.scan_rho_max = get_number(s, "scan", "rho_max", cfg.scan_rho_max);
        cfg.scan_points = get_int(s, "scan", "points", cfg.scan_points);
        if (cfg.scan_points < 2 || !(cfg.scan_rho_max > 0.0))
            throw ConfigError("scan: need points >= 2 and rho_max > 0");
    }
    if (doc.contains("map")) {
        const json& m = doc.at("map");
        require_keys(m, "map", {"rho_max", "rho_points", "phi_points"});
        cfg.map_rho_max = get_number(m, "map", "rho_max", cfg.map_rho_max);
        cfg.map_rho_points = get_int(m, "map", "rho_points", cfg.map_rho_points);
        cfg.map_phi_points = get_int(m, "map", "phi_points", cfg.map_phi_points);
        if (cfg.map_rho_points < 2 || cfg.map_phi_points < 4 || !(cfg.map_rho_max > 0.0))
            throw ConfigError("map: need rho_points >= 2, phi_points >= 4, rho_max > 0");
    }
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        require_keys(s, "sweep", {"axes"});
        if (!s.contains("axes") || !s.at("axes").is_array() || s.at("axes").empty())
            throw ConfigError("sweep: need a non-empty 'axes' array");
        for (const json& axis : s.at("axes")) {
            require_keys(axis, "sweep.axes[]", {"name", "start", "stop", "count"});
            SweepAxis ax;
            if (!axis.contains("name") || !axis.at("name").is_string())
                throw ConfigError("sweep.axes[].name: expected a string");
            ax.name = axis.at("name").get<std::string>();
            static const std::set<std::string> kAxisNames{"a", "S", "alpha", "xi"};
            if (!kAxisNames.count(ax.name))
                throw ConfigError("sweep.axes[].name: must be one of a, S, alpha, xi");
            ax.start = get_number(axis, "sweep.axes[]", "start", 0.0);
            ax.stop = get_number(axis, "sweep.axes[]", "stop", ax.start);
            ax.count = get_int(axis, "sweep.axes[]", "count", 1);
            if (ax.count < 1) throw ConfigError("sweep.axes[].count: must be >= 1");
            cfg.axes.push_back(ax);
        }
    }
    if (doc.contains("physical")) {
        const json& g = doc.at("physical");
        require_keys(g, "physical", {"L_um", "sigma_um", "lambda_um"});
        BeamGeometry geom;
        geom.length_um = get_number(g, "physical", "L_um", 0.0);
        geom.sigma_um = get_number(g, "physical", "sigma_um", 0.0);
        geom.lambda_um = get_number(g, "physical", "lambda_um", 0.0);
        if (!(geom.length_um > 0.0) || !(geom.sigma_um > 0.0) || !(geom.lambda_um > 0.0))
            throw ConfigError("physical: L_um, sigma_um, lambda_um must all be > 0");
        cfg.physical = geom;
    }
    if (doc.contains("out_dir")) {
        if (!doc.at("out_dir").is_string())
            throw ConfigError("out_dir: expected a string");
        cfg.out_dir = doc.at("out_dir").get<std::string>();
    }
    return cfg;
}

// Resolved config, embedded into every JSON report so a run can be
// reproduced from its own output.
json resolved_config(const RunConfig& cfg) {
    json p = {
        {"a", cfg.params.a},           {"S", cfg.params.S},
        {"l", cfg.params.l},           {"alpha", cfg.params.alpha},
        {"xi", cfg.params.xi},         {"epsilon", cfg.params.epsilon},
        {"gamma_tilde", cfg.params.gamma_tilde},
        {"delta1", cfg.params.delta1}, {"delta2", cfg.params.delta2},
        {"lossless", cfg.params.lossless},
    };
    json doc = {{"params", p}};
    doc["scan"] = {{"rho_max", cfg.scan_rho_max}, {"points", cfg.scan_points}};
    doc["map"] = {{"rho_max", cfg.map_rho_max},
                  {"rho_points", cfg.map_rho_points},
                  {"phi_points", cfg.map_phi_points}};
    if (!cfg.axes.empty()) {
        json axes = json::array();
        for (const SweepAxis& ax : cfg.axes) {
            axes.push_back({{"name", ax.name},
                            {"start", ax.start},
                            {"stop", ax.stop},
                            {"count", ax.count}});
        }
        doc["sweep"] = {{"axes", axes}};
    }
    if (cfg.physical) {
        doc["physical"] = {{"L_um", cfg.physical->length_um},
                           {"sigma_um", cfg.physical->sigma_um},
                           {"lambda_um", cfg.physical->lambda_um}};
    }
    doc["out_dir"] = cfg.out_dir;
    return doc;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + cfg.out_dir);
    return dir;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary); // \n line endings everywhere
    if (!out) throw ConfigError("cannot write output file: " + file.string());
    return out;
}

void write_json(const std::filesystem::path& file, const json& doc) {
    auto out = open_out(file);
    out << doc.dump(2) << "\n";
}

// ---------------------------------------------------------------- check

int cmd_check(const RunConfig& cfg) {
    const ConstraintReport r = lifetime_report(cfg.params, cfg.physical);

    auto row = [](const char* name, double value, Status s) {
        std::printf("  %-18s %-12.6g %s\n", name, value, to_string(s));
    };
    std::printf("constraint            value        status\n");
    row("adiabaticity", r.adiabaticity, r.adiabaticity_status);
    row("optical_density", r.optical_density, r.optical_density_status);
    row("degeneracy_margin", r.degeneracy_margin, r.degeneracy_status);
    row("diffraction_number", r.diffraction_number, r.diffraction_status);
    std::printf("  %-18s %-12.6g\n", "lifetime_ratio", r.lifetime_ratio);
    std::printf("  %-18s %-12.6g\n", "lifetime_ratio_core", r.lifetime_ratio_core);
    std::printf("overall: %s\n", to_string(r.overall()));
    std::printf("note: closed-form results assume the resonant double-tripod "
                "transitions only; non-resonant transitions to other excited "
                "levels increase the losses beyond these estimates.\n");

    json doc = {
        {"adiabaticity", r.adiabaticity},
        {"adiabaticity_status", to_string(r.adiabaticity_status)},
        {"optical_density", r.optical_density},
        {"optical_density_ok", r.optical_density_ok},
        {"optical_density_status", to_string(r.optical_density_status)},
        {"degeneracy_margin", r.degeneracy_margin},
        {"degeneracy_status", to_string(r.degeneracy_status)},
        {"diffraction_number", r.diffraction_number},
        {"diffraction_status", to_string(r.diffraction_status)},
        {"lifetime_ratio", r.lifetime_ratio},
        {"lifetime_ratio_core", r.lifetime_ratio_core},
        {"overall", to_string(r.overall())},
        {"config", resolved_config(cfg)},
    };
    write_json(prepare_out_dir(cfg) / "check.json", doc);

    switch (r.overall()) {
        case Status::Warn: return 2;
        case Status::Fail: return 3;
        default: return 0;
    }
}

// ----------------------------------------------------------------- scan

void write_scan_plot_script(const std::filesystem::path& dir) {
    auto out = open_out(dir / "scan.gp");
    out << "# gnuplot script for scan.csv\n"
           "# columns: 1 rho, 2 i1, 3 i2, 4 phase2, 5 flags\n"
           "set datafile separator ','\n"
           "set xlabel 'rho / sigma'\n"
           "set ylabel 'transmission probability'\n"
           "plot 'scan.csv' skip 1 using 1:2 with lines title '|T1|^2', \\\n"
           "     'scan.csv' skip 1 using 1:3 with lines title '|T2|^2'\n";
}

int cmd_scan(const RunConfig& cfg) {
    const auto grid = uniform_grid(0.0, cfg.scan_rho_max, cfg.scan_points);
    const auto scan = radial_scan(cfg.params, grid);
    const auto dir = prepare_out_dir(cfg);
    auto out = open_out(dir / "scan.csv");
    out << "rho,i1,i2,phase2,flags\n";
    for (const ScanRecord& rec : scan) {
        out << fmt17(rec.rho) << ',' << fmt17(rec.i1) << ',' << fmt17(rec.i2)
            << ',' << fmt17(rec.phase2) << ',' << rec.flags << '\n';
    }
    write_scan_plot_script(dir);
    return 0;
}

// ------------------------------------------------------------------ map

int cmd_map(const RunConfig& cfg) {
    const auto rho_grid = uniform_grid(0.0, cfg.map_rho_max, cfg.map_rho_points);
    const auto dir = prepare_out_dir(cfg);
    auto out = open_out(dir / "map.csv");
    out << "rho,phi,i2,phase2\n";
    for (double rho : rho_grid) {
        for (int k = 0; k < cfg.map_phi_points; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / cfg.map_phi_points;
            double i2 = std::numeric_limits<double>::quiet_NaN();
            double phase2 = i2;
            try {
                const TransferResult t = transmissions(rho, phi, cfg.params);
                i2 = t.i2;
                phase2 = std::arg(t.t2);
            } catch (const DegenerateVelocity&) {
            }
            out << fmt17(rho) << ',' << fmt17(phi) << ',' << fmt17(i2) << ','
                << fmt17(phase2) << '\n';
        }
    }
    auto gp = open_out(dir / "map.gp");
    gp << "# gnuplot script for map.csv\n"
          "# columns: 1 rho, 2 phi, 3 i2, 4 phase2\n"
          "set datafile separator ','\n"
          "set xlabel 'rho / sigma'\n"
          "set ylabel 'phi (rad)'\n"
          "set view map\n"
          "splot 'map.csv' skip 1 using 1:2:3 with points pt 5 palette title '|T2|^2'\n";
    return 0;
}

// ------------------------------------------------------------- validate

struct ValidateResult {
    double xi_star = std::numeric_limits<double>::quiet_NaN();
    double max_oracle_deviation = 0.0;
    double gamma_scaling_slope = 0.0;
    double ode_convergence_order = 0.0;
    double ode_exp_mismatch = 0.0;
    double unitarity_defect_lossless = 0.0;
    std::vector<std::string> failures;
};

double matrix_max_norm(const Matrix2c& m) {
    return m.cwiseAbs().maxCoeff();
}

ValidateResult run_validate(const RunConfig& cfg) {
    ValidateResult res;
    MediumParams p = cfg.params;

    try {
        res.xi_star = solve_xi_condition(p.a, p.S);
        if (p.a == 1.0 && p.S == 0.0 &&
            (res.xi_star < 1.215 || res.xi_star > 1.225)) {
            res.failures.push_back("xi_star");
        }
    } catch (const NoSolution&) {
        res.failures.push_back("xi_star");
    }

    // oracle agreement at gamma_tilde = 1e6 over the radial grid
    {
        MediumParams deep = p;
        deep.gamma_tilde = 1e6;
        for (double rho : default_rho_grid()) {
            const TransferResult exact = exact_transmissions(rho, 0.0, deep);
            const TransferResult analytic = transmissions(rho, 0.0, p);
            res.max_oracle_deviation =
                std::max({res.max_oracle_deviation,
                          std::abs(exact.i1 - analytic.i1),
                          std::abs(exact.i2 - analytic.i2)});
        }
        if (!(res.max_oracle_deviation < 1e-3)) res.failures.push_back("oracle_agreement");
    }

    // non-adiabatic error scaling: generator discrepancy attributable to the
    // finite decay rate, against the gamma_tilde -> infinity limit
    {
        MediumParams lim = p;
        lim.gamma_tilde = std::numeric_limits<double>::infinity();
        const double rho_star = (1.0 / std::numbers::sqrt2);
        const Generator g_inf = exact_generator(rho_star, 0.0, lim);
        std::vector<double> logg, logd;
        for (double gt : {1e3, 1e4, 1e5, 1e6}) {
            MediumParams q = p;
            q.gamma_tilde = gt;
            const double dev = matrix_max_norm(exact_generator(rho_star, 0.0, q) - g_inf);
            logg.push_back(std::log(gt));
            logd.push_back(std::log(dev));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(logg.size());
        for (size_t i = 0; i < logg.size(); ++i) {
            sx += logg[i]; sy += logd[i];
            sxx += logg[i] * logg[i]; sxy += logg[i] * logd[i];
        }
        res.gamma_scaling_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (std::abs(res.gamma_scaling_slope + 1.0) > 0.1)
            res.failures.push_back("gamma_scaling_slope");
    }

    // RK4 vs closed-form exponential
    {
        const double rho_star = (1.0 / std::numbers::sqrt2);
        const Generator g = analytic_generator(rho_star, 0.0, p);
        const Vector2c e0(1.0, 0.0);
        const Vector2c ref = expm2(complexd(0.0, 1.0) * g) * e0;
        auto err = [&](int steps) {
            return (ode_propagate([&](double) { return g; }, e0, steps) - ref).norm();
        };
        const double e64 = err(64), e128 = err(128), e256 = err(256);
        res.ode_convergence_order =
            0.5 * (std::log2(e64 / e128) + std::log2(e128 / e256));
        if (std::abs(res.ode_convergence_order - 4.0) > 0.2)
            res.failures.push_back("ode_convergence_order");

        for (double rho : uniform_grid(0.0, cfg.scan_rho_max, 61)) {
            const Generator gr = analytic_generator(rho, 0.0, p);
            const Vector2c r1 = ode_propagate([&](double) { return gr; }, e0, 1024);
            const Vector2c r2 = expm2(complexd(0.0, 1.0) * gr) * e0;
            res.ode_exp_mismatch = std::max(res.ode_exp_mismatch, (r1 - r2).norm());
        }
        if (!(res.ode_exp_mismatch < 1e-10)) res.failures.push_back("ode_exp_mismatch");
    }

    // lossless unitarity over a (rho, phi) grid
    {
        MediumParams lossless = p;
        lossless.lossless = true;
        for (double rho : default_rho_grid()) {
            for (int k = 0; k < 64; ++k) {
                const double phi = 2.0 * std::numbers::pi * k / 64;
                const TransferResult t = transmissions(rho, phi, lossless);
                res.unitarity_defect_lossless =
                    std::max(res.unitarity_defect_lossless, std::abs(t.i1 + t.i2 - 1.0));
            }
        }
        if (!(res.unitarity_defect_lossless < 1e-12))
            res.failures.push_back("unitarity_defect_lossless");
    }
    return res;
}

int cmd_validate(const RunConfig& cfg) {
    const ValidateResult res = run_validate(cfg);
    json doc = {
        {"xi_star", res.xi_star},
        {"max_oracle_deviation", res.max_oracle_deviation},
        {"gamma_scaling_slope", res.gamma_scaling_slope},
        {"ode_convergence_order", res.ode_convergence_order},
        {"ode_exp_mismatch", res.ode_exp_mismatch},
        {"unitarity_defect_lossless", res.unitarity_defect_lossless},
        {"failures", res.failures},
        {"config", resolved_config(cfg)},
    };
    write_json(prepare_out_dir(cfg) / "validate.json", doc);
    if (!res.failures.empty()) {
        for (const std::string& f : res.failures) {
            std::fprintf(stderr, "validate: tolerance breach: %s\n", f.c_str());
        }
        return 3;
    }
    return 0;
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.axes.empty()) throw ConfigError("sweep: config has no 'sweep.axes'");
    size_t total = 1;
    for (const SweepAxis& ax : cfg.axes) {
        total *= static_cast<size_t>(ax.count);
        if (total > 1000000) {
            std::fprintf(stderr, "sweep: combination count exceeds 10^6\n");
            return 1;
        }
    }
    const auto dir = prepare_out_dir(cfg);
    auto out = open_out(dir / "sweep.csv");
    for (const SweepAxis& ax : cfg.axes) out << ax.name << ',';
    out << "rho_peak,i2_peak,i1_at_peak\n";

    const auto grid = uniform_grid(0.0, cfg.scan_rho_max, cfg.scan_points);
    std::vector<int> idx(cfg.axes.size(), 0);
    for (size_t n = 0; n < total; ++n) {
        MediumParams p = cfg.params;
        std::vector<double> values(cfg.axes.size());
        for (size_t i = 0; i < cfg.axes.size(); ++i) {
            const SweepAxis& ax = cfg.axes[i];
            const double v = ax.count == 1
                                 ? ax.start
                                 : ax.start + (ax.stop - ax.start) * idx[i] / (ax.count - 1);
            values[i] = v;
            if (ax.name == "a") p.a = v;
            else if (ax.name == "S") p.S = v;
            else if (ax.name == "alpha") p.alpha = v;
            else p.xi = v;
        }

        double rho_peak = std::numeric_limits<double>::quiet_NaN();
        double i2_peak = rho_peak, i1_at_peak = rho_peak;
        try {
            const auto scan = radial_scan(p, grid);
            std::tie(rho_peak, i2_peak) = find_peak(scan);
            i1_at_peak = transmissions(rho_peak, 0.0, p).i1;
        } catch (const std::exception&) {
            // degenerate or invalid combination: NaN row
        }
        for (double v : values) out << fmt17(v) << ',';
        out << fmt17(rho_peak) << ',' << fmt17(i2_peak) << ',' << fmt17(i1_at_peak)
            << '\n';

        // odometer increment, last axis fastest
        for (size_t i = cfg.axes.size(); i-- > 0;) {
            if (++idx[i] < cfg.axes[i].count) break;
            idx[i] = 0;
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"double-tripod spinor slow light: transmission scans and "
                 "validity checks"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    for (const char* name : {"check", "scan", "map", "validate", "sweep"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_override, "output directory (overrides config)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = parse_config(config_path);
        if (!out_override.empty()) cfg.out_dir = out_override;

        const std::string cmd = app.get_subcommands().front()->get_name();
        if (cmd == "check") return cmd_check(cfg);
        if (cmd == "scan") return cmd_scan(cfg);
        if (cmd == "map") return cmd_map(cfg);
        if (cmd == "validate") return cmd_validate(cfg);
        return cmd_sweep(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
