// Command-line front end: simulate, compare, sweep-eta, classical-check, bounds.
//
// Exit codes: 0 success, 1 rejected parameters, 2 I/O failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "kapitza/classical.hpp"
#include "kapitza/config.hpp"
#include "kapitza/errors.hpp"
#include "kapitza/experiments.hpp"
#include "kapitza/io/csv.hpp"

using namespace kapitza;

namespace {

struct RunOptions {
    std::string config_path;
    std::map<std::string, std::string> overrides;
    std::string out;
};

std::string flag_name(const std::string& key) {
    std::string s = "--" + key;
    for (auto& ch : s)
        if (ch == '_') ch = '-';
    return s;
}

void add_run_options(CLI::App* cmd, RunOptions& opts) {
    cmd->add_option("-c,--config", opts.config_path, "key = value configuration file");
    for (const auto& key : config_keys())
        cmd->add_option_function<std::string>(
            flag_name(key), [&opts, key](const std::string& v) { opts.overrides[key] = v; },
            "override " + key);
}

RunConfig resolve(const RunOptions& opts) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
    for (const auto& [key, value] : opts.overrides) set_value(cfg, key, value);
    return cfg;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) values.push_back(parse_number(item));
    if (values.empty()) throw ParameterError("empty value list");
    return values;
}

std::string sibling(const std::string& path, const std::string& tag) {
    const auto dot = path.rfind('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + "_" + tag;
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

void warn_regime(const LaserConfig& laser) {
    const auto f = frequencies(laser);
    if (f.bragg_warning)
        std::fprintf(stderr, "warning: Omega2/Omega1 = %.3g is outside the Bragg regime (< %.2g)\n",
                     f.omega2 / f.omega1, bragg_ratio_threshold);
}

int cmd_simulate(const RunOptions& opts) {
    const RunConfig cfg = resolve(opts);
    const LaserConfig laser = cfg.laser();
    warn_regime(laser);
    const TimeSeries ts = simulate(laser, cfg.numerics, cfg.solver, cfg.initial);
    if (opts.out.empty()) throw ParameterError("--out is required");
    io::write_csv(ts, opts.out);
    std::printf("wrote %zu samples to %s\n", ts.size(), opts.out.c_str());
    return 0;
}

int cmd_compare(const RunOptions& opts) {
    const RunConfig cfg = resolve(opts);
    const LaserConfig laser = cfg.laser();
    warn_regime(laser);
    ComparisonReport report = compare(laser, cfg.numerics, cfg.initial);

    std::printf("%-10s %-10s %12s %12s\n", "observable", "reference", "max_abs", "rms");
    nlohmann::ordered_json devs = nlohmann::ordered_json::array();
    for (const auto& d : report.deviations) {
        std::printf("%-10s %-10s %12.4e %12.4e\n", d.observable.c_str(), d.reference.c_str(),
                    d.max_abs, d.rms);
        devs.push_back({{"observable", d.observable},
                        {"reference", d.reference},
                        {"max_abs", d.max_abs},
                        {"rms", d.rms}});
    }
    if (!opts.out.empty()) {
        report.dirac.metadata["deviations"] = devs;
        io::write_csv(report.dirac, opts.out);
        io::write_csv(report.effective, sibling(opts.out, "effective"));
        io::write_csv(report.matrix, sibling(opts.out, "matrix"));
    }
    return 0;
}

int cmd_sweep(const RunOptions& opts, const std::string& etas_text, const std::string& fit_text,
              const SweepOptions& options) {
    const RunConfig cfg = resolve(opts);
    const LaserConfig laser = cfg.laser();
    const auto etas = etas_text.empty() ? default_eta_grid() : parse_list(etas_text);
    const FitProtocol protocol =
        fit_text.empty() ? default_fit_protocol(laser.setup) : parse_fit_protocol(fit_text);
    const auto points = sweep_eta(laser, etas, cfg.solver, protocol, cfg.numerics, options);

    std::ostringstream table;
    table << "eta,fitted_a,predicted_a,fitted_b,predicted_b,residual,converged,degenerate,error\n";
    char buf[512];
    for (const auto& p : points) {
        auto at = [](const std::vector<double>& v, std::size_t i) {
            return i < v.size() ? v[i] : std::nan("");
        };
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%s\n", p.eta,
                      at(p.fitted, 0), at(p.predicted, 0), at(p.fitted, 1), at(p.predicted, 1),
                      p.fit.residual, p.fit.converged ? 1 : 0, p.fit.degenerate ? 1 : 0,
                      p.error.c_str());
        table << buf;
    }
    if (opts.out.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream out(opts.out, std::ios::binary);
        if (!out) throw IoError(opts.out, "cannot open for writing");
        out << table.str();
        if (!out) throw IoError(opts.out, "write failed");
    }
    for (const auto& p : points)
        if (!p.ok()) std::fprintf(stderr, "eta = %g failed: %s\n", p.eta, p.error.c_str());
    return 0;
}

int cmd_classical(const RunOptions& opts, const std::string& etas_text, int x_points, int n_cycles) {
    RunConfig cfg = resolve(opts);
    cfg.setup = Setup::Antirotating;
    const auto etas = etas_text.empty() ? std::vector<double>{0.0, pi / 6, pi / 3, pi / 2}
                                        : parse_list(etas_text);

    auto steady = [&](double eta) {
        cfg.eta = eta;
        LaserConfig laser = cfg.laser();
        laser.total_t = 0.0;
        laser.delta_t = 0.0;
        return laser;
    };
    const double reference = classical::scan_force_amplitude(steady(0.0), x_points, n_cycles);

    std::ostringstream table;
    table << "eta,fitted_amplitude,closed_form_amplitude,ratio_to_eta0,cos_eta\n";
    char buf[256];
    for (double eta : etas) {
        const LaserConfig laser = steady(eta);
        const double amp = classical::scan_force_amplitude(laser, x_points, n_cycles);
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", eta, amp,
                      classical::ponderomotive_force_amplitude(laser), amp / reference,
                      std::cos(eta));
        table << buf;
    }
    if (opts.out.empty()) {
        std::cout << table.str();
    } else {
        std::ofstream out(opts.out, std::ios::binary);
        if (!out) throw IoError(opts.out, "cannot open for writing");
        out << table.str();
    }
    return 0;
}

int cmd_bounds(const RunOptions& opts, std::optional<double> omega, double cycles) {
    const RunConfig cfg = resolve(opts);
    const LaserConfig laser = cfg.laser();
    const double w = omega ? *omega : derived_wave_numbers(laser).omega;
    const auto win = field_strength_window(w, cycles);
    std::printf("omega_au,n_cycles,lower_e_hat_au,upper_e_hat_au,nonempty,e_hat_au,e_hat_inside\n");
    std::printf("%.10g,%.10g,%.10g,%.10g,%d,%.10g,%d\n", w, cycles, win.lower, win.upper,
                win.nonempty() ? 1 : 0, laser.e_hat, win.contains(laser.e_hat) ? 1 : 0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-resolved Kapitza-Dirac scattering: Dirac solver, effective models, fits"};
    app.require_subcommand(1);

    RunOptions sim_opts, cmp_opts, sweep_opts, cls_opts, bnd_opts;
    auto* sim = app.add_subcommand("simulate", "one run with one solver, CSV output");
    add_run_options(sim, sim_opts);
    sim->add_option("-o,--out", sim_opts.out, "CSV path (metadata in <path>.json)")->required();

    auto* cmp = app.add_subcommand("compare", "Dirac run against the effective models");
    add_run_options(cmp, cmp_opts);
    cmp->add_option("-o,--out", cmp_opts.out, "CSV path for the Dirac series");

    std::string etas, fit, cls_etas;
    SweepOptions sweep_options;
    auto* sweep = app.add_subcommand("sweep-eta", "ellipticity sweep with frequency fits");
    add_run_options(sweep, sweep_opts);
    sweep->add_option("-o,--out", sweep_opts.out, "CSV path for the sweep table");
    sweep->add_option("--etas", etas, "comma-separated eta values (default 0, pi/12, ..., pi/2)");
    sweep->add_option("--fit", fit, "corotating_spin or antirotating_rabi (default follows setup)");
    sweep->add_option("--point-time", sweep_options.total_t, "interaction time per point (default automatic)");
    sweep->add_option("--periods", sweep_options.periods,
                      "automatic interaction time in signal periods (default 2 beat or 5 Rabi periods)");
    sweep->add_flag("--extrapolate-dt", sweep_options.extrapolate_dt,
                    "Dirac solver: fit at two step sizes and extrapolate the frequencies to dt -> 0");

    int x_points = 16, n_cycles = 20;
    auto* cls = app.add_subcommand("classical-check", "cycle-averaged Lorentz force versus eta");
    add_run_options(cls, cls_opts);
    cls->add_option("-o,--out", cls_opts.out, "CSV path for the table");
    cls->add_option("--etas", cls_etas, "comma-separated eta values");
    cls->add_option("--x-points", x_points, "positions per wavelength");
    cls->add_option("--n-cycles", n_cycles, "laser cycles per average")->check(CLI::Range(10, 1000000));

    std::optional<double> omega;
    double cycles = 1000.0;
    auto* bnd = app.add_subcommand("bounds", "admissible field strengths for a spin flip");
    add_run_options(bnd, bnd_opts);
    bnd->add_option("--omega", omega, "laser frequency (default from the wavelength)");
    bnd->add_option("--cycles", cycles, "laser periods until full spin flip");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*sim) return cmd_simulate(sim_opts);
        if (*cmp) return cmd_compare(cmp_opts);
        if (*sweep) return cmd_sweep(sweep_opts, etas, fit, sweep_options);
        if (*cls) return cmd_classical(cls_opts, cls_etas, x_points, n_cycles);
        if (*bnd) return cmd_bounds(bnd_opts, omega, cycles);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
