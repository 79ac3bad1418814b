#include "kapitza/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "kapitza/errors.hpp"

namespace kapitza::classical {

Eigen::Vector3d acceleration(const ClassicalState& s, const LaserConfig& cfg,
                             const LorentzOptions& options, const PhysicalConstants& units) {
    const FieldSample f = total_fields(cfg, s.r.x(), s.t, units);
    Eigen::Vector3d force = f.e;
    if (options.magnetic) force += s.v.cross(f.b);
    return (units.q / units.m) * force;
}

ClassicalState lorentz_step(const ClassicalState& s, const LaserConfig& cfg, double dt,
                            const LorentzOptions& options, const PhysicalConstants& units) {
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    auto shifted = [&](const ClassicalState& base, const Eigen::Vector3d& dr,
                       const Eigen::Vector3d& dv, double h) {
        return ClassicalState{base.r + dr, base.v + dv, base.t + h};
    };
    const Eigen::Vector3d k1r = s.v;
    const Eigen::Vector3d k1v = acceleration(s, cfg, options, units);
    const auto s2 = shifted(s, 0.5 * dt * k1r, 0.5 * dt * k1v, 0.5 * dt);
    const Eigen::Vector3d k2r = s2.v;
    const Eigen::Vector3d k2v = acceleration(s2, cfg, options, units);
    const auto s3 = shifted(s, 0.5 * dt * k2r, 0.5 * dt * k2v, 0.5 * dt);
    const Eigen::Vector3d k3r = s3.v;
    const Eigen::Vector3d k3v = acceleration(s3, cfg, options, units);
    const auto s4 = shifted(s, dt * k3r, dt * k3v, dt);
    const Eigen::Vector3d k4r = s4.v;
    const Eigen::Vector3d k4v = acceleration(s4, cfg, options, units);

    ClassicalState next;
    next.r = s.r + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    next.v = s.v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    next.t = s.t + dt;
    return next;
}

bool nonrelativistic(const ClassicalState& s, const PhysicalConstants& units) {
    return s.v.norm() <= 0.1 * units.c;
}

double averaged_longitudinal_force(const LaserConfig& cfg, double x, int n_cycles,
                                   const AveragingOptions& options,
                                   const PhysicalConstants& units) {
    cfg.validate();
    if (n_cycles < 1) throw ParameterError("n_cycles must be >= 1");
    if (options.steps_per_cycle < 4) throw ParameterError("steps_per_cycle must be >= 4");
    const double period = laser_period(cfg, units);
    const double dt = period / options.steps_per_cycle;

    ClassicalState s;
    s.r.x() = x;
    double sum = 0.0;
    for (int cycle = 0; cycle < n_cycles; ++cycle) {
        // uniform samples of a periodic signal average it spectrally accurately
        for (int i = 0; i < options.steps_per_cycle; ++i) {
            sum += acceleration(s, cfg, options.lorentz, units).x();
            s = lorentz_step(s, cfg, dt, options.lorentz, units);
        }
        s.r.x() = x;
        s.v.x() = 0.0;
        s.t = (cycle + 1) * period;
    }
    return units.m * sum / (static_cast<double>(n_cycles) * options.steps_per_cycle);
}

double ponderomotive_force_amplitude(const LaserConfig& cfg, const PhysicalConstants& units) {
    const double omega = derived_wave_numbers(cfg, units).omega;
    return 2.0 * units.q * units.q * cfg.e_hat * cfg.e_hat / (units.m * units.c * omega) *
           std::cos(cfg.eta);
}

double ponderomotive_force(const LaserConfig& cfg, double x, const PhysicalConstants& units) {
    const double k = derived_wave_numbers(cfg, units).k;
    return ponderomotive_force_amplitude(cfg, units) * std::sin(2.0 * k * x + cfg.eta);
}

double ponderomotive_potential(const LaserConfig& cfg, double x, const PhysicalConstants& units) {
    const auto [k, omega] = derived_wave_numbers(cfg, units);
    const double amp = 2.0 * units.q * units.q * cfg.e_hat * cfg.e_hat / (units.m * omega * omega);
    const double c = std::cos(k * x + 0.5 * cfg.eta);
    return amp * std::cos(cfg.eta) * c * c;
}

double fit_force_amplitude(const LaserConfig& cfg, const std::vector<double>& x,
                           const std::vector<double>& force, const PhysicalConstants& units) {
    if (x.size() != force.size() || x.empty())
        throw std::invalid_argument("fit_force_amplitude: need matching, non-empty samples");
    const double k = derived_wave_numbers(cfg, units).k;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = std::sin(2.0 * k * x[i] + cfg.eta);
        num += force[i] * s;
        den += s * s;
    }
    if (den == 0.0) throw std::invalid_argument("fit_force_amplitude: degenerate sample positions");
    return num / den;
}

double scan_force_amplitude(const LaserConfig& cfg, int x_points, int n_cycles,
                            const AveragingOptions& options, const PhysicalConstants& units) {
    if (x_points < 2) throw ParameterError("need at least two positions");
    std::vector<double> xs, force;
    for (int i = 0; i < x_points; ++i) {
        xs.push_back(cfg.lambda * i / x_points);
        force.push_back(averaged_longitudinal_force(cfg, xs.back(), n_cycles, options, units));
    }
    return fit_force_amplitude(cfg, xs, force, units);
}

}  // namespace kapitza::classical
