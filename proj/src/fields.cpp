#include "kapitza/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kapitza/errors.hpp"

namespace kapitza {

std::string_view to_string(Setup setup) {
    return setup == Setup::Corotating ? "corotating" : "antirotating";
}

Setup parse_setup(std::string_view text) {
    if (text == "corotating") return Setup::Corotating;
    if (text == "antirotating") return Setup::Antirotating;
    throw ParameterError("unknown setup '" + std::string(text) +
                         "' (expected corotating or antirotating)");
}

void LaserConfig::validate() const {
    if (!(e_hat >= 0.0) || !std::isfinite(e_hat))
        throw ParameterError("field amplitude must be finite and non-negative");
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw ParameterError("wavelength must be positive");
    if (!(eta > -pi && eta <= pi))
        throw ParameterError("ellipticity eta must lie in (-pi, pi]");
    if (!(delta_t >= 0.0) || !std::isfinite(total_t) || !(delta_t <= 0.5 * total_t))
        throw ParameterError("ramp duration must satisfy 0 <= delta_t <= total_t / 2");
}

WaveNumbers derived_wave_numbers(const LaserConfig& cfg, const PhysicalConstants& units) {
    const double k = 2.0 * pi / cfg.lambda;
    return {k, units.c * k};
}

double laser_period(const LaserConfig& cfg, const PhysicalConstants& units) {
    return 2.0 * pi / derived_wave_numbers(cfg, units).omega;
}

FieldSample total_fields(const LaserConfig& cfg, double x, double t,
                         const PhysicalConstants& units) {
    const auto [k, omega] = derived_wave_numbers(cfg, units);
    const double e0 = 2.0 * cfg.e_hat;
    const double b0 = e0 / units.c;
    const double a0 = -e0 / omega;
    const double eta = cfg.eta;

    FieldSample f;
    if (cfg.setup == Setup::Corotating) {
        const double ckx = std::cos(k * x);
        const double skx = std::sin(k * x);
        f.e = e0 * ckx * Eigen::Vector3d(0.0, std::cos(omega * t), std::cos(omega * t - eta));
        f.b = b0 * skx * Eigen::Vector3d(0.0, -std::sin(omega * t - eta), std::sin(omega * t));
        f.a = a0 * ckx * Eigen::Vector3d(0.0, std::sin(omega * t), std::sin(omega * t - eta));
    } else {
        const double cwt = std::cos(omega * t);
        const double swt = std::sin(omega * t);
        f.e = e0 * cwt * Eigen::Vector3d(0.0, std::cos(k * x), std::cos(k * x + eta));
        f.b = b0 * swt * Eigen::Vector3d(0.0, -std::sin(k * x + eta), std::sin(k * x));
        f.a = a0 * swt * Eigen::Vector3d(0.0, std::cos(k * x), std::cos(k * x + eta));
    }
    return f;
}

Eigen::Vector3d vector_potential(const LaserConfig& cfg, double x, double t,
                                 const PhysicalConstants& units) {
    const auto [k, omega] = derived_wave_numbers(cfg, units);
    const double a0 = -2.0 * cfg.e_hat / omega;
    if (cfg.setup == Setup::Corotating)
        return a0 * std::cos(k * x) *
               Eigen::Vector3d(0.0, std::sin(omega * t), std::sin(omega * t - cfg.eta));
    return a0 * std::sin(omega * t) *
           Eigen::Vector3d(0.0, std::cos(k * x), std::cos(k * x + cfg.eta));
}

double window(double t, double delta_t, double total_t) {
    if (!(t >= 0.0 && t <= total_t))
        throw std::invalid_argument("window: t = " + std::to_string(t) + " outside [0, " +
                                    std::to_string(total_t) + "]");
    if (delta_t <= 0.0) return 1.0;
    if (t < delta_t) {
        const double s = std::sin(pi * t / (2.0 * delta_t));
        return s * s;
    }
    if (t > total_t - delta_t) {
        const double s = std::sin(pi * (total_t - t) / (2.0 * delta_t));
        return s * s;
    }
    return 1.0;
}

double ramp_fourth_power_area(double u, double delta_t) {
    if (delta_t <= 0.0) return 0.0;
    // sin^4 = 3/8 - cos(2 theta) / 2 + cos(4 theta) / 8
    return 3.0 * u / 8.0 - delta_t / (2.0 * pi) * std::sin(pi * u / delta_t) +
           delta_t / (16.0 * pi) * std::sin(2.0 * pi * u / delta_t);
}

double squared_window_area(double t, double delta_t, double total_t) {
    window(t, delta_t, total_t);  // range check
    if (delta_t <= 0.0) return t;
    const double up = ramp_fourth_power_area(std::min(t, delta_t), delta_t);
    if (t <= delta_t) return up;
    const double plateau_end = total_t - delta_t;
    const double plateau = std::min(t, plateau_end) - delta_t;
    if (t <= plateau_end) return up + plateau;
    // the ramp down mirrors the ramp up
    const double full = ramp_fourth_power_area(delta_t, delta_t);
    return up + plateau + full - ramp_fourth_power_area(total_t - t, delta_t);
}

}  // namespace kapitza
