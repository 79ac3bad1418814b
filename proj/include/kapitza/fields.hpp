#pragma once

#include <Eigen/Core>
#include <string_view>

#include "kapitza/constants.hpp"

namespace kapitza {

enum class Setup { Corotating, Antirotating };

std::string_view to_string(Setup setup);
Setup parse_setup(std::string_view text);

/// Two counterpropagating elliptically polarized plane waves of equal
/// amplitude and wavelength, travelling along x. All quantities in atomic
/// units; eta is the ellipticity phase in (-pi, pi].
struct LaserConfig {
    double e_hat = 0.0;
    double lambda = 1.0;
    double eta = 0.0;
    Setup setup = Setup::Corotating;
    double delta_t = 0.0;
    double total_t = 0.0;

    /// Throws ParameterError when an invariant is violated.
    void validate() const;
};

struct WaveNumbers {
    double k;
    double omega;
};

/// k = 2 pi / lambda and omega = c k.
WaveNumbers derived_wave_numbers(const LaserConfig& cfg,
                                 const PhysicalConstants& units = atomic_units);

/// Laser period 2 pi / omega.
double laser_period(const LaserConfig& cfg, const PhysicalConstants& units = atomic_units);

struct FieldSample {
    Eigen::Vector3d e;
    Eigen::Vector3d b;
    Eigen::Vector3d a;
};

/// Total standing-wave fields of the selected setup at (x, t), without the
/// turn-on/turn-off window. E = -dA/dt and B = curl A hold analytically.
FieldSample total_fields(const LaserConfig& cfg, double x, double t,
                         const PhysicalConstants& units = atomic_units);

/// Vector potential only; the propagators call this once per grid point and
/// time step.
Eigen::Vector3d vector_potential(const LaserConfig& cfg, double x, double t,
                                 const PhysicalConstants& units = atomic_units);

/// sin^2 ramp up on [0, delta_t], plateau, sin^2 ramp down on
/// [total_t - delta_t, total_t]. Throws std::invalid_argument for t outside
/// [0, total_t].
double window(double t, double delta_t, double total_t);

/// Integral of w(s)^2 over [0, t]. The effective Hamiltonians scale with the
/// squared field amplitude, so this is the interaction time they see.
double squared_window_area(double t, double delta_t, double total_t);

/// Integral of sin^4(pi s / (2 delta_t)) over [0, u], u in [0, delta_t].
double ramp_fourth_power_area(double u, double delta_t);

}  // namespace kapitza
