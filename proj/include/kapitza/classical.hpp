#pragma once

// Nonrelativistic Lorentz-force motion in the standing-wave fields and the
// cycle-averaged ponderomotive force it produces.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <vector>

#include "kapitza/constants.hpp"
#include "kapitza/fields.hpp"

namespace kapitza::classical {

struct ClassicalState {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    double t = 0.0;
};

struct LorentzOptions {
    /// Drop v x B, leaving the electric force only.
    bool magnetic = true;
};

/// Fields are taken as steady (no turn-on window).
Eigen::Vector3d acceleration(const ClassicalState& s, const LaserConfig& cfg,
                             const LorentzOptions& options = {},
                             const PhysicalConstants& units = atomic_units);

/// One classical RK4 step of r'' = (q / m)(E + r' x B).
ClassicalState lorentz_step(const ClassicalState& s, const LaserConfig& cfg, double dt,
                            const LorentzOptions& options = {},
                            const PhysicalConstants& units = atomic_units);

/// False once |v| exceeds 0.1 c, where the nonrelativistic equation stops
/// being a fair description.
bool nonrelativistic(const ClassicalState& s, const PhysicalConstants& units = atomic_units);

struct AveragingOptions {
    int steps_per_cycle = 200;
    LorentzOptions lorentz{};
};

/// m <x''> over n_cycles laser periods for a particle pinned at x: the
/// longitudinal position and velocity are reset after every cycle while the
/// transverse quiver motion runs on freely from rest.
double averaged_longitudinal_force(const LaserConfig& cfg, double x, int n_cycles,
                                   const AveragingOptions& options = {},
                                   const PhysicalConstants& units = atomic_units);

/// Antirotating closed form (2 q^2 E^2 / (m c omega)) cos(eta) sin(2 k x + eta).
double ponderomotive_force(const LaserConfig& cfg, double x,
                           const PhysicalConstants& units = atomic_units);

/// Closed-form amplitude (2 q^2 E^2 / (m c omega)) cos(eta).
double ponderomotive_force_amplitude(const LaserConfig& cfg,
                                     const PhysicalConstants& units = atomic_units);

/// (2 q^2 E^2 / (m omega^2)) cos(eta) cos^2(k x + eta / 2); its negative
/// gradient is ponderomotive_force.
double ponderomotive_potential(const LaserConfig& cfg, double x,
                               const PhysicalConstants& units = atomic_units);

/// Least-squares amplitude A of force(x) ~ A sin(2 k x + eta).
double fit_force_amplitude(const LaserConfig& cfg, const std::vector<double>& x,
                           const std::vector<double>& force,
                           const PhysicalConstants& units = atomic_units);

/// Averaged force on x_points equally spaced positions over one wavelength,
/// reduced to its amplitude by fit_force_amplitude.
double scan_force_amplitude(const LaserConfig& cfg, int x_points, int n_cycles,
                            const AveragingOptions& options = {},
                            const PhysicalConstants& units = atomic_units);

}  // namespace kapitza::classical
