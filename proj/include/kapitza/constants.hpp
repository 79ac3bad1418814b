#pragma once

#include <numbers>

namespace kapitza {

/// Physical constants in Hartree atomic units.
///
/// hbar, electron mass and elementary charge are unity; the electron charge
/// carries its sign (q = -1). Only c is a genuine number in this system.
template <typename Scalar>
struct BasicPhysicalConstants {
    Scalar c = Scalar(137.035999084);
    Scalar hbar = Scalar(1);
    Scalar m = Scalar(1);
    Scalar q = Scalar(-1);

    /// Reduced Compton wavelength hbar / (m c).
    constexpr Scalar compton_wavelength() const { return hbar / (m * c); }
    constexpr Scalar rest_energy() const { return m * c * c; }
};

using PhysicalConstants = BasicPhysicalConstants<double>;

inline constexpr PhysicalConstants atomic_units{};

inline constexpr double pi = std::numbers::pi;

}  // namespace kapitza
