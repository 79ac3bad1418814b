#include "kapitza/effective.hpp"

#include <cmath>

namespace kapitza {

FieldStrengthWindow field_strength_window(double omega, double n_cycles,
                                          const PhysicalConstants& u) {
    if (!(omega > 0.0)) throw ParameterError("omega must be positive");
    if (!(n_cycles >= 1.0)) throw ParameterError("n_cycles must be >= 1");
    const double lower = std::sqrt(omega * omega * omega * u.hbar * u.m / (2.0 * u.q * u.q * n_cycles));
    const double upper = omega * omega * u.hbar / (std::abs(u.q) * u.c);
    return {lower, upper};
}

}  // namespace kapitza
