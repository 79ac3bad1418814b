#pragma once

// Flat "key = value" run configuration. Lines starting with # are comments.
//
//   e_hat_au = 400
//   lambda_au = 3
//   eta_rad = pi/2
//   setup = corotating
//   delta_t_cycles = 5
//   total_time_au = 6.47
//   n_grid = 256
//   steps_per_cycle = 2000
//   sample_stride = 100
//   initial_mode = -1
//   initial_spin = +up
//   solver = dirac
//   protocol = instantaneous

#include <string>
#include <string_view>
#include <vector>

#include "kapitza/dirac.hpp"
#include "kapitza/experiments.hpp"
#include "kapitza/fields.hpp"

namespace kapitza {

struct RunConfig {
    double e_hat = 400.0;
    double lambda = 3.0;
    double eta = pi / 2;
    Setup setup = Setup::Corotating;
    double delta_t_cycles = 5.0;  ///< ramp duration in laser periods
    double total_t = 6.5;  ///< about two fast Rabi periods at the defaults
    dirac::Numerics numerics{};
    dirac::ModeLabel initial{};
    Solver solver = Solver::Dirac;

    /// Laser configuration with the ramp converted to atomic units;
    /// validates it.
    LaserConfig laser() const;
};

/// Recognised keys, in documentation order.
const std::vector<std::string>& config_keys();

/// Numbers may be written with a pi factor: "pi/2", "0.25*pi", "-pi/6", "3pi/4".
double parse_number(std::string_view text);
int parse_integer(std::string_view text);

/// Sets one key. Throws ParameterError for unknown keys or bad values.
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Applies the file's assignments on top of base. Throws IoError if the
/// file cannot be read and ParameterError for malformed lines.
RunConfig load_config(const std::string& path, RunConfig base = {});

}  // namespace kapitza
