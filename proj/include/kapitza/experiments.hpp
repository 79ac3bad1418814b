#pragma once

// Experiment drivers shared by the CLI and the acceptance suite: single
// runs with any solver, Dirac-versus-effective comparisons and
// ellipticity sweeps with frequency fits.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kapitza/dirac.hpp"
#include "kapitza/effective.hpp"
#include "kapitza/fit.hpp"
#include "kapitza/timeseries.hpp"

namespace kapitza {

enum class Solver {
    Dirac,
    /// closed-form solutions of the truncated effective systems
    Effective,
    /// exact propagation of the truncated effective systems
    Matrix,
};

std::string_view to_string(Solver solver);
Solver parse_solver(std::string_view text);

/// Interaction time seen by the effective Hamiltonians for a projection at
/// t: the integral of w^2, plus the sin^2 turn-off when sampling ramps off.
double effective_time(const LaserConfig& cfg, double t, dirac::SamplingProtocol protocol);

/// Sample times of a run: multiples of sample_stride steps up to total_t.
std::vector<double> sample_times(const LaserConfig& cfg, const dirac::Numerics& numerics);

/// Mode window and coefficient matrix of the truncated effective system
/// containing the initial mode: {-3..3} odd or {-2, 0, 2} even for the
/// corotating setup, {-1, 1} or {-2, 0, 2} for the antirotating one.
ModeWindow effective_window(Setup setup, int initial_mode);

/// Runs one solver and returns the standard observables on the sample grid
/// of numerics. Effective and matrix solvers evaluate at effective_time and
/// record it as t_eff.
TimeSeries simulate(const LaserConfig& cfg, const dirac::Numerics& numerics, Solver solver,
                    const dirac::ModeLabel& initial = {});

struct Deviation {
    std::string observable;
    std::string reference;  ///< "effective" or "matrix"
    double max_abs = 0.0;
    double rms = 0.0;
    std::size_t samples = 0;  ///< finite sample pairs compared
};

struct ComparisonReport {
    TimeSeries dirac;
    TimeSeries effective;
    TimeSeries matrix;
    std::vector<Deviation> deviations;

    const Deviation& find(std::string_view observable, std::string_view reference) const;
    /// Dirac columns followed by <name>_effective and <name>_matrix columns.
    TimeSeries joint() const;
};

/// Max and RMS difference of two columns over samples where both are finite.
Deviation column_deviation(const TimeSeries& a, const TimeSeries& b, const std::string& column,
                           const std::string& reference);

/// Dirac run plus both effective references on the same sample grid.
ComparisonReport compare(const LaserConfig& cfg, const dirac::Numerics& numerics,
                         const dirac::ModeLabel& initial = {});

enum class FitProtocol {
    /// fit s_total to (hbar / 2) cos(omega_a t) cos(omega_b t)
    CorotatingSpin,
    /// fit p_{-1}^up to cos^2(omega_a t); the Rabi frequency is 2 omega_a
    AntirotatingRabi,
};

std::string_view to_string(FitProtocol protocol);
FitProtocol parse_fit_protocol(std::string_view text);
FitProtocol default_fit_protocol(Setup setup);

struct SweepOptions {
    /// Per-point interaction time; 0 selects `periods` slow beat periods
    /// (corotating) or Rabi periods at eta = 0 (antirotating).
    double total_t = 0.0;
    /// Length of the automatic interaction time; 0 means 2 beat periods
    /// (corotating) or 5 Rabi periods (antirotating).
    double periods = 0.0;
    /// Dirac solver only: fit at steps_per_cycle and at twice that, and
    /// Richardson-extrapolate the fitted frequencies to dt -> 0. The spin
    /// frequencies converge as dt^2 with a large coefficient because the
    /// spin coupling is carried by virtual transitions oscillating at 2 m c^2.
    bool extrapolate_dt = false;
    /// Spacing of samples; 0 selects a spacing resolving the fitted signal.
    double sample_interval = 0.0;
    /// Worker threads; 0 reads KAPITZA_WORKERS or uses the hardware count.
    unsigned workers = 0;
    FitOptions fit{};
};

struct SweepPoint {
    double eta = 0.0;
    double total_t = 0.0;
    FitResult fit;
    /// (omega_a, omega_b) for the spin protocol, (Rabi frequency) for the
    /// Rabi protocol, directly comparable with predicted
    std::vector<double> fitted;
    std::vector<double> predicted;
    /// fine-step fit before the dt extrapolation; empty without it
    std::vector<double> fitted_raw;
    std::string error;  ///< non-empty if the point failed

    bool ok() const { return error.empty(); }
};

/// Default eta grid 0, pi/12, ..., pi/2.
std::vector<double> default_eta_grid();

/// Runs the solver per eta on a bounded worker pool. Failures are recorded
/// per point; results come back in the order of etas.
std::vector<SweepPoint> sweep_eta(const LaserConfig& base, const std::vector<double>& etas,
                                  Solver solver, FitProtocol protocol,
                                  const dirac::Numerics& numerics, const SweepOptions& options = {});

/// Fit of one already computed series with the given protocol.
SweepPoint fit_series(const TimeSeries& series, const LaserConfig& cfg, FitProtocol protocol,
                      const FitOptions& options = {});

/// Worker count from KAPITZA_WORKERS, else the hardware concurrency (>= 1).
unsigned default_workers();

}  // namespace kapitza
