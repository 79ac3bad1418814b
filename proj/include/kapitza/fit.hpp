#pragma once

// Frequency fits of sampled observables. Both models are multimodal in the
// frequencies, so fits start from the predicted values, refine on growing
// prefixes of the series and fall back to a coarse grid scan.

#include <vector>

namespace kapitza {

struct FitResult {
    std::vector<double> params;  ///< (omega_a, omega_b) or (omega_a), omega_a >= omega_b
    double residual = 0.0;       ///< RMS misfit over the finite samples
    bool converged = false;
    bool degenerate = false;  ///< flat series, frequencies carry no information
    int iterations = 0;       ///< function evaluations summed over all stages
};

struct FitOptions {
    /// A series whose peak-to-peak spread is below this is flagged degenerate.
    double flat_tolerance = 1e-6;
    /// Accept the seeded refinement if its RMS residual is below this,
    /// otherwise run the grid fallback and keep the better of the two.
    double accept_residual = 1e-3;
    /// Relative half-width of the fallback grid around each seed.
    double grid_span = 0.5;
    int grid_points = 41;
    int max_evaluations = 4000;
};

/// Fits y = (hbar / 2) cos(omega_a t) cos(omega_b t) with hbar = 1.
/// Non-finite samples are ignored.
FitResult fit_product_cos(const std::vector<double>& t, const std::vector<double>& y,
                          double seed_a, double seed_b, const FitOptions& options = {});

/// Fits y = cos^2(omega_a t).
FitResult fit_cos_squared(const std::vector<double>& t, const std::vector<double>& y,
                          double seed, const FitOptions& options = {});

}  // namespace kapitza
