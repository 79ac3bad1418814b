#pragma once

// Quasi-1D Dirac equation on a lambda-periodic grid, propagated with a
// Fourier split-operator method and projected onto free momentum-spin
// eigenstates.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "kapitza/constants.hpp"
#include "kapitza/effective.hpp"
#include "kapitza/fields.hpp"
#include "kapitza/timeseries.hpp"

namespace kapitza::dirac {

using Complex = std::complex<double>;

/// Dirac representation: alpha_i = [[0, sigma_i], [sigma_i, 0]], beta = diag(1, 1, -1, -1).
struct DiracBasis {
    static const Eigen::Matrix4cd& alpha_x();
    static const Eigen::Matrix4cd& alpha_y();
    static const Eigen::Matrix4cd& alpha_z();
    static const Eigen::Matrix4cd& beta();
    static const Eigen::Matrix2cd& sigma_x();
};

enum class EnergySign { Positive, Negative };

/// One of +up, +dn, -up, -dn.
struct BispinorLabel {
    EnergySign energy = EnergySign::Positive;
    Spin spin = Spin::Up;

    friend bool operator==(const BispinorLabel&, const BispinorLabel&) = default;
};

inline constexpr BispinorLabel plus_up{EnergySign::Positive, Spin::Up};
inline constexpr BispinorLabel plus_down{EnergySign::Positive, Spin::Down};
inline constexpr BispinorLabel minus_up{EnergySign::Negative, Spin::Up};
inline constexpr BispinorLabel minus_down{EnergySign::Negative, Spin::Down};

std::string to_string(BispinorLabel label);
/// Accepts "+up", "+dn", "-up", "-dn" (also "up"/"dn" as positive energy).
BispinorLabel parse_label(std::string_view text);

struct MomentumEigenstate {
    int n = 0;
    BispinorLabel gamma;
    Eigen::Vector4cd u;
    double energy = 0.0;  ///< sqrt((m c^2)^2 + (n c k hbar)^2), always positive
};

/// Free bispinor of mode n; the negative-energy branch has energy -energy.
MomentumEigenstate make_eigenstate(int n, BispinorLabel gamma, const LaserConfig& cfg,
                                   const PhysicalConstants& units = atomic_units);

/// N_grid x 4 samples of the spinor on x_j = j lambda / N_grid.
struct SpinorField {
    Eigen::Matrix<Complex, Eigen::Dynamic, 4> values;
    double lambda = 1.0;
    double t = 0.0;

    int n_grid() const { return static_cast<int>(values.rows()); }
    double dx() const { return lambda / n_grid(); }
    /// sum |Psi|^2 dx over the cell
    double norm() const { return values.squaredNorm() * dx(); }
};

/// Plane wave exp(i n k x) u_n^gamma / sqrt(lambda). Throws ParameterError
/// for a grid that is not a power of two or a mode that would alias.
SpinorField init_state(int n, BispinorLabel gamma, const LaserConfig& cfg, int n_grid,
                       const PhysicalConstants& units = atomic_units);

/// How the local (potential) part of a split step is exponentiated.
enum class InteractionScheme {
    /// exp(-i (beta m c^2 + h.alpha) dt) with the rest energy removed again
    /// on both sides. Captures the beta-alpha anticommutator that produces
    /// the ponderomotive term; the default.
    MassCorrected,
    /// exp(-i h.alpha dt) alone. Under-resolves the ponderomotive coupling
    /// by (m c^2 dt) / tan(m c^2 dt) unless dt << 1 / (m c^2).
    Bare,
};

std::string_view to_string(InteractionScheme scheme);
InteractionScheme parse_scheme(std::string_view text);

/// Field envelope as a function of absolute time.
using Envelope = std::function<double(double)>;

/// Precomputed kinetic phases and grid tables for one (cfg, N_grid, dt).
class DiracPropagator {
public:
    DiracPropagator(const LaserConfig& cfg, int n_grid, double dt,
                    InteractionScheme scheme = InteractionScheme::MassCorrected,
                    const PhysicalConstants& units = atomic_units);

    /// Advances by n_steps Strang steps with the laser window of cfg as
    /// envelope. Adjacent kinetic half steps are fused into full ones.
    void advance(SpinorField& state, long n_steps) const;
    void advance(SpinorField& state, long n_steps, const Envelope& envelope) const;

    /// <psi_n^gamma | Psi>.
    Complex project(const SpinorField& state, int n, BispinorLabel gamma) const;

    /// Fourier amplitudes sqrt(lambda) / N * FFT(Psi), one row per FFT bin.
    Eigen::Matrix<Complex, Eigen::Dynamic, 4> momentum_amplitudes(const SpinorField& state) const;

    double dt() const { return dt_; }
    int n_grid() const { return n_grid_; }
    const LaserConfig& config() const { return cfg_; }

private:
    // exp(-i H_n tau) = c - i (a beta + b alpha_x) per FFT bin
    struct KineticPhase {
        Eigen::ArrayXd c, a, b;
    };

    KineticPhase kinetic_phase(double tau) const;
    void kinetic(SpinorField& state, const KineticPhase& phase) const;
    void local(SpinorField& state, double t_mid, double envelope, double tau) const;
    int bin(int n) const;

    LaserConfig cfg_;
    PhysicalConstants units_;
    int n_grid_;
    double dt_;
    InteractionScheme scheme_;
    KineticPhase half_;
    KineticPhase full_;
    Eigen::ArrayXd profile_y_, profile_z_;  // spatial factors of A_y, A_z
};

/// One Strang step of length dt with the laser window of cfg: half kinetic
/// step, interaction at the midpoint time, half kinetic step.
SpinorField step(const SpinorField& state, const LaserConfig& cfg, double dt,
                 InteractionScheme scheme = InteractionScheme::MassCorrected,
                 const PhysicalConstants& units = atomic_units);

/// <psi_n^gamma | Psi> via a discrete Fourier transform and bispinor contraction.
Complex project(const SpinorField& state, int n, BispinorLabel gamma, const LaserConfig& cfg,
                const PhysicalConstants& units = atomic_units);

enum class SamplingProtocol {
    /// project while the field is on
    Instantaneous,
    /// at each sample time, branch off a copy, ramp the field down over
    /// delta_t with a sin^2 profile, then project
    RampOff,
};

std::string_view to_string(SamplingProtocol protocol);
SamplingProtocol parse_protocol(std::string_view text);

struct Numerics {
    int n_grid = 256;
    int steps_per_cycle = 2000;
    int sample_stride = 100;
    SamplingProtocol protocol = SamplingProtocol::Instantaneous;
    InteractionScheme scheme = InteractionScheme::MassCorrected;

    void validate() const;
};

struct ModeLabel {
    int n = -1;
    BispinorLabel gamma = plus_up;
};

/// Column name "p_<n>_<label>" used for extra observables, e.g. "p_0_+up".
std::string observable_name(const ModeLabel& mode);

/// Time grid actually used by run: the step is shrunk so that total_t is an
/// integer number of samples.
struct StepPlan {
    double dt;
    long n_steps;
    long n_samples;  ///< excluding t = 0
};

StepPlan plan_steps(const LaserConfig& cfg, const Numerics& numerics,
                    const PhysicalConstants& units = atomic_units);

/// Propagates from the given initial eigenstate over [0, total_t] and
/// samples the standard observables (the +-1 positive-energy projections,
/// total and conditioned spins, norm) every sample_stride steps, plus any
/// extra mode projections. Also records t_eff, the integral of the squared
/// envelope up to the moment of projection.
TimeSeries run(const LaserConfig& cfg, const Numerics& numerics,
               const ModeLabel& initial = {}, const std::vector<ModeLabel>& observables = {},
               const PhysicalConstants& units = atomic_units);

}  // namespace kapitza::dirac
