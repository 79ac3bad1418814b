#include "kapitza/dirac.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kapitza/errors.hpp"

namespace kapitza::dirac {

namespace {

using SpinorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, 4>;

constexpr Complex I{0.0, 1.0};

Eigen::Matrix4cd block(const Eigen::Matrix2cd& s) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m.topRightCorner<2, 2>() = s;
    m.bottomLeftCorner<2, 2>() = s;
    return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_grid(int n_grid) {
    if (n_grid < 4 || !is_power_of_two(n_grid))
        throw ParameterError("n_grid must be a power of two >= 4, got " + std::to_string(n_grid));
}

void check_mode(int n, int n_grid) {
    if (2 * std::abs(n) >= n_grid)
        throw ParameterError("mode " + std::to_string(n) + " aliases on a grid of " +
                             std::to_string(n_grid) + " points");
}

// Field is off outside [0, total_t]; an unset total_t means a steady field.
Envelope laser_envelope(const LaserConfig& cfg) {
    if (cfg.total_t <= 0.0) return [](double) { return 1.0; };
    return [delta = cfg.delta_t, total = cfg.total_t](double t) {
        if (t < 0.0 || t > total) return 0.0;
        return window(t, delta, total);
    };
}

// FFT over each of the four spinor columns.
void transform(Eigen::FFT<double>& fft, SpinorMatrix& dst, const SpinorMatrix& src, bool forward) {
    const auto n = src.rows();
    for (int col = 0; col < 4; ++col) {
        if (forward)
            fft.fwd(dst.col(col).data(), src.col(col).data(), n);
        else
            fft.inv(dst.col(col).data(), src.col(col).data(), n);
    }
}

}  // namespace

const Eigen::Matrix4cd& DiracBasis::alpha_x() {
    static const Eigen::Matrix4cd m = block(sigma_x());
    return m;
}

const Eigen::Matrix4cd& DiracBasis::alpha_y() {
    static const Eigen::Matrix4cd m = [] {
        Eigen::Matrix2cd s;
        s << 0.0, -I, I, 0.0;
        return block(s);
    }();
    return m;
}

const Eigen::Matrix4cd& DiracBasis::alpha_z() {
    static const Eigen::Matrix4cd m = [] {
        Eigen::Matrix2cd s;
        s << 1.0, 0.0, 0.0, -1.0;
        return block(s);
    }();
    return m;
}

const Eigen::Matrix4cd& DiracBasis::beta() {
    static const Eigen::Matrix4cd m =
        Eigen::Vector4cd(1.0, 1.0, -1.0, -1.0).asDiagonal().toDenseMatrix();
    return m;
}

const Eigen::Matrix2cd& DiracBasis::sigma_x() {
    static const Eigen::Matrix2cd m = [] {
        Eigen::Matrix2cd s;
        s << 0.0, 1.0, 1.0, 0.0;
        return s;
    }();
    return m;
}

std::string to_string(BispinorLabel label) {
    std::string s = label.energy == EnergySign::Positive ? "+" : "-";
    return s + (label.spin == Spin::Up ? "up" : "dn");
}

BispinorLabel parse_label(std::string_view text) {
    EnergySign sign = EnergySign::Positive;
    if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
        sign = text.front() == '+' ? EnergySign::Positive : EnergySign::Negative;
        text.remove_prefix(1);
    }
    if (text == "up") return {sign, Spin::Up};
    if (text == "dn" || text == "down") return {sign, Spin::Down};
    throw ParameterError("unknown spin label '" + std::string(text) +
                         "' (expected +up, +dn, -up or -dn)");
}

MomentumEigenstate make_eigenstate(int n, BispinorLabel gamma, const LaserConfig& cfg,
                                   const PhysicalConstants& units) {
    const double k = derived_wave_numbers(cfg, units).k;
    const double rest = units.rest_energy();
    const double p_c = n * units.c * k * units.hbar;
    const double energy = std::hypot(rest, p_c);
    const double scale = std::sqrt((energy + rest) / (2.0 * energy));
    const double ratio = p_c / (energy + rest);

    const Eigen::Vector2cd chi =
        gamma.spin == Spin::Up ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
    const Eigen::Vector2cd flipped = ratio * (DiracBasis::sigma_x() * chi);

    MomentumEigenstate s;
    s.n = n;
    s.gamma = gamma;
    s.energy = energy;
    if (gamma.energy == EnergySign::Positive)
        s.u << scale * chi, scale * flipped;
    else
        s.u << -scale * flipped, scale * chi;
    return s;
}

SpinorField init_state(int n, BispinorLabel gamma, const LaserConfig& cfg, int n_grid,
                       const PhysicalConstants& units) {
    check_grid(n_grid);
    check_mode(n, n_grid);
    const auto eig = make_eigenstate(n, gamma, cfg, units);
    const double k = derived_wave_numbers(cfg, units).k;
    const double amp = 1.0 / std::sqrt(cfg.lambda);

    SpinorField f;
    f.lambda = cfg.lambda;
    f.values.resize(n_grid, 4);
    for (int j = 0; j < n_grid; ++j) {
        const double x = j * cfg.lambda / n_grid;
        f.values.row(j) = (amp * std::polar(1.0, n * k * x)) * eig.u.transpose();
    }
    return f;
}

std::string_view to_string(InteractionScheme scheme) {
    return scheme == InteractionScheme::MassCorrected ? "mass_corrected" : "bare";
}

InteractionScheme parse_scheme(std::string_view text) {
    if (text == "mass_corrected") return InteractionScheme::MassCorrected;
    if (text == "bare") return InteractionScheme::Bare;
    throw ParameterError("unknown interaction scheme '" + std::string(text) +
                         "' (expected mass_corrected or bare)");
}

DiracPropagator::DiracPropagator(const LaserConfig& cfg, int n_grid, double dt,
                                 InteractionScheme scheme, const PhysicalConstants& units)
    : cfg_(cfg), units_(units), n_grid_(n_grid), dt_(dt), scheme_(scheme) {
    cfg.validate();
    check_grid(n_grid);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");

    half_ = kinetic_phase(0.5 * dt);
    full_ = kinetic_phase(dt);

    const double k = derived_wave_numbers(cfg, units).k;
    profile_y_.resize(n_grid);
    profile_z_.resize(n_grid);
    for (int j = 0; j < n_grid; ++j) {
        const double x = j * cfg.lambda / n_grid;
        profile_y_[j] = std::cos(k * x);
        profile_z_[j] =
            cfg.setup == Setup::Corotating ? std::cos(k * x) : std::cos(k * x + cfg.eta);
    }
}

DiracPropagator::KineticPhase DiracPropagator::kinetic_phase(double tau) const {
    const double k = derived_wave_numbers(cfg_, units_).k;
    const double rest = units_.rest_energy();
    KineticPhase ph{Eigen::ArrayXd(n_grid_), Eigen::ArrayXd(n_grid_), Eigen::ArrayXd(n_grid_)};
    for (int j = 0; j < n_grid_; ++j) {
        const int n = j < n_grid_ / 2 ? j : j - n_grid_;
        const double p_c = n * units_.c * k * units_.hbar;
        const double energy = std::hypot(rest, p_c);
        const double phase = energy * tau / units_.hbar;
        ph.c[j] = std::cos(phase);
        ph.a[j] = std::sin(phase) * rest / energy;
        ph.b[j] = std::sin(phase) * p_c / energy;
    }
    return ph;
}

int DiracPropagator::bin(int n) const {
    check_mode(n, n_grid_);
    return n >= 0 ? n : n + n_grid_;
}

void DiracPropagator::kinetic(SpinorField& state, const KineticPhase& phase) const {
    const auto& c = phase.c;
    const auto& a = phase.a;
    const auto& b = phase.b;

    thread_local Eigen::FFT<double> fft;
    thread_local SpinorMatrix spectrum;
    spectrum.resize(n_grid_, 4);
    transform(fft, spectrum, state.values, true);
    for (int j = 0; j < n_grid_; ++j) {
        // exp(-i H tau) = c - i (a beta + b alpha_x); alpha_x pairs 0<->3, 1<->2
        const Complex up(c[j], -a[j]);
        const Complex down(c[j], a[j]);
        const Complex mix(0.0, -b[j]);
        const Complex p0 = spectrum(j, 0), p1 = spectrum(j, 1);
        const Complex p2 = spectrum(j, 2), p3 = spectrum(j, 3);
        spectrum(j, 0) = up * p0 + mix * p3;
        spectrum(j, 1) = up * p1 + mix * p2;
        spectrum(j, 2) = down * p2 + mix * p1;
        spectrum(j, 3) = down * p3 + mix * p0;
    }
    transform(fft, state.values, spectrum, false);
}

void DiracPropagator::local(SpinorField& state, double t_mid, double envelope,
                            double tau) const {
    if (envelope == 0.0 || cfg_.e_hat == 0.0) return;
    const double omega = derived_wave_numbers(cfg_, units_).omega;
    const double a0 = -2.0 * cfg_.e_hat / omega;
    const double ty = std::sin(omega * t_mid);
    const double tz = cfg_.setup == Setup::Corotating ? std::sin(omega * t_mid - cfg_.eta) : ty;
    // h = -c q w A
    const double h0 = -units_.c * units_.q * envelope * a0;
    tau /= units_.hbar;
    const double m0 = scheme_ == InteractionScheme::MassCorrected ? units_.rest_energy() : 0.0;
    // removes the rest-energy rotation again: exp(+i beta m c^2 dt / 2) on each side
    const Complex d_up = std::polar(1.0, 0.5 * m0 * tau);
    const Complex d_dn = std::conj(d_up);

    auto& v = state.values;
    for (int j = 0; j < n_grid_; ++j) {
        const double hy = h0 * profile_y_[j] * ty;
        const double hz = h0 * profile_z_[j] * tz;
        const double lam = std::sqrt(m0 * m0 + hy * hy + hz * hz);
        if (lam == 0.0) continue;
        const double cs = std::cos(lam * tau);
        const double sn = std::sin(lam * tau) / lam;

        const Complex p0 = d_up * v(j, 0), p1 = d_up * v(j, 1);
        const Complex p2 = d_dn * v(j, 2), p3 = d_dn * v(j, 3);
        // G = beta m0 + hy alpha_y + hz alpha_z
        const Complex g0 = m0 * p0 + hz * p2 - I * hy * p3;
        const Complex g1 = m0 * p1 + I * hy * p2 - hz * p3;
        const Complex g2 = -m0 * p2 + hz * p0 - I * hy * p1;
        const Complex g3 = -m0 * p3 + I * hy * p0 - hz * p1;
        v(j, 0) = d_up * (cs * p0 - I * sn * g0);
        v(j, 1) = d_up * (cs * p1 - I * sn * g1);
        v(j, 2) = d_dn * (cs * p2 - I * sn * g2);
        v(j, 3) = d_dn * (cs * p3 - I * sn * g3);
    }
}

void DiracPropagator::advance(SpinorField& state, long n_steps) const {
    advance(state, n_steps, laser_envelope(cfg_));
}

void DiracPropagator::advance(SpinorField& state, long n_steps, const Envelope& envelope) const {
    if (state.n_grid() != n_grid_) throw std::invalid_argument("state grid does not match propagator");
    if (n_steps <= 0) return;
    const double t0 = state.t;
    kinetic(state, half_);
    for (long s = 0; s < n_steps; ++s) {
        const double t_mid = t0 + (static_cast<double>(s) + 0.5) * dt_;
        local(state, t_mid, envelope(t_mid), dt_);
        kinetic(state, s + 1 < n_steps ? full_ : half_);
    }
    state.t = t0 + static_cast<double>(n_steps) * dt_;
}

Eigen::Matrix<Complex, Eigen::Dynamic, 4> DiracPropagator::momentum_amplitudes(
    const SpinorField& state) const {
    thread_local Eigen::FFT<double> fft;
    SpinorMatrix spectrum(state.n_grid(), 4);
    transform(fft, spectrum, state.values, true);
    spectrum *= std::sqrt(state.lambda) / state.n_grid();
    return spectrum;
}

Complex DiracPropagator::project(const SpinorField& state, int n, BispinorLabel gamma) const {
    const int j = bin(n);
    const auto amps = momentum_amplitudes(state);
    const auto eig = make_eigenstate(n, gamma, cfg_, units_);
    return eig.u.dot(amps.row(j).transpose());
}

SpinorField step(const SpinorField& state, const LaserConfig& cfg, double dt,
                 InteractionScheme scheme, const PhysicalConstants& units) {
    DiracPropagator prop(cfg, state.n_grid(), dt, scheme, units);
    SpinorField next = state;
    prop.advance(next, 1);
    return next;
}

Complex project(const SpinorField& state, int n, BispinorLabel gamma, const LaserConfig& cfg,
                const PhysicalConstants& units) {
    check_grid(state.n_grid());
    check_mode(n, state.n_grid());
    thread_local Eigen::FFT<double> fft;
    SpinorMatrix spectrum(state.n_grid(), 4);
    transform(fft, spectrum, state.values, true);
    const int j = n >= 0 ? n : n + state.n_grid();
    const auto eig = make_eigenstate(n, gamma, cfg, units);
    return eig.u.dot(spectrum.row(j).transpose()) * (std::sqrt(state.lambda) / state.n_grid());
}

std::string_view to_string(SamplingProtocol protocol) {
    return protocol == SamplingProtocol::Instantaneous ? "instantaneous" : "ramp_off";
}

SamplingProtocol parse_protocol(std::string_view text) {
    if (text == "instantaneous") return SamplingProtocol::Instantaneous;
    if (text == "ramp_off") return SamplingProtocol::RampOff;
    throw ParameterError("unknown protocol '" + std::string(text) +
                         "' (expected instantaneous or ramp_off)");
}

void Numerics::validate() const {
    check_grid(n_grid);
    if (steps_per_cycle < 1) throw ParameterError("steps_per_cycle must be >= 1");
    if (sample_stride < 1) throw ParameterError("sample_stride must be >= 1");
}

std::string observable_name(const ModeLabel& mode) {
    return "p_" + std::to_string(mode.n) + "_" + to_string(mode.gamma);
}

StepPlan plan_steps(const LaserConfig& cfg, const Numerics& numerics,
                    const PhysicalConstants& units) {
    cfg.validate();
    numerics.validate();
    if (!(cfg.total_t > 0.0)) throw ParameterError("total_t must be positive for a run");
    const double period = 2.0 * pi / derived_wave_numbers(cfg, units).omega;
    const double nominal = period / numerics.steps_per_cycle;
    const long samples = std::max<long>(
        1, static_cast<long>(std::ceil(cfg.total_t / (nominal * numerics.sample_stride) - 1e-9)));
    const long steps = samples * numerics.sample_stride;
    return {cfg.total_t / static_cast<double>(steps), steps, samples};
}

TimeSeries run(const LaserConfig& cfg, const Numerics& numerics, const ModeLabel& initial,
               const std::vector<ModeLabel>& observables, const PhysicalConstants& units) {
    const StepPlan plan = plan_steps(cfg, numerics, units);
    check_mode(initial.n, numerics.n_grid);
    for (const auto& o : observables) check_mode(o.n, numerics.n_grid);

    const DiracPropagator prop(cfg, numerics.n_grid, plan.dt, numerics.scheme, units);
    SpinorField state = init_state(initial.n, initial.gamma, cfg, numerics.n_grid, units);

    // bispinors of the standard observables, in column order
    const ModeLabel standard[4] = {{-1, plus_up}, {-1, plus_down}, {1, plus_up}, {1, plus_down}};
    std::vector<ModeLabel> modes(std::begin(standard), std::end(standard));
    modes.insert(modes.end(), observables.begin(), observables.end());
    std::vector<Eigen::Vector4cd> bispinors;
    for (const auto& m : modes) bispinors.push_back(make_eigenstate(m.n, m.gamma, cfg, units).u);

    TimeSeries ts;
    const char* names[] = {"p_m1_up", "p_m1_dn", "p_p1_up", "p_p1_dn", "s_total", "s_m1", "s_p1", "norm"};
    for (const char* name : names) ts.add_column(name);
    for (const auto& o : observables) ts.add_column(observable_name(o));
    auto& t_eff = ts.add_column("t_eff");

    const bool ramp_off = numerics.protocol == SamplingProtocol::RampOff && cfg.delta_t > 0.0;
    const long ramp_steps = ramp_off ? std::max<long>(1, std::lround(cfg.delta_t / plan.dt)) : 0;
    const double ramp = static_cast<double>(ramp_steps) * plan.dt;
    const Envelope envelope = laser_envelope(cfg);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    auto sample = [&](const SpinorField& live) {
        SpinorField probe = live;
        double effective = squared_window_area(live.t, cfg.delta_t, cfg.total_t);
        if (ramp_off) {
            const double w0 = envelope(live.t);
            const double t0 = live.t;
            if (w0 > 0.0) {
                prop.advance(probe, ramp_steps, [=](double t) {
                    const double c = std::cos(0.5 * pi * (t - t0) / ramp);
                    return w0 * c * c;
                });
                effective += w0 * w0 * 3.0 * ramp / 8.0;
            }
        }
        const auto amps = prop.momentum_amplitudes(probe);
        std::vector<double> p(modes.size());
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const int j = modes[i].n >= 0 ? modes[i].n : modes[i].n + numerics.n_grid;
            p[i] = std::norm(bispinors[i].dot(amps.row(j).transpose()));
        }
        const double occ_m1 = p[0] + p[1];
        const double occ_p1 = p[2] + p[3];
        ts.times.push_back(live.t);
        auto col = ts.columns.begin();
        for (int i = 0; i < 4; ++i) (col++)->second.push_back(p[i]);
        (col++)->second.push_back(0.5 * (p[0] - p[1] + p[2] - p[3]));
        (col++)->second.push_back(occ_m1 < occupation_threshold ? nan : 0.5 * (p[0] - p[1]) / occ_m1);
        (col++)->second.push_back(occ_p1 < occupation_threshold ? nan : 0.5 * (p[2] - p[3]) / occ_p1);
        (col++)->second.push_back(probe.norm());
        for (std::size_t i = 4; i < modes.size(); ++i) (col++)->second.push_back(p[i]);
        t_eff.push_back(effective);
    };

    sample(state);
    for (long s = 0; s < plan.n_samples; ++s) {
        prop.advance(state, numerics.sample_stride);
        // pin the clock to the sample grid so rounding does not accumulate
        state.t = cfg.total_t * static_cast<double>(s + 1) / static_cast<double>(plan.n_samples);
        sample(state);
    }

    auto& md = ts.metadata;
    md["solver"] = "dirac";
    md["setup"] = std::string(to_string(cfg.setup));
    md["e_hat_au"] = cfg.e_hat;
    md["lambda_au"] = cfg.lambda;
    md["eta_rad"] = cfg.eta;
    md["delta_t_au"] = cfg.delta_t;
    md["total_time_au"] = cfg.total_t;
    md["n_grid"] = numerics.n_grid;
    md["steps_per_cycle"] = numerics.steps_per_cycle;
    md["sample_stride"] = numerics.sample_stride;
    md["protocol"] = std::string(to_string(numerics.protocol));
    md["scheme"] = std::string(to_string(numerics.scheme));
    md["dt_au"] = plan.dt;
    md["n_steps"] = plan.n_steps;
    md["initial_mode"] = initial.n;
    md["initial_spin"] = to_string(initial.gamma);
    return ts;
}

}  // namespace kapitza::dirac
