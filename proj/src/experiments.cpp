#include "kapitza/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "kapitza/errors.hpp"

namespace kapitza {

namespace {

const char* const compared_columns[] = {"p_m1_up", "p_m1_dn", "p_p1_up", "p_p1_dn",
                                        "s_total", "s_m1",    "s_p1"};

struct Observables {
    double p[4];  // p_m1_up, p_m1_dn, p_p1_up, p_p1_dn
    double s_total, s_m1, s_p1, norm;
    double own_up = 0.0, own_down = 0.0;  // initial mode, for even starts
};

double conditioned(double up, double down) {
    const double occ = up + down;
    return occ < occupation_threshold ? std::numeric_limits<double>::quiet_NaN()
                                      : 0.5 * (up - down) / occ;
}

void fill_spins(Observables& o) {
    o.s_total = 0.5 * (o.p[0] - o.p[1] + o.p[2] - o.p[3]);
    o.s_m1 = conditioned(o.p[0], o.p[1]);
    o.s_p1 = conditioned(o.p[2], o.p[3]);
}

Observables from_amplitudes(const ModeAmplitudes& a, int initial_mode) {
    Observables o{};
    o.p[0] = a.probability(-1, Spin::Up);
    o.p[1] = a.probability(-1, Spin::Down);
    o.p[2] = a.probability(1, Spin::Up);
    o.p[3] = a.probability(1, Spin::Down);
    fill_spins(o);
    o.norm = a.norm_squared();
    o.own_up = a.probability(initial_mode, Spin::Up);
    o.own_down = a.probability(initial_mode, Spin::Down);
    return o;
}

bool odd_start(int n) { return n % 2 != 0; }

void check_effective_initial(const dirac::ModeLabel& initial) {
    if (initial.gamma.energy != dirac::EnergySign::Positive)
        throw ParameterError("effective models describe positive-energy states only");
}

// Observables of an effective solver at the interaction times t_eff.
TimeSeries effective_series(const LaserConfig& cfg, const std::vector<double>& times,
                            const std::vector<double>& t_eff, Solver solver,
                            const dirac::ModeLabel& initial) {
    check_effective_initial(initial);
    const FrequencySet f = frequencies(cfg);
    const ModeWindow window = effective_window(cfg.setup, initial.n);
    const Spin spin = initial.gamma.spin;
    const bool even_start = !odd_start(initial.n);

    if (solver == Solver::Effective) {
        const bool supported = spin == Spin::Up &&
                               ((initial.n == -1) || (cfg.setup == Setup::Corotating && initial.n == 0));
        if (!supported)
            throw ParameterError("no closed form for this initial state; use solver = matrix");
    }

    std::optional<ModePropagator<double>> exact;
    if (solver == Solver::Matrix) exact.emplace(coupled_mode_matrix(f, cfg.setup, window));
    const auto start = ModeAmplitudes::basis_state(window, initial.n, spin);

    TimeSeries ts;
    ts.times = times;
    for (const char* name : {"p_m1_up", "p_m1_dn", "p_p1_up", "p_p1_dn", "s_total", "s_m1", "s_p1", "norm"})
        ts.add_column(name);
    const dirac::ModeLabel own_up{initial.n, dirac::plus_up}, own_down{initial.n, dirac::plus_down};
    if (even_start) {
        ts.add_column(dirac::observable_name(own_up));
        ts.add_column(dirac::observable_name(own_down));
    }
    ts.add_column("t_eff") = t_eff;

    for (std::size_t i = 0; i < times.size(); ++i) {
        const double te = t_eff[i];
        Observables o{};
        if (solver == Solver::Matrix) {
            o = from_amplitudes(exact->evolve(start, te), initial.n);
        } else if (cfg.setup == Setup::Corotating && initial.n == -1) {
            const auto p = analytic_probabilities_corotating(f, te);
            const auto s = analytic_spin_corotating(f, te);
            o.p[0] = p.m1_up;
            o.p[1] = p.m1_down;
            o.p[2] = p.p1_up;
            o.p[3] = p.p1_down;
            o.s_total = s.total;
            o.s_m1 = s.m1;
            o.s_p1 = s.p1;
            o.norm = p.sum();
        } else if (initial.n == -1) {
            const auto [stay, moved] = analytic_probabilities_antirotating(f, te);
            o.p[0] = stay;
            o.p[2] = moved;
            fill_spins(o);
            o.norm = stay + moved;
        } else {
            const auto [up, down] = analytic_spin_nonresonant(f, te);
            fill_spins(o);
            o.own_up = up;
            o.own_down = down;
            o.norm = up + down;
        }
        auto col = ts.columns.begin();
        for (double p : o.p) (col++)->second.push_back(p);
        for (double v : {o.s_total, o.s_m1, o.s_p1, o.norm}) (col++)->second.push_back(v);
        if (even_start) {
            (col++)->second.push_back(o.own_up);
            (col++)->second.push_back(o.own_down);
        }
    }

    auto& md = ts.metadata;
    md["solver"] = std::string(to_string(solver));
    md["setup"] = std::string(to_string(cfg.setup));
    md["e_hat_au"] = cfg.e_hat;
    md["lambda_au"] = cfg.lambda;
    md["eta_rad"] = cfg.eta;
    md["delta_t_au"] = cfg.delta_t;
    md["total_time_au"] = cfg.total_t;
    md["initial_mode"] = initial.n;
    md["initial_spin"] = dirac::to_string(initial.gamma);
    md["omega1"] = f.omega1;
    md["omega2"] = f.omega2;
    md["omega3"] = f.omega3;
    md["bragg_warning"] = f.bragg_warning;
    return ts;
}

}  // namespace

std::string_view to_string(Solver solver) {
    switch (solver) {
        case Solver::Dirac: return "dirac";
        case Solver::Effective: return "effective";
        case Solver::Matrix: return "matrix";
    }
    return "?";
}

Solver parse_solver(std::string_view text) {
    if (text == "dirac") return Solver::Dirac;
    if (text == "effective") return Solver::Effective;
    if (text == "matrix") return Solver::Matrix;
    throw ParameterError("unknown solver '" + std::string(text) +
                         "' (expected dirac, effective or matrix)");
}

double effective_time(const LaserConfig& cfg, double t, dirac::SamplingProtocol protocol) {
    double te = squared_window_area(t, cfg.delta_t, cfg.total_t);
    if (protocol == dirac::SamplingProtocol::RampOff && cfg.delta_t > 0.0) {
        const double w = window(t, cfg.delta_t, cfg.total_t);
        te += w * w * 3.0 * cfg.delta_t / 8.0;
    }
    return te;
}

std::vector<double> sample_times(const LaserConfig& cfg, const dirac::Numerics& numerics) {
    const auto plan = dirac::plan_steps(cfg, numerics);
    std::vector<double> t(plan.n_samples + 1);
    for (long i = 0; i <= plan.n_samples; ++i)
        t[i] = cfg.total_t * static_cast<double>(i) / static_cast<double>(plan.n_samples);
    return t;
}

ModeWindow effective_window(Setup setup, int initial_mode) {
    if (odd_start(initial_mode)) {
        const ModeWindow w = setup == Setup::Corotating ? ModeWindow::odd(3) : ModeWindow::odd(1);
        if (!w.contains(initial_mode))
            throw ParameterError("initial mode " + std::to_string(initial_mode) +
                                 " lies outside the truncated effective system");
        return w;
    }
    const ModeWindow w = ModeWindow::even(2);
    if (!w.contains(initial_mode))
        throw ParameterError("initial mode " + std::to_string(initial_mode) +
                             " lies outside the truncated effective system");
    return w;
}

TimeSeries simulate(const LaserConfig& cfg, const dirac::Numerics& numerics, Solver solver,
                    const dirac::ModeLabel& initial) {
    if (solver == Solver::Dirac) {
        std::vector<dirac::ModeLabel> extra;
        if (!odd_start(initial.n))
            extra = {{initial.n, dirac::plus_up}, {initial.n, dirac::plus_down}};
        return dirac::run(cfg, numerics, initial, extra);
    }
    const auto times = sample_times(cfg, numerics);
    std::vector<double> te(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        te[i] = effective_time(cfg, times[i], numerics.protocol);
    auto ts = effective_series(cfg, times, te, solver, initial);
    ts.metadata["protocol"] = std::string(dirac::to_string(numerics.protocol));
    return ts;
}

const Deviation& ComparisonReport::find(std::string_view observable,
                                        std::string_view reference) const {
    for (const auto& d : deviations)
        if (d.observable == observable && d.reference == reference) return d;
    throw std::out_of_range("no deviation for " + std::string(observable));
}

TimeSeries ComparisonReport::joint() const {
    TimeSeries out = dirac;
    for (const auto* ref : {&effective, &matrix}) {
        const std::string suffix = "_" + ref->metadata.value("solver", std::string("ref"));
        for (const char* name : compared_columns) out.add_column(name + suffix) = ref->column(name);
    }
    out.metadata["references"] = {"effective", "matrix"};
    return out;
}

Deviation column_deviation(const TimeSeries& a, const TimeSeries& b, const std::string& column,
                           const std::string& reference) {
    const auto& x = a.column(column);
    const auto& y = b.column(column);
    if (x.size() != y.size()) throw std::invalid_argument("column lengths differ");
    Deviation d{column, reference, 0.0, 0.0, 0};
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
        const double e = std::abs(x[i] - y[i]);
        d.max_abs = std::max(d.max_abs, e);
        sum += e * e;
        ++d.samples;
    }
    d.rms = d.samples ? std::sqrt(sum / static_cast<double>(d.samples)) : 0.0;
    return d;
}

ComparisonReport compare(const LaserConfig& cfg, const dirac::Numerics& numerics,
                         const dirac::ModeLabel& initial) {
    ComparisonReport r;
    r.dirac = simulate(cfg, numerics, Solver::Dirac, initial);
    const auto& te = r.dirac.column("t_eff");
    r.effective = effective_series(cfg, r.dirac.times, te, Solver::Effective, initial);
    r.matrix = effective_series(cfg, r.dirac.times, te, Solver::Matrix, initial);
    for (const auto* ref : {&r.effective, &r.matrix}) {
        const std::string name = ref == &r.effective ? "effective" : "matrix";
        for (const char* col : compared_columns)
            r.deviations.push_back(column_deviation(r.dirac, *ref, col, name));
    }
    return r;
}

std::string_view to_string(FitProtocol protocol) {
    return protocol == FitProtocol::CorotatingSpin ? "corotating_spin" : "antirotating_rabi";
}

FitProtocol parse_fit_protocol(std::string_view text) {
    if (text == "corotating_spin") return FitProtocol::CorotatingSpin;
    if (text == "antirotating_rabi") return FitProtocol::AntirotatingRabi;
    throw ParameterError("unknown fit protocol '" + std::string(text) +
                         "' (expected corotating_spin or antirotating_rabi)");
}

FitProtocol default_fit_protocol(Setup setup) {
    return setup == Setup::Corotating ? FitProtocol::CorotatingSpin : FitProtocol::AntirotatingRabi;
}

std::vector<double> default_eta_grid() {
    std::vector<double> etas;
    for (int i = 0; i <= 6; ++i) etas.push_back(i * pi / 12.0);
    return etas;
}

unsigned default_workers() {
    if (const char* env = std::getenv("KAPITZA_WORKERS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepPoint fit_series(const TimeSeries& series, const LaserConfig& cfg, FitProtocol protocol,
                      const FitOptions& options) {
    const FrequencySet f = frequencies(cfg);
    SweepPoint p;
    p.eta = cfg.eta;
    p.total_t = cfg.total_t;
    const auto& t = series.has("t_eff") ? series.column("t_eff") : series.times;
    if (protocol == FitProtocol::CorotatingSpin) {
        p.fit = fit_product_cos(t, series.column("s_total"), spin_precession_frequency(f),
                                spin_beat_frequency(f), options);
        p.fitted = p.fit.params;
        p.predicted = {std::abs(spin_precession_frequency(f)), std::abs(spin_beat_frequency(f))};
    } else {
        p.fit = fit_cos_squared(t, series.column("p_m1_up"), f.omega2p, options);
        p.fitted = {2.0 * p.fit.params[0]};
        p.predicted = {2.0 * std::abs(f.omega2p)};
    }
    return p;
}

std::vector<SweepPoint> sweep_eta(const LaserConfig& base, const std::vector<double>& etas,
                                  Solver solver, FitProtocol protocol,
                                  const dirac::Numerics& numerics, const SweepOptions& options) {
    {
        // the per-point interaction time is chosen below, so only the rest is checked here
        LaserConfig check = base;
        check.total_t = std::max(check.total_t, 2.0 * check.delta_t);
        check.validate();
    }
    for (double eta : etas)
        if (!(eta > -pi && eta <= pi)) throw ParameterError("eta values must lie in (-pi, pi]");

    auto run_point = [&](double eta) {
        SweepPoint point;
        point.eta = eta;
        try {
            LaserConfig cfg = base;
            cfg.eta = eta;
            cfg.total_t = std::max(cfg.total_t, 2.0 * cfg.delta_t);
            const FrequencySet f = frequencies(cfg);
            // circular-polarization scales stand in where sin(eta) vanishes
            const double sin_eff = std::abs(std::sin(eta)) < 1e-3 ? 1.0 : std::abs(std::sin(eta));
            double interval = options.sample_interval;
            if (protocol == FitProtocol::CorotatingSpin) {
                const double beat = f.omega2 * f.omega3 * sin_eff / (2.0 * f.omega1);
                const double periods = options.periods > 0.0 ? options.periods : 2.0;
                if (options.total_t <= 0.0) cfg.total_t = periods * 2.0 * pi / beat;
                if (interval <= 0.0) interval = 2.0 * pi / (2.0 * f.omega3 * sin_eff) / 100.0;
            } else {
                const double periods = options.periods > 0.0 ? options.periods : 5.0;
                if (options.total_t <= 0.0) cfg.total_t = periods * pi / f.omega2;
                if (interval <= 0.0) interval = pi / f.omega2 / 50.0;
            }
            if (options.total_t > 0.0) cfg.total_t = options.total_t;
            cfg.delta_t = std::min(cfg.delta_t, 0.5 * cfg.total_t);

            auto fit_at = [&](int steps_per_cycle) {
                dirac::Numerics num = numerics;
                num.steps_per_cycle = steps_per_cycle;
                const double nominal_dt = laser_period(cfg) / num.steps_per_cycle;
                num.sample_stride = std::max(1, static_cast<int>(std::lround(interval / nominal_dt)));
                return fit_series(simulate(cfg, num, solver), cfg, protocol, options.fit);
            };
            if (options.extrapolate_dt && solver == Solver::Dirac) {
                const SweepPoint coarse = fit_at(numerics.steps_per_cycle);
                point = fit_at(2 * numerics.steps_per_cycle);
                point.fitted_raw = point.fitted;
                for (std::size_t j = 0; j < point.fitted.size(); ++j)
                    point.fitted[j] = (4.0 * point.fitted_raw[j] - coarse.fitted[j]) / 3.0;
                point.fit.converged = point.fit.converged && coarse.fit.converged;
                point.fit.degenerate = point.fit.degenerate || coarse.fit.degenerate;
            } else {
                point = fit_at(numerics.steps_per_cycle);
            }
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        return point;
    };

    std::vector<SweepPoint> results(etas.size());
    const unsigned workers =
        std::max(1u, std::min<unsigned>(options.workers ? options.workers : default_workers(),
                                        static_cast<unsigned>(etas.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < etas.size(); i = next++) results[i] = run_point(etas[i]);
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return results;
}

}  // namespace kapitza
