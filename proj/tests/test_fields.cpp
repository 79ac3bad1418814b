#include <doctest.h>

#include <cmath>
#include <random>

#include "kapitza/effective.hpp"
#include "kapitza/errors.hpp"
#include "kapitza/fields.hpp"

using namespace kapitza;

namespace {

LaserConfig paper_laser(Setup setup, double eta) {
    LaserConfig cfg;
    cfg.e_hat = 400.0;
    cfg.lambda = 3.0;
    cfg.eta = eta;
    cfg.setup = setup;
    return cfg;
}

}  // namespace

TEST_CASE("wave numbers") {
    LaserConfig cfg = paper_laser(Setup::Corotating, 0.0);
    const auto [k, omega] = derived_wave_numbers(cfg);
    CHECK(k == doctest::Approx(2.0943951).epsilon(1e-7));
    CHECK(omega / k == doctest::Approx(atomic_units.c).epsilon(1e-15));
    // c k with c = 137.035999084; a quoted 286.988 is about 7e-5 low
    CHECK(omega == doctest::Approx(287.0075).epsilon(1e-6));

    cfg.lambda = 2.0 * pi;
    CHECK(derived_wave_numbers(cfg).k == doctest::Approx(1.0));
}

TEST_CASE("fields at the origin") {
    for (double eta : {0.0, 0.4, pi / 2}) {
        const auto f = total_fields(paper_laser(Setup::Corotating, eta), 0.0, 0.0);
        CHECK(f.e.x() == 0.0);
        CHECK(f.e.y() == doctest::Approx(800.0));
        CHECK(f.e.z() == doctest::Approx(800.0 * std::cos(eta)));
        CHECK(f.a.y() == 0.0);
    }
}

TEST_CASE("antirotating field is linearly polarized at every x") {
    const LaserConfig cfg = paper_laser(Setup::Antirotating, pi / 2);
    const double k = derived_wave_numbers(cfg).k;
    for (double x : {0.1, 0.5, 1.3, 2.2}) {
        const auto f1 = total_fields(cfg, x, 0.001);
        const auto f2 = total_fields(cfg, x, 0.0047);
        CHECK(f1.e.z() / f1.e.y() == doctest::Approx(std::cos(k * x + pi / 2) / std::cos(k * x)));
        CHECK(f1.e.z() / f1.e.y() == doctest::Approx(f2.e.z() / f2.e.y()));
    }
}

TEST_CASE("E = -dA/dt and B = curl A by central differences") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 3.0), ut(0.0, 0.05), ueta(-3.0, 3.0);
    const double h = 1e-6;
    for (Setup setup : {Setup::Corotating, Setup::Antirotating}) {
        for (int i = 0; i < 50; ++i) {
            const LaserConfig cfg = paper_laser(setup, ueta(rng));
            const double x = ux(rng), t = ut(rng);
            const auto f = total_fields(cfg, x, t);
            const Eigen::Vector3d dadt =
                (vector_potential(cfg, x, t + h) - vector_potential(cfg, x, t - h)) / (2 * h);
            const Eigen::Vector3d dadx =
                (vector_potential(cfg, x + h, t) - vector_potential(cfg, x - h, t)) / (2 * h);
            // O(h^2 omega^3 |A|) truncation plus rounding of |A| / h
            CHECK((f.e + dadt).norm() < 1e-3 * f.e.norm() + 1e-3);
            const Eigen::Vector3d curl(0.0, -dadx.z(), dadx.y());
            CHECK((f.b - curl).norm() < 1e-6 * (f.b.norm() + 1.0));
            CHECK((f.a - vector_potential(cfg, x, t)).norm() < 1e-12);
        }
    }
}

TEST_CASE("linear polarization: both setups coincide at eta = 0") {
    for (double x : {0.0, 0.3, 1.7})
        for (double t : {0.0, 0.004, 0.013}) {
            const auto co = total_fields(paper_laser(Setup::Corotating, 0.0), x, t);
            const auto anti = total_fields(paper_laser(Setup::Antirotating, 0.0), x, t);
            CHECK((co.e - anti.e).norm() < 1e-10);
            CHECK((co.b - anti.b).norm() < 1e-12);
            CHECK((co.a - anti.a).norm() < 1e-12);
        }
}

TEST_CASE("spatial and temporal periodicity") {
    for (Setup setup : {Setup::Corotating, Setup::Antirotating}) {
        const LaserConfig cfg = paper_laser(setup, 0.7);
        const double period = laser_period(cfg);
        for (double x : {0.2, 1.1})
            for (double t : {0.001, 0.01}) {
                const auto f = total_fields(cfg, x, t);
                CHECK((total_fields(cfg, x + cfg.lambda, t).e - f.e).norm() < 1e-11);
                CHECK((total_fields(cfg, x, t + period).e - f.e).norm() < 1e-9);
            }
    }
}

TEST_CASE("window profile") {
    const double dt = 2.0, T = 10.0;
    CHECK(window(0.0, dt, T) == 0.0);
    CHECK(window(dt, dt, T) == doctest::Approx(1.0));
    CHECK(window(dt / 2, dt, T) == doctest::Approx(0.5));
    CHECK(window(5.0, dt, T) == 1.0);
    CHECK(window(T, dt, T) == doctest::Approx(0.0));
    CHECK(window(T - dt / 2, dt, T) == doctest::Approx(0.5));
    CHECK(window(3.0, 0.0, T) == 1.0);
    CHECK_THROWS_AS(window(-0.1, dt, T), std::invalid_argument);
    CHECK_THROWS_AS(window(T + 0.1, dt, T), std::invalid_argument);

    double prev = 0.0;
    for (int i = 0; i <= 100; ++i) {
        const double w = window(dt * i / 100.0, dt, T);
        CHECK(w >= prev);
        prev = w;
    }

    // composite Simpson rule on a fine grid
    auto simpson = [&](auto f) {
        const int n = 20000;
        const double h = T / n;
        double s = f(0.0) + f(T);
        for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
        return s * h / 3.0;
    };
    CHECK(simpson([&](double t) { return window(t, dt, T); }) == doctest::Approx(T - dt).epsilon(1e-12));
    const double w2 = simpson([&](double t) { return std::pow(window(t, dt, T), 2); });
    CHECK(squared_window_area(T, dt, T) == doctest::Approx(w2).epsilon(1e-12));
    CHECK(squared_window_area(T, dt, T) == doctest::Approx(T - 2 * dt + 0.75 * dt).epsilon(1e-14));
    for (double t : {0.7, 2.0, 6.0, 9.3}) {
        const int n = 20000;
        const double h = t / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = std::pow(window(i * h, dt, T), 2);
            s += (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * w;
        }
        CHECK(squared_window_area(t, dt, T) == doctest::Approx(s * h / 3.0).epsilon(1e-10));
    }
}

TEST_CASE("laser validation") {
    LaserConfig cfg = paper_laser(Setup::Corotating, 0.0);
    cfg.total_t = 1.0;
    cfg.delta_t = 0.5;
    CHECK_NOTHROW(cfg.validate());
    cfg.delta_t = 0.6;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.delta_t = 0.1;
    cfg.lambda = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.lambda = 3.0;
    cfg.e_hat = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    cfg.e_hat = 1.0;
    cfg.eta = 4.0;
    CHECK_THROWS_AS(cfg.validate(), ParameterError);
    CHECK(parse_setup("antirotating") == Setup::Antirotating);
    CHECK_THROWS_AS(parse_setup("linear"), ParameterError);
}
