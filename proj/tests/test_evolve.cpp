#include "dnls/checks.hpp"
#include "dnls/errors.hpp"
#include "dnls/evolve.hpp"

#include <doctest.h>

#include <cmath>

using namespace dnls;

TEST_CASE("plane wave rotates at k^2 + A^2 k")
{
    const double amp = 0.5, length = 2 * M_PI;
    const int k = 2;
    GridFunction u = plane_wave(32, length, amp, k);
    double dt = 1e-3;
    DnlsStepper stepper(32, length, dt);
    Eigen::VectorXcd v = stepper.filtered(fft(u.values()));
    for (int n = 0; n < 1000; ++n)
        stepper.advance(v);
    Eigen::VectorXcd w = ifft(v);
    double omega = k * k + amp * amp * k;
    cplx expected = u[0] * std::polar(1.0, -omega * 1.0);
    CHECK(std::abs(w[0] - expected) < 1e-9);
}

TEST_CASE("fourth order in time")
{
    auto err = [](double dt) {
        GridFunction u = plane_wave(32, 2 * M_PI, 1.0, 3);
        DnlsStepper s(32, 2 * M_PI, dt);
        Eigen::VectorXcd v = s.filtered(fft(u.values()));
        int steps = int(std::lround(0.5 / dt));
        for (int n = 0; n < steps; ++n)
            s.advance(v);
        return std::abs(ifft(v)[0] - u[0] * std::polar(1.0, -12.0 * 0.5));
    };
    double slope = loglog_slope({0.02, 0.01, 0.005}, {err(0.02), err(0.01), err(0.005)});
    CHECK(slope == doctest::Approx(4.0).epsilon(0.08));
}

TEST_CASE("short run conserves mass, momentum and energy")
{
    GridFunction u0 = gaussian(256, 60.0, 0.8, 2.0, 0.5);
    EvolutionConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.5;
    cfg.monitor_stride = 100;
    auto series = evolve(u0, cfg, {mass_monitor(), momentum_monitor(), energy_monitor(), hierarchy_monitor(3)});
    CHECK(series.times.front() == 0.0);
    CHECK(series.times.back() == doctest::Approx(0.5));
    CHECK(series.relative_drift("M") < 1e-10);
    CHECK(series.relative_drift("P") < 1e-7);
    CHECK(series.relative_drift("E") < 1e-7);
    CHECK(series.relative_drift("E3") < 1e-6);
    CHECK(series.to_csv().rfind("t,M_re,M_im", 0) == 0);
}

TEST_CASE("snapshots are delivered")
{
    GridFunction u0 = gaussian(128, 40.0, 0.5, 2.0);
    EvolutionConfig cfg;
    cfg.dt = 1e-2;
    cfg.t_final = 0.1;
    cfg.monitor_stride = 5;
    int count = 0;
    evolve(u0, cfg, {mass_monitor()}, [&](double, const GridFunction& u) {
        ++count;
        CHECK(u.size() == 128);
    });
    CHECK(count >= 2);
}

TEST_CASE("too large a step is refused")
{
    GridFunction u0 = gaussian(1024, 60.0, 2.0, 1.0, 3.0);
    CHECK_THROWS_AS(step(u0, 0.5), StabilityError);
    EvolutionConfig cfg;
    cfg.dt = 0.5;
    CHECK_THROWS_AS(evolve(u0, cfg, {}), StabilityError);
}
