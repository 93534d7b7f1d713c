#include <doctest.h>

#include "test_helpers.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/strang.hpp"

using namespace wt;

TEST_CASE("strang: exact free propagation when b vanishes") {
    auto g = grid1d(64);
    auto model = interval_model(0.3, 10.0, 11.0); // support far away
    Field u1 = random_field(g, 301, true);
    Field u2 = random_field(g, 302, false);
    for (double dt : {0.5, 0.125, 0.01}) {
        auto [s1, s2] = strang_solve(0.0, 2.0, u1, u2, model, dt);
        auto [f1, f2] = free_wave_evolve(u1, u2, 2.0);
        CHECK((s1.values - f1.values).norm() <= 1e-12);
        CHECK((s2.values - f2.values).norm() <= 1e-12);
    }
}

TEST_CASE("strang: zero-mode damping is exact") {
    auto g = grid1d(32);
    const double beta0 = 0.35, T = 2.0;
    auto model = interval_model(beta0, 0.0, T);
    StateVector U = single_mode_state(g, 0, 0.0, {0.8, -0.4}); // (0, g) on the zero mode
    StateVector out = strang_evolve_state(0.0, T, U, model, 1.0 / 64.0);
    const std::complex<double> expected = std::exp(-beta0 * T) * std::complex<double>(0.8, -0.4);
    CHECK(std::abs(out.c2.values[0] - expected) <= 1e-13);
    CHECK(out.c1.values.norm() <= 1e-15);
}

TEST_CASE("strang: non-negative damping never increases the energy") {
    auto g = grid1d(64);
    auto model = bump_model(0.9, 0.0, 1.5, 0.7);
    StateVector U = random_state(g, 305);
    const double dt = 1.0 / 128.0;
    double prev = energy_norm(U);
    for (int step = 0; step < 256; ++step) {
        U = strang_evolve_state(step * dt, (step + 1) * dt, std::move(U), model, dt);
        const double now = energy_norm(U);
        CHECK(now <= prev * (1.0 + 1e-12));
        prev = now;
    }
}

TEST_CASE("strang: sign-changing coefficient grows the zero mode like e^{+beta0 t}") {
    auto g = grid1d(32);
    const double beta0 = 0.4, T = 3.0;
    auto model = interval_model(-beta0, 0.0, T); // negative damping
    StateVector U = single_mode_state(g, 0, 0.0, 1.0);
    StateVector out = strang_evolve_state(0.0, T, U, model, 1.0 / 64.0);
    const double ratio = energy_norm(out) / energy_norm(U);
    CHECK(std::abs(ratio - std::exp(beta0 * T)) <= 1e-10 * std::exp(beta0 * T));
}

TEST_CASE("strang: observed order is two") {
    auto g = grid1d(32); // smooth band: |xi| <= 16
    auto model = gaussian_model(0.8, 0.7);
    StateVector U = random_state(g, 307);
    auto run = [&](double dt) { return strang_evolve_state(0.0, 2.0, U, model, dt); };
    const StateVector a = run(1.0 / 64.0);
    const StateVector b = run(1.0 / 128.0);
    const StateVector c = run(1.0 / 256.0);
    const double e1 = state_distance(a, b);
    const double e2 = state_distance(b, c);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1)); // 2.0 +- 0.2
}

TEST_CASE("strang: interval must be an integer number of steps") {
    auto g = grid1d(16);
    auto model = interval_model();
    StateVector U = random_state(g, 309);
    CHECK_THROWS_AS((void)strang_evolve_state(0.0, 1.0, U, model, 0.3), std::invalid_argument);
    CHECK_THROWS_AS((void)strang_evolve_state(0.0, 1.0, U, model, -0.1), std::invalid_argument);
}
