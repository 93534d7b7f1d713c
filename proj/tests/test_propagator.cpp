#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "wavescat/propagator.hpp"

using namespace wt;

namespace {

// Compositional route for the coupling: M^{-1} diag(0, i b) M, assembled from
// the public pieces. Oracle for the closed-form implementation.
StateVector coupling_by_composition(const StateVector& U, double t,
                                    const DissipationModel& model) {
    StateVector z = from_diagonal(U); // M
    z = to_physical(std::move(z));
    Field b = eval_b(model, t, z.grid());
    z.c1.values.setZero();
    z.c2.values.array() *= std::complex<double>(0.0, 1.0) * b.values.array();
    z = to_spectral(std::move(z));
    return to_diagonal(z); // M^{-1}
}

std::mt19937_64 rng(42);
double uniform(double lo, double hi) {
    return lo + (hi - lo) * double(rng() >> 11) * 0x1p-53;
}

} // namespace

TEST_CASE("diagonalizer: columns and inverse pair") {
    auto g = grid1d(32);
    StateVector U = make_state(g);
    U.c1.values = random_state(g, 5).c1.values;

    StateVector MU = from_diagonal(U); // M (f, 0) = (f, f)
    CHECK((MU.c1.values - U.c1.values).norm() == 0.0);
    CHECK((MU.c2.values - U.c1.values).norm() == 0.0);

    StateVector V = random_state(g, 6);
    StateVector round = to_diagonal(from_diagonal(V));
    CHECK(state_distance(round, V) <= 1e-15 * energy_norm(V));

    StateVector ones = make_state(g);
    ones.c1.values.setConstant(1.0);
    ones.c2.values.setConstant(1.0);
    StateVector D = to_diagonal(ones); // M^{-1} (1,1) = (1,0)
    CHECK((D.c1.values.array() - 1.0).matrix().norm() == 0.0);
    CHECK(D.c2.values.norm() == 0.0);
}

TEST_CASE("free_flow: identity at t = s, sign flip at a half period") {
    auto g = grid1d(64);
    StateVector U = random_state(g, 17);
    CHECK(state_distance(free_flow(U, 1.5, 1.5), U) == 0.0);

    StateVector mode = single_mode_state(g, 1, {1.0, 0.0}, {0.5, 0.5}); // |xi| = 1
    StateVector flipped = free_flow(mode, M_PI, 0.0);
    CHECK(std::abs(flipped.c1.values[1] + 1.0) <= 1e-15);
    CHECK(std::abs(flipped.c2.values[1] + std::complex<double>(0.5, 0.5)) <= 1e-15);
}

TEST_CASE("free_flow: unitary and a two-parameter group") {
    for (auto g : {grid1d(256), grid2d(32)}) {
        for (int trial = 0; trial < 20; ++trial) {
            StateVector U = random_state(g, 100 + trial);
            const double t = uniform(-4.0, 4.0), s = uniform(-4.0, 4.0), r = uniform(-4.0, 4.0);
            StateVector W = free_flow(U, t, s);
            CHECK(std::abs(energy_norm(W) - energy_norm(U)) <= 1e-12 * energy_norm(U));
            StateVector two = free_flow(free_flow(U, s, r), t, s);
            StateVector one = free_flow(U, t, r);
            CHECK(state_distance(two, one) <= 1e-12 * energy_norm(U));
        }
    }
}

TEST_CASE("coupling: zero coefficient, kernel direction, closed-form value") {
    auto g = grid1d(64);
    auto zero_model = interval_model(0.0, 0.0, 1.0);
    StateVector U = random_state(g, 23);
    CHECK(energy_norm(apply_coupling(U, 0.5, zero_model)) == 0.0);

    // (f, -f) spans the kernel of the all-ones matrix
    StateVector K = make_state(g);
    K.c1.values = random_state(g, 29).c1.values;
    K.c2.values = -K.c1.values;
    auto model = interval_model(0.7, -1.0, 2.0);
    CHECK(energy_norm(apply_coupling(K, 0.0, model)) <= 1e-14);

    // b = 2: B (f, f) = (2 i f, 2 i f)
    auto two = interval_model(2.0, -1.0, 1.0);
    StateVector F = make_state(g);
    F.c1.values = random_state(g, 31).c1.values;
    F.c2.values = F.c1.values;
    StateVector BF = apply_coupling(F, 0.0, two);
    const std::complex<double> twoi(0.0, 2.0);
    CHECK((BF.c1.values - twoi * F.c1.values).norm() <= 1e-14);
    CHECK((BF.c2.values - twoi * F.c1.values).norm() <= 1e-14);
}

TEST_CASE("coupling: closed form equals the compositional definition") {
    // max pointwise deviation <= 1e-13, including x-dependent coefficients
    for (const auto& model : {interval_model(0.5, -1.0, 2.0), bump_model(1.2, -1.0, 2.0, 0.8)}) {
        for (auto g : {grid1d(64), grid2d(16)}) {
            StateVector U = random_state(g, 37);
            StateVector closed = apply_coupling(U, 0.3, model);
            StateVector composed = coupling_by_composition(U, 0.3, model);
            CHECK((closed.c1.values - composed.c1.values).cwiseAbs().maxCoeff() <= 1e-13);
            CHECK((closed.c2.values - composed.c2.values).cwiseAbs().maxCoeff() <= 1e-13);
        }
    }
}

TEST_CASE("twisted coupling: collapses to the coupling at t = s") {
    auto g = grid1d(64);
    auto model = bump_model();
    StateVector U = random_state(g, 41);
    CHECK(state_distance(apply_twisted_coupling(U, 0.5, 0.5, model),
                         apply_coupling(U, 0.5, model)) <= 1e-15);
}

TEST_CASE("twisted coupling: single-mode matrix for x-independent b") {
    auto g = grid1d(64);
    auto model = interval_model(0.8, -2.0, 2.0);
    const double t = 0.9, s = 0.1;
    const Eigen::Index j = 3; // |xi| = 3
    const double w = g->abs_freq[j];
    const std::complex<double> a(0.4, -0.2), b(-0.3, 0.6);
    StateVector U = single_mode_state(g, j, a, b);
    StateVector R = apply_twisted_coupling(U, t, s, model);
    // (i mu/2) [[1, e^{-2i dt w}], [e^{+2i dt w}, 1]]
    const std::complex<double> f(0.0, 0.4);
    const std::complex<double> phase = std::polar(1.0, 2.0 * (t - s) * w);
    CHECK(std::abs(R.c1.values[j] - f * (a + std::conj(phase) * b)) <= 1e-14);
    CHECK(std::abs(R.c2.values[j] - f * (phase * a + b)) <= 1e-14);
}

TEST_CASE("twisted coupling: vanishing coefficient and the operator bound") {
    auto g = grid1d(128);
    auto zero = interval_model(0.0, 0.0, 1.0);
    StateVector U = random_state(g, 43);
    CHECK(energy_norm(apply_twisted_coupling(U, 0.3, 0.0, zero)) == 0.0);

    // pointwise spectral norm of the coupling matrix is |b|, so
    // ||R(t,s) U|| <= sup|b(t,.)| ||U|| on every state
    for (const auto& model : {interval_model(0.9, -1.0, 1.0), bump_model(1.5, -1.0, 1.0, 0.6),
                              gaussian_model(-0.8, 1.0)}) {
        for (int trial = 0; trial < 10; ++trial) {
            StateVector V = random_state(g, 500 + trial);
            const double t = uniform(-0.9, 0.9), s = uniform(-2.0, 2.0);
            const double bound = sup_norm_b(model, t) * energy_norm(V);
            CHECK(energy_norm(apply_twisted_coupling(V, t, s, model)) <= bound * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("free wave group: cosine evolution of pure-displacement data") {
    auto g = grid1d(64);
    const Eigen::Index j = 4;
    const double w = g->abs_freq[j];
    Field u1 = to_physical(mode_field(g, j, 0.6));
    Field u2 = make_field(g, Rep::physical);
    for (double t : {0.3, 1.1, 2.7}) {
        auto [ut, vt] = free_wave_evolve(u1, u2, t);
        // the mode ODE u'' + w^2 u = 0 with zero velocity: u(t) = cos(w t) u1
        Field expected = to_physical(mode_field(g, j, 0.6 * std::cos(w * t)));
        CHECK((ut.values - expected.values).norm() <= 1e-12);
    }
}

TEST_CASE("free wave group: identity at t = 0, group inverse, unitarity") {
    auto g = grid2d(16);
    Field u1 = random_field(g, 51, true); // mean zero
    Field u2 = random_field(g, 52, false);
    auto [a1, a2] = free_wave_evolve(u1, u2, 0.0);
    CHECK((a1.values - u1.values).norm() <= 1e-12);
    CHECK((a2.values - u2.values).norm() <= 1e-12);

    auto [f1, f2] = free_wave_evolve(u1, u2, 1.7);
    auto [b1, b2] = free_wave_evolve(f1, f2, -1.7);
    CHECK((b1.values - u1.values).norm() <= 1e-12);
    CHECK((b2.values - u2.values).norm() <= 1e-12);

    const double e0 = energy_norm(lift_data(u1, u2));
    CHECK(energy_norm(lift_data(f1, f2)) == doctest::Approx(e0).epsilon(1e-12));
}

TEST_CASE("free_rotation matches the conjugated free flow") {
    auto g = grid1d(64);
    StateVector U = random_state(g, 61);
    StateVector direct = free_rotation(U, 0.8);
    StateVector conj = from_diagonal(free_flow(to_diagonal(U), 0.8, 0.0));
    CHECK(state_distance(direct, conj) <= 1e-14);
}
