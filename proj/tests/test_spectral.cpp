#include <doctest.h>

#include "test_helpers.hpp"
#include "wavescat/field.hpp"

using namespace wt;

TEST_CASE("grid: frequency table invariants and construction errors") {
    for (auto g : {grid1d(64), grid2d(16), make_grid(3, 8, 4.0)}) {
        Eigen::Index zeros = 0;
        for (Eigen::Index i = 0; i < g->size(); ++i) {
            CHECK(g->abs_freq[i] >= 0.0);
            if (g->abs_freq[i] == 0.0) ++zeros;
        }
        CHECK(zeros == 1);
        // |xi| is symmetric under k -> -k on each axis
        const int n = g->points_per_axis;
        for (int k = 1; k < n; ++k)
            CHECK(std::abs(g->axis_freq[k]) ==
                  doctest::Approx(std::abs(g->axis_freq[(n - k) % n])).epsilon(1e-15));
        Eigen::Index expected = 1;
        for (int a = 0; a < g->dimension; ++a) expected *= n;
        CHECK(g->size() == expected);
    }
    CHECK_THROWS_AS((void)make_grid(4, 16, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)make_grid(1, 100, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)make_grid(1, 16, 0.0), std::invalid_argument);
}

TEST_CASE("transform: constant field concentrates on the zero mode") {
    auto g = grid1d(64);
    Field f = constant_field(g, {2.0, -1.0});
    Field fs = transform(f, TransformDirection::forward);
    CHECK(fs.rep == Rep::spectral);
    // zero mode is flat index 0; all energy there, norm preserved
    CHECK(std::abs(fs.values[0]) == doctest::Approx(field_norm(f)).epsilon(1e-13));
    fs.values[0] = 0.0;
    CHECK(fs.values.norm() <= 1e-13 * field_norm(f));
}

TEST_CASE("transform: forward then inverse is the identity") {
    for (auto g : {grid1d(128), grid2d(16), make_grid(3, 8, 2.0 * M_PI)}) {
        Field f = random_field(g, 7, false);
        Field back = transform(transform(f, TransformDirection::forward),
                               TransformDirection::inverse);
        CHECK((back.values - f.values).norm() <= 1e-12 * field_norm(f));
    }
}

TEST_CASE("transform: a pure mode maps to the indicator of that mode") {
    auto g = grid1d(32);
    const int k = 5;
    Field f = make_field(g, Rep::physical);
    for (Eigen::Index m = 0; m < g->size(); ++m) {
        const double x = g->axis_coord[m];
        f.values[m] = std::polar(1.0, g->axis_freq[k] * x);
    }
    Field fs = transform(f, TransformDirection::forward);
    // unitary normalization: coefficient sqrt(N) at index k, zero elsewhere
    CHECK(std::abs(fs.values[k] - std::sqrt(32.0)) <= 1e-12 * std::sqrt(32.0));
    fs.values[k] = 0.0;
    CHECK(fs.values.norm() <= 1e-11);
}

TEST_CASE("transform: representation tag is enforced") {
    auto g = grid1d(16);
    Field f = constant_field(g, 1.0, Rep::physical);
    CHECK_THROWS_AS((void)transform(f, TransformDirection::inverse), std::invalid_argument);
    Field fs = to_spectral(f);
    CHECK_THROWS_AS((void)transform(fs, TransformDirection::forward), std::invalid_argument);
}

TEST_CASE("Plancherel: the l2 norm is representation independent") {
    for (auto g : {grid1d(256), grid2d(32)}) {
        for (unsigned long seed : {1ul, 2ul, 3ul, 4ul, 5ul}) {
            Field f = random_field(g, seed, false);
            Field fs = to_spectral(f);
            CHECK(field_norm(fs) == doctest::Approx(field_norm(f)).epsilon(1e-12));
        }
    }
}

TEST_CASE("apply_abs_d: multiplier on a pure mode") {
    const double L = 3.0;
    auto g = grid1d(32, L);
    Field f = mode_field(g, 1); // |xi| = 2*pi/L
    Field df = apply_abs_d(f, +1);
    CHECK(std::abs(df.values[1] - 2.0 * M_PI / L) <= 1e-14);
}

TEST_CASE("apply_abs_d: +1 then -1 is the identity off the zero mode") {
    auto g = grid1d(128);
    Field f = random_field(g, 11, true); // mean zero
    Field back = apply_abs_d(apply_abs_d(f, +1), -1);
    CHECK((back.values - f.values).norm() <= 1e-12 * field_norm(f));
}

TEST_CASE("apply_abs_d: annihilates constants") {
    auto g = grid2d(8);
    Field f = constant_field(g, 3.0);
    CHECK(field_norm(apply_abs_d(f, +1)) <= 1e-14);
    CHECK(field_norm(apply_abs_d(to_spectral(f), -1)) <= 1e-14);
}

TEST_CASE("lift_data: single mode with |xi| = 1") {
    auto g = grid1d(64); // L = 2*pi, so k = 1 has |xi| = 1
    Field u1 = to_physical(mode_field(g, 1, {0.7, 0.2}));
    Field u2 = make_field(g, Rep::physical);
    StateVector U = lift_data(u1, u2);
    CHECK(std::abs(U.c1.values[1] - std::complex<double>(0.7, 0.2)) <= 1e-13);
    CHECK(energy_norm(U) == doctest::Approx(field_norm(u1)).epsilon(1e-12));
    CHECK(U.c2.values.norm() <= 1e-15);
}

TEST_CASE("lift_data then restore_data round-trips (mean projected)") {
    auto g = grid1d(64);
    Field u1 = random_field(g, 3, false);
    Field u2 = random_field(g, 4, false);
    const std::complex<double> mean = u1.values.mean();
    auto [r1, r2] = restore_data(lift_data(u1, u2));
    CHECK((r1.values - (u1.values.array() - mean).matrix()).norm() <= 1e-12);
    CHECK((r2.values - u2.values).norm() <= 1e-12);
}

TEST_CASE("lift_data: (0, g) lifts to (0, g^)") {
    auto g = grid1d(32);
    Field u1 = make_field(g, Rep::physical);
    Field u2 = random_field(g, 9, false);
    StateVector U = lift_data(u1, u2);
    CHECK(U.c1.values.norm() <= 1e-15);
    CHECK((U.c2.values - to_spectral(u2).values).norm() <= 1e-14);
}

TEST_CASE("lift_data: grid mismatch throws") {
    Field a = constant_field(grid1d(32), 1.0);
    Field b = constant_field(grid1d(64), 1.0);
    CHECK_THROWS_AS((void)lift_data(a, b), std::invalid_argument);
}

TEST_CASE("energy_norm: zero, single-component, pythagorean") {
    auto g = grid1d(64);
    StateVector Z = make_state(g);
    CHECK(energy_norm(Z) == 0.0);

    StateVector U = make_state(g);
    U.c1.values[3] = 3.0;
    CHECK(energy_norm(U) == doctest::Approx(3.0).epsilon(1e-15));
    U.c2.values[7] = 4.0;
    CHECK(energy_norm(U) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("energy_norm is invariant under representation changes") {
    auto g = grid2d(16);
    for (unsigned long seed : {21ul, 22ul, 23ul}) {
        StateVector U = random_state(g, seed);
        StateVector P = to_physical(U);
        CHECK(energy_norm(P) == doctest::Approx(energy_norm(U)).epsilon(1e-12));
    }
}
