#include <doctest.h>

#include "test_helpers.hpp"
#include "wavescat/dyson.hpp"
#include "wavescat/mode_oracle.hpp"

using namespace wt;

namespace {

Eigen::Matrix2cd zero_mode_q(double c) {
    const double kappa = (std::exp(-c) - 1.0) / 2.0;
    Eigen::Matrix2cd q;
    q << 1.0 + kappa, kappa, kappa, 1.0 + kappa;
    return q;
}

} // namespace

TEST_CASE("mode_q: trivial profile gives the identity") {
    auto model = interval_model(0.0, 0.0, 1.0);
    for (double w : {0.0, 1.0, 4.0}) {
        ModeMatrix q = mode_q(w, 0.0, 2.0, model);
        CHECK((q.m - Eigen::Matrix2cd::Identity()).norm() <= 1e-14);
    }
}

TEST_CASE("mode_q: zero-frequency closed form") {
    auto model = interval_model(0.3, 0.0, 1.0);
    ModeMatrix q = mode_q(0.0, 0.0, 1.0, model);
    CHECK((q.m - zero_mode_q(0.3)).norm() <= 1e-12);
}

TEST_CASE("mode_q: Liouville determinant identity across presets and frequencies") {
    struct Case {
        DissipationModel model;
        double s, t;
    };
    const Case cases[] = {
        {interval_model(0.3, 0.0, 1.0), 0.0, 2.0},
        {interval_model(-0.25, 0.0, 1.0), 0.0, 2.0},
        {algebraic_model(1.0, 2.0), 0.0, 3.0},
        {gaussian_model(1.0, 1.0), 0.0, 4.0},
    };
    for (const auto& c : cases) {
        // signed integral of mu (not of |mu|)
        const double signed_c =
            (c.model.mu(0.5) < 0.0 ? -1.0 : 1.0) * integral_sup_b(c.model, c.s, c.t);
        const double expected = std::exp(-signed_c);
        for (double w : {0.0, 1.0, 2.0, 4.0, 8.0}) {
            ModeMatrix q = mode_q(w, c.s, c.t, c.model);
            CHECK(std::abs(std::abs(q.m.determinant()) - expected) <= 1e-10 * expected);
        }
    }
}

TEST_CASE("mode_q: agrees with the grid evaluation mode by mode") {
    auto g = grid1d(16); // |xi| in 0..8
    auto model = interval_model(0.3, 0.0, 1.0);
    dyson::TimeMesh mesh = dyson::TimeMesh::for_model(model, 0.0, 1.5, 2048.0);
    for (Eigen::Index j : {Eigen::Index(0), Eigen::Index(1), Eigen::Index(5), Eigen::Index(8),
                           Eigen::Index(12)}) {
        const double w = g->abs_freq[j];
        ModeMatrix q = mode_q(w, 0.0, 1.5, model, 5e-5);
        for (int col = 0; col < 2; ++col) {
            StateVector e = single_mode_state(g, j, col == 0 ? 1.0 : 0.0, col == 0 ? 0.0 : 1.0);
            dyson::SeriesResult r = dyson::peano_baker_apply(0.0, 1.5, e, model, mesh, 1e-13, 40);
            CHECK(std::abs(r.state.c1.values[j] - q.m(0, col)) <= 1e-10);
            CHECK(std::abs(r.state.c2.values[j] - q.m(1, col)) <= 1e-10);
        }
    }
}

TEST_CASE("mode_wave_operator: identity for trivial profiles, stability past support") {
    auto trivial = interval_model(0.0, 0.0, 1.0);
    ModeMatrix w = mode_wave_operator(2.0, trivial, 1e-10);
    CHECK((w.m - Eigen::Matrix2cd::Identity()).norm() <= 1e-14);

    // compact support: any horizon at or past the support gives the same matrix
    auto model = interval_model(0.4, 0.0, 1.0);
    ModeMatrix at_rule = mode_wave_operator(3.0, model, 1e-10);
    ModeMatrix q1 = mode_q(3.0, 0.0, 1.0, model);
    ModeMatrix q8 = mode_q(3.0, 0.0, 8.0, model);
    CHECK((q1.m - q8.m).norm() <= 1e-12);
    Eigen::Matrix2cd M, Minv;
    M << 1, -1, 1, 1;
    Minv << 0.5, 0.5, -0.5, 0.5;
    CHECK((at_rule.m - M * q8.m * Minv).norm() <= 1e-12);
}

TEST_CASE("mode_wave_operator: determinant magnitude from the Liouville identity") {
    auto model = gaussian_model(0.8, 1.0);
    const double total = integral_sup_b(model, 0.0, std::numeric_limits<double>::infinity());
    for (double w : {0.0, 1.0, 4.0}) {
        ModeMatrix wave = mode_wave_operator(w, model, 1e-10);
        CHECK(std::abs(std::abs(wave.m.determinant()) - std::exp(-total)) <= 1e-9);
    }
}

TEST_CASE("mode_wave_operator: entries vary smoothly in omega (constant recorded)") {
    auto model = gaussian_model(0.6, 1.0);
    double cmax = 0.0;
    const double dw = 0.125;
    Eigen::Matrix2cd prev = mode_wave_operator(0.0, model, 1e-9).m;
    for (double w = dw; w <= 4.0 + 1e-12; w += dw) {
        Eigen::Matrix2cd cur = mode_wave_operator(w, model, 1e-9).m;
        cmax = std::max(cmax, (cur - prev).cwiseAbs().maxCoeff() / dw);
        prev = cur;
    }
    INFO("max |dW/domega| over [0,4]: ", cmax);
    CHECK(std::isfinite(cmax)); // recorded, not asserted a priori
}

TEST_CASE("mode oracle rejects x-dependent models") {
    auto model = bump_model();
    CHECK_THROWS_AS((void)mode_q(1.0, 0.0, 1.0, model), std::invalid_argument);
    CHECK_THROWS_AS((void)mode_wave_operator(1.0, model, 1e-8), std::invalid_argument);
}

TEST_CASE("mode_wave_operator: unattainable tolerance hits the horizon cap") {
    auto model = algebraic_model(1.0, 1.0001); // extremely slow tail
    CHECK_THROWS_AS((void)mode_wave_operator(1.0, model, 1e-300), std::runtime_error);
}
