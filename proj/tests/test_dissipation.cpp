#include <doctest.h>

#include <limits>

#include "test_helpers.hpp"

using namespace wt;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("eval_b: interval profile inside and outside its support") {
    auto g = grid1d(32);
    auto model = interval_model(0.3, 0.0, 1.0);
    Field inside = eval_b(model, 0.5, g);
    CHECK((inside.values.array() - 0.3).matrix().norm() <= 1e-15);
    Field outside = eval_b(model, 2.0, g);
    CHECK(outside.values.norm() == 0.0);
}

TEST_CASE("eval_b: algebraic profile value") {
    auto g = grid1d(16);
    auto model = algebraic_model(1.0, 2.0);
    Field f = eval_b(model, 1.0, g);
    CHECK((f.values.array() - 0.25).matrix().norm() <= 1e-15);
}

TEST_CASE("sup_norm_b") {
    CHECK(sup_norm_b(algebraic_model(1.0, 2.0), 0.0) == doctest::Approx(1.0));
    CHECK(sup_norm_b(interval_model(0.3, 0.0, 1.0), 5.0) == 0.0);
    // bump with height 0.5 under mu = 2
    auto model = DissipationModel(IntervalProfile{2.0, -1.0, 1.0}, BumpSpace{M_PI, 1.0, 0.5});
    CHECK(sup_norm_b(model, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sup_beta equals the grid maximum when the bump peak sits on a node") {
    auto g = grid1d(64);
    auto model = bump_model(1.0, 0.0, 1.0, 0.5); // centre at pi, a node of the 64-point torus
    CHECK(model.sup_beta() ==
          doctest::Approx(model.beta_on_grid(*g).cwiseAbs().maxCoeff()).epsilon(1e-14));
}

TEST_CASE("integral_sup_b: analytic values") {
    CHECK(integral_sup_b(algebraic_model(1.0, 2.0), 3.0, kInf) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(integral_sup_b(interval_model(0.3, 0.0, 1.0), 0.0, 1.0) ==
          doctest::Approx(0.3).epsilon(1e-14));
    CHECK(integral_sup_b(gaussian_model(1.0, 1.0), -kInf, kInf) ==
          doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
    // sign enters through |mu|
    CHECK(integral_sup_b(interval_model(-0.25, 0.0, 2.0), -kInf, kInf) ==
          doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("integral_sup_b: adaptive quadrature agrees with the closed forms") {
    // the quadrature path is the independent route; 1e-9 across presets
    auto models = {interval_model(0.3, 0.0, 1.0), algebraic_model(1.0, 2.0),
                   algebraic_model(-0.7, 1.5), gaussian_model(1.0, 1.0),
                   gaussian_model(-0.5, 2.0), bump_model()};
    for (const auto& m : models) {
        for (auto [s, t] : {std::pair{0.0, 1.0}, {-2.0, 3.0}, {1.0, 40.0}}) {
            const double a = integral_sup_b(m, s, t);
            const double q = integral_sup_b_quadrature(m, s, t);
            CHECK(std::abs(a - q) <= 1e-9 * std::max(1.0, std::abs(a)));
        }
    }
    // infinite windows
    CHECK(std::abs(integral_sup_b_quadrature(gaussian_model(1.0, 1.0), -kInf, kInf) -
                   std::sqrt(M_PI)) <= 1e-8);
    CHECK(std::abs(integral_sup_b_quadrature(algebraic_model(1.0, 2.0), 0.0, kInf) - 1.0) <= 1e-6);
}

TEST_CASE("integral_sup_b: additivity") {
    auto models = {interval_model(), algebraic_model(), gaussian_model(), bump_model()};
    for (const auto& m : models) {
        for (auto [s, r, t] : {std::tuple{-1.0, 0.3, 2.0}, {0.0, 0.5, 1.0}, {-5.0, 1.7, 30.0}}) {
            const double whole = integral_sup_b(m, s, t);
            const double split = integral_sup_b(m, s, r) + integral_sup_b(m, r, t);
            CHECK(std::abs(whole - split) <= 1e-10 * std::max(1.0, whole));
        }
    }
}

TEST_CASE("integral_sup_b: tail is non-increasing and vanishes") {
    for (const auto& m : {algebraic_model(), gaussian_model(), interval_model()}) {
        double prev = integral_sup_b(m, 0.0, kInf);
        for (double t : {1.0, 2.0, 4.0, 16.0, 64.0, 512.0}) {
            const double tail = integral_sup_b(m, t, kInf);
            CHECK(tail <= prev + 1e-15);
            prev = tail;
        }
        CHECK(integral_sup_b(m, 1e7, kInf) <= 2e-7);
    }
}

TEST_CASE("constructor rejects non-integrable or malformed profiles") {
    CHECK_THROWS_WITH_AS((void)DissipationModel(AlgebraicProfile{1.0, 1.0}),
                         doctest::Contains("p > 1"), std::invalid_argument);
    CHECK_THROWS_AS((void)DissipationModel(GaussianProfile{1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)DissipationModel(IntervalProfile{1.0, 2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS((void)DissipationModel(IntervalProfile{1.0, 0.0, 1.0}, BumpSpace{0.0, 0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("tabulated profile: interpolation, extrapolation policy, |integral|") {
    TabulatedProfile tab;
    tab.times = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
    tab.values.resize(5);
    tab.values << 1.0, -1.0, 0.5, 0.5, 0.0;

    DissipationModel strict{TimeProfile{tab}};
    CHECK(strict.mu(0.5) == doctest::Approx(0.0));
    CHECK(strict.mu(2.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)strict.mu(5.0), std::domain_error);
    CHECK_THROWS_AS((void)integral_sup_b(strict, 0.0, kInf), std::domain_error);

    tab.zero_outside = true;
    DissipationModel padded{TimeProfile{tab}};
    CHECK(padded.mu(5.0) == 0.0);
    // |piecewise linear| integral against the quadrature route
    const double a = integral_sup_b(padded, 0.0, 4.0);
    const double q = integral_sup_b_quadrature(padded, 0.0, 4.0);
    CHECK(std::abs(a - q) <= 1e-9);
    // segment areas: 0.5 (sign change), 5/12 (sign change), 0.5, 0.25
    CHECK(a == doctest::Approx(0.5 + 5.0 / 12.0 + 0.5 + 0.25).epsilon(1e-12));
}

TEST_CASE("time_reflected flips the profile") {
    auto m = interval_model(0.4, -1.0, 0.5).time_reflected();
    CHECK(m.mu(0.7) == doctest::Approx(0.4));
    CHECK(m.mu(-0.7) == 0.0);
    CHECK(integral_sup_b(m, -0.5, 1.0) == doctest::Approx(0.6).epsilon(1e-14));
    // even profiles are fixed points
    auto g = gaussian_model(1.0, 2.0).time_reflected();
    CHECK(g.mu(0.3) == doctest::Approx(gaussian_model(1.0, 2.0).mu(0.3)));
}

TEST_CASE("support and breakpoints") {
    auto m = interval_model(0.3, 0.25, 1.5);
    CHECK(m.support().first == 0.25);
    CHECK(m.support().second == 1.5);
    CHECK(m.time_breakpoints() == std::vector<double>{0.25, 1.5});
    CHECK(std::isinf(gaussian_model().support().second));
}

TEST_CASE("profile grammar: parse, format, errors") {
    auto m = parse_dissipation("algebraic:p=2,mu0=1*bump:center=3.14,width=1,height=0.5");
    CHECK(m.mu(1.0) == doctest::Approx(0.25));
    CHECK(m.sup_beta() == doctest::Approx(0.5));
    auto round = parse_dissipation(format_dissipation(m));
    CHECK(round.mu(2.0) == doctest::Approx(m.mu(2.0)));
    CHECK(round.sup_beta() == doctest::Approx(m.sup_beta()));

    CHECK_THROWS_WITH_AS((void)parse_dissipation("algebraic:p=1,mu0=1"),
                         doctest::Contains("p > 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_dissipation("sinusoid:mu0=1"),
                         doctest::Contains("unknown time profile"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_dissipation("interval:mu0=1"), doctest::Contains("t0"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_dissipation("gaussian:mu0=1,sigma=1,extra=2"),
                         doctest::Contains("unknown key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS((void)parse_dissipation("gaussian:mu0=abc,sigma=1"),
                         doctest::Contains("cannot parse"), std::invalid_argument);
}
