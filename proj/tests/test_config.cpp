#include <doctest.h>

#include "test_helpers.hpp"
#include "wavescat/config.hpp"

using namespace wt;

TEST_CASE("parse_config: defaults fill in, values validate") {
    auto r = parse_config("# empty config\n");
    REQUIRE(r.ok());
    CHECK(r.config->dimension == 1);
    CHECK(r.config->points_per_axis == 256);
    CHECK(r.config->seed == 1);

    auto full = parse_config("grid = 2d:64\n"
                             "profile = gaussian:mu0=1,sigma=1\n"
                             "tol = 1e-9\n"
                             "horizon_tol = 1e-7\n"
                             "mesh_density = 512\n"
                             "seed = 42\n"
                             "times = 4,8,16\n"
                             "omegas = 0,1,2\n");
    REQUIRE(full.ok());
    CHECK(full.config->dimension == 2);
    CHECK(full.config->points_per_axis == 64);
    CHECK(full.config->tol == 1e-9);
    CHECK(full.config->times == std::vector<double>{4.0, 8.0, 16.0});
}

TEST_CASE("parse_config: each failure is reported by name") {
    auto r = parse_config("grid = 4d:64\n"
                          "profile = algebraic:p=1,mu0=1\n"
                          "tol = -3\n"
                          "mystery = 1\n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.errors.size() == 4);
    CHECK(r.errors[0].find("grid") != std::string::npos);
    CHECK(r.errors[1].find("p > 1") != std::string::npos);
    CHECK(r.errors[2].find("tol") != std::string::npos);
    CHECK(r.errors[3].find("unknown key 'mystery'") != std::string::npos);
}

TEST_CASE("parse_config: grid tokens") {
    RunConfig c;
    std::string err;
    CHECK(parse_grid_token("1d:256", c, err));
    CHECK(c.points_per_axis == 256);
    CHECK(parse_grid_token("3d:16:L=4.0", c, err));
    CHECK(c.dimension == 3);
    CHECK(c.period == 4.0);
    CHECK_FALSE(parse_grid_token("2d:63", c, err)); // not a power of two
    CHECK(err.find("power of two") != std::string::npos);
}

TEST_CASE("config round-trips through serialize + parse") {
    RunConfig c;
    c.dimension = 2;
    c.points_per_axis = 32;
    c.period = 5.5;
    c.profile = "algebraic:p=2,mu0=-0.5*bump:center=1,width=0.7,height=0.3";
    c.tol = 2.5e-11;
    c.seed = 99;
    c.times = {1.0, 2.5};
    auto r = parse_config(serialize_config(c));
    REQUIRE(r.ok());
    CHECK(r.config->dimension == c.dimension);
    CHECK(r.config->points_per_axis == c.points_per_axis);
    CHECK(r.config->period == c.period);
    CHECK(r.config->profile == c.profile);
    CHECK(r.config->tol == c.tol);
    CHECK(r.config->seed == c.seed);
    CHECK(r.config->times == c.times);
}

TEST_CASE("csv_number: full-precision scientific notation") {
    CHECK(csv_number(0.0) == "0.0000000000000000e+00");
    CHECK(csv_number(1.0) == "1.0000000000000000e+00");
    // 17 significant digits reproduce the double exactly
    const double x = M_PI * 1e-7;
    double back = 0.0;
    auto s = csv_number(x);
    std::sscanf(s.c_str(), "%lf", &back);
    CHECK(back == x);
}

TEST_CASE("random data is bitwise deterministic per seed") {
    auto g = grid1d(64);
    StateVector a = random_state(g, 7), b = random_state(g, 7);
    CHECK((a.c1.values - b.c1.values).norm() == 0.0);
    CHECK((a.c2.values - b.c2.values).norm() == 0.0);
    StateVector c = random_state(g, 8);
    CHECK(state_distance(a, c) > 1e-3);
    CHECK(energy_norm(a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.c1.values[0] == std::complex<double>(0.0, 0.0)); // mean-zero first slot
}
