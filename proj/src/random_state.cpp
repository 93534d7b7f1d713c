#include "wavescat/random_state.hpp"

#include <cmath>
#include <random>

namespace wavescat {

namespace {

std::complex<double> random_unit(std::mt19937_64& rng) {
    const double u = double(rng() >> 11) * 0x1p-53;
    return {std::cos(2.0 * M_PI * u), std::sin(2.0 * M_PI * u)};
}

double envelope(double abs_xi) { return abs_xi > 1.0 ? 1.0 / (abs_xi * abs_xi) : 1.0; }

} // namespace

StateVector random_state(const GridPtr& grid, unsigned long seed) {
    std::mt19937_64 rng(seed);
    StateVector U = make_state(grid, Rep::spectral);
    const auto& w = grid->abs_freq;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        U.c1.values[i] = (w[i] == 0.0) ? 0.0 : envelope(w[i]) * random_unit(rng);
    for (Eigen::Index i = 0; i < w.size(); ++i) U.c2.values[i] = envelope(w[i]) * random_unit(rng);
    const double n = energy_norm(U);
    return (1.0 / n) * U;
}

Field random_field(const GridPtr& grid, unsigned long seed, bool mean_zero) {
    std::mt19937_64 rng(seed);
    Field f = make_field(grid, Rep::spectral);
    const auto& w = grid->abs_freq;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        f.values[i] = (w[i] == 0.0 && mean_zero) ? 0.0 : envelope(w[i]) * random_unit(rng);
    f.values /= f.values.norm();
    return to_physical(std::move(f));
}

} // namespace wavescat
