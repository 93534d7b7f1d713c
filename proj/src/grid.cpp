#include "wavescat/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wavescat {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

GridPtr make_grid(int dimension, int points_per_axis, double period) {
    if (dimension < 1 || dimension > 3)
        throw std::invalid_argument("grid dimension must be 1, 2, or 3; got " +
                                    std::to_string(dimension));
    if (!is_power_of_two(points_per_axis))
        throw std::invalid_argument("points per axis must be a power of two; got " +
                                    std::to_string(points_per_axis));
    if (!(period > 0.0))
        throw std::invalid_argument("grid period must be positive");

    auto g = std::make_shared<GridSpec>();
    g->dimension = dimension;
    g->points_per_axis = points_per_axis;
    g->period = period;

    const int n = points_per_axis;
    const double dxi = 2.0 * M_PI / period;
    g->axis_freq.resize(n);
    g->axis_coord.resize(n);
    for (int k = 0; k < n; ++k) {
        const int signed_k = (k < n / 2) ? k : k - n;
        g->axis_freq[k] = dxi * signed_k;
        g->axis_coord[k] = period * k / n;
    }

    Eigen::Index total = 1;
    for (int a = 0; a < dimension; ++a) total *= n;
    g->abs_freq.resize(total);
    for (Eigen::Index flat = 0; flat < total; ++flat) {
        auto idx = g->unflatten(flat);
        double s = 0.0;
        for (int a = 0; a < dimension; ++a) {
            const double xi = g->axis_freq[idx[a]];
            s += xi * xi;
        }
        g->abs_freq[flat] = std::sqrt(s);
    }
    return g;
}

} // namespace wavescat
