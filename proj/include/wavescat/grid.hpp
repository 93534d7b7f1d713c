// grid.hpp — Periodic spectral grid and its frequency tables.

#pragma once

#include <array>
#include <memory>

#include <Eigen/Dense>

namespace wavescat {

/// Uniform periodic grid on the torus (0, L]^n, n in {1,2,3}, with
/// points_per_axis a power of two. Frequencies follow the usual DFT index
/// order: xi_k = (2*pi/L) * k with k in {0, 1, ..., N/2-1, -N/2, ..., -1}.
///
/// Grid values are flattened with axis 0 fastest:
///   flat = i0 + N*(i1 + N*i2).
struct GridSpec {
    int dimension = 1;
    int points_per_axis = 0;
    double period = 0.0;

    Eigen::VectorXd axis_freq;   // signed frequency per axis index (size N)
    Eigen::VectorXd axis_coord;  // physical coordinate per axis index (size N)
    Eigen::VectorXd abs_freq;    // |xi| per flattened node (size N^n)

    Eigen::Index size() const { return abs_freq.size(); }

    std::array<int, 3> unflatten(Eigen::Index flat) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = 0; a < dimension; ++a) {
            idx[a] = static_cast<int>(flat % points_per_axis);
            flat /= points_per_axis;
        }
        return idx;
    }

    bool same_layout(const GridSpec& other) const {
        return dimension == other.dimension &&
               points_per_axis == other.points_per_axis &&
               period == other.period;
    }
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Builds a grid; throws std::invalid_argument for unsupported dimension,
/// non-power-of-two N, or non-positive period.
GridPtr make_grid(int dimension, int points_per_axis, double period);

} // namespace wavescat
