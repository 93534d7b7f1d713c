// operator_handle.hpp — Named matrix-free linear actions on states, with
// optional adjoints, plus operator-norm estimation: power iteration on
// adjoint∘op for large grids, dense assembly + SVD on tiny ones.

#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "wavescat/state.hpp"

namespace wavescat {

struct OperatorHandle {
    std::string name;
    GridPtr grid;
    std::function<StateVector(const StateVector&)> forward;
    std::function<StateVector(const StateVector&)> adjoint; // empty when unavailable
    double horizon = 0.0;          // metadata: truncation horizon, when applicable
    double certified_bound = 0.0;  // metadata: certified truncation bound, when applicable

    bool has_adjoint() const { return static_cast<bool>(adjoint); }
};

enum class NormMode { power_iteration, dense_assembly };

struct NormOptions {
    double rel_change_tol = 1e-8;
    int max_iterations = 500;
    unsigned long seed = 20250901ul;
};

/// Stacked dense matrix of the action ([c1; c2] ordering), probed column by
/// column with basis states. Restricted to grids with total size <= 1024.
Eigen::MatrixXcd assemble_dense(const OperatorHandle& op);

/// l2 -> l2 operator norm estimate. power_iteration runs on adjoint∘forward
/// with a relative-change stop; dense_assembly is exact to numerical rank
/// (largest singular value).
double operator_norm_estimate(const OperatorHandle& op, NormMode mode,
                              const NormOptions& opts = {});

// Elementary handles.
OperatorHandle identity_handle(GridPtr grid);
OperatorHandle free_flow_handle(GridPtr grid, double t, double s);

} // namespace wavescat
