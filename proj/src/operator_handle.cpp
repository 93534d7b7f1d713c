#include "wavescat/operator_handle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/SVD>

#include "wavescat/propagator.hpp"

namespace wavescat {

namespace {

StateVector basis_state(const GridPtr& grid, Eigen::Index stacked_index) {
    StateVector e = make_state(grid, Rep::spectral);
    const Eigen::Index n = grid->size();
    if (stacked_index < n)
        e.c1.values[stacked_index] = 1.0;
    else
        e.c2.values[stacked_index - n] = 1.0;
    return e;
}

StateVector random_probe(const GridPtr& grid, unsigned long seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() {
        // phases straight from the raw generator; no distribution objects, so
        // the stream is identical across standard libraries
        const double u = double(rng() >> 11) * 0x1p-53;
        return std::complex<double>(std::cos(2.0 * M_PI * u), std::sin(2.0 * M_PI * u));
    };
    StateVector v = make_state(grid, Rep::spectral);
    for (Eigen::Index i = 0; i < v.c1.values.size(); ++i) v.c1.values[i] = unit();
    for (Eigen::Index i = 0; i < v.c2.values.size(); ++i) v.c2.values[i] = unit();
    const double n = energy_norm(v);
    return (1.0 / n) * v;
}

} // namespace

Eigen::MatrixXcd assemble_dense(const OperatorHandle& op) {
    const Eigen::Index n = op.grid->size();
    if (n > 1024)
        throw std::invalid_argument("assemble_dense: restricted to grids with total size <= 1024");
    Eigen::MatrixXcd A(2 * n, 2 * n);
    for (Eigen::Index j = 0; j < 2 * n; ++j) {
        const StateVector col = op.forward(basis_state(op.grid, j));
        A.col(j).head(n) = col.c1.values;
        A.col(j).tail(n) = col.c2.values;
    }
    return A;
}

double operator_norm_estimate(const OperatorHandle& op, NormMode mode, const NormOptions& opts) {
    if (mode == NormMode::dense_assembly) {
        const Eigen::MatrixXcd A = assemble_dense(op);
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(A);
        return svd.singularValues()(0);
    }
    if (!op.has_adjoint())
        throw std::invalid_argument("operator_norm_estimate: handle '" + op.name +
                                    "' has no adjoint; power iteration needs one "
                                    "(use dense_assembly on a tiny grid instead)");
    StateVector v = random_probe(op.grid, opts.seed);
    double sigma = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
        const StateVector w = op.forward(v);
        const double nw = energy_norm(w);
        if (nw == 0.0) return 0.0;
        StateVector z = op.adjoint(w);
        const double nz = energy_norm(z);
        const double sigma_new = nw; // ||A v|| with ||v|| = 1
        if (it > 0 && std::abs(sigma_new - sigma) <= opts.rel_change_tol * std::max(sigma_new, 1e-300)) {
            return sigma_new;
        }
        sigma = sigma_new;
        if (nz == 0.0) return sigma;
        v = (1.0 / nz) * z;
    }
    return sigma;
}

OperatorHandle identity_handle(GridPtr grid) {
    OperatorHandle h;
    h.name = "identity";
    h.grid = grid;
    h.forward = [](const StateVector& U) { return U; };
    h.adjoint = h.forward;
    return h;
}

OperatorHandle free_flow_handle(GridPtr grid, double t, double s) {
    OperatorHandle h;
    h.name = "free_flow";
    h.grid = grid;
    h.forward = [t, s](const StateVector& U) { return free_flow(U, t, s); };
    h.adjoint = [t, s](const StateVector& U) { return free_flow(U, s, t); };
    return h;
}

} // namespace wavescat
