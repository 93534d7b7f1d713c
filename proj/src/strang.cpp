#include "wavescat/strang.hpp"

#include <cmath>
#include <stdexcept>

#include "wavescat/propagator.hpp"

namespace wavescat {

StateVector strang_evolve_state(double t0, double t1, StateVector U,
                                const DissipationModel& model, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("strang_evolve_state: dt must be positive");
    if (!(t1 >= t0)) throw std::invalid_argument("strang_evolve_state: requires t1 >= t0");
    if (t1 == t0) return U;
    const double steps_real = (t1 - t0) / dt;
    const long steps = std::lround(steps_real);
    if (steps < 1 || std::abs(steps_real - double(steps)) > 1e-9 * std::max(1.0, steps_real))
        throw std::invalid_argument("strang_evolve_state: dt must divide t1 - t0 into an "
                                    "integer number of steps");

    U = to_spectral(std::move(U));
    const bool xconst = model.space_constant();
    const Eigen::VectorXd beta = xconst ? Eigen::VectorXd() : model.beta_on_grid(*U.grid());

    for (long n = 0; n < steps; ++n) {
        const double tau = t0 + dt * n;
        U = free_rotation(std::move(U), 0.5 * dt);
        const double mu_mid = model.mu(tau + 0.5 * dt);
        if (mu_mid != 0.0) {
            if (xconst) {
                U.c2.values *= std::exp(-mu_mid * dt);
            } else {
                Field v = to_physical(std::move(U.c2));
                v.values.array() *=
                    (-mu_mid * dt * beta.array()).exp().cast<std::complex<double>>();
                U.c2 = to_spectral(std::move(v));
            }
        }
        U = free_rotation(std::move(U), 0.5 * dt);
    }
    return U;
}

std::pair<Field, Field> strang_solve(double t0, double t1, const Field& u1, const Field& u2,
                                     const DissipationModel& model, double dt) {
    StateVector U = lift_data(u1, u2);
    U = strang_evolve_state(t0, t1, std::move(U), model, dt);
    return restore_data(U);
}

} // namespace wavescat
