// mode_oracle.hpp — Exact per-mode 2x2 reduction for x-independent
// dissipation. When beta is constant the residual propagator acts
// block-diagonally on each Fourier mode, with the 2x2 twisted coupling
//     R(tau, s; w) = (i mu(tau)/2) [[1, e^{-2i(tau-s)w}], [e^{+2i(tau-s)w}, 1]],
// so dense integration of the mode ODE is an independent oracle against the
// grid path, and the wave operator W+(xi) is defined mode by mode, globally
// in the phase variable.
//
// Determinant identity (Liouville/Abel): tr(i R) = -mu(tau), hence
// det Q(t,s; w) = exp(-int_s^t mu) for every mode.

#pragma once

#include <complex>

#include <Eigen/Dense>

#include "wavescat/dissipation.hpp"

namespace wavescat {

/// One 2x2 mode matrix with the frequency and interval it belongs to.
struct ModeMatrix {
    Eigen::Matrix2cd m;
    double omega = 0.0;
    double s = 0.0, t = 0.0;
};

/// Q(t,s) restricted to the mode of frequency magnitude omega >= 0, by dense
/// fourth-order integration with fixed steps of at most fine_dt (default
/// 1e-3 * min(1, 1/max(omega,1))). Requires an x-independent model.
ModeMatrix mode_q(double omega, double s, double t, const DissipationModel& model,
                  double fine_dt = 0.0);

/// The mode wave operator M Q(T,0) M^{-1} with the horizon T chosen so that
/// tail(T) * e^{int sup|b|} <= tail_tol. Throws when the horizon cap (1e6)
/// cannot meet the tolerance.
ModeMatrix mode_wave_operator(double omega, const DissipationModel& model, double tail_tol,
                              double fine_dt = 0.0);

} // namespace wavescat
