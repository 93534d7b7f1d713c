// propagator.hpp — Exact building blocks of the scattering construction.
//
// The first-order system for U = (|D| u^, D_t u^) is diagonalized by the
// constant matrix
//     M = [[1, -1], [1, 1]],   M^{-1} = 1/2 [[1, 1], [-1, 1]],
// turning the principal part into diag(|D|, -|D|) plus the zero-order
// coupling B(t,x) = (i b(t,x)/2) [[1, 1], [1, 1]]. The free flow
// E0(t,s) = exp(i (t-s) diag(|D|, -|D|)) is unitary, and the
// interaction-picture coupling is R(t,s) = E0(s,t) B(t,x) E0(t,s).

#pragma once

#include "wavescat/dissipation.hpp"
#include "wavescat/state.hpp"

namespace wavescat {

/// U0 = M^{-1} U (into the diagonal picture).
StateVector to_diagonal(const StateVector& U);

/// U = M U0 (back from the diagonal picture). Exact inverse of to_diagonal.
StateVector from_diagonal(const StateVector& U);

/// Free flow E0(t,s): mode-wise phases e^{+i(t-s)|xi|} on the first component
/// and e^{-i(t-s)|xi|} on the second. Requires spectral representation.
/// Unitary; E0(s,s) = identity.
StateVector free_flow(StateVector U, double t, double s);

/// Zero-order coupling B(t,x) U: both output components equal
/// (i b(t,x)/2) (U1 + U2). Closed form of M^{-1} diag(0, i b) M. Works in
/// either representation; when the space profile is constant no transform is
/// needed.
StateVector apply_coupling(const StateVector& U, double t, const DissipationModel& model);

/// Same with a pre-evaluated beta table (avoids re-evaluating beta per call;
/// beta must come from beta_on_grid of the state's grid).
StateVector apply_coupling(const StateVector& U, double t, const DissipationModel& model,
                           const Eigen::VectorXd& beta);

/// Interaction-picture coupling R(t,s) U = E0(s,t) B(t,x) E0(t,s) U.
/// Requires spectral representation. ||R(t,s) U|| <= sup_x|b(t,.)| ||U||.
StateVector apply_twisted_coupling(const StateVector& U, double t, double s,
                                   const DissipationModel& model);
StateVector apply_twisted_coupling(const StateVector& U, double t, double s,
                                   const DissipationModel& model, const Eigen::VectorXd& beta);

/// Value-based variants used by the time integrators: mu is supplied by the
/// caller (sampled one-sidedly at profile discontinuities) instead of being
/// read off the model at t. An empty beta means the constant space profile.
StateVector apply_coupling_value(const StateVector& U, double mu_value,
                                 const Eigen::VectorXd& beta);
StateVector apply_twisted_coupling_value(const StateVector& U, double mu_value, double t,
                                         double s, const Eigen::VectorXd& beta);

/// Free wave group in the lifted picture, M E0(dt) M^{-1}: mode-wise rotation
/// [[cos(dt |xi|), i sin(dt |xi|)], [i sin(dt |xi|), cos(dt |xi|)]].
/// Requires spectral representation. Unitary.
StateVector free_rotation(StateVector U, double dt);

/// Solution operator U0(t) of the free wave equation on physical data
/// (u, D_t u): restore . M . E0(t,0) . M^{-1} . lift. Energy-preserving on
/// mean-zero data; group law U0(t) U0(s) = U0(t+s).
std::pair<Field, Field> free_wave_evolve(const Field& u1, const Field& u2, double t);

} // namespace wavescat
