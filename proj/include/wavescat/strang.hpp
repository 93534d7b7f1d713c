// strang.hpp — Independent direct solver for the damped system by Strang
// splitting: exact free half-flow, exact pointwise damping flow, free
// half-flow. Second order in dt; both substeps are contractions when b >= 0.
// This is an oracle path: it shares no time-integration machinery with the
// series construction.

#pragma once

#include "wavescat/dissipation.hpp"
#include "wavescat/state.hpp"

namespace wavescat {

/// One full trajectory on the lifted spectral state U = (|D| u^, D_t u^).
/// dt must divide t1 - t0 into an integer number of steps. The damping
/// substep multiplies the second component by exp(-b(tau_mid, x) dt)
/// pointwise (exact for time-frozen b, midpoint-sampled in time).
StateVector strang_evolve_state(double t0, double t1, StateVector U,
                                const DissipationModel& model, double dt);

/// Physical-data wrapper: (u, D_t u) at t0 -> (u, D_t u) at t1.
std::pair<Field, Field> strang_solve(double t0, double t1, const Field& u1, const Field& u2,
                                     const DissipationModel& model, double dt);

} // namespace wavescat
