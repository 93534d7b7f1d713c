// scattering.hpp — Møller wave operators, their inverses, the scattering
// operator, and the quantitative convergence-rate experiment.
//
// The forward wave operator is the norm limit of M Q(t,0) M^{-1} as
// t -> infinity; the tail estimate
//     ||Q(inf,0) - Q(T,0)|| <= e^{int_0^inf sup|b|} * int_T^inf sup|b|
// turns the limit into a computable stopping rule, so the truncation at the
// chosen horizon is certified, never eyeballed. The backward-sign operator
// reuses the forward machinery on the time-reflected profile mu(-t).

#pragma once

#include <vector>

#include "wavescat/dissipation.hpp"
#include "wavescat/dyson.hpp"
#include "wavescat/operator_handle.hpp"
#include "wavescat/state.hpp"

namespace wavescat::scattering {

enum class WaveSign { plus, minus };
enum class WaveMethod { via_q, via_group };

struct WaveOptions {
    double tol = 1e-8;             // horizon tolerance: ||V|| * tail(T) * e^{c_inf} <= tol
    double horizon_cap = 1e6;
    double horizon_override = 0.0; // > 0 pins the horizon directly
    dyson::EvalOptions eval;
};

/// Smallest horizon satisfying the tail stopping rule for a state of the
/// given norm; the end of a compact support is used directly. Throws when the
/// cap is exceeded before the tolerance is met.
double choose_horizon(const DissipationModel& model, double state_norm, double tol, double cap);

/// W± V on a lifted spectral state. via_q evaluates M Q(T,0) M^{-1} V with
/// the certified series; via_group composes the full propagator (fourth-order
/// ODE evaluator) with the backward free group, so the two methods share no
/// time-integration path.
StateVector wave_operator_apply(WaveSign sign, const StateVector& V, const DissipationModel& model,
                                const WaveOptions& opts, WaveMethod method = WaveMethod::via_q);

/// W±^{-1} V via backward integration at the matching horizon.
StateVector wave_operator_inverse_apply(WaveSign sign, const StateVector& V,
                                        const DissipationModel& model, const WaveOptions& opts);

/// S V = W+ (W-^{-1} V).
StateVector scattering_apply(const StateVector& V, const DissipationModel& model,
                             const WaveOptions& opts);

/// Reversed composition W- (W+^{-1} V); inverts scattering_apply.
StateVector scattering_inverse_apply(const StateVector& V, const DissipationModel& model,
                                     const WaveOptions& opts);

// ---- rate experiment ---------------------------------------------------------

struct RateRow {
    double t = 0.0;     // comparison time
    double err = 0.0;   // energy-norm gap between damped and free evolutions
    double tail = 0.0;  // int_t^inf sup|b|
    double ratio = 0.0; // err / (||data||_E * tail), 0 when tail vanishes
};

struct RateOptions {
    double ref_frac = 0.03;  // reference horizon: tail(T_ref) <= ref_frac * tail(t_max)
    double horizon_cap = 1e6;
    dyson::EvalOptions eval;
};

/// For each time t: evolve the data with the damped equation, evolve the
/// W+-mapped data with the free group, and record the energy-norm gap
/// together with the tail integral that bounds it.
std::vector<RateRow> rate_sweep(const Field& u1, const Field& u2, const DissipationModel& model,
                                std::vector<double> times, const RateOptions& opts);

// ---- composite handles (forward + adjoint, for norm estimation) --------------

OperatorHandle q_handle(GridPtr grid, const DissipationModel& model, double s, double t,
                        const dyson::EvalOptions& eval);
OperatorHandle q_minus_identity_handle(GridPtr grid, const DissipationModel& model, double s,
                                       double t, const dyson::EvalOptions& eval);
/// Full propagator U(t1,t0) = M E0 Q M^{-1} on lifted states.
OperatorHandle propagator_handle(GridPtr grid, const DissipationModel& model, double t0, double t1,
                                 const dyson::EvalOptions& eval);
OperatorHandle wave_operator_handle(GridPtr grid, WaveSign sign, const DissipationModel& model,
                                    const WaveOptions& opts);
OperatorHandle wave_operator_inverse_handle(GridPtr grid, WaveSign sign,
                                            const DissipationModel& model,
                                            const WaveOptions& opts);

} // namespace wavescat::scattering
