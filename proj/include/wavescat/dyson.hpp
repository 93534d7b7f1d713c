// dyson.hpp — The interaction-picture residual propagator Q(t,s).
//
// Q is defined by the time-ordered (Peano–Baker) series
//     Q(t,s) = I + sum_{k>=1} i^k int_s^t R(t1,s) int_s^{t1} ... dt_k ... dt_1
// and equivalently by the non-autonomous ODE  dQ/dtau = i R(tau,s) Q,
// Q(s,s) = I. Both realizations are implemented: the series with cumulative
// quadrature over a shared time mesh (a Picard iteration, O(K*M) work) and a
// classical fourth-order one-step method. Their agreement is a test, not an
// assumption.
//
// Truncation of the series is certified, never heuristic: term k is bounded
// by c^k/k! with c = int_s^t sup_x|b|, so the discarded tail is below
// series_tail_bound(K+1, c) * ||V||.

#pragma once

#include <utility>
#include <vector>

#include "wavescat/dissipation.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/state.hpp"

namespace wavescat::dyson {

enum class QuadRule { trapezoid, simpson };

/// Quadrature / time-stepping mesh on [s, t]. Nodes are strictly increasing
/// and piecewise uniform; segment boundaries sit on the profile's
/// breakpoints, so integrands are smooth inside every segment (one-sided
/// sampling handles the breakpoint nodes themselves).
struct TimeMesh {
    double s = 0.0, t = 0.0;
    std::vector<double> nodes;            // tau_0 = s < ... < tau_M = t
    std::vector<std::size_t> seg_bounds;  // indices of segment boundaries, first 0, last M
    QuadRule rule = QuadRule::simpson;

    std::size_t panels() const { return nodes.empty() ? 0 : nodes.size() - 1; }

    /// Uniform mesh with the given panel count (Simpson requires it even).
    static TimeMesh uniform(double s, double t, int panel_count, QuadRule rule);

    /// Mesh with >= density panels per unit time, segment boundaries on the
    /// profile's breakpoints, and the density doubled until the profile's
    /// resolution scale is met.
    static TimeMesh for_model(const DissipationModel& model, double s, double t, double density,
                              QuadRule rule = QuadRule::simpson);
};

/// Output of one series evaluation.
struct SeriesResult {
    StateVector state;
    int terms_used = 0;              // K: highest series term summed
    double remainder = 0.0;          // certified bound on the discarded tail (absolute)
    std::vector<double> term_norms;  // ||V_k(t)||, k = 1..K
    bool hit_kmax = false;           // stopped by kmax before the tolerance
};

/// sum_{j>=k} c^j / j!  (k = 0 gives e^c). Stable for small and large c.
double series_tail_bound(int k, double c);
double series_tail_bound(int k, double s, double t, const DissipationModel& model);

/// Truncated Peano–Baker series applied to V over the mesh. Stops at the
/// first K with series_tail_bound(K+1, c) * ||V|| <= tol, or at kmax (the
/// result is then flagged but still usable together with its remainder).
SeriesResult peano_baker_apply(double s, double t, const StateVector& V,
                               const DissipationModel& model, const TimeMesh& mesh, double tol,
                               int kmax);

/// Q(t,s) V by direct fourth-order integration of dw = i R w on the mesh.
StateVector q_ode_apply(double s, double t, const StateVector& V, const DissipationModel& model,
                        const TimeMesh& mesh);

/// Q(t,s)^{-1} V via backward integration of the same ODE (the inverse
/// transpose satisfies the companion equation D_t Q^{-T} + R^T Q^{-T} = 0;
/// running the flow backwards realizes the same operator matrix-free).
StateVector q_inverse_apply(double s, double t, const StateVector& V,
                            const DissipationModel& model, const TimeMesh& mesh);

/// Q(t,s)^* V. Since (iR)^* = iR, the adjoint is the backward flow of the
/// sign-flipped generator; used by operator-norm estimation.
StateVector q_adjoint_apply(double s, double t, const StateVector& V,
                            const DissipationModel& model, const TimeMesh& mesh);

/// (Q(t,s)^{-1})^* V = (Q^*)^{-1} V: forward flow of the sign-flipped
/// generator.
StateVector q_inverse_adjoint_apply(double s, double t, const StateVector& V,
                                    const DissipationModel& model, const TimeMesh& mesh);

// ---- composed evaluation over long horizons ---------------------------------
//
// Long intervals are evaluated chunk by chunk through the exact composition
//     Q(t,s) = E0(s,r) Q(t,r) E0(r,s) Q(r,s),
// which keeps the tabulation memory bounded and the per-chunk series short.
// The evaluation window is also trimmed to the profile's support (Q is
// exactly the identity where b vanishes), so stabilization past a compact
// support holds to machine precision.

enum class QMethod { series, ode };

struct EvalOptions {
    double tol = 1e-10;       // certified series tolerance (absolute, scaled by ||V||)
    int kmax = 48;
    double density = 256.0;   // mesh panels per unit time
    QuadRule rule = QuadRule::simpson;
    double max_chunk_nodes = 8192.0;
    QMethod method = QMethod::series;
};

struct QApplyResult {
    StateVector state;
    int terms_used = 0;      // max over chunks
    double remainder = 0.0;  // accumulated certified bound (series method)
    bool hit_kmax = false;
};

QApplyResult q_apply(double s, double t, const StateVector& V, const DissipationModel& model,
                     const EvalOptions& opts);
StateVector q_apply_inverse(double s, double t, const StateVector& V,
                            const DissipationModel& model, const EvalOptions& opts);
StateVector q_apply_adjoint(double s, double t, const StateVector& V,
                            const DissipationModel& model, const EvalOptions& opts);
StateVector q_apply_inverse_adjoint(double s, double t, const StateVector& V,
                                    const DissipationModel& model, const EvalOptions& opts);

/// Full propagator U(t,s) = M E0(t,s) Q(t,s) M^{-1} on a lifted spectral
/// state. Energy norm is bounded by e^{int sup|b|} times the input norm.
StateVector propagate_state(double s, double t, const StateVector& U,
                            const DissipationModel& model, const EvalOptions& opts);

/// Physical-data propagator: (u(s), D_t u(s)) -> (u(t), D_t u(t)).
std::pair<Field, Field> propagate_physical(double s, double t, const Field& u1, const Field& u2,
                                           const DissipationModel& model, const EvalOptions& opts);

} // namespace wavescat::dyson
