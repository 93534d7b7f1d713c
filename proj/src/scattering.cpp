#include "wavescat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wavescat/propagator.hpp"

namespace wavescat::scattering {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

double choose_horizon(const DissipationModel& model, double state_norm, double tol, double cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("choose_horizon: tol must be > 0");
    const double sup_hi = model.support().second;
    if (std::isfinite(sup_hi)) return std::max(0.0, sup_hi); // tail is exactly zero beyond
    const double growth = std::exp(integral_sup_b(model, 0.0, kInf));
    double horizon = 1.0;
    while (state_norm * integral_sup_b(model, horizon, kInf) * growth > tol) {
        horizon *= 2.0;
        if (horizon > cap)
            throw std::runtime_error(
                "choose_horizon: horizon cap exceeded before the tolerance was met "
                "(slowly decaying profile at a tight tolerance)");
    }
    return horizon;
}

StateVector wave_operator_apply(WaveSign sign, const StateVector& V, const DissipationModel& model,
                                const WaveOptions& opts, WaveMethod method) {
    const DissipationModel eff = sign == WaveSign::plus ? model : model.time_reflected();
    StateVector W = to_spectral(V);
    const double horizon = opts.horizon_override > 0.0
                               ? opts.horizon_override
                               : choose_horizon(eff, energy_norm(W), opts.tol, opts.horizon_cap);
    if (method == WaveMethod::via_q) {
        StateVector D = to_diagonal(W);
        D = dyson::q_apply(0.0, horizon, D, eff, opts.eval).state;
        return from_diagonal(D);
    }
    // via_group: U0(-T) U(T,0) through the independent fourth-order evaluator
    dyson::EvalOptions ode_opts = opts.eval;
    ode_opts.method = dyson::QMethod::ode;
    W = dyson::propagate_state(0.0, horizon, W, eff, ode_opts);
    return free_rotation(std::move(W), -horizon);
}

StateVector wave_operator_inverse_apply(WaveSign sign, const StateVector& V,
                                        const DissipationModel& model, const WaveOptions& opts) {
    const DissipationModel eff = sign == WaveSign::plus ? model : model.time_reflected();
    StateVector W = to_spectral(V);
    const double horizon = opts.horizon_override > 0.0
                               ? opts.horizon_override
                               : choose_horizon(eff, energy_norm(W), opts.tol, opts.horizon_cap);
    StateVector D = to_diagonal(W);
    D = dyson::q_apply_inverse(0.0, horizon, D, eff, opts.eval);
    return from_diagonal(D);
}

StateVector scattering_apply(const StateVector& V, const DissipationModel& model,
                             const WaveOptions& opts) {
    StateVector W = wave_operator_inverse_apply(WaveSign::minus, V, model, opts);
    return wave_operator_apply(WaveSign::plus, W, model, opts);
}

StateVector scattering_inverse_apply(const StateVector& V, const DissipationModel& model,
                                     const WaveOptions& opts) {
    StateVector W = wave_operator_inverse_apply(WaveSign::plus, V, model, opts);
    return wave_operator_apply(WaveSign::minus, W, model, opts);
}

std::vector<RateRow> rate_sweep(const Field& u1, const Field& u2, const DissipationModel& model,
                                std::vector<double> times, const RateOptions& opts) {
    if (times.empty()) return {};
    std::sort(times.begin(), times.end());
    if (!(times.front() > 0.0)) throw std::invalid_argument("rate_sweep: times must be positive");

    const StateVector data = lift_data(u1, u2);
    const double data_norm = energy_norm(data);
    const StateVector V = to_diagonal(data);

    // reference horizon: far enough into the tail that the finite-horizon
    // wave operator is a small relative perturbation of every sweep error
    const double t_max = times.back();
    const double tail_max = integral_sup_b(model, t_max, kInf);
    double t_ref = t_max;
    if (tail_max > 0.0) {
        const double target = opts.ref_frac * tail_max;
        t_ref = std::max(t_max, 1.0);
        while (integral_sup_b(model, t_ref, kInf) > target) {
            t_ref *= 2.0;
            if (t_ref > opts.horizon_cap)
                throw std::runtime_error("rate_sweep: reference horizon cap exceeded");
        }
        // tighten the doubling overshoot; the tail is monotone
        double lo = std::max(t_max, t_ref / 2.0);
        for (int i = 0; i < 8; ++i) {
            const double mid = 0.5 * (lo + t_ref);
            (integral_sup_b(model, mid, kInf) > target ? lo : t_ref) = mid;
        }
    }

    // incremental twisted evolution X(tau) = E0(tau,0) Q(tau,0) V between
    // checkpoints; Q(tau,0) V is recovered by unwinding the free phase
    std::vector<double> checkpoints = times;
    checkpoints.push_back(t_ref);
    std::vector<StateVector> q_at(checkpoints.size(), V);
    StateVector X = V;
    double prev = 0.0;
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        const double tau = checkpoints[i];
        if (tau > prev) {
            X = dyson::q_apply(prev, tau, X, model, opts.eval).state;
            X = free_flow(std::move(X), tau, prev);
        }
        q_at[i] = free_flow(X, 0.0, tau);
        prev = tau;
    }

    const StateVector& q_ref = q_at.back();
    std::vector<RateRow> rows;
    rows.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        RateRow row;
        row.t = times[i];
        // both evolutions share the unitary free factor, so the energy gap is
        // sqrt(2) * || (Q(t,0) - Q(T_ref,0)) V ||  (the sqrt(2) is ||M||)
        row.err = std::sqrt(2.0) * energy_norm(q_at[i] - q_ref);
        row.tail = integral_sup_b(model, times[i], kInf);
        row.ratio = row.tail > 0.0 ? row.err / (data_norm * row.tail) : 0.0;
        rows.push_back(row);
    }
    return rows;
}

// ---- handles -----------------------------------------------------------------

OperatorHandle q_handle(GridPtr grid, const DissipationModel& model, double s, double t,
                        const dyson::EvalOptions& eval) {
    OperatorHandle h;
    h.name = "q";
    h.grid = grid;
    h.forward = [=](const StateVector& V) { return dyson::q_apply(s, t, V, model, eval).state; };
    h.adjoint = [=](const StateVector& V) { return dyson::q_apply_adjoint(s, t, V, model, eval); };
    return h;
}

OperatorHandle q_minus_identity_handle(GridPtr grid, const DissipationModel& model, double s,
                                       double t, const dyson::EvalOptions& eval) {
    OperatorHandle h;
    h.name = "q_minus_identity";
    h.grid = grid;
    h.forward = [=](const StateVector& V) {
        StateVector r = dyson::q_apply(s, t, V, model, eval).state;
        r -= to_spectral(V);
        return r;
    };
    h.adjoint = [=](const StateVector& V) {
        StateVector r = dyson::q_apply_adjoint(s, t, V, model, eval);
        r -= to_spectral(V);
        return r;
    };
    return h;
}

OperatorHandle propagator_handle(GridPtr grid, const DissipationModel& model, double t0, double t1,
                                 const dyson::EvalOptions& eval) {
    OperatorHandle h;
    h.name = "propagator";
    h.grid = grid;
    h.forward = [=](const StateVector& V) { return dyson::propagate_state(t0, t1, V, model, eval); };
    // U(t1,t0)^* = M Q(t1,t0)^* E0(t0,t1) M^{-1}
    h.adjoint = [=](const StateVector& V) {
        StateVector D = to_diagonal(to_spectral(V));
        D = free_flow(std::move(D), t0, t1);
        D = dyson::q_apply_adjoint(t0, t1, D, model, eval);
        return from_diagonal(D);
    };
    return h;
}

OperatorHandle wave_operator_handle(GridPtr grid, WaveSign sign, const DissipationModel& model,
                                    const WaveOptions& opts) {
    const DissipationModel eff = sign == WaveSign::plus ? model : model.time_reflected();
    const double horizon = opts.horizon_override > 0.0
                               ? opts.horizon_override
                               : choose_horizon(eff, 1.0, opts.tol, opts.horizon_cap);
    WaveOptions pinned = opts;
    pinned.horizon_override = horizon; // one fixed horizon: the handle is linear
    OperatorHandle h;
    h.name = sign == WaveSign::plus ? "wave_operator_plus" : "wave_operator_minus";
    h.grid = grid;
    h.horizon = horizon;
    h.certified_bound =
        integral_sup_b(eff, horizon, kInf) * std::exp(integral_sup_b(eff, 0.0, kInf));
    h.forward = [=](const StateVector& V) { return wave_operator_apply(sign, V, model, pinned); };
    h.adjoint = [=](const StateVector& V) {
        StateVector D = to_diagonal(to_spectral(V));
        D = dyson::q_apply_adjoint(0.0, horizon, D, eff, pinned.eval);
        return from_diagonal(D);
    };
    return h;
}

OperatorHandle wave_operator_inverse_handle(GridPtr grid, WaveSign sign,
                                            const DissipationModel& model,
                                            const WaveOptions& opts) {
    const DissipationModel eff = sign == WaveSign::plus ? model : model.time_reflected();
    const double horizon = opts.horizon_override > 0.0
                               ? opts.horizon_override
                               : choose_horizon(eff, 1.0, opts.tol, opts.horizon_cap);
    WaveOptions pinned = opts;
    pinned.horizon_override = horizon;
    OperatorHandle h;
    h.name = sign == WaveSign::plus ? "wave_operator_plus_inverse" : "wave_operator_minus_inverse";
    h.grid = grid;
    h.horizon = horizon;
    h.certified_bound =
        integral_sup_b(eff, horizon, kInf) * std::exp(integral_sup_b(eff, 0.0, kInf));
    h.forward = [=](const StateVector& V) {
        return wave_operator_inverse_apply(sign, V, model, pinned);
    };
    h.adjoint = [=](const StateVector& V) {
        StateVector D = to_diagonal(to_spectral(V));
        D = dyson::q_apply_inverse_adjoint(0.0, horizon, D, eff, pinned.eval);
        return from_diagonal(D);
    };
    return h;
}

} // namespace wavescat::scattering
