#include "wavescat/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace wavescat {

namespace {

void require_spectral(const StateVector& U, const char* who) {
    if (U.rep() != Rep::spectral)
        throw std::invalid_argument(std::string(who) + ": state must be in spectral representation");
}

} // namespace

StateVector to_diagonal(const StateVector& U) {
    StateVector out = U;
    out.c1.values = 0.5 * (U.c1.values + U.c2.values);
    out.c2.values = 0.5 * (-U.c1.values + U.c2.values);
    return out;
}

StateVector from_diagonal(const StateVector& U) {
    StateVector out = U;
    out.c1.values = U.c1.values - U.c2.values;
    out.c2.values = U.c1.values + U.c2.values;
    return out;
}

StateVector free_flow(StateVector U, double t, double s) {
    require_spectral(U, "free_flow");
    const double dt = t - s;
    if (dt == 0.0) return U;
    const auto& w = U.grid()->abs_freq;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double theta = dt * w[i];
        const std::complex<double> phase(std::cos(theta), std::sin(theta));
        U.c1.values[i] *= phase;
        U.c2.values[i] *= std::conj(phase);
    }
    return U;
}

StateVector apply_coupling_value(const StateVector& U, double mu_value,
                                 const Eigen::VectorXd& beta) {
    StateVector out = U;
    if (mu_value == 0.0) {
        out.c1.values.setZero();
        out.c2.values.setZero();
        return out;
    }
    const std::complex<double> ihalf(0.0, 0.5 * mu_value);
    if (beta.size() == 0) { // constant space profile: scalar multiplier in either rep
        out.c1.values = ihalf * (U.c1.values + U.c2.values);
        out.c2.values = out.c1.values;
        return out;
    }
    // pointwise multiply in physical space: w = (i b / 2)(U1 + U2)
    Field sum = U.c1;
    sum.values += U.c2.values;
    sum = to_physical(std::move(sum));
    sum.values.array() *= ihalf * beta.array().cast<std::complex<double>>();
    if (U.rep() == Rep::spectral) sum = to_spectral(std::move(sum));
    out.c1 = sum;
    out.c2 = std::move(sum);
    return out;
}

StateVector apply_coupling(const StateVector& U, double t, const DissipationModel& model) {
    return apply_coupling_value(U, model.mu(t),
                                model.space_constant() ? Eigen::VectorXd()
                                                       : model.beta_on_grid(*U.grid()));
}

StateVector apply_coupling(const StateVector& U, double t, const DissipationModel& model,
                           const Eigen::VectorXd& beta) {
    return apply_coupling_value(U, model.mu(t), beta);
}

StateVector apply_twisted_coupling_value(const StateVector& U, double mu_value, double t,
                                         double s, const Eigen::VectorXd& beta) {
    require_spectral(U, "apply_twisted_coupling");
    StateVector out = U;
    if (mu_value == 0.0) {
        out.c1.values.setZero();
        out.c2.values.setZero();
        return out;
    }
    if (beta.size() == 0) {
        // mode-wise: (i mu/2) [[1, e^{-2i dt w}], [e^{+2i dt w}, 1]]
        const double dt = t - s;
        const std::complex<double> factor(0.0, 0.5 * mu_value);
        const auto& w = U.grid()->abs_freq;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            const double theta = 2.0 * dt * w[i];
            const std::complex<double> phase(std::cos(theta), std::sin(theta));
            const std::complex<double> a = U.c1.values[i];
            const std::complex<double> b = U.c2.values[i];
            out.c1.values[i] = factor * (a + std::conj(phase) * b);
            out.c2.values[i] = factor * (phase * a + b);
        }
        return out;
    }
    out = free_flow(std::move(out), t, s);
    out = apply_coupling_value(out, mu_value, beta);
    out = free_flow(std::move(out), s, t);
    return out;
}

StateVector apply_twisted_coupling(const StateVector& U, double t, double s,
                                   const DissipationModel& model) {
    return apply_twisted_coupling_value(U, model.mu(t), t, s,
                                        model.space_constant() ? Eigen::VectorXd()
                                                               : model.beta_on_grid(*U.grid()));
}

StateVector apply_twisted_coupling(const StateVector& U, double t, double s,
                                   const DissipationModel& model, const Eigen::VectorXd& beta) {
    return apply_twisted_coupling_value(U, model.mu(t), t, s, beta);
}

StateVector free_rotation(StateVector U, double dt) {
    require_spectral(U, "free_rotation");
    if (dt == 0.0) return U;
    const auto& w = U.grid()->abs_freq;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double theta = dt * w[i];
        const double c = std::cos(theta);
        const std::complex<double> is(0.0, std::sin(theta));
        const std::complex<double> a = U.c1.values[i];
        const std::complex<double> b = U.c2.values[i];
        U.c1.values[i] = c * a + is * b;
        U.c2.values[i] = is * a + c * b;
    }
    return U;
}

std::pair<Field, Field> free_wave_evolve(const Field& u1, const Field& u2, double t) {
    StateVector U = lift_data(u1, u2);
    U = free_rotation(std::move(U), t);
    return restore_data(U);
}

} // namespace wavescat
