#include "wavescat/mode_oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wavescat {

namespace {

using Eigen::Matrix2cd;
using cd = std::complex<double>;

double mu_one_sided(const DissipationModel& model, double tau, double lo, double hi) {
    if (tau == lo && lo < hi) tau = std::nextafter(lo, hi);
    else if (tau == hi && lo < hi) tau = std::nextafter(hi, lo);
    return model.mu(tau);
}

// (i mu / 2) [[1, e^{-2i dt w}], [e^{+2i dt w}, 1]]
Matrix2cd twisted_mode(double mu, double tau, double s, double omega) {
    const double theta = 2.0 * (tau - s) * omega;
    const cd phase(std::cos(theta), std::sin(theta));
    const cd f(0.0, 0.5 * mu);
    Matrix2cd r;
    r << f, f * std::conj(phase), f * phase, f;
    return r;
}

Matrix2cd mode_free_phase(double dt, double omega) {
    const double theta = dt * omega;
    const cd phase(std::cos(theta), std::sin(theta));
    Matrix2cd e;
    e << phase, 0.0, 0.0, std::conj(phase);
    return e;
}

void require_x_independent(const DissipationModel& model, const char* who) {
    if (!model.space_constant())
        throw std::invalid_argument(std::string(who) +
                                    ": requires an x-independent model (constant space profile); "
                                    "use the grid path for x-dependent coefficients");
}

} // namespace

ModeMatrix mode_q(double omega, double s, double t, const DissipationModel& model,
                  double fine_dt) {
    require_x_independent(model, "mode_q");
    if (!(omega >= 0.0)) throw std::invalid_argument("mode_q: omega must be >= 0");
    if (!(t >= s)) throw std::invalid_argument("mode_q: requires s <= t");
    if (fine_dt <= 0.0) fine_dt = 1e-3 * std::min(1.0, 1.0 / std::max(omega, 1.0));

    ModeMatrix out;
    out.omega = omega;
    out.s = s;
    out.t = t;
    out.m.setIdentity();
    if (t == s) return out;

    // trim to the support; the trimmed stretches contribute exact free phases
    auto [lo_sup, hi_sup] = model.support();
    const double s1 = std::max(s, lo_sup);
    const double t1 = std::min(t, hi_sup);
    if (!(t1 > s1)) return out;

    std::vector<double> bounds{s1};
    for (double bp : model.time_breakpoints())
        if (bp > s1 && bp < t1) bounds.push_back(bp);
    bounds.push_back(t1);
    std::sort(bounds.begin(), bounds.end());

    Matrix2cd Q = Matrix2cd::Identity();
    const cd I(0.0, 1.0);
    for (std::size_t seg = 0; seg + 1 < bounds.size(); ++seg) {
        const double a = bounds[seg], b = bounds[seg + 1];
        if (integral_sup_b(model, a, b) == 0.0) continue;
        const long n = std::max(1L, std::lround(std::ceil((b - a) / fine_dt)));
        const double h = (b - a) / double(n);
        auto rhs = [&](double tau, const Matrix2cd& q) -> Matrix2cd {
            return I * (twisted_mode(mu_one_sided(model, tau, a, b), tau, s, omega) * q);
        };
        for (long j = 0; j < n; ++j) {
            const double tau = a + h * j;
            const Matrix2cd k1 = rhs(tau, Q);
            const Matrix2cd k2 = rhs(tau + 0.5 * h, Q + 0.5 * h * k1);
            const Matrix2cd k3 = rhs(tau + 0.5 * h, Q + 0.5 * h * k2);
            const Matrix2cd k4 = rhs(tau + h, Q + h * k3);
            Q += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    // Q(t,s) = E0(s,s') Q(t',s') E0(s',s) at the mode level
    out.m = mode_free_phase(s - s1, omega) * Q * mode_free_phase(s1 - s, omega);
    return out;
}

ModeMatrix mode_wave_operator(double omega, const DissipationModel& model, double tail_tol,
                              double fine_dt) {
    require_x_independent(model, "mode_wave_operator");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("mode_wave_operator: tail_tol must be > 0");

    const double growth = std::exp(integral_sup_b(model, 0.0, std::numeric_limits<double>::infinity()));
    double horizon = std::max(0.0, model.support().second);
    if (std::isinf(horizon)) {
        horizon = 1.0;
        constexpr double kCap = 1e6;
        while (integral_sup_b(model, horizon, std::numeric_limits<double>::infinity()) * growth >
               tail_tol) {
            horizon *= 2.0;
            if (horizon > kCap)
                throw std::runtime_error(
                    "mode_wave_operator: tail tolerance unattainable within the horizon cap");
        }
    }

    ModeMatrix q = mode_q(omega, 0.0, horizon, model, fine_dt);
    Eigen::Matrix2cd M, Minv;
    M << 1.0, -1.0, 1.0, 1.0;
    Minv << 0.5, 0.5, -0.5, 0.5;
    ModeMatrix out;
    out.omega = omega;
    out.s = 0.0;
    out.t = horizon;
    out.m = M * q.m * Minv;
    return out;
}

} // namespace wavescat
