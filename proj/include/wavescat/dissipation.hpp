// dissipation.hpp — Separable dissipation coefficients b(t,x) = mu(t)*beta(x)
// with exact sup-norms in x and closed-form time-tail integrals. Those tail
// integrals certify every truncation downstream (series remainders, wave
// operator horizons), so they are analytic per variant, not quadrature.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wavescat/field.hpp"

namespace wavescat {

// ---- time profiles ---------------------------------------------------------

/// mu0 on [t0, t1], zero outside. mu0 may be negative.
struct IntervalProfile {
    double mu0 = 0.0, t0 = 0.0, t1 = 0.0;
};

/// mu0 * (1 + |t|)^{-p} with p > 1 (the time-integrability constraint).
/// mu0 may be negative.
struct AlgebraicProfile {
    double mu0 = 0.0, p = 2.0;
};

/// mu0 * exp(-t^2 / sigma^2).
struct GaussianProfile {
    double mu0 = 0.0, sigma = 1.0;
};

/// Piecewise-linear table; queries outside the table throw unless
/// zero_outside is set.
struct TabulatedProfile {
    Eigen::VectorXd times, values;
    bool zero_outside = false;
};

using TimeProfile = std::variant<IntervalProfile, AlgebraicProfile, GaussianProfile, TabulatedProfile>;

// ---- space profiles --------------------------------------------------------

struct ConstantSpace {};

/// Smooth periodic bump: height * prod_a exp(kappa * (cos(2*pi*(x_a - center)/L) - 1)),
/// kappa chosen so the profile matches exp(-|x - center|^2 / width^2) near the
/// center. Supremum is exactly |height| (attained at the center).
struct BumpSpace {
    double center = 0.0, width = 1.0, height = 1.0;
};

/// Values tabulated on the nodes of a specific grid.
struct TabulatedSpace {
    GridPtr grid;
    Eigen::VectorXd values;
};

using SpaceProfile = std::variant<ConstantSpace, BumpSpace, TabulatedSpace>;

// ---- model -----------------------------------------------------------------

class DissipationModel {
  public:
    explicit DissipationModel(TimeProfile time, SpaceProfile space = ConstantSpace{});

    double mu(double t) const;
    double sup_beta() const { return sup_beta_; }
    bool space_constant() const;

    /// beta evaluated on the nodes of a grid (all ones for ConstantSpace).
    Eigen::VectorXd beta_on_grid(const GridSpec& grid) const;

    /// Times where mu is not smooth (quadrature meshes align to these).
    std::vector<double> time_breakpoints() const;

    /// Interval outside which mu vanishes identically; +-inf when unbounded.
    /// Evaluations are trimmed to this support, which makes stabilization
    /// beyond a compact support exact.
    std::pair<double, double> support() const;

    /// Suggested maximum node spacing needed to resolve mu; +inf when
    /// unconstrained.
    double resolution_scale() const;

    /// Profile with mu~(t) = mu(-t).
    DissipationModel time_reflected() const;

    const TimeProfile& time_profile() const { return time_; }
    const SpaceProfile& space_profile() const { return space_; }

  private:
    TimeProfile time_;
    SpaceProfile space_;
    double sup_beta_ = 1.0;
};

/// b(t, .) as a real-valued physical field.
Field eval_b(const DissipationModel& model, double t, const GridPtr& grid);

/// sup_x |b(t, x)| = |mu(t)| * sup|beta|.
double sup_norm_b(const DissipationModel& model, double t);

/// Integral of sup_x |b(tau, x)| over [s, t]; endpoints may be +-infinity.
/// Analytic per variant. Throws std::domain_error for infinite endpoints on
/// tabulated profiles without an extrapolation policy, and
/// std::invalid_argument when s > t.
double integral_sup_b(const DissipationModel& model, double s, double t);

/// Adaptive-Simpson evaluation of the same integral (relative tolerance
/// rel_tol); infinite endpoints handled by expanding windows. Cross-check
/// path for the analytic forms.
double integral_sup_b_quadrature(const DissipationModel& model, double s, double t,
                                 double rel_tol = 1e-10);

// ---- profile grammar -------------------------------------------------------
//
//   time part:   interval:mu0=0.3,t0=0,t1=1
//                algebraic:p=2,mu0=1
//                gaussian:mu0=1,sigma=1
//   space part:  *bump:center=3.14,width=1,height=0.5   (optional suffix)
//
// Example: "algebraic:p=2,mu0=1*bump:center=3,width=1,height=0.5"

DissipationModel parse_dissipation(const std::string& spec);
std::string format_dissipation(const DissipationModel& model);

} // namespace wavescat
