#include "wavescat/dissipation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wavescat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Antiderivative of |mu0| (1+|tau|)^{-p} vanishing at 0, valid for all signs
// of tau by odd extension.
double algebraic_primitive(double tau, double abs_mu0, double p) {
    if (std::isinf(tau)) return (tau > 0 ? 1.0 : -1.0) * abs_mu0 / (p - 1.0);
    const double a = std::abs(tau);
    const double val = abs_mu0 * (1.0 - std::pow(1.0 + a, 1.0 - p)) / (p - 1.0);
    return tau >= 0 ? val : -val;
}

double gaussian_primitive(double tau, double abs_mu0, double sigma) {
    if (std::isinf(tau)) return (tau > 0 ? 1.0 : -1.0) * abs_mu0 * sigma * std::sqrt(M_PI) / 2.0;
    return abs_mu0 * sigma * std::sqrt(M_PI) / 2.0 * std::erf(tau / sigma);
}

// Exact integral of |linear interpolant| over one table segment clipped to
// [lo, hi] (lo, hi inside the segment).
double abs_linear_integral(double ta, double va, double tb, double vb, double lo, double hi) {
    if (hi <= lo) return 0.0;
    auto value_at = [&](double t) { return va + (vb - va) * (t - ta) / (tb - ta); };
    const double vlo = value_at(lo), vhi = value_at(hi);
    if (vlo == 0.0 || vhi == 0.0 || (vlo > 0) == (vhi > 0))
        return std::abs(vlo + vhi) * (hi - lo) / 2.0;
    // sign change: split at the root
    const double r = lo + (hi - lo) * vlo / (vlo - vhi);
    return (std::abs(vlo) * (r - lo) + std::abs(vhi) * (hi - r)) / 2.0;
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace

DissipationModel::DissipationModel(TimeProfile time, SpaceProfile space)
    : time_(std::move(time)), space_(std::move(space)) {
    if (const auto* a = std::get_if<AlgebraicProfile>(&time_)) {
        if (!(a->p > 1.0))
            throw std::invalid_argument(
                "algebraic profile requires p > 1 (time-integrable dissipation); got p = " +
                std::to_string(a->p));
    }
    if (const auto* g = std::get_if<GaussianProfile>(&time_)) {
        if (!(g->sigma > 0.0)) throw std::invalid_argument("gaussian profile requires sigma > 0");
    }
    if (const auto* iv = std::get_if<IntervalProfile>(&time_)) {
        if (!(iv->t1 >= iv->t0))
            throw std::invalid_argument("interval profile requires t1 >= t0");
    }
    if (const auto* tab = std::get_if<TabulatedProfile>(&time_)) {
        if (tab->times.size() != tab->values.size() || tab->times.size() < 2)
            throw std::invalid_argument("tabulated profile needs matching times/values, >= 2 knots");
        for (Eigen::Index i = 1; i < tab->times.size(); ++i)
            if (!(tab->times[i] > tab->times[i - 1]))
                throw std::invalid_argument("tabulated profile times must be strictly increasing");
    }
    if (const auto* bump = std::get_if<BumpSpace>(&space_)) {
        if (!(bump->width > 0.0)) throw std::invalid_argument("bump profile requires width > 0");
        sup_beta_ = std::abs(bump->height);
    } else if (const auto* tabs = std::get_if<TabulatedSpace>(&space_)) {
        if (!tabs->grid || tabs->values.size() != tabs->grid->size())
            throw std::invalid_argument("tabulated space profile must match its grid");
        sup_beta_ = tabs->values.cwiseAbs().maxCoeff();
    } else {
        sup_beta_ = 1.0;
    }
}

double DissipationModel::mu(double t) const {
    return std::visit(
        [&](const auto& tp) -> double {
            using T = std::decay_t<decltype(tp)>;
            if constexpr (std::is_same_v<T, IntervalProfile>) {
                return (t >= tp.t0 && t <= tp.t1) ? tp.mu0 : 0.0;
            } else if constexpr (std::is_same_v<T, AlgebraicProfile>) {
                return tp.mu0 * std::pow(1.0 + std::abs(t), -tp.p);
            } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                return tp.mu0 * std::exp(-t * t / (tp.sigma * tp.sigma));
            } else {
                const auto& times = tp.times;
                if (t < times[0] || t > times[times.size() - 1]) {
                    if (tp.zero_outside) return 0.0;
                    throw std::domain_error("tabulated profile queried at t = " + std::to_string(t) +
                                            " outside its table and no extrapolation policy is set");
                }
                const double* begin = times.data();
                const double* end = begin + times.size();
                auto it = std::upper_bound(begin, end, t);
                Eigen::Index hi = std::min<Eigen::Index>(it - begin, times.size() - 1);
                Eigen::Index lo = hi - 1;
                const double w = (t - times[lo]) / (times[hi] - times[lo]);
                return tp.values[lo] * (1.0 - w) + tp.values[hi] * w;
            }
        },
        time_);
}

bool DissipationModel::space_constant() const {
    return std::holds_alternative<ConstantSpace>(space_);
}

Eigen::VectorXd DissipationModel::beta_on_grid(const GridSpec& grid) const {
    Eigen::VectorXd beta(grid.size());
    if (space_constant()) {
        beta.setOnes();
        return beta;
    }
    if (const auto* tabs = std::get_if<TabulatedSpace>(&space_)) {
        if (!tabs->grid->same_layout(grid))
            throw std::invalid_argument("tabulated space profile queried on a different grid");
        return tabs->values;
    }
    const auto& bump = std::get<BumpSpace>(space_);
    const double L = grid.period;
    const double kappa = 2.0 * std::pow(L / (2.0 * M_PI * bump.width), 2);
    for (Eigen::Index flat = 0; flat < grid.size(); ++flat) {
        auto idx = grid.unflatten(flat);
        double expo = 0.0;
        for (int a = 0; a < grid.dimension; ++a) {
            const double theta = 2.0 * M_PI * (grid.axis_coord[idx[a]] - bump.center) / L;
            expo += kappa * (std::cos(theta) - 1.0);
        }
        beta[flat] = bump.height * std::exp(expo);
    }
    return beta;
}

std::vector<double> DissipationModel::time_breakpoints() const {
    if (const auto* iv = std::get_if<IntervalProfile>(&time_)) return {iv->t0, iv->t1};
    if (const auto* tab = std::get_if<TabulatedProfile>(&time_))
        return {tab->times.data(), tab->times.data() + tab->times.size()};
    return {};
}

std::pair<double, double> DissipationModel::support() const {
    if (const auto* iv = std::get_if<IntervalProfile>(&time_)) return {iv->t0, iv->t1};
    if (const auto* tab = std::get_if<TabulatedProfile>(&time_)) {
        if (tab->zero_outside) return {tab->times[0], tab->times[tab->times.size() - 1]};
        return {-kInf, kInf};
    }
    return {-kInf, kInf};
}

double DissipationModel::resolution_scale() const {
    return std::visit(
        [](const auto& tp) -> double {
            using T = std::decay_t<decltype(tp)>;
            if constexpr (std::is_same_v<T, GaussianProfile>) {
                return tp.sigma / 16.0;
            } else if constexpr (std::is_same_v<T, AlgebraicProfile>) {
                return 1.0 / (4.0 * tp.p);
            } else if constexpr (std::is_same_v<T, TabulatedProfile>) {
                double h = kInf;
                for (Eigen::Index i = 1; i < tp.times.size(); ++i)
                    h = std::min(h, tp.times[i] - tp.times[i - 1]);
                return h;
            } else {
                return kInf; // constant inside its support; breakpoints do the rest
            }
        },
        time_);
}

DissipationModel DissipationModel::time_reflected() const {
    TimeProfile reflected = std::visit(
        [](const auto& tp) -> TimeProfile {
            using T = std::decay_t<decltype(tp)>;
            if constexpr (std::is_same_v<T, IntervalProfile>) {
                return IntervalProfile{tp.mu0, -tp.t1, -tp.t0};
            } else if constexpr (std::is_same_v<T, TabulatedProfile>) {
                TabulatedProfile r;
                r.zero_outside = tp.zero_outside;
                r.times = -tp.times.reverse();
                r.values = tp.values.reverse();
                return r;
            } else {
                return tp; // algebraic and gaussian are even in t
            }
        },
        time_);
    return DissipationModel(std::move(reflected), space_);
}

Field eval_b(const DissipationModel& model, double t, const GridPtr& grid) {
    Field f = make_field(grid, Rep::physical);
    const double m = model.mu(t);
    if (m == 0.0) return f;
    f.values = (m * model.beta_on_grid(*grid)).cast<std::complex<double>>();
    return f;
}

double sup_norm_b(const DissipationModel& model, double t) {
    return std::abs(model.mu(t)) * model.sup_beta();
}

double integral_sup_b(const DissipationModel& model, double s, double t) {
    if (s > t) throw std::invalid_argument("integral_sup_b: requires s <= t");
    if (s == t) return 0.0;
    const double sup = model.sup_beta();
    return sup * std::visit(
                     [&](const auto& tp) -> double {
                         using T = std::decay_t<decltype(tp)>;
                         if constexpr (std::is_same_v<T, IntervalProfile>) {
                             const double lo = std::max(s, tp.t0), hi = std::min(t, tp.t1);
                             return hi > lo ? std::abs(tp.mu0) * (hi - lo) : 0.0;
                         } else if constexpr (std::is_same_v<T, AlgebraicProfile>) {
                             const double a = std::abs(tp.mu0);
                             return algebraic_primitive(t, a, tp.p) - algebraic_primitive(s, a, tp.p);
                         } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                             const double a = std::abs(tp.mu0);
                             return gaussian_primitive(t, a, tp.sigma) -
                                    gaussian_primitive(s, a, tp.sigma);
                         } else {
                             const auto& times = tp.times;
                             const double table_lo = times[0], table_hi = times[times.size() - 1];
                             if ((std::isinf(s) || std::isinf(t) || s < table_lo || t > table_hi) &&
                                 !tp.zero_outside)
                                 throw std::domain_error(
                                     "tabulated profile has no integrable closed-form tail; "
                                     "set an extrapolation policy or use finite endpoints inside "
                                     "the table");
                             double acc = 0.0;
                             for (Eigen::Index i = 0; i + 1 < times.size(); ++i) {
                                 const double lo = std::max(s, times[i]);
                                 const double hi = std::min(t, times[i + 1]);
                                 if (hi > lo)
                                     acc += abs_linear_integral(times[i], tp.values[i], times[i + 1],
                                                                tp.values[i + 1], lo, hi);
                             }
                             return acc;
                         }
                     },
                     model.time_profile());
}

double integral_sup_b_quadrature(const DissipationModel& model, double s, double t,
                                 double rel_tol) {
    if (s > t) throw std::invalid_argument("integral_sup_b_quadrature: requires s <= t");
    auto f = [&](double tau) { return sup_norm_b(model, tau); };
    const bool inf_lo = std::isinf(s), inf_hi = std::isinf(t);
    if (!inf_lo && !inf_hi) {
        const double scale = std::max(1.0, std::abs(f(0.5 * (s + t))) * (t - s));
        return adaptive_simpson(f, s, t, rel_tol * scale);
    }
    // expanding windows for decaying profiles
    double lo = inf_lo ? -8.0 : s;
    double hi = inf_hi ? 8.0 : t;
    if (!inf_lo) hi = std::max(hi, s + 8.0);
    if (!inf_hi) lo = std::min(lo, t - 8.0);
    double total = integral_sup_b_quadrature(model, lo, hi, rel_tol);
    for (int round = 0; round < 60; ++round) {
        double inc = 0.0;
        if (inf_lo) {
            inc += integral_sup_b_quadrature(model, 2.0 * lo, lo, rel_tol);
        }
        if (inf_hi) {
            inc += integral_sup_b_quadrature(model, hi, 2.0 * hi, rel_tol);
        }
        total += inc;
        if (inf_lo) lo *= 2.0;
        if (inf_hi) hi *= 2.0;
        if (inc <= rel_tol * std::max(total, 1e-300)) break;
    }
    return total;
}

// ---- grammar ----------------------------------------------------------------

namespace {

double parse_number(const std::string& token, const std::string& key) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("profile key '" + key + "': cannot parse number '" + token + "'");
    return v;
}

std::map<std::string, double> parse_kv(const std::string& body, const std::string& which) {
    std::map<std::string, double> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("profile part '" + which + "': expected key=value, got '" +
                                        item + "'");
        const std::string key = item.substr(0, eq);
        kv[key] = parse_number(item.substr(eq + 1), key);
    }
    return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key, const std::string& which) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("profile '" + which + "': missing required key '" + key + "'");
    const double v = it->second;
    kv.erase(it);
    return v;
}

void expect_empty(const std::map<std::string, double>& kv, const std::string& which) {
    if (!kv.empty())
        throw std::invalid_argument("profile '" + which + "': unknown key '" + kv.begin()->first +
                                    "'");
}

std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

DissipationModel parse_dissipation(const std::string& spec) {
    const auto star = spec.find('*');
    const std::string time_part = spec.substr(0, star);
    const std::string space_part = (star == std::string::npos) ? "" : spec.substr(star + 1);

    auto colon = time_part.find(':');
    const std::string name = time_part.substr(0, colon);
    auto kv = parse_kv(colon == std::string::npos ? "" : time_part.substr(colon + 1), name);

    TimeProfile tp;
    if (name == "interval") {
        IntervalProfile p;
        p.mu0 = take(kv, "mu0", name);
        p.t0 = take(kv, "t0", name);
        p.t1 = take(kv, "t1", name);
        tp = p;
    } else if (name == "algebraic") {
        AlgebraicProfile p;
        p.p = take(kv, "p", name);
        p.mu0 = take(kv, "mu0", name);
        tp = p;
    } else if (name == "gaussian") {
        GaussianProfile p;
        p.mu0 = take(kv, "mu0", name);
        p.sigma = take(kv, "sigma", name);
        tp = p;
    } else {
        throw std::invalid_argument("unknown time profile '" + name +
                                    "' (expected interval, algebraic, or gaussian)");
    }
    expect_empty(kv, name);

    SpaceProfile sp = ConstantSpace{};
    if (!space_part.empty()) {
        auto scolon = space_part.find(':');
        const std::string sname = space_part.substr(0, scolon);
        if (sname != "bump")
            throw std::invalid_argument("unknown space profile '" + sname + "' (expected bump)");
        auto skv =
            parse_kv(scolon == std::string::npos ? "" : space_part.substr(scolon + 1), sname);
        BumpSpace b;
        b.center = take(skv, "center", sname);
        b.width = take(skv, "width", sname);
        b.height = take(skv, "height", sname);
        expect_empty(skv, sname);
        sp = b;
    }
    return DissipationModel(std::move(tp), std::move(sp));
}

std::string format_dissipation(const DissipationModel& model) {
    std::string out = std::visit(
        [](const auto& tp) -> std::string {
            using T = std::decay_t<decltype(tp)>;
            if constexpr (std::is_same_v<T, IntervalProfile>) {
                return "interval:mu0=" + format_number(tp.mu0) + ",t0=" + format_number(tp.t0) +
                       ",t1=" + format_number(tp.t1);
            } else if constexpr (std::is_same_v<T, AlgebraicProfile>) {
                return "algebraic:p=" + format_number(tp.p) + ",mu0=" + format_number(tp.mu0);
            } else if constexpr (std::is_same_v<T, GaussianProfile>) {
                return "gaussian:mu0=" + format_number(tp.mu0) +
                       ",sigma=" + format_number(tp.sigma);
            } else {
                return "tabulated:<api-only>";
            }
        },
        model.time_profile());
    if (const auto* b = std::get_if<BumpSpace>(&model.space_profile())) {
        out += "*bump:center=" + format_number(b->center) + ",width=" + format_number(b->width) +
               ",height=" + format_number(b->height);
    }
    return out;
}

} // namespace wavescat
