#include "wavescat/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wavescat::dyson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// mu sampled one-sidedly: breakpoint nodes take the limit from inside the
// segment, so piecewise-defined profiles integrate with their correct
// one-sided values.
double mu_in_segment(const DissipationModel& model, double tau, double lo, double hi) {
    if (tau == lo && lo < hi) tau = std::nextafter(lo, hi);
    else if (tau == hi && lo < hi) tau = std::nextafter(hi, lo);
    return model.mu(tau);
}

// e^{+2 i (tau_j - s) |xi|} per mesh node, for the x-independent fast path of
// the series inner loop. Built by phase recurrence within uniform segments,
// re-anchored with fresh sincos every 64 nodes so the drift stays below 1e-13.
std::vector<Eigen::VectorXcd> twisted_phase_table(const TimeMesh& mesh, const Eigen::VectorXd& w,
                                                  double s) {
    std::vector<Eigen::VectorXcd> table(mesh.nodes.size());
    const Eigen::Index n = w.size();
    Eigen::VectorXcd cur(n), step(n);
    auto fill_direct = [&](Eigen::VectorXcd& dst, double delta) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double theta = delta * w[i];
            dst[i] = std::complex<double>(std::cos(theta), std::sin(theta));
        }
    };
    for (std::size_t seg = 0; seg + 1 < mesh.seg_bounds.size(); ++seg) {
        const std::size_t j0 = mesh.seg_bounds[seg], j1 = mesh.seg_bounds[seg + 1];
        fill_direct(step, 2.0 * (mesh.nodes[j0 + 1] - mesh.nodes[j0]));
        for (std::size_t j = j0; j <= j1; ++j) {
            if ((j - j0) % 64 == 0)
                fill_direct(cur, 2.0 * (mesh.nodes[j] - s));
            else
                cur = cur.cwiseProduct(step);
            table[j] = cur;
        }
    }
    return table;
}

// Compensated cumulative sum over two-component states, with all work
// buffers preallocated: the series inner loop runs allocation-free.
struct KahanState {
    Eigen::VectorXcd sum1, comp1, sum2, comp2, y, t;
    explicit KahanState(Eigen::Index n)
        : sum1(Eigen::VectorXcd::Zero(n)), comp1(Eigen::VectorXcd::Zero(n)),
          sum2(Eigen::VectorXcd::Zero(n)), comp2(Eigen::VectorXcd::Zero(n)), y(n), t(n) {}

    void accumulate(Eigen::VectorXcd& sum, Eigen::VectorXcd& comp) {
        // y already holds the (compensated) contribution
        y -= comp;
        t = sum + y;
        comp = (t - sum) - y;
        sum.swap(t);
    }
    // three-point contribution with weights (w0, w1, w2)
    void add_panel(double w0, const StateVector& f0, double w1, const StateVector& f1, double w2,
                   const StateVector& f2) {
        y = w0 * f0.c1.values + w1 * f1.c1.values + w2 * f2.c1.values;
        accumulate(sum1, comp1);
        y = w0 * f0.c2.values + w1 * f1.c2.values + w2 * f2.c2.values;
        accumulate(sum2, comp2);
    }
    void store_scaled(std::complex<double> a, StateVector& dst) const {
        dst.c1.values = a * sum1;
        dst.c2.values = a * sum2;
    }
};

} // namespace

// ---- TimeMesh ----------------------------------------------------------------

TimeMesh TimeMesh::uniform(double s, double t, int panel_count, QuadRule rule) {
    if (!(t >= s)) throw std::invalid_argument("TimeMesh: requires t >= s");
    if (panel_count < 1) throw std::invalid_argument("TimeMesh: needs at least one panel");
    if (rule == QuadRule::simpson && panel_count % 2 != 0)
        throw std::invalid_argument("TimeMesh: Simpson rule requires an even panel count");
    TimeMesh m;
    m.s = s;
    m.t = t;
    m.rule = rule;
    m.nodes.resize(panel_count + 1);
    for (int i = 0; i <= panel_count; ++i) m.nodes[i] = s + (t - s) * i / panel_count;
    m.nodes.back() = t;
    m.seg_bounds = {0, static_cast<std::size_t>(panel_count)};
    return m;
}

TimeMesh TimeMesh::for_model(const DissipationModel& model, double s, double t, double density,
                             QuadRule rule) {
    if (!(t >= s)) throw std::invalid_argument("TimeMesh: requires t >= s");
    double density_eff = std::max(density, 1.0);
    const double res = model.resolution_scale();
    while (std::isfinite(res) && 1.0 / density_eff > res && density_eff < 1e9) density_eff *= 2.0;

    std::vector<double> bounds{s};
    for (double bp : model.time_breakpoints())
        if (bp > s && bp < t) bounds.push_back(bp);
    bounds.push_back(t);
    std::sort(bounds.begin(), bounds.end());
    // drop degenerate segments
    std::vector<double> clean{bounds.front()};
    for (double b : bounds)
        if (b - clean.back() > 1e-12 * std::max(1.0, std::abs(t - s))) clean.push_back(b);
    if (clean.back() != t) clean.back() = t;

    TimeMesh m;
    m.s = s;
    m.t = t;
    m.rule = rule;
    m.nodes.push_back(s);
    m.seg_bounds.push_back(0);
    for (std::size_t k = 0; k + 1 < clean.size(); ++k) {
        const double a = clean[k], b = clean[k + 1];
        int n = static_cast<int>(std::ceil((b - a) * density_eff));
        n = std::max(n, rule == QuadRule::simpson ? 2 : 1);
        if (rule == QuadRule::simpson && n % 2 != 0) ++n;
        for (int i = 1; i <= n; ++i) m.nodes.push_back(a + (b - a) * i / n);
        m.nodes.back() = b;
        m.seg_bounds.push_back(m.nodes.size() - 1);
    }
    return m;
}

// ---- tail bound --------------------------------------------------------------

double series_tail_bound(int k, double c) {
    if (k < 0) throw std::invalid_argument("series_tail_bound: k must be >= 0");
    if (c <= 0.0) return k == 0 ? 1.0 : 0.0;
    double term = 1.0;
    for (int j = 1; j <= k; ++j) term *= c / j; // c^k / k!
    double sum = term, add = term;
    for (int j = k + 1; j <= k + 500; ++j) {
        add *= c / j;
        sum += add;
        if (add <= 1e-20 * sum) break;
    }
    return sum;
}

double series_tail_bound(int k, double s, double t, const DissipationModel& model) {
    return series_tail_bound(k, integral_sup_b(model, s, t));
}

// ---- Peano–Baker series ------------------------------------------------------

SeriesResult peano_baker_apply(double s, double t, const StateVector& V,
                               const DissipationModel& model, const TimeMesh& mesh, double tol,
                               int kmax) {
    if (std::abs(mesh.s - s) > 1e-12 * std::max(1.0, std::abs(s)) ||
        std::abs(mesh.t - t) > 1e-12 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument("peano_baker_apply: mesh does not span [s, t]");
    if (!(tol >= 0.0)) throw std::invalid_argument("peano_baker_apply: tol must be >= 0");
    if (kmax < 0) throw std::invalid_argument("peano_baker_apply: kmax must be >= 0");

    SeriesResult res;
    res.state = to_spectral(V);
    const double c_total = integral_sup_b(model, s, t);
    if (c_total == 0.0 || kmax == 0 || mesh.panels() == 0) {
        res.hit_kmax = (kmax == 0 && c_total > 0.0);
        res.remainder = res.hit_kmax ? series_tail_bound(1, c_total) * energy_norm(res.state) : 0.0;
        return res;
    }

    const StateVector V0 = res.state;
    const double norm_v = energy_norm(V0);
    const Eigen::VectorXd beta =
        model.space_constant() ? Eigen::VectorXd() : model.beta_on_grid(*V0.grid());

    const std::size_t M = mesh.panels();
    // node arrays hold V_{k-1} and V_k; values are filled lazily (k = 1 reads
    // V0 directly), so constructing them moves no data
    StateVector shell;
    shell.c1.grid = V0.c1.grid;
    shell.c1.rep = Rep::spectral;
    shell.c2 = shell.c1;
    std::vector<StateVector> prev(M + 1, shell);
    std::vector<StateVector> next(M + 1, shell);
    const std::complex<double> I(0.0, 1.0);

    // cached mode phases for the x-independent path (memory-capped)
    const Eigen::Index n_modes = V0.c1.values.size();
    std::vector<Eigen::VectorXcd> phases;
    if (model.space_constant() && double(M + 1) * double(n_modes) <= 8e6)
        phases = twisted_phase_table(mesh, V0.grid()->abs_freq, s);

    auto twist_into = [&](StateVector& out, const StateVector& W, std::size_t j, double seg_lo,
                          double seg_hi) {
        const double tau = mesh.nodes[j];
        const double mu = mu_in_segment(model, tau, seg_lo, seg_hi);
        if (phases.empty() || mu == 0.0) {
            out = apply_twisted_coupling_value(W, mu, tau, s, beta);
            return;
        }
        const std::complex<double> f(0.0, 0.5 * mu);
        const auto& p = phases[j];
        out.c1.values = f * (W.c1.values + p.conjugate().cwiseProduct(W.c2.values));
        out.c2.values = f * (p.cwiseProduct(W.c1.values) + W.c2.values);
    };

    StateVector g0 = V0, g1 = V0, g2 = V0; // integrand slots, reused
    KahanState acc(n_modes);
    for (int k = 1; k <= kmax; ++k) {
        acc.sum1.setZero();
        acc.comp1.setZero();
        acc.sum2.setZero();
        acc.comp2.setZero();
        acc.store_scaled(I, next[0]); // zero
        for (std::size_t seg = 0; seg + 1 < mesh.seg_bounds.size(); ++seg) {
            const std::size_t j0 = mesh.seg_bounds[seg], j1 = mesh.seg_bounds[seg + 1];
            const double lo = mesh.nodes[j0], hi = mesh.nodes[j1];
            const double h = mesh.nodes[j0 + 1] - mesh.nodes[j0]; // uniform inside the segment
            auto source = [&](std::size_t j) -> const StateVector& {
                return k == 1 ? V0 : prev[j];
            };
            if (mesh.rule == QuadRule::simpson) {
                twist_into(g0, source(j0), j0, lo, hi);
                for (std::size_t j = j0; j + 2 <= j1; j += 2) {
                    twist_into(g1, source(j + 1), j + 1, lo, hi);
                    twist_into(g2, source(j + 2), j + 2, lo, hi);
                    // cumulative Simpson: integrate the panel parabola over each half
                    acc.add_panel(5.0 * h / 12.0, g0, 8.0 * h / 12.0, g1, -h / 12.0, g2);
                    acc.store_scaled(I, next[j + 1]);
                    acc.add_panel(-h / 12.0, g0, 8.0 * h / 12.0, g1, 5.0 * h / 12.0, g2);
                    acc.store_scaled(I, next[j + 2]);
                    std::swap(g0, g2);
                }
            } else {
                twist_into(g0, source(j0), j0, lo, hi);
                for (std::size_t j = j0; j + 1 <= j1; ++j) {
                    twist_into(g1, source(j + 1), j + 1, lo, hi);
                    acc.add_panel(h / 2.0, g0, h / 2.0, g1, 0.0, g1);
                    acc.store_scaled(I, next[j + 1]);
                    std::swap(g0, g1);
                }
            }
        }
        res.state += next[M];
        res.term_norms.push_back(energy_norm(next[M]));
        res.terms_used = k;
        const double tail = series_tail_bound(k + 1, c_total) * norm_v;
        if (tail <= tol) {
            res.remainder = tail;
            return res;
        }
        if (k == kmax) {
            res.remainder = tail;
            res.hit_kmax = true;
            return res;
        }
        std::swap(prev, next);
    }
    return res; // unreachable
}

// ---- fourth-order flows ------------------------------------------------------

namespace {

// Integrates dw/dtau = gen_sign * i * R(tau, base) * w across the mesh, in
// either time direction. R is linear in mu, so the generator sign is folded
// into the sampled mu.
StateVector rk4_flow(const TimeMesh& mesh, StateVector w, const DissipationModel& model,
                     const Eigen::VectorXd& beta, double gen_sign, bool forward) {
    const double base = mesh.s;
    const std::complex<double> I(0.0, 1.0);

    auto rhs = [&](const StateVector& y, double tau, double lo, double hi) {
        const double mu = gen_sign * mu_in_segment(model, tau, lo, hi);
        return I * apply_twisted_coupling_value(y, mu, tau, base, beta);
    };

    const auto& sb = mesh.seg_bounds;
    const std::size_t nseg = sb.size() - 1;
    for (std::size_t si = 0; si < nseg; ++si) {
        const std::size_t seg = forward ? si : nseg - 1 - si;
        const std::size_t j0 = sb[seg], j1 = sb[seg + 1];
        const double lo = mesh.nodes[j0], hi = mesh.nodes[j1];
        if (integral_sup_b(model, lo, hi) == 0.0) continue; // dead stretch: w is constant
        for (std::size_t step = j0; step < j1; ++step) {
            const std::size_t j = forward ? step : j1 - 1 - (step - j0);
            const double a = forward ? mesh.nodes[j] : mesh.nodes[j + 1];
            const double b = forward ? mesh.nodes[j + 1] : mesh.nodes[j];
            const double h = b - a;
            StateVector k1 = rhs(w, a, lo, hi);
            StateVector k2 = rhs(w + (0.5 * h) * k1, a + 0.5 * h, lo, hi);
            StateVector k3 = rhs(w + (0.5 * h) * k2, a + 0.5 * h, lo, hi);
            StateVector k4 = rhs(w + h * k3, b, lo, hi);
            k1 += k4;
            k2 += k3;
            w += (h / 6.0) * k1 + (h / 3.0) * k2;
        }
    }
    return w;
}

StateVector flow_entry(double s, double t, const StateVector& V, const DissipationModel& model,
                       const TimeMesh& mesh, double gen_sign, bool forward, const char* who) {
    if (std::abs(mesh.s - s) > 1e-12 * std::max(1.0, std::abs(s)) ||
        std::abs(mesh.t - t) > 1e-12 * std::max(1.0, std::abs(t)))
        throw std::invalid_argument(std::string(who) + ": mesh does not span [s, t]");
    StateVector w = to_spectral(V);
    if (mesh.panels() == 0) return w;
    const Eigen::VectorXd beta =
        model.space_constant() ? Eigen::VectorXd() : model.beta_on_grid(*w.grid());
    return rk4_flow(mesh, std::move(w), model, beta, gen_sign, forward);
}

} // namespace

StateVector q_ode_apply(double s, double t, const StateVector& V, const DissipationModel& model,
                        const TimeMesh& mesh) {
    return flow_entry(s, t, V, model, mesh, +1.0, true, "q_ode_apply");
}

StateVector q_inverse_apply(double s, double t, const StateVector& V,
                            const DissipationModel& model, const TimeMesh& mesh) {
    return flow_entry(s, t, V, model, mesh, +1.0, false, "q_inverse_apply");
}

StateVector q_adjoint_apply(double s, double t, const StateVector& V,
                            const DissipationModel& model, const TimeMesh& mesh) {
    return flow_entry(s, t, V, model, mesh, -1.0, false, "q_adjoint_apply");
}

StateVector q_inverse_adjoint_apply(double s, double t, const StateVector& V,
                                    const DissipationModel& model, const TimeMesh& mesh) {
    return flow_entry(s, t, V, model, mesh, -1.0, true, "q_inverse_adjoint_apply");
}

// ---- composed evaluation -----------------------------------------------------

namespace {

enum class Variant { forward, inverse, adjoint, inverse_adjoint };

QApplyResult composed(double s, double t, const StateVector& V, const DissipationModel& model,
                      const EvalOptions& opts, Variant var) {
    if (!(t >= s)) throw std::invalid_argument("q evaluation: requires s <= t");
    QApplyResult out;
    out.state = to_spectral(V);
    if (t == s) return out;

    const double c_tot_full = integral_sup_b(model, s, t);
    if (c_tot_full == 0.0) return out;

    // trim to the profile's support: Q is exactly the identity outside, and
    // the free phases of the trimmed stretches cancel algebraically
    auto [sup_lo, sup_hi] = model.support();
    const double s1 = std::max(s, sup_lo);
    const double t1 = std::min(t, sup_hi);
    if (!(t1 > s1)) return out;

    // chunk boundaries: bounded node count per chunk
    const double chunk_len = std::max(opts.max_chunk_nodes / std::max(opts.density, 1.0), 1e-6);
    const int nchunks = std::max(1, static_cast<int>(std::ceil((t1 - s1) / chunk_len)));
    std::vector<double> r(nchunks + 1);
    for (int j = 0; j <= nchunks; ++j) r[j] = s1 + (t1 - s1) * j / nchunks;
    r.back() = t1;

    const double c_tot = integral_sup_b(model, s1, t1);
    const bool chunk_forward = (var == Variant::forward || var == Variant::inverse_adjoint);

    StateVector& W = out.state;
    W = free_flow(std::move(W), s1, s); // E0(s', s)
    if (!chunk_forward) W = free_flow(std::move(W), t1, s1);

    double rem = 0.0;
    for (int idx = 0; idx < nchunks; ++idx) {
        const int j = chunk_forward ? idx : nchunks - 1 - idx;
        const double a = r[j], b = r[j + 1];
        const double c_j = integral_sup_b(model, a, b);
        if (!chunk_forward) W = free_flow(std::move(W), a, b);
        if (c_j > 0.0) {
            TimeMesh mesh = TimeMesh::for_model(model, a, b, opts.density, opts.rule);
            switch (var) {
                case Variant::forward:
                    if (opts.method == QMethod::series) {
                        const double tol_j =
                            opts.tol * (c_j / c_tot) / std::exp(c_tot);
                        SeriesResult sr = peano_baker_apply(a, b, W, model, mesh, tol_j, opts.kmax);
                        W = std::move(sr.state);
                        rem = rem * std::exp(c_j) + sr.remainder;
                        out.terms_used = std::max(out.terms_used, sr.terms_used);
                        out.hit_kmax = out.hit_kmax || sr.hit_kmax;
                    } else {
                        W = q_ode_apply(a, b, W, model, mesh);
                    }
                    break;
                case Variant::inverse:
                    W = q_inverse_apply(a, b, W, model, mesh);
                    break;
                case Variant::adjoint:
                    W = q_adjoint_apply(a, b, W, model, mesh);
                    break;
                case Variant::inverse_adjoint:
                    W = q_inverse_adjoint_apply(a, b, W, model, mesh);
                    break;
            }
        }
        if (chunk_forward) W = free_flow(std::move(W), b, a);
    }
    if (chunk_forward) W = free_flow(std::move(W), s1, t1);
    W = free_flow(std::move(W), s, s1); // E0(s, s')
    out.remainder = rem;
    return out;
}

} // namespace

QApplyResult q_apply(double s, double t, const StateVector& V, const DissipationModel& model,
                     const EvalOptions& opts) {
    return composed(s, t, V, model, opts, Variant::forward);
}

StateVector q_apply_inverse(double s, double t, const StateVector& V,
                            const DissipationModel& model, const EvalOptions& opts) {
    return composed(s, t, V, model, opts, Variant::inverse).state;
}

StateVector q_apply_adjoint(double s, double t, const StateVector& V,
                            const DissipationModel& model, const EvalOptions& opts) {
    return composed(s, t, V, model, opts, Variant::adjoint).state;
}

StateVector q_apply_inverse_adjoint(double s, double t, const StateVector& V,
                                    const DissipationModel& model, const EvalOptions& opts) {
    return composed(s, t, V, model, opts, Variant::inverse_adjoint).state;
}

StateVector propagate_state(double s, double t, const StateVector& U,
                            const DissipationModel& model, const EvalOptions& opts) {
    StateVector V = to_diagonal(to_spectral(U));
    V = q_apply(s, t, V, model, opts).state;
    V = free_flow(std::move(V), t, s);
    return from_diagonal(V);
}

std::pair<Field, Field> propagate_physical(double s, double t, const Field& u1, const Field& u2,
                                           const DissipationModel& model,
                                           const EvalOptions& opts) {
    StateVector U = lift_data(u1, u2);
    U = propagate_state(s, t, U, model, opts);
    return restore_data(U);
}

} // namespace wavescat::dyson
