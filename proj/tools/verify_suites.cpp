#include "verify_suites.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "wavescat/dyson.hpp"
#include "wavescat/mode_oracle.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/random_state.hpp"
#include "wavescat/scattering.hpp"
#include "wavescat/strang.hpp"

namespace wavescat::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relative_gap(const StateVector& a, const StateVector& b) {
    const double scale = std::max(energy_norm(b), 1e-300);
    return energy_norm(a - b) / scale;
}

StateVector coupling_by_composition(const StateVector& U, double t,
                                    const DissipationModel& model) {
    StateVector z = to_physical(from_diagonal(U));
    Field b = eval_b(model, t, z.grid());
    z.c1.values.setZero();
    z.c2.values.array() *= std::complex<double>(0.0, 1.0) * b.values.array();
    return to_diagonal(to_spectral(std::move(z)));
}

std::vector<DissipationModel> preset_models() {
    return {DissipationModel(IntervalProfile{0.3, 0.0, 1.0}),
            DissipationModel(IntervalProfile{-0.25, 0.0, 1.0}),
            DissipationModel(AlgebraicProfile{1.0, 2.0}),
            DissipationModel(GaussianProfile{1.0, 1.0}),
            DissipationModel(IntervalProfile{0.6, 0.0, 1.0}, BumpSpace{M_PI, 1.0, 0.5})};
}

} // namespace

std::vector<CheckResult> run_all(const RunConfig& config) {
    std::vector<CheckResult> out;
    auto add = [&out](std::string suite, std::string invariant, double residual, double threshold,
                      std::string note = "") {
        out.push_back({std::move(suite), std::move(invariant), residual, threshold,
                       std::move(note)});
    };

    const GridPtr grid = config.make_grid_spec();
    const DissipationModel config_model = config.make_model();
    const unsigned long seed = config.seed;

    // ---- spectral_core --------------------------------------------------------
    {
        double plancherel = 0.0, round_trip = 0.0, energy_inv = 0.0;
        for (unsigned long k = 0; k < 8; ++k) {
            Field f = random_field(grid, seed + k, false);
            Field fs = to_spectral(f);
            plancherel = std::max(plancherel,
                                  std::abs(field_norm(fs) - field_norm(f)) / field_norm(f));
            Field back = to_physical(fs);
            round_trip = std::max(round_trip, (back.values - f.values).norm() / field_norm(f));
            StateVector U = random_state(grid, seed + 100 + k);
            energy_inv = std::max(energy_inv, std::abs(energy_norm(to_physical(U)) -
                                                       energy_norm(U)) / energy_norm(U));
        }
        add("spectral_core", "plancherel_identity", plancherel, 1e-12);
        add("spectral_core", "transform_round_trip", round_trip, 1e-12);
        add("spectral_core", "energy_norm_representation_invariance", energy_inv, 1e-12);
    }

    // ---- coefficients ---------------------------------------------------------
    {
        double additivity = 0.0, quad_gap = 0.0;
        for (const auto& m : preset_models()) {
            for (auto [s, r, t] : {std::tuple{-1.0, 0.4, 2.0}, {0.0, 0.5, 1.0}}) {
                const double whole = integral_sup_b(m, s, t);
                const double split = integral_sup_b(m, s, r) + integral_sup_b(m, r, t);
                additivity = std::max(additivity, std::abs(whole - split) / std::max(1.0, whole));
            }
            const double a = integral_sup_b(m, -2.0, 3.0);
            const double q = integral_sup_b_quadrature(m, -2.0, 3.0);
            quad_gap = std::max(quad_gap, std::abs(a - q) / std::max(1.0, a));
        }
        add("coefficients", "integral_additivity", additivity, 1e-10);
        add("coefficients", "quadrature_matches_analytic", quad_gap, 1e-9);

        double monotone = 0.0;
        double prev = integral_sup_b(config_model, 0.0, kInf);
        double last = prev;
        for (double t = 1.0; t <= 1024.0; t *= 2.0) {
            last = integral_sup_b(config_model, t, kInf);
            monotone = std::max(monotone, last - prev);
            prev = last;
        }
        add("coefficients", "tail_monotone_and_vanishing",
            std::max(monotone, last / std::max(1e-300, integral_sup_b(config_model, 0.0, kInf)) -
                                   1e-3),
            1e-12, "tail(1024) / tail(0)");
    }

    // ---- free_propagator ------------------------------------------------------
    {
        double unitarity = 0.0, group = 0.0, closed_vs_comp = 0.0, r_bound = 0.0;
        std::mt19937_64 rng(seed);
        auto uni = [&rng](double lo, double hi) {
            return lo + (hi - lo) * double(rng() >> 11) * 0x1p-53;
        };
        for (int trial = 0; trial < 12; ++trial) {
            StateVector U = random_state(grid, seed + 200 + trial);
            const double t = uni(-4.0, 4.0), s = uni(-4.0, 4.0), r = uni(-4.0, 4.0);
            unitarity = std::max(unitarity, std::abs(energy_norm(free_flow(U, t, s)) -
                                                     energy_norm(U)) / energy_norm(U));
            group = std::max(group, relative_gap(free_flow(free_flow(U, s, r), t, s),
                                                 free_flow(U, t, r)));
            const DissipationModel& m = preset_models()[trial % 5];
            const double tb = uni(-0.9, 0.9);
            StateVector closed = apply_coupling(U, tb, m);
            StateVector comp = coupling_by_composition(U, tb, m);
            closed_vs_comp = std::max(
                closed_vs_comp,
                std::max((closed.c1.values - comp.c1.values).cwiseAbs().maxCoeff(),
                         (closed.c2.values - comp.c2.values).cwiseAbs().maxCoeff()));
            const double bound = sup_norm_b(m, tb) * energy_norm(U);
            if (bound > 0.0)
                r_bound = std::max(r_bound,
                                   energy_norm(apply_twisted_coupling(U, tb, s, m)) / bound - 1.0);
        }
        add("free_propagator", "free_flow_unitarity", unitarity, 1e-12);
        add("free_propagator", "free_flow_group_law", group, 1e-12);
        add("free_propagator", "coupling_closed_form_vs_compositional", closed_vs_comp, 1e-13);
        add("free_propagator", "twisted_coupling_operator_bound", std::max(r_bound, 0.0), 1e-12);

        Field u1 = random_field(grid, seed + 300, true);
        Field u2 = random_field(grid, seed + 301, false);
        auto [f1, f2] = free_wave_evolve(u1, u2, 1.3);
        auto [b1, b2] = free_wave_evolve(f1, f2, -1.3);
        const double e0 = energy_norm(lift_data(u1, u2));
        add("free_propagator", "free_wave_group_inverse",
            energy_norm(lift_data(b1, b2) - lift_data(u1, u2)) / e0, 1e-12);
        add("free_propagator", "free_wave_unitarity",
            std::abs(energy_norm(lift_data(f1, f2)) - e0) / e0, 1e-12);
    }

    // ---- dyson ------------------------------------------------------------------
    {
        const DissipationModel m(IntervalProfile{0.5, 0.0, 1.0});
        const double c = 0.5;
        dyson::TimeMesh mesh = dyson::TimeMesh::for_model(m, 0.0, 1.0, config.mesh_density);
        double domination = 0.0, global_bound = 0.0;
        StateVector V = random_state(grid, seed + 400);
        dyson::SeriesResult r = dyson::peano_baker_apply(0.0, 1.0, V, m, mesh, 1e-12, 40);
        double fact = 1.0;
        for (std::size_t k = 1; k <= r.term_norms.size(); ++k) {
            fact *= double(k);
            domination = std::max(domination, r.term_norms[k - 1] /
                                                  (1.01 * std::pow(c, double(k)) / fact) - 1.0);
        }
        global_bound = energy_norm(r.state - V) / ((std::exp(c) - 1.0) * energy_norm(V)) - 1.0;
        add("dyson", "term_norms_factorially_dominated", std::max(domination, 0.0), 0.0);
        add("dyson", "series_exponential_bound", std::max(global_bound, 0.0), 0.0);

        StateVector o = dyson::q_ode_apply(0.0, 1.0, V, m, mesh);
        add("dyson", "series_vs_ode_cross_check", relative_gap(r.state, o), 1e-7);

        const DissipationModel gm(GaussianProfile{0.8, 1.0});
        dyson::EvalOptions opts;
        opts.density = config.mesh_density;
        StateVector q1 = dyson::q_apply(0.0, 0.8, V, gm, opts).state;
        StateVector q2 = dyson::q_apply(0.0, 2.3, V, gm, opts).state;
        const double cauchy_rhs = (std::exp(integral_sup_b(gm, 0.0, 2.3)) -
                                   std::exp(integral_sup_b(gm, 0.0, 0.8))) * energy_norm(V);
        add("dyson", "cauchy_difference_estimate",
            std::max(energy_norm(q2 - q1) / cauchy_rhs - 1.0, 0.0), 0.0);

        StateVector s1 = dyson::q_apply(0.0, 1.0, V, m, opts).state;
        double stab = 0.0;
        for (double t : {2.0, 4.0, 8.0})
            stab = std::max(stab, relative_gap(dyson::q_apply(0.0, t, V, m, opts).state, s1));
        add("dyson", "stabilization_past_compact_support", stab, 1e-12);

        StateVector inv = dyson::q_ode_apply(0.0, 1.0,
                                             dyson::q_inverse_apply(0.0, 1.0, V, m, mesh), m, mesh);
        add("dyson", "inverse_flow_round_trip", relative_gap(inv, V), 1e-8);
    }

    // ---- reference_solver -------------------------------------------------------
    {
        const GridPtr g32 = make_grid(1, 32, 2.0 * M_PI);
        const DissipationModel gm(GaussianProfile{0.8, 0.7});
        StateVector U = random_state(g32, seed + 500);
        auto run = [&](double dt) { return strang_evolve_state(0.0, 2.0, U, gm, dt); };
        const double e1 = energy_norm(run(1.0 / 64.0) - run(1.0 / 128.0));
        const double e2 = energy_norm(run(1.0 / 128.0) - run(1.0 / 256.0));
        const double order = std::log2(e1 / e2);
        add("reference_solver", "strang_observed_order_two", std::abs(order - 2.0), 0.2,
            "order = " + std::to_string(order));

        const double beta0 = 0.4, T = 3.0;
        const DissipationModel pump(IntervalProfile{-beta0, 0.0, T});
        StateVector Z = make_state(g32, Rep::spectral);
        Z.c2.values[0] = 1.0;
        const double ratio = energy_norm(strang_evolve_state(0.0, T, Z, pump, 1.0 / 64.0));
        add("reference_solver", "sign_changing_zero_mode_growth",
            std::abs(ratio - std::exp(beta0 * T)) / std::exp(beta0 * T), 1e-10);

        const DissipationModel m(IntervalProfile{0.3, 0.0, 1.0});
        StateVector W = random_state(grid, seed + 501);
        dyson::EvalOptions opts;
        opts.density = std::max(config.mesh_density, 512.0);
        StateVector series = dyson::propagate_state(0.0, 2.0, W, m, opts);
        StateVector direct = strang_evolve_state(0.0, 2.0, W, m, 1.0 / 2048.0);
        add("reference_solver", "strang_vs_series_agreement", relative_gap(series, direct), 1e-6);
    }

    // ---- mode_oracle --------------------------------------------------------------
    {
        double liouville = 0.0;
        const DissipationModel m(IntervalProfile{0.3, 0.0, 1.0});
        for (double w : {0.0, 1.0, 2.0, 4.0, 8.0}) {
            ModeMatrix q = mode_q(w, 0.0, 2.0, m);
            liouville = std::max(liouville, std::abs(std::abs(q.m.determinant()) -
                                                     std::exp(-0.3)) / std::exp(-0.3));
        }
        add("mode_oracle", "liouville_determinant_identity", liouville, 1e-10);

        const GridPtr g16 = make_grid(1, 16, 2.0 * M_PI);
        dyson::TimeMesh mesh16 = dyson::TimeMesh::for_model(m, 0.0, 1.5, 2048.0);
        double equiv = 0.0;
        for (Eigen::Index j : {Eigen::Index(0), Eigen::Index(3), Eigen::Index(8)}) {
            ModeMatrix q = mode_q(g16->abs_freq[j], 0.0, 1.5, m, 5e-5);
            for (int col = 0; col < 2; ++col) {
                StateVector e = make_state(g16, Rep::spectral);
                (col == 0 ? e.c1 : e.c2).values[j] = 1.0;
                dyson::SeriesResult rr = dyson::peano_baker_apply(0.0, 1.5, e, m, mesh16, 1e-13, 40);
                equiv = std::max(equiv, std::abs(rr.state.c1.values[j] - q.m(0, col)));
                equiv = std::max(equiv, std::abs(rr.state.c2.values[j] - q.m(1, col)));
            }
        }
        add("mode_oracle", "grid_vs_mode_oracle_equivalence", equiv, 1e-10);

        const DissipationModel gm(GaussianProfile{0.6, 1.0});
        double cmax = 0.0;
        Eigen::Matrix2cd prev = mode_wave_operator(0.0, gm, 1e-9).m;
        for (double w = 0.25; w <= 4.0; w += 0.25) {
            Eigen::Matrix2cd cur = mode_wave_operator(w, gm, 1e-9).m;
            cmax = std::max(cmax, (cur - prev).cwiseAbs().maxCoeff() / 0.25);
            prev = cur;
        }
        add("mode_oracle", "wave_operator_omega_continuity", 0.0, 0.0,
            "recorded max |dW/domega| = " + std::to_string(cmax));
    }

    // ---- scattering -----------------------------------------------------------------
    {
        using namespace scattering;
        const GridPtr g16 = make_grid(1, 16, 2.0 * M_PI);
        const GridPtr g64 = make_grid(1, 64, 2.0 * M_PI);
        const DissipationModel gm(GaussianProfile{0.8, 1.0});

        dyson::EvalOptions eval;
        eval.tol = 1e-13;
        eval.density = 512.0;
        OperatorHandle q = q_handle(g64, gm, 0.0, 2.0, eval);
        StateVector A = random_state(g64, seed + 600), B = random_state(g64, seed + 601);
        const std::complex<double> ca(0.7, -0.3), cb(-1.1, 0.4);
        StateVector lin_lhs = q.forward(ca * A + cb * B);
        StateVector lin_rhs = ca * q.forward(A) + cb * q.forward(B);
        add("scattering", "handle_linearity", relative_gap(lin_lhs, lin_rhs), 1e-10);

        WaveOptions wopts;
        wopts.tol = 1e-8;
        wopts.eval.density = 512.0;
        wopts.eval.tol = 1e-11;
        StateVector V = random_state(g64, seed + 602);
        StateVector wq = wave_operator_apply(WaveSign::plus, V, gm, wopts, WaveMethod::via_q);
        StateVector wg = wave_operator_apply(WaveSign::plus, V, gm, wopts, WaveMethod::via_group);
        add("scattering", "wave_operator_method_agreement", energy_norm(wq - wg),
            2.0 * wopts.tol);
        StateVector round = wave_operator_inverse_apply(WaveSign::plus, wq, gm, wopts);
        add("scattering", "wave_operator_inverse_identity", relative_gap(round, V), 1e-8);

        WaveOptions o1 = wopts, o2 = wopts;
        o1.horizon_override = 3.0;
        o2.horizon_override = 6.0;
        const double growth = std::exp(integral_sup_b(gm, 0.0, kInf));
        const double cert = integral_sup_b(gm, 3.0, kInf) * growth * energy_norm(V);
        add("scattering", "horizon_certification",
            std::max(energy_norm(wave_operator_apply(WaveSign::plus, V, gm, o1) -
                                 wave_operator_apply(WaveSign::plus, V, gm, o2)) / cert - 1.0,
                     0.0),
            0.0);

        const double c_inf = integral_sup_b(gm, 0.0, kInf);
        WaveOptions tiny = wopts;
        const double nw = operator_norm_estimate(wave_operator_handle(g16, WaveSign::plus, gm, tiny),
                                                 NormMode::dense_assembly);
        const double nwi = operator_norm_estimate(
            wave_operator_inverse_handle(g16, WaveSign::plus, gm, tiny), NormMode::dense_assembly);
        add("scattering", "wave_operator_isomorphism_bounds",
            std::max({nw / std::exp(c_inf) - 1.0, nwi / std::exp(c_inf) - 1.0, 0.0}), 0.0,
            "norms " + std::to_string(nw) + ", " + std::to_string(nwi));

        const DissipationModel damped(IntervalProfile{0.4, 0.0, 1.0});
        const double norm_damped = operator_norm_estimate(
            propagator_handle(g16, damped, 0.0, 2.0, eval), NormMode::dense_assembly);
        add("scattering", "propagator_contraction_for_nonnegative_b",
            std::max(norm_damped - 1.0, 0.0), 1e-10, "norm = " + std::to_string(norm_damped));

        const DissipationModel pumped(IntervalProfile{-0.4, 0.0, 1.0});
        const double norm_pumped = operator_norm_estimate(
            propagator_handle(g16, pumped, 0.0, 2.0, eval), NormMode::dense_assembly);
        add("scattering", "sign_changing_norm_exceeds_one", norm_pumped > 1.0 ? 0.0 : 1.0, 0.0,
            "norm = " + std::to_string(norm_pumped));
    }

    // ---- cli_harness -----------------------------------------------------------------
    {
        StateVector a = random_state(grid, seed), b = random_state(grid, seed);
        const double det = energy_norm(a - b);
        add("cli_harness", "random_data_bitwise_determinism", det, 0.0);
        RunConfig c = config;
        auto r = parse_config(serialize_config(c));
        add("cli_harness", "config_round_trip", r.ok() ? 0.0 : 1.0, 0.0);
    }

    return out;
}

} // namespace wavescat::verify
