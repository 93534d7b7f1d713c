// wavescat — spectral scattering toolkit for the dissipative wave equation.
//
// Subcommands:
//   verify   run the invariant battery, exit nonzero on any failure
//   solve    propagate seeded random data, report energies and certificates
//   waveop   apply the forward wave operator both ways, report norms
//   scatter  apply the scattering operator; per-mode CSV for x-independent b
//   rate     convergence-rate sweep: err(t) against the tail integral
//   modes    per-mode wave operator entries and |det| as CSV

#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "verify_suites.hpp"
#include "wavescat/dyson.hpp"
#include "wavescat/mode_oracle.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/random_state.hpp"
#include "wavescat/scattering.hpp"
#include "wavescat/strang.hpp"

using namespace wavescat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Flags {
    std::string config_path, grid, profile, out, times, omegas;
    double tol = -1.0, horizon_tol = -1.0, density = -1.0;
    long seed = -1;
};

void add_shared_options(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "key = value configuration file");
    cmd->add_option("--grid", flags.grid, "grid spec, e.g. 1d:256 or 2d:64[:L=6.283]");
    cmd->add_option("--profile", flags.profile,
                    "dissipation profile, e.g. algebraic:p=2,mu0=1[*bump:center=3,width=1,height=0.5]");
    cmd->add_option("--tol", flags.tol, "series truncation tolerance");
    cmd->add_option("--horizon-tol", flags.horizon_tol, "wave-operator horizon tolerance");
    cmd->add_option("--density", flags.density, "time-mesh panels per unit time");
    cmd->add_option("--seed", flags.seed, "random data seed");
    cmd->add_option("--out", flags.out, "output CSV path (default stdout)");
    cmd->add_option("--times", flags.times, "comma-separated times");
    cmd->add_option("--omegas", flags.omegas, "comma-separated frequencies");
}

int resolve_config(const Flags& flags, RunConfig& config) {
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            std::cerr << "error: cannot read config file '" << flags.config_path << "'\n";
            return 2;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        auto parsed = parse_config(ss.str());
        if (!parsed.ok()) {
            for (const auto& e : parsed.errors) std::cerr << "config error: " << e << "\n";
            return 2;
        }
        config = *parsed.config;
    }
    std::string err;
    if (!flags.grid.empty() && !parse_grid_token(flags.grid, config, err)) {
        std::cerr << "error: " << err << "\n";
        return 2;
    }
    if (!flags.profile.empty()) {
        try {
            (void)parse_dissipation(flags.profile);
        } catch (const std::exception& e) {
            std::cerr << "error: profile: " << e.what() << "\n";
            return 2;
        }
        config.profile = flags.profile;
    }
    if (flags.tol > 0.0) config.tol = flags.tol;
    if (flags.horizon_tol > 0.0) config.horizon_tol = flags.horizon_tol;
    if (flags.density > 0.0) config.mesh_density = flags.density;
    if (flags.seed >= 0) config.seed = static_cast<unsigned long>(flags.seed);
    if (!flags.out.empty()) config.out = flags.out;
    if (!flags.times.empty() && !parse_number_list(flags.times, config.times, err)) {
        std::cerr << "error: times: " << err << "\n";
        return 2;
    }
    if (!flags.omegas.empty() && !parse_number_list(flags.omegas, config.omegas, err)) {
        std::cerr << "error: omegas: " << err << "\n";
        return 2;
    }
    return 0;
}

// CSV sink: file when config.out is set, stdout otherwise.
class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open output path '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

std::string grid_token(const RunConfig& c) {
    return std::to_string(c.dimension) + "d:" + std::to_string(c.points_per_axis);
}

dyson::EvalOptions eval_options(const RunConfig& c) {
    dyson::EvalOptions e;
    e.tol = c.tol;
    e.density = c.mesh_density;
    return e;
}

scattering::WaveOptions wave_options(const RunConfig& c) {
    scattering::WaveOptions w;
    w.tol = c.horizon_tol;
    w.eval = eval_options(c);
    return w;
}

int cmd_verify(const RunConfig& config) {
    auto results = verify::run_all(config);
    int failures = 0;
    std::printf("%-18s %-45s %12s %12s  %s\n", "suite", "invariant", "residual", "threshold",
                "status");
    for (const auto& r : results) {
        const bool ok = r.pass();
        failures += ok ? 0 : 1;
        std::printf("%-18s %-45s %12.3e %12.3e  %s%s%s\n", r.suite.c_str(), r.invariant.c_str(),
                    r.residual, r.threshold, ok ? "PASS" : "FAIL",
                    r.note.empty() ? "" : "  # ", r.note.c_str());
    }
    std::printf("%d/%zu invariants pass\n", int(results.size()) - failures, results.size());
    return failures == 0 ? 0 : 1;
}

int cmd_solve(const RunConfig& config) {
    const GridPtr grid = config.make_grid_spec();
    const DissipationModel model = config.make_model();
    StateVector U = random_state(grid, config.seed);
    Output out(config.out);
    write_csv_row(out.stream(), {"t", "energy_E", "terms_used", "remainder_bound"});
    dyson::EvalOptions eval = eval_options(config);
    double prev = 0.0;
    StateVector X = to_diagonal(U);
    for (double t : config.times) {
        if (t < prev) {
            std::cerr << "error: times must be non-decreasing\n";
            return 2;
        }
        dyson::QApplyResult r = dyson::q_apply(prev, t, X, model, eval);
        X = r.state;
        X = free_flow(std::move(X), t, prev);
        StateVector lifted = from_diagonal(X);
        write_csv_row(out.stream(), {csv_number(t), csv_number(energy_norm(lifted)),
                                     std::to_string(r.terms_used), csv_number(r.remainder)});
        prev = t;
    }
    return 0;
}

int cmd_waveop(const RunConfig& config) {
    const GridPtr grid = config.make_grid_spec();
    const DissipationModel model = config.make_model();
    const scattering::WaveOptions wopts = wave_options(config);
    StateVector V = random_state(grid, config.seed);

    StateVector via_q =
        scattering::wave_operator_apply(scattering::WaveSign::plus, V, model, wopts);
    StateVector via_group = scattering::wave_operator_apply(
        scattering::WaveSign::plus, V, model, wopts, scattering::WaveMethod::via_group);
    StateVector round = scattering::wave_operator_inverse_apply(scattering::WaveSign::plus, via_q,
                                                                model, wopts);
    std::cerr << "method agreement  " << csv_number(energy_norm(via_q - via_group)) << "\n";
    std::cerr << "inverse residual  " << csv_number(energy_norm(round - V)) << "\n";

    Output out(config.out);
    write_csv_row(out.stream(), {"handle_name", "grid", "mode", "estimate"});
    auto wplus = scattering::wave_operator_handle(grid, scattering::WaveSign::plus, model, wopts);
    auto wplus_inv =
        scattering::wave_operator_inverse_handle(grid, scattering::WaveSign::plus, model, wopts);
    for (const auto& h : {wplus, wplus_inv}) {
        const double est = operator_norm_estimate(h, NormMode::power_iteration);
        write_csv_row(out.stream(),
                      {h.name, grid_token(config), "power_iteration", csv_number(est)});
        if (grid->size() <= 1024) {
            const double dense = operator_norm_estimate(h, NormMode::dense_assembly);
            write_csv_row(out.stream(),
                          {h.name, grid_token(config), "dense_assembly", csv_number(dense)});
        }
    }
    return 0;
}

int cmd_scatter(const RunConfig& config) {
    const GridPtr grid = config.make_grid_spec();
    const DissipationModel model = config.make_model();
    const scattering::WaveOptions wopts = wave_options(config);
    StateVector V = random_state(grid, config.seed);
    StateVector SV = scattering::scattering_apply(V, model, wopts);
    StateVector round = scattering::scattering_inverse_apply(SV, model, wopts);
    std::cerr << "inversion residual  " << csv_number(energy_norm(round - V)) << "\n";

    Output out(config.out);
    if (model.space_constant()) {
        const DissipationModel reflected = model.time_reflected();
        write_csv_row(out.stream(), {"omega", "re_s11", "im_s11", "re_s12", "im_s12", "re_s21",
                                     "im_s21", "re_s22", "im_s22", "abs_det"});
        for (double w : config.omegas) {
            const Eigen::Matrix2cd S = mode_wave_operator(w, model, config.horizon_tol).m *
                                       mode_wave_operator(w, reflected, config.horizon_tol)
                                           .m.inverse();
            write_csv_row(out.stream(),
                          {csv_number(w), csv_number(S(0, 0).real()), csv_number(S(0, 0).imag()),
                           csv_number(S(0, 1).real()), csv_number(S(0, 1).imag()),
                           csv_number(S(1, 0).real()), csv_number(S(1, 0).imag()),
                           csv_number(S(1, 1).real()), csv_number(S(1, 1).imag()),
                           csv_number(std::abs(S.determinant()))});
        }
    } else {
        write_csv_row(out.stream(), {"quantity", "value"});
        write_csv_row(out.stream(),
                      {"scattering_inversion_residual", csv_number(energy_norm(round - V))});
    }
    return 0;
}

int cmd_rate(const RunConfig& config) {
    const GridPtr grid = config.make_grid_spec();
    const DissipationModel model = config.make_model();
    Field u1 = random_field(grid, config.seed, true);
    Field u2 = random_field(grid, config.seed + 1, false);
    scattering::RateOptions ropts;
    ropts.eval = eval_options(config);
    auto rows = scattering::rate_sweep(u1, u2, model, config.times, ropts);
    Output out(config.out);
    write_csv_row(out.stream(), {"t", "err_E", "tail_integral", "ratio"});
    for (const auto& r : rows)
        write_csv_row(out.stream(), {csv_number(r.t), csv_number(r.err), csv_number(r.tail),
                                     csv_number(r.ratio)});
    return 0;
}

int cmd_modes(const RunConfig& config) {
    const DissipationModel model = config.make_model();
    Output out(config.out);
    write_csv_row(out.stream(), {"omega", "re_w11", "im_w11", "re_w12", "im_w12", "re_w21",
                                 "im_w21", "re_w22", "im_w22", "abs_det"});
    for (double w : config.omegas) {
        ModeMatrix wave = mode_wave_operator(w, model, config.horizon_tol);
        const auto& m = wave.m;
        write_csv_row(out.stream(),
                      {csv_number(w), csv_number(m(0, 0).real()), csv_number(m(0, 0).imag()),
                       csv_number(m(0, 1).real()), csv_number(m(0, 1).imag()),
                       csv_number(m(1, 0).real()), csv_number(m(1, 0).imag()),
                       csv_number(m(1, 1).real()), csv_number(m(1, 1).imag()),
                       csv_number(std::abs(m.determinant()))});
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral scattering toolkit for the dissipative wave equation"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* verify = app.add_subcommand("verify", "run the invariant battery");
    CLI::App* solve = app.add_subcommand("solve", "propagate seeded data over the times list");
    CLI::App* waveop = app.add_subcommand("waveop", "wave operator: both methods, norms");
    CLI::App* scatter = app.add_subcommand("scatter", "scattering operator");
    CLI::App* rate = app.add_subcommand("rate", "convergence-rate sweep");
    CLI::App* modes = app.add_subcommand("modes", "per-mode wave operator CSV");
    for (CLI::App* cmd : {verify, solve, waveop, scatter, rate, modes})
        add_shared_options(cmd, flags);

    CLI11_PARSE(app, argc, argv);

    RunConfig config;
    if (int rc = resolve_config(flags, config); rc != 0) return rc;

    try {
        if (verify->parsed()) return cmd_verify(config);
        if (solve->parsed()) return cmd_solve(config);
        if (waveop->parsed()) return cmd_waveop(config);
        if (scatter->parsed()) return cmd_scatter(config);
        if (rate->parsed()) return cmd_rate(config);
        if (modes->parsed()) return cmd_modes(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
