// config.hpp — Plain-text key=value run configuration and CSV emission.
// Configs round-trip (parse . serialize = identity up to formatting) and CSV
// output is locale-free full precision, so identical config + seed means
// byte-identical artifacts.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "wavescat/dissipation.hpp"
#include "wavescat/grid.hpp"

namespace wavescat {

struct RunConfig {
    int dimension = 1;
    int points_per_axis = 256;
    double period = 2.0 * M_PI;
    std::string profile = "interval:mu0=0.3,t0=0,t1=1";
    double tol = 1e-10;          // series truncation tolerance
    double horizon_tol = 1e-8;   // wave-operator horizon tolerance
    double mesh_density = 256.0; // panels per unit time
    unsigned long seed = 1;
    std::string out;             // output path; empty = stdout
    std::vector<double> times{4.0, 8.0, 16.0, 32.0, 64.0};
    std::vector<double> omegas{0.0, 1.0, 2.0, 4.0, 8.0};

    GridPtr make_grid_spec() const;
    DissipationModel make_model() const;
};

struct ConfigParseResult {
    std::optional<RunConfig> config;
    std::vector<std::string> errors; // one precise message per failure

    bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parses "key = value" lines ('#' comments allowed). Unknown keys,
/// out-of-range values, and malformed profiles are each reported by name.
ConfigParseResult parse_config(const std::string& text);

std::string serialize_config(const RunConfig& config);

/// "1d:256", "2d:64", optionally ":L=<period>".
bool parse_grid_token(const std::string& token, RunConfig& config, std::string& error);

/// Comma-separated doubles ("4,8,16").
bool parse_number_list(const std::string& token, std::vector<double>& out, std::string& error);

// ---- CSV ---------------------------------------------------------------------

/// Full-precision scientific formatting (17 significant digits), independent
/// of the global locale.
std::string csv_number(double v);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

} // namespace wavescat
