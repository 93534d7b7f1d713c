#include "wavescat/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace wavescat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_ulong(const std::string& token, unsigned long& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

} // namespace

GridPtr RunConfig::make_grid_spec() const { return make_grid(dimension, points_per_axis, period); }

DissipationModel RunConfig::make_model() const { return parse_dissipation(profile); }

bool parse_grid_token(const std::string& token, RunConfig& config, std::string& error) {
    // <n>d:<N>[:L=<period>]
    std::vector<std::string> parts;
    std::stringstream ss(token);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 2 || parts.size() > 3 || parts[0].size() != 2 || parts[0][1] != 'd' ||
        parts[0][0] < '1' || parts[0][0] > '3') {
        error = "grid: expected <n>d:<N>[:L=<period>] with n in 1..3, got '" + token + "'";
        return false;
    }
    config.dimension = parts[0][0] - '0';
    double n = 0.0;
    if (!parse_double(parts[1], n) || n < 2 || n != std::floor(n) ||
        (long(n) & (long(n) - 1)) != 0) {
        error = "grid: points per axis must be a power of two >= 2, got '" + parts[1] + "'";
        return false;
    }
    config.points_per_axis = int(n);
    if (parts.size() == 3) {
        if (parts[2].rfind("L=", 0) != 0 || !parse_double(parts[2].substr(2), config.period) ||
            !(config.period > 0.0)) {
            error = "grid: period must be 'L=<positive number>', got '" + parts[2] + "'";
            return false;
        }
    }
    return true;
}

bool parse_number_list(const std::string& token, std::vector<double>& out, std::string& error) {
    out.clear();
    std::stringstream ss(token);
    std::string item;
    while (std::getline(ss, item, ',')) {
        double v = 0.0;
        if (!parse_double(trim(item), v)) {
            error = "cannot parse number '" + item + "' in list '" + token + "'";
            return false;
        }
        out.push_back(v);
    }
    if (out.empty()) {
        error = "empty number list";
        return false;
    }
    return true;
}

ConfigParseResult parse_config(const std::string& text) {
    ConfigParseResult result;
    RunConfig config;
    std::vector<std::string>& errors = result.errors;

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::string err;

        if (key == "grid") {
            if (!parse_grid_token(value, config, err)) errors.push_back(err);
        } else if (key == "profile") {
            try {
                (void)parse_dissipation(value);
                config.profile = value;
            } catch (const std::exception& e) {
                errors.push_back(std::string("profile: ") + e.what());
            }
        } else if (key == "tol") {
            if (!parse_double(value, config.tol) || !(config.tol > 0.0))
                errors.push_back("tol: must be a positive number, got '" + value + "'");
        } else if (key == "horizon_tol") {
            if (!parse_double(value, config.horizon_tol) || !(config.horizon_tol > 0.0))
                errors.push_back("horizon_tol: must be a positive number, got '" + value + "'");
        } else if (key == "mesh_density") {
            if (!parse_double(value, config.mesh_density) || !(config.mesh_density >= 8.0))
                errors.push_back("mesh_density: must be a number >= 8, got '" + value + "'");
        } else if (key == "seed") {
            if (!parse_ulong(value, config.seed))
                errors.push_back("seed: must be a non-negative integer, got '" + value + "'");
        } else if (key == "out") {
            config.out = value;
        } else if (key == "times") {
            if (!parse_number_list(value, config.times, err)) errors.push_back("times: " + err);
        } else if (key == "omegas") {
            if (!parse_number_list(value, config.omegas, err)) errors.push_back("omegas: " + err);
        } else {
            errors.push_back("unknown key '" + key + "' (known: grid, profile, tol, horizon_tol, "
                             "mesh_density, seed, out, times, omegas)");
        }
    }
    if (errors.empty()) result.config = config;
    return result;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream os;
    os << "grid = " << c.dimension << "d:" << c.points_per_axis << ":L=" << csv_number(c.period)
       << "\n";
    os << "profile = " << c.profile << "\n";
    os << "tol = " << csv_number(c.tol) << "\n";
    os << "horizon_tol = " << csv_number(c.horizon_tol) << "\n";
    os << "mesh_density = " << csv_number(c.mesh_density) << "\n";
    os << "seed = " << c.seed << "\n";
    if (!c.out.empty()) os << "out = " << c.out << "\n";
    auto list = [&os](const char* key, const std::vector<double>& xs) {
        os << key << " = ";
        for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << csv_number(xs[i]);
        os << "\n";
    };
    list("times", c.times);
    list("omegas", c.omegas);
    return os.str();
}

std::string csv_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
}

} // namespace wavescat
