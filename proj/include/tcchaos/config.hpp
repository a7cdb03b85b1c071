// config.hpp — strict flat key=value run configuration with per-command
// sections and environment-variable overrides (prefix TCC_).

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcchaos/basis.hpp"
#include "tcchaos/params.hpp"
#include "tcchaos/stats.hpp"

namespace tcc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string command;
    // model
    std::string model = "lattice";  // lattice | impurity
    LatticeParams lattice;
    ImpurityParams impurity;
    int n_ex = 36;
    Parity parity = Parity::symmetric;
    // pipeline knobs
    double trim_low = 0.0, trim_high = 0.0;
    int unfold_degree = 12;
    std::size_t sff_block_size = 100;
    double sff_t_min = 1e-2, sff_t_max = 1e2;
    std::size_t sff_points = 400;
    BrodyMethod brody_method = BrodyMethod::mle;
    std::vector<double> sweep_grid;
    // classical
    double energy = 1.0;
    int n_seeds = 8;
    int n_crossings = 200;
    double t_max = 1000.0;
    double ode_tol = 1e-10;
    // io / inputs
    std::string input;          // spectrum or curve CSV, command dependent
    std::string input_lattice;  // map: lattice curve CSV
    std::string input_impurity; // map: impurity curve CSV
    std::string out_dir = ".";
    int workers = 1;
    std::uint64_t seed = 1;
    int histogram_bins = 50;
};

namespace detail {

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "model", "L", "S", "lambda", "J", "mu", "omega_c", "omega_s", "n_cutoff",
        "n_ex", "parity", "trim_low", "trim_high", "unfold_degree",
        "sff_block_size", "sff_t_min", "sff_t_max", "sff_points", "brody_method",
        "sweep_grid", "energy", "n_seeds", "n_crossings", "t_max", "ode_tol",
        "input", "input_lattice", "input_impurity", "out", "workers", "seed",
        "histogram_bins"};
    return keys;
}

inline std::string trim_ws(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' has invalid numeric value '" + v + "'");
    }
}

inline long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw ConfigError("config: key '" + key + "' has invalid integer value '" + v + "'");
    }
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (!known_keys().count(key)) throw ConfigError("config: unknown key '" + key + "'");
    if (key == "model") {
        if (value != "lattice" && value != "impurity")
            throw ConfigError("config: model must be 'lattice' or 'impurity'");
        cfg.model = value;
    } else if (key == "L")
        cfg.lattice.L = static_cast<int>(parse_int(key, value));
    else if (key == "S") {
        cfg.lattice.S = static_cast<int>(parse_int(key, value));
        cfg.impurity.S = cfg.lattice.S;
    } else if (key == "lambda") {
        cfg.lattice.lambda = parse_double(key, value);
        cfg.impurity.lambda = cfg.lattice.lambda;
    } else if (key == "J")
        cfg.lattice.J = parse_double(key, value);
    else if (key == "mu") {
        // negative mu is gauge-equivalent to positive; normalize at parsing
        cfg.impurity.mu = std::abs(parse_double(key, value));
    } else if (key == "omega_c") {
        cfg.lattice.omega_c = parse_double(key, value);
        cfg.impurity.omega_c = cfg.lattice.omega_c;
    } else if (key == "omega_s") {
        cfg.lattice.omega_s = parse_double(key, value);
        cfg.impurity.omega_s = cfg.lattice.omega_s;
    } else if (key == "n_cutoff")
        cfg.impurity.n_cutoff = static_cast<int>(parse_int(key, value));
    else if (key == "n_ex")
        cfg.n_ex = static_cast<int>(parse_int(key, value));
    else if (key == "parity") {
        if (value == "none")
            cfg.parity = Parity::none;
        else if (value == "symmetric")
            cfg.parity = Parity::symmetric;
        else if (value == "antisymmetric")
            cfg.parity = Parity::antisymmetric;
        else
            throw ConfigError("config: parity must be none|symmetric|antisymmetric");
    } else if (key == "trim_low")
        cfg.trim_low = parse_double(key, value);
    else if (key == "trim_high")
        cfg.trim_high = parse_double(key, value);
    else if (key == "unfold_degree")
        cfg.unfold_degree = static_cast<int>(parse_int(key, value));
    else if (key == "sff_block_size")
        cfg.sff_block_size = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "sff_t_min")
        cfg.sff_t_min = parse_double(key, value);
    else if (key == "sff_t_max")
        cfg.sff_t_max = parse_double(key, value);
    else if (key == "sff_points")
        cfg.sff_points = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "brody_method") {
        if (value == "mle")
            cfg.brody_method = BrodyMethod::mle;
        else if (value == "histogram_lsq")
            cfg.brody_method = BrodyMethod::histogram_lsq;
        else
            throw ConfigError("config: brody_method must be mle|histogram_lsq");
    } else if (key == "sweep_grid") {
        cfg.sweep_grid.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ','))
            cfg.sweep_grid.push_back(parse_double(key, trim_ws(tok)));
        if (cfg.sweep_grid.empty()) throw ConfigError("config: sweep_grid is empty");
    } else if (key == "energy")
        cfg.energy = parse_double(key, value);
    else if (key == "n_seeds")
        cfg.n_seeds = static_cast<int>(parse_int(key, value));
    else if (key == "n_crossings")
        cfg.n_crossings = static_cast<int>(parse_int(key, value));
    else if (key == "t_max")
        cfg.t_max = parse_double(key, value);
    else if (key == "ode_tol")
        cfg.ode_tol = parse_double(key, value);
    else if (key == "input")
        cfg.input = value;
    else if (key == "input_lattice")
        cfg.input_lattice = value;
    else if (key == "input_impurity")
        cfg.input_impurity = value;
    else if (key == "out")
        cfg.out_dir = value;
    else if (key == "workers")
        cfg.workers = static_cast<int>(parse_int(key, value));
    else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "histogram_bins")
        cfg.histogram_bins = static_cast<int>(parse_int(key, value));
}

}  // namespace detail

// Parses a config for one command. Sections ([spectrum], [stats], ...) scope
// keys to that command; keys outside sections are global. Unknown keys and
// unknown sections are rejected.
inline RunConfig parse_config(const std::string& text, const std::string& command) {
    static const std::set<std::string> commands = {"spectrum", "unfold", "stats", "sff",
                                                   "sweep",    "map",    "poincare", "plot"};
    if (!commands.count(command))
        throw ConfigError("config: unknown command '" + command + "'");
    RunConfig cfg;
    cfg.command = command;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        line = detail::trim_ws(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = detail::trim_ws(line.substr(1, line.size() - 2));
            if (!commands.count(section))
                throw ConfigError("config: unknown section '" + section + "'");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not 'key = value'");
        const std::string key = detail::trim_ws(line.substr(0, eq));
        const std::string value = detail::trim_ws(line.substr(eq + 1));
        if (!section.empty() && section != command) {
            // still validate the key so typos are caught regardless of section
            if (!detail::known_keys().count(key))
                throw ConfigError("config: unknown key '" + key + "'");
            continue;
        }
        detail::apply_key(cfg, key, value);
    }
    // environment overrides: TCC_<KEY> (uppercased)
    for (const auto& key : detail::known_keys()) {
        std::string env = "TCC_" + key;
        std::transform(env.begin(), env.end(), env.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        if (const char* v = std::getenv(env.c_str())) detail::apply_key(cfg, key, v);
    }
    return cfg;
}

}  // namespace tcc
