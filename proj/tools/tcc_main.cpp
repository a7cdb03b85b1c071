// tcc — batch driver for Tavis-Cummings lattice / impurity spectral-chaos
// pipelines. Subcommands: spectrum | unfold | stats | sff | sweep | map |
// poincare | plot.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "tcchaos/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Tavis-Cummings lattice and impurity chaos diagnostics"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int workers = 0;
    long long seed = -1;

    const std::vector<std::string> commands = {"spectrum", "unfold", "stats", "sff",
                                               "sweep",    "map",    "poincare", "plot"};
    for (const auto& name : commands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file (key = value)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "worker pool size for sweeps");
        sub->add_option("--seed", seed, "base RNG seed");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        const std::string text = config_path.empty() ? "" : tcc::io::read_file(config_path);
        tcc::RunConfig cfg = tcc::parse_config(text, command);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (workers > 0) cfg.workers = workers;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        return tcc::run(cfg);
    } catch (const std::exception& e) {
        nlohmann::json err;
        err["error"] = e.what();
        err["command"] = command;
        std::cerr << err.dump() << std::endl;
        return 1;
    }
}
