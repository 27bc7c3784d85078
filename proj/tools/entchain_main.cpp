// Command-line front end: simulate protocols, optimize couplings, run the
// sudden-switch baseline and temperature sweeps. Exit codes: 0 success,
// 1 input error, 2 optimizer non-convergence.
#include <exception>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "entchain/cli_commands.hpp"

namespace {

void add_common_flags(CLI::App* cmd, entchain::RunManifest& manifest,
                      std::string& pair_arg) {
    cmd->add_option("--config", manifest.config_path, "configuration file");
    cmd->add_option("--protocol", manifest.protocol_path, "protocol file");
    cmd->add_option("--out", manifest.out_dir, "output directory");
    cmd->add_option("--pair", pair_arg, "oscillator pair, e.g. 1,5");
    cmd->add_option_function<double>(
        "--temperature",
        [&manifest](double t) { manifest.temperature_override = t; },
        "override the protocol temperature");
    cmd->add_option_function<double>(
        "--sample-dt",
        [&manifest](double dt) { manifest.sample_dt = dt; },
        "output sampling step (default 0.05/omega0)");
    cmd->add_option("--seed", manifest.seed, "seed for randomized restarts");
}

void parse_pair(const std::string& arg, entchain::RunManifest& manifest) {
    if (arg.empty()) return;
    const auto comma = arg.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("--pair expects n,m");
    manifest.pair_n = std::stoi(arg.substr(0, comma));
    manifest.pair_m = std::stoi(arg.substr(comma + 1));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "entchain: entanglement dynamics and control of a coupled "
        "oscillator ring"};
    app.require_subcommand(1);

    entchain::RunManifest manifest;
    std::string pair_arg;

    struct Sub {
        const char* name;
        const char* help;
        std::function<int(const entchain::RunManifest&)> fn;
    };
    const Sub subs[] = {
        {"simulate", "run a protocol file and emit the observable time series",
         entchain::cmd_simulate},
        {"optimize", "search for a coupling protocol maximizing E_N",
         entchain::cmd_optimize},
        {"sudden", "single sudden-switch baseline", entchain::cmd_sudden},
        {"sweep-temp", "peak E_N across temperatures",
         entchain::cmd_sweep_temperature},
    };

    std::function<int(const entchain::RunManifest&)> selected;
    for (const Sub& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub.name, sub.help);
        add_common_flags(cmd, manifest, pair_arg);
        cmd->callback([&selected, &manifest, &sub, name = sub.name] {
            manifest.command = name;
            selected = sub.fn;
        });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        parse_pair(pair_arg, manifest);
        return selected(manifest);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
