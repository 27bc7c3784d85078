#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace entchain {

/// Resolved invocation of one CLI subcommand. Every output file echoes the
/// resolved configuration in its header block.
struct RunManifest {
    std::string command;
    std::string config_path;    // optimizer / sudden / sweep configuration
    std::string protocol_path;  // input protocol file
    std::string out_dir = ".";
    std::optional<int> pair_n;
    std::optional<int> pair_m;
    std::optional<double> temperature_override;
    std::optional<double> sample_dt;
    std::uint64_t seed = 0;
};

// Exit codes: 0 success, 1 input error, 2 optimizer non-convergence.
int cmd_simulate(const RunManifest& manifest);
int cmd_optimize(const RunManifest& manifest);
int cmd_sudden(const RunManifest& manifest);
int cmd_sweep_temperature(const RunManifest& manifest);

}  // namespace entchain
