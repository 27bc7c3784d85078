#include "entchain/cli_commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "entchain/chain_model.hpp"
#include "entchain/covariance.hpp"
#include "entchain/oct.hpp"
#include "entchain/protocol_io.hpp"
#include "entchain/thermodynamics.hpp"
#include "entchain/trace.hpp"

namespace entchain {

namespace {

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error("'" + path + "': " + std::string(e.what()));
    }
}

ChainConfig chain_from_json(const nlohmann::json& doc) {
    if (!doc.contains("chain"))
        throw std::runtime_error("config file: missing 'chain' section");
    const auto& c = doc["chain"];
    return ChainConfig(c.value("n_oscillators", 8),
                       c.value("omega0", 1.0),
                       c.value("temperature", 0.0));
}

OptimizerConfig optimizer_from_json(const nlohmann::json& doc) {
    OptimizerConfig opt;
    if (doc.contains("optimizer")) {
        const auto& o = doc["optimizer"];
        opt.n_segments = o.value("n_segments", opt.n_segments);
        opt.horizon = o.value("horizon", opt.horizon);
        opt.c_max = o.value("c_max", opt.c_max);
        opt.step_size = o.value("step_size", opt.step_size);
        opt.max_iterations = o.value("max_iterations", opt.max_iterations);
        opt.convergence_tol = o.value("convergence_tol", opt.convergence_tol);
        opt.fd_epsilon = o.value("fd_epsilon", 1e-4 * opt.c_max);
        opt.sync_c = o.value("sync_c", opt.c_max);
        opt.sync_max_time = o.value("sync_max_time", opt.sync_max_time);
        opt.peak_tol = o.value("peak_tol", opt.peak_tol);
        if (o.contains("gradient_mode")) {
            const std::string mode = o["gradient_mode"].get<std::string>();
            if (mode == "finite-difference")
                opt.gradient_mode = GradientMode::FiniteDifference;
            else if (mode == "adjoint")
                opt.gradient_mode = GradientMode::Adjoint;
            else
                throw std::runtime_error(
                    "config file: gradient_mode must be 'finite-difference' or "
                    "'adjoint'");
        }
    } else {
        opt.fd_epsilon = 1e-4 * opt.c_max;
        opt.sync_c = opt.c_max;
    }
    opt.validate();
    return opt;
}

struct ResolvedRun {
    ChainConfig chain;
    ControlSchedule schedule;
    int pair_n;
    int pair_m;
    double sample_dt;
};

void check_pair(const ChainConfig& chain, int n, int m) {
    if (n < 1 || n > chain.n_oscillators || m < 1 || m > chain.n_oscillators)
        throw std::runtime_error("pair indices outside 1..N");
    if (n == m) throw std::runtime_error("pair indices must differ");
}

std::vector<std::string> manifest_header(const RunManifest& manifest,
                                         const ResolvedRun& run) {
    std::vector<std::string> lines;
    auto add = [&](const std::string& key, const std::string& value) {
        lines.push_back(key + ": " + value);
    };
    add("command", manifest.command);
    if (!manifest.config_path.empty()) add("config", manifest.config_path);
    if (!manifest.protocol_path.empty()) add("protocol", manifest.protocol_path);
    add("n_oscillators", std::to_string(run.chain.n_oscillators));
    add("omega0", format_csv_number(run.chain.omega0));
    add("temperature", format_csv_number(run.chain.temperature));
    add("c_max", format_csv_number(run.schedule.c_max()));
    add("segments", std::to_string(run.schedule.segments().size()));
    add("total_duration", format_csv_number(run.schedule.total_duration()));
    add("pair", std::to_string(run.pair_n) + "," + std::to_string(run.pair_m));
    add("sample_dt", format_csv_number(run.sample_dt));
    add("seed", std::to_string(manifest.seed));
    return lines;
}

void write_trace_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<TraceSample>& trace, int n_modes) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& line : header) out << "# " << line << "\n";
    out << "t,E_N,E_N_max_bound,energy,W_dis,validity_ratio";
    for (int s = 1; s <= n_modes; ++s) out << ",r_" << s;
    for (int s = 1; s <= n_modes; ++s) out << ",theta_" << s;
    out << ",c\n";
    for (const TraceSample& row : trace) {
        out << format_csv_number(row.t) << ',' << format_csv_number(row.EN)
            << ',' << format_csv_number(row.EN_bound) << ','
            << format_csv_number(row.energy) << ','
            << format_csv_number(row.W_dis) << ','
            << format_csv_number(row.validity_ratio);
        for (double r : row.r) out << ',' << format_csv_number(r);
        for (double th : row.theta) out << ',' << format_csv_number(th);
        out << ',' << format_csv_number(row.c) << '\n';
    }
}

ResolvedRun resolve_protocol_run(const RunManifest& manifest) {
    ProtocolFile file = parse_protocol_file(manifest.protocol_path);
    ChainConfig chain = file.chain;
    if (manifest.temperature_override)
        chain = ChainConfig(chain.n_oscillators, chain.omega0,
                            *manifest.temperature_override);
    const int pair_n = manifest.pair_n.value_or(1);
    const int pair_m = manifest.pair_m.value_or(1 + chain.n_oscillators / 2);
    check_pair(chain, pair_n, pair_m);
    const double dt = manifest.sample_dt.value_or(0.05 / chain.omega0);
    if (!(dt > 0.0)) throw std::runtime_error("sample_dt must be > 0");
    return ResolvedRun{chain, file.schedule, pair_n, pair_m, dt};
}

std::string out_path(const RunManifest& manifest, const std::string& name) {
    std::filesystem::create_directories(manifest.out_dir);
    return (std::filesystem::path(manifest.out_dir) / name).string();
}

}  // namespace

int cmd_simulate(const RunManifest& manifest) {
    if (manifest.protocol_path.empty())
        throw std::runtime_error("simulate requires --protocol");
    const ResolvedRun run = resolve_protocol_run(manifest);
    for (const auto& warning : validate(run.chain, run.schedule))
        std::cerr << "warning: " << warning << "\n";
    const auto trace = simulate_trace(run.chain, run.schedule, run.sample_dt,
                                      run.pair_n, run.pair_m);
    const std::string path = out_path(manifest, "trace.csv");
    write_trace_csv(path, manifest_header(manifest, run), trace,
                    run.chain.n_oscillators);
    std::cout << "wrote " << path << " (" << trace.size() << " samples)\n";
    return 0;
}

int cmd_sudden(const RunManifest& manifest) {
    if (manifest.config_path.empty())
        throw std::runtime_error("sudden requires --config");
    const nlohmann::json doc = load_json(manifest.config_path);
    ChainConfig chain = chain_from_json(doc);
    if (manifest.temperature_override)
        chain = ChainConfig(chain.n_oscillators, chain.omega0,
                            *manifest.temperature_override);
    if (!doc.contains("sudden"))
        throw std::runtime_error("config file: missing 'sudden' section");
    const double coupling = doc["sudden"].value("coupling", 0.05);
    const double horizon = doc["sudden"].value("horizon", 200.0);
    if (coupling < 0.0)
        throw std::runtime_error("config file: sudden.coupling must be >= 0");
    if (!(horizon > 0.0))
        throw std::runtime_error("config file: sudden.horizon must be > 0");

    const ControlSchedule schedule({Segment{horizon, coupling}}, coupling);
    const int pair_n = manifest.pair_n.value_or(1);
    const int pair_m = manifest.pair_m.value_or(1 + chain.n_oscillators / 2);
    check_pair(chain, pair_n, pair_m);
    const double dt = manifest.sample_dt.value_or(0.05 / chain.omega0);
    const ResolvedRun run{chain, schedule, pair_n, pair_m, dt};

    const auto trace =
        simulate_trace(chain, schedule, dt, pair_n, pair_m);
    const std::string path = out_path(manifest, "trace.csv");
    write_trace_csv(path, manifest_header(manifest, run), trace,
                    chain.n_oscillators);
    double peak = 0.0;
    for (const auto& row : trace) peak = std::max(peak, row.EN);
    std::cout << "wrote " << path << "; sudden-switch peak E_N = "
              << format_csv_number(peak) << "\n";
    return 0;
}

int cmd_optimize(const RunManifest& manifest) {
    if (manifest.config_path.empty())
        throw std::runtime_error("optimize requires --config");
    const nlohmann::json doc = load_json(manifest.config_path);
    const ChainConfig chain = chain_from_json(doc);
    const OptimizerConfig opt = optimizer_from_json(doc);

    const OptimizationResult result =
        optimize(initial_protocol(opt, manifest.seed), chain, opt);

    const WorkReport work = total_dissipated_work(result.final_squeeze, chain);

    // energy at the end of the full protocol (back at c = 0)
    ModeMoments final_state = initial_moments(chain);
    for (const Segment& seg : result.protocol.segments())
        final_state = propagate_segment(final_state, chain, seg.coupling,
                                        seg.duration);
    const double e_final = chain_energy(
        final_state, chain, result.protocol.segments().back().coupling);

    nlohmann::json metadata;
    metadata["status"] = to_string(result.status);
    metadata["squeeze_segments"] = result.squeeze_segments;
    metadata["cost_history"] = result.cost_history;
    metadata["peak_E_N"] = result.peak_EN;
    metadata["peak_time"] = result.peak_time;
    metadata["validity_ratio_at_peak"] = result.validity_ratio_at_peak;
    metadata["angle_sync_error_at_peak"] = result.angle_sync_error_at_peak;
    metadata["mean_squeezing_R"] = work.mean_squeezing;
    metadata["W_dis"] = work.total;
    metadata["ground_energy"] = work.ground_energy;
    metadata["final_energy"] = e_final;
    metadata["seed"] = manifest.seed;
    if (work.mean_squeezing > 0.0)
        metadata["T_m_estimate"] =
            max_entanglement_temperature(work.mean_squeezing, chain.omega0);

    const std::string protocol_path = out_path(manifest, "protocol.json");
    write_protocol_file(protocol_path, chain, result.protocol, metadata);

    const int pair_n = manifest.pair_n.value_or(1);
    const int pair_m = manifest.pair_m.value_or(1 + chain.n_oscillators / 2);
    check_pair(chain, pair_n, pair_m);
    const double dt = manifest.sample_dt.value_or(0.05 / chain.omega0);
    const ResolvedRun run{chain, result.protocol, pair_n, pair_m, dt};
    const auto trace =
        simulate_trace(chain, result.protocol, dt, pair_n, pair_m);
    const std::string trace_path = out_path(manifest, "trace.csv");
    write_trace_csv(trace_path, manifest_header(manifest, run), trace,
                    chain.n_oscillators);

    std::cout << "status: " << to_string(result.status) << "\n"
              << "iterations: " << result.cost_history.size() - 1 << "\n"
              << "final cost J = "
              << format_csv_number(result.cost_history.back()) << "\n"
              << "peak E_N = " << format_csv_number(result.peak_EN) << " at t = "
              << format_csv_number(result.peak_time) << "\n"
              << "validity ratio at peak = "
              << format_csv_number(result.validity_ratio_at_peak) << "\n"
              << "mean squeezing R = " << format_csv_number(work.mean_squeezing)
              << "\n"
              << "dissipated work W_dis = " << format_csv_number(work.total)
              << "\n"
              << "chain energy: E0 = " << format_csv_number(work.ground_energy)
              << " -> " << format_csv_number(e_final) << "\n"
              << "wrote " << protocol_path << ", " << trace_path << "\n";

    return result.status == OptimizeStatus::Converged ? 0 : 2;
}

int cmd_sweep_temperature(const RunManifest& manifest) {
    if (manifest.protocol_path.empty())
        throw std::runtime_error("sweep-temp requires --protocol");
    std::vector<double> temperatures{0.0, 0.25, 0.5, 1.0};
    if (!manifest.config_path.empty()) {
        const nlohmann::json doc = load_json(manifest.config_path);
        if (doc.contains("sweep") && doc["sweep"].contains("temperatures"))
            temperatures =
                doc["sweep"]["temperatures"].get<std::vector<double>>();
    }
    for (double t : temperatures)
        if (t < 0.0)
            throw std::runtime_error("sweep temperatures must be >= 0");

    const ProtocolFile file = parse_protocol_file(manifest.protocol_path);
    const int pair_n = manifest.pair_n.value_or(1);
    const int pair_m =
        manifest.pair_m.value_or(1 + file.chain.n_oscillators / 2);
    check_pair(file.chain, pair_n, pair_m);
    const double dt = manifest.sample_dt.value_or(0.05 / file.chain.omega0);

    std::ofstream out;
    const std::string path = out_path(manifest, "sweep.csv");
    out.open(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");

    const ResolvedRun run{file.chain, file.schedule, pair_n, pair_m, dt};
    for (const auto& line : manifest_header(manifest, run))
        out << "# " << line << "\n";
    {
        std::ostringstream temps;
        for (std::size_t i = 0; i < temperatures.size(); ++i)
            temps << (i ? "," : "") << format_csv_number(temperatures[i]);
        out << "# sweep_temperatures: " << temps.str() << "\n";
    }
    out << "T,peak_E_N,E_N_max_bound,T_m_estimate\n";

    for (double t : temperatures) {
        const ChainConfig chain(file.chain.n_oscillators, file.chain.omega0, t);
        const auto trace =
            simulate_trace(chain, file.schedule, dt, pair_n, pair_m);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < trace.size(); ++i)
            if (trace[i].EN > trace[arg].EN) arg = i;
        const TraceSample& peak = trace[arg];
        double r_mean = 0.0;
        for (double r : peak.r) r_mean += r;
        r_mean /= chain.n_oscillators;
        const double t_m =
            r_mean > 0.0
                ? max_entanglement_temperature(r_mean, chain.omega0)
                : 0.0;
        out << format_csv_number(t) << ',' << format_csv_number(peak.EN) << ','
            << format_csv_number(peak.EN_bound) << ','
            << format_csv_number(t_m) << '\n';
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace entchain
