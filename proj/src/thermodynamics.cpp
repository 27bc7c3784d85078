#include "entchain/thermodynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace entchain {

double thermal_factor(double temperature, double omega0) {
    if (temperature < 0.0)
        throw std::invalid_argument("thermal_factor: temperature must be >= 0");
    if (temperature == 0.0) return 1.0;  // coth(inf) limit
    return 1.0 / std::tanh(omega0 / (2.0 * temperature));
}

double dissipated_work_mode(double omega_s, double r_s) {
    const double sh = std::sinh(r_s);
    return omega_s * sh * sh;
}

WorkReport total_dissipated_work(const SqueezeDecomposition& decomp,
                                 const ChainConfig& config) {
    const int n = config.n_oscillators;
    WorkReport report;
    report.per_mode.resize(n);
    report.total = 0.0;
    double r_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        report.per_mode[i] = dissipated_work_mode(decomp.omega[i], decomp.r[i]);
        report.total += report.per_mode[i];
        r_sum += decomp.r[i];
    }
    report.mean_squeezing = r_sum / n;
    report.ground_energy = n * config.omega0 / 2.0;
    report.energy_with_work = report.ground_energy + report.total;
    return report;
}

double chain_energy(const ModeMoments& m, const ChainConfig& config, double c) {
    double e = 0.0;
    for (int s = 1; s <= config.n_oscillators; ++s) {
        const double w = mode_frequency(config, c, s);
        e += 0.5 * (m.pp[s - 1] + w * w * m.qq[s - 1]);
    }
    return e;
}

double max_entanglement_temperature(double mean_squeezing, double omega0) {
    if (!(mean_squeezing > 0.0))
        throw std::domain_error(
            "max_entanglement_temperature: requires R > 0 (T_m -> 0)");
    return omega0 / std::log(1.0 / std::tanh(2.0 * mean_squeezing));
}

}  // namespace entchain
