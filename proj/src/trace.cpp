#include "entchain/trace.hpp"

#include <cmath>

#include "entchain/thermodynamics.hpp"

namespace entchain {

namespace {

// E_N through the closed-form eigenvalues when the opposite-pair symmetric
// form holds exactly, otherwise through the generic eigen-solve
double pair_negativity(const PairCovariance& g, const ChainConfig& config,
                       bool opposite) {
    if (opposite) {
        const auto abcd = symmetric_form_entries(g, config.omega0);
        if (abcd) {
            const auto [a, b, c, d] = *abcd;
            const double rad1 = (a - b - (c - d)) * (a + b + c + d);
            const double rad2 = (a + b - (c + d)) * (a - b + c - d);
            if (rad1 >= 0.0 && rad2 >= 0.0) {
                const auto [l1, l2] = simplified_eigenvalues(a, b, c, d);
                double en = 0.0;
                if (l1 < 1.0 - 1e-12) en += -std::log2(l1);
                if (l2 < 1.0 - 1e-12) en += -std::log2(l2);
                return en;
            }
        }
    }
    return log_negativity(g);
}

}  // namespace

std::vector<TraceSample> simulate_trace(const ChainConfig& config,
                                        const ControlSchedule& schedule,
                                        double sample_dt, int pair_n,
                                        int pair_m, ThermalScaling scaling) {
    const int n = config.n_oscillators;
    const bool opposite =
        ((pair_n - pair_m) % n + n) % n == n / 2 ||
        ((pair_m - pair_n) % n + n) % n == n / 2;

    const auto series =
        propagate_schedule(initial_moments(config), config, schedule, sample_dt);

    std::vector<TraceSample> trace;
    trace.reserve(series.size());
    for (const ModeMoments& m : series) {
        const double c = schedule.coupling_at(m.time);
        const SqueezeDecomposition decomp = extract_squeeze(m, config, c);

        TraceSample row;
        row.t = m.time;
        row.c = c;
        row.r = decomp.r;
        row.theta = decomp.theta;
        row.EN = pair_negativity(pair_covariance(m, config, pair_n, pair_m),
                                 config, opposite);
        row.EN_bound = max_log_negativity(decomp.r, config, scaling);
        row.energy = chain_energy(m, config, c);
        row.W_dis = 0.0;
        for (int i = 0; i < n; ++i)
            row.W_dis += dissipated_work_mode(decomp.omega[i], decomp.r[i]);
        row.validity_ratio = validity_check(c, decomp.r, config).ratio;
        trace.push_back(std::move(row));
    }
    return trace;
}

}  // namespace entchain
