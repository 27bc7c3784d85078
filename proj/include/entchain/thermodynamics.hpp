#pragma once

#include <vector>

#include "entchain/chain_model.hpp"
#include "entchain/mode_dynamics.hpp"

namespace entchain {

/// f(T) = coth(omega0 / 2T); f(0) = 1 taken explicitly.
double thermal_factor(double temperature, double omega0);

/// Dissipated work of one frequency-modulated mode: W = omega_s sinh^2(r_s).
double dissipated_work_mode(double omega_s, double r_s);

/// Per-mode and aggregate dissipated work plus energy bookkeeping.
struct WorkReport {
    std::vector<double> per_mode;  ///< W_s = omega_s sinh^2 r_s
    double total;                  ///< W_dis = sum_s W_s
    double mean_squeezing;         ///< R = sum_s r_s / N
    double ground_energy;          ///< E0 = N omega0 / 2
    double energy_with_work;       ///< E0 + W_dis
};
WorkReport total_dissipated_work(const SqueezeDecomposition& decomp,
                                 const ChainConfig& config);

/// Instantaneous mean energy E = 1/2 sum_s (pp_s + omega_s(c)^2 qq_s).
double chain_energy(const ModeMoments& m, const ChainConfig& config, double c);

/// Estimated temperature above which entanglement vanishes,
/// T_m = omega0 / ln(coth 2R) with R the mean squeezing. An estimate only
/// (uniform-squeezing replacement); never used as a simulator threshold.
/// Throws std::domain_error for R <= 0.
double max_entanglement_temperature(double mean_squeezing, double omega0);

}  // namespace entchain
