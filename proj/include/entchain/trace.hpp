#pragma once

#include <vector>

#include "entchain/chain_model.hpp"
#include "entchain/covariance.hpp"

namespace entchain {

/// One row of a simulation time series for a selected oscillator pair.
struct TraceSample {
    double t;
    double EN;
    double EN_bound;  ///< max attainable negativity for the instantaneous r_s
    double energy;
    double W_dis;     ///< sum_s omega_s sinh^2 r_s at the instantaneous coupling
    double validity_ratio;
    std::vector<double> r;
    std::vector<double> theta;
    double c;
};

/// Full observable time series of a protocol: moments are propagated exactly,
/// the squeezing decomposition is taken at the instantaneous coupling
/// (right-continuous at segment boundaries), and E_N uses the generic
/// eigen-solve, switching to the closed-form eigenvalues only when the pair
/// is opposite and the covariance has the exact symmetric form.
std::vector<TraceSample> simulate_trace(
    const ChainConfig& config, const ControlSchedule& schedule,
    double sample_dt, int pair_n, int pair_m,
    ThermalScaling scaling = ThermalScaling::FSquared);

}  // namespace entchain
