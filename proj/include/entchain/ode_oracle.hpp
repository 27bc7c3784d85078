#pragma once

#include <vector>

#include "entchain/chain_model.hpp"
#include "entchain/mode_dynamics.hpp"

namespace entchain {

/// Brute-force verification oracle: integrates the per-mode moment ODEs
///   d<QQ>/dt = 2<QP>,  d<QP>/dt = <PP> - omega^2 <QQ>,  d<PP>/dt = -2 omega^2 <QP>
/// with classical RK4, independently of the closed-form rotation used by
/// propagate_segment. Returns the moments at t = 0 and after each segment.
/// Intended for tests only; dt_step default 1e-3/omega0.
std::vector<ModeMoments> ode_oracle(const ModeMoments& m0,
                                    const ChainConfig& config,
                                    const ControlSchedule& schedule,
                                    double dt_step);

}  // namespace entchain
