#pragma once

// Test-only oracles, independent of the normal-mode implementation: the full
// 2N x 2N site-basis covariance matrix is integrated directly from the chain
// Hamiltonian with RK4, without any mode decomposition.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "entchain/chain_model.hpp"

namespace entchain::testing {

/// Initial site-basis covariance (2Re convention, ordering q_1..q_N p_1..p_N):
/// f(T) * diag(1/omega0 ... , omega0 ...).
Eigen::MatrixXd site_initial_covariance(const ChainConfig& config);

/// Integrate d Gamma/dt = A Gamma + Gamma A^T with A = [[0, I], [-K(c), 0]],
/// K the ring dynamical matrix, piecewise-constant c from the schedule.
Eigen::MatrixXd site_evolve_covariance(const ChainConfig& config,
                                       const ControlSchedule& schedule,
                                       double dt_step);

/// Restriction of a site-basis covariance to (q_n, p_n, q_m, p_m), 1-based.
Eigen::Matrix4d site_pair_restriction(const Eigen::MatrixXd& gamma, int n,
                                      int m);

/// Random schedule of `segments` pieces, couplings in [0, c_max], durations
/// in [0.5, 1.5] * (t_total / segments). Deterministic in the seed.
ControlSchedule random_schedule(std::uint64_t seed, int segments, double c_max,
                                double t_total);

}  // namespace entchain::testing
