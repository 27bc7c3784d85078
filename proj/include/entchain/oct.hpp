#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entchain/chain_model.hpp"
#include "entchain/covariance.hpp"
#include "entchain/mode_dynamics.hpp"

namespace entchain {

enum class GradientMode { FiniteDifference, Adjoint };

/// Numerical parameters of the protocol search. The squeezing stage is
/// n_segments equal pieces over [0, horizon]; the synchronization stage holds
/// sync_c until the negativity peaks, then freezes at c = 0.
struct OptimizerConfig {
    int n_segments = 40;
    double horizon = 20.0;
    double c_max = 0.05;
    double step_size = 0.01;        ///< initial descent step on the raw gradient
    int max_iterations = 5000;
    double convergence_tol = 1e-10; ///< relative cost change
    GradientMode gradient_mode = GradientMode::FiniteDifference;
    double fd_epsilon = 5e-6;       ///< central-difference perturbation, < c_max/10
    double sync_c = 0.05;           ///< coupling held while angles synchronize
    double sync_max_time = 300.0;
    double peak_tol = 0.02;         ///< accept the first peak within this of the window best

    /// Throws std::invalid_argument on violated bounds (horizon = 0 is the
    /// allowed degenerate sync-only case).
    void validate() const;
};

/// Cost functional: the argument of the maximum-attainability bound evaluated
/// at the end of the protocol,
///   J = (2/N sum_{s odd} e^{-2 r_s}) * (2/N sum_{s even} e^{-2 r_s}),
/// with r_s extracted at the final segment's coupling. J = 1 for c == 0;
/// smaller J means larger attainable negativity.
double cost(const ControlSchedule& protocol, const ChainConfig& config);

/// Same functional on an explicit squeezing vector (indexed by s - 1).
double cost_from_squeezing(std::span<const double> r);

/// dJ/dc_k for every segment of the protocol. Finite-difference mode uses
/// central differences; the perturbed evaluations may step slightly outside
/// [0, c_max] (the dynamics is well defined for any c with omega_min^2 > 0,
/// and a symmetric stencil is what makes the two modes agree at the
/// unsqueezed kink of J). Adjoint mode sweeps the costate of the per-mode
/// moment maps backward; modes with sinh(2r) below 1e-6 at the terminal time
/// contribute zero (the subgradient there that matches the central stencil).
std::vector<double> gradient(const ControlSchedule& protocol,
                             const ChainConfig& config,
                             const OptimizerConfig& opt);
std::vector<double> gradient_fd(const ControlSchedule& protocol,
                                const ChainConfig& config, double fd_epsilon);
std::vector<double> gradient_adjoint(const ControlSchedule& protocol,
                                     const ChainConfig& config);

enum class OptimizeStatus { Converged, MaxIterations, Stalled };
std::string to_string(OptimizeStatus s);

/// Outcome of the protocol search. protocol holds all three phases; the
/// first squeeze_segments segments are the optimized squeezing stage.
struct OptimizationResult {
    ControlSchedule protocol;
    int squeeze_segments = 0;
    std::vector<double> cost_history;   ///< accepted J values, nonincreasing
    SqueezeDecomposition final_squeeze; ///< at the end of the squeezing stage
    double peak_EN = 0.0;
    double peak_time = 0.0;             ///< absolute time of the detected peak
    double validity_ratio_at_peak = 0.0;
    double angle_sync_error_at_peak = 0.0;
    OptimizeStatus status = OptimizeStatus::Converged;
};

/// Projected steepest descent with backtracking line search from the given
/// initial squeezing-stage protocol, followed by the synchronize-and-freeze
/// extension. Every iterate satisfies the control bounds exactly. A stalled
/// line search at a point where the projected gradient vanishes counts as
/// converged (bound-constrained stationarity); otherwise it is reported as
/// Stalled. Throws std::invalid_argument if the initial protocol violates
/// the bounds or does not have n_segments segments over the horizon.
OptimizationResult optimize(const ControlSchedule& initial_protocol,
                            const ChainConfig& config,
                            const OptimizerConfig& opt);

/// Uniform initial protocol at c_max/2, or a seeded uniform-random one when
/// seed != 0 (identical seeds give identical protocols).
ControlSchedule initial_protocol(const OptimizerConfig& opt,
                                 std::uint64_t seed = 0);

/// Synchronization phase: hold c = sync_c from the post-squeeze state, locate
/// the first negativity peak within peak_tol of the window best, then freeze
/// with a final c = 0 segment (all mode frequencies coincide, so the peak
/// value is maintained). The internal sampling step is 0.05/omega0 with
/// parabolic refinement of the peak time. Throws std::invalid_argument when
/// the input state carries no squeezing in the c = 0 frame, and
/// std::runtime_error if no peak occurs within sync_max_time.
struct SyncResult {
    std::vector<Segment> appended;  ///< hold segment (if any) + freeze segment
    double peak_EN;
    double peak_time;  ///< absolute time (post_squeeze.time + hold duration)
    double validity_ratio;
    double angle_sync_error;
};
SyncResult synchronize_and_freeze(const ModeMoments& post_squeeze,
                                  const ChainConfig& config,
                                  const OptimizerConfig& opt);

/// E_N(t) of the single-segment sudden-switch protocol, for baselines.
/// Sampled every sample_dt on the opposite pair (1, 1 + N/2).
std::vector<std::pair<double, double>> sudden_switch_baseline(
    const ChainConfig& config, double c_value, double horizon,
    double sample_dt);

}  // namespace entchain
