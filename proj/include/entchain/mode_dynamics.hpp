#pragma once

#include <vector>

#include "entchain/chain_model.hpp"

namespace entchain {

/// Second moments of the normal modes at one instant. Index s-1 holds mode s:
/// qq = <Q_s Q_s^dag>, pp = <P_s P_s^dag>, qp = Re<Q_s P_s^dag>. These are
/// real for every mode; modes s and N-s carry identical values at all times
/// when initialized equal, which the uncoupled thermal start guarantees.
struct ModeMoments {
    std::vector<double> qq;
    std::vector<double> pp;
    std::vector<double> qp;
    double time = 0.0;
};

/// Per-mode squeezing decomposition relative to the instantaneous frequency:
/// moments are first divided by the thermal factor f(T), then
/// cosh(2r) = omega*qq' + pp'/omega and theta recovered from the remaining
/// two combinations. theta in [0, pi); theta = 0 reported when r = 0.
struct SqueezeDecomposition {
    std::vector<double> omega;
    std::vector<double> r;
    std::vector<double> theta;
};

/// Thermal state of the uncoupled chain: qq = f(T)/(2 omega0),
/// pp = f(T) omega0 / 2, qp = 0 for every mode, at time 0.
ModeMoments initial_moments(const ChainConfig& config);

/// Exact constant-coupling evolution for a duration dt >= 0. Each mode
/// rotates at omega_s(c); the uncertainty product qq*pp - qp^2 is preserved
/// up to floating-point error.
ModeMoments propagate_segment(const ModeMoments& m, const ChainConfig& config,
                              double c, double dt);

/// Moments sampled on the uniform grid {0, sample_dt, 2*sample_dt, ...} plus
/// the exact end of the schedule. Segment boundaries are honored exactly: a
/// coupling change switches omega_s instantaneously, moments stay continuous.
/// An empty schedule yields a series containing only m0.
std::vector<ModeMoments> propagate_schedule(const ModeMoments& m0,
                                            const ChainConfig& config,
                                            const ControlSchedule& schedule,
                                            double sample_dt);

/// Inversion of the squeezing parametrization at coupling c. Throws
/// std::runtime_error if the uncertainty product of any mode deviates from
/// f(T)^2/4 by more than 1e-6 relative (state is not a pure-mode squeezed
/// thermal state; indicates integrator misuse).
SqueezeDecomposition extract_squeeze(const ModeMoments& m,
                                     const ChainConfig& config, double c);

/// Forward squeezing parametrization: the moments of a single mode with
/// frequency omega, squeezing r, angle theta, scaled by the thermal factor f.
/// Returns {qq, qp, pp}.
struct SingleModeMoments {
    double qq;
    double qp;
    double pp;
};
SingleModeMoments forward_squeeze_moments(double omega, double r, double theta,
                                          double f);

/// Linear map advancing one mode's (qq, qp, pp) by dt at frequency omega.
struct MomentMap {
    double a[3][3];
};
MomentMap segment_moment_map(double omega, double dt);

/// Derivative of segment_moment_map with respect to omega^2 (used by the
/// adjoint gradient; verified against finite differences in the tests).
MomentMap segment_moment_map_domega2(double omega, double dt);

}  // namespace entchain
