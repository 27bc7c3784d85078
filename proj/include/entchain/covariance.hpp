#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entchain/chain_model.hpp"
#include "entchain/mode_dynamics.hpp"

namespace entchain {

/// 4x4 covariance matrix of two oscillators in the ordering
/// (q_n, p_n, q_m, p_m), convention Gamma_xy = 2 Re<xy>. The uncoupled
/// vacuum at omega0 = 1 gives the identity.
struct PairCovariance {
    Eigen::Matrix4d gamma;
    int site_n;
    int site_m;
};

/// Reconstructs the pair covariance from mode moments via the inverse DFT:
/// entries are (2/N) sum_s cos(2 pi s (n-m)/N) * (mode moment). For opposite
/// pairs the phase is the exact alternating sign (-1)^s. The sine-weighted
/// sums vanish by the s <-> N-s degeneracy; a residual above 1e-10 throws
/// (it means the degeneracy was broken upstream). Sites are 1-based.
PairCovariance pair_covariance(const ModeMoments& m, const ChainConfig& config,
                               int n, int m_site);

/// Symplectic eigenvalue moduli (the two distinct values, ascending) of a
/// 4x4 covariance matrix: |eigenvalues of i Omega Gamma|.
std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& gamma);

/// Logarithmic negativity: partial-transpose on the second oscillator (sign
/// flip of p_m), then -1/2 sum_i log2 min(1, |l_i|) over the four eigenvalue
/// moduli of i Omega Gamma~. Moduli within 1e-12 of 1 are treated as exactly
/// 1 so that product states report exactly 0. Throws std::invalid_argument
/// if gamma itself is unphysical (symplectic eigenvalue < 1 - 1e-8).
double log_negativity(const PairCovariance& g);

/// Closed form for the partially transposed symplectic eigenvalues of a
/// symmetric-form pair covariance:
///   |l_{1,2}| = sqrt[(a -+ b - (c -+ d)) (a +- b + c +- d)]
/// with a = Gamma_{q_n q_n} = Gamma_{p_n p_n}, b = Gamma_{q_n q_m} =
/// Gamma_{p_n p_m}, c = Gamma_{q_n p_n}, d = Gamma_{q_n p_m}. Returned
/// ascending. Throws std::domain_error on a negative radicand (the symmetry
/// assumptions are violated).
std::pair<double, double> simplified_eigenvalues(double a, double b, double c,
                                                 double d);

/// If the pair covariance has the symmetric opposite-pair form after
/// rescaling positions by sqrt(omega0) (relative tolerance 1e-9), returns its
/// (a, b, c, d) entries; otherwise nullopt.
std::optional<std::array<double, 4>> symmetric_form_entries(
    const PairCovariance& g, double omega0);

/// How the finite-temperature factor enters the maximum-entanglement bound:
/// both partially transposed symplectic eigenvalues scale by f(T), so the
/// product under the log scales by f(T)^2 (the default). FLinear applies a
/// single factor f(T) for comparison.
enum class ThermalScaling { FSquared, FLinear };

/// Maximum attainable logarithmic negativity for opposite pairs at fixed
/// per-mode squeezing:
///   -1/2 log2[ F * (2/N sum_{s odd} e^{-2 r_s}) (2/N sum_{s even} e^{-2 r_s}) ]
/// clamped at 0 (a negative value means no entanglement is attainable).
double max_log_negativity(std::span<const double> r, const ChainConfig& config,
                          ThermalScaling scaling = ThermalScaling::FSquared);

/// Angles at which opposite-pair entanglement is maximal for fixed squeezing:
/// pi/4 (mod pi) for even s, 3 pi/4 (mod pi) for odd s. Indexed by s - 1.
std::vector<double> optimal_angles(int n_modes);

/// Validity of the optimal-angle analysis: ratio = c sum_s e^{2 r_s} / (4 N).
/// valid below 0.1, strict below 0.01.
struct ValidityResult {
    double ratio;
    bool valid;
    bool strict;
};
ValidityResult validity_check(double c, std::span<const double> r,
                              const ChainConfig& config);

/// Smallest distance from the extracted angles to the optimal pattern, taken
/// modulo pi per mode and modulo a common rotation of all angles (free
/// evolution shifts every angle uniformly without changing the negativity).
/// Diagnostic only. Modes with r below r_floor are skipped.
double angle_sync_error(const SqueezeDecomposition& decomp,
                        double r_floor = 1e-6);

}  // namespace entchain
