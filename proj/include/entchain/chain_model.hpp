#pragma once

#include <string>
#include <vector>

namespace entchain {

/// Static parameters of a closed ring of identical harmonic oscillators
/// (dimensionless units, hbar = 1).
struct ChainConfig {
    int n_oscillators;   ///< N, even and >= 4
    double omega0;       ///< on-site frequency, > 0
    double temperature;  ///< initial-state temperature, >= 0

    /// Throws std::invalid_argument on N odd, N < 4, omega0 <= 0 or T < 0.
    ChainConfig(int n, double omega0_in, double temperature_in);
};

/// One piece of a piecewise-constant coupling protocol.
struct Segment {
    double duration;  ///< > 0
    double coupling;  ///< >= 0
};

/// Piecewise-constant nearest-neighbour coupling c(t), right-continuous at
/// segment boundaries. An empty schedule (total duration 0) is a valid
/// degenerate value; protocol files require at least one segment.
class ControlSchedule {
public:
    ControlSchedule() = default;
    /// Throws std::invalid_argument on nonpositive durations or couplings
    /// outside [0, c_max].
    ControlSchedule(std::vector<Segment> segments, double c_max);

    const std::vector<Segment>& segments() const { return segments_; }
    double c_max() const { return c_max_; }
    double total_duration() const;

    /// c(t) with t measured from the start of the schedule. Right-continuous:
    /// at a boundary the next segment's coupling applies; past the end the
    /// last segment's coupling is returned (0 for an empty schedule).
    double coupling_at(double t) const;

    /// New schedule with extra segments concatenated (same c_max).
    ControlSchedule appended(const std::vector<Segment>& extra) const;

private:
    std::vector<Segment> segments_;
    double c_max_ = 0.0;
};

/// Dispersion relation: omega_s^2 = omega0^2 + 4 c sin^2(pi s / N), s = 1..N.
/// The returned vector is indexed by s - 1. The s <-> N-s degeneracy is exact
/// in floating point (the folded index min(s, N-s) is used), and s = N is the
/// zero mode with omega_N = omega0 for every c.
std::vector<double> mode_frequencies(const ChainConfig& config, double c);

/// Single-mode variant, s = 1..N.
double mode_frequency(const ChainConfig& config, double c, int s);

/// d(omega_s^2)/dc = 4 sin^2(pi s / N), folded so it is exactly degenerate
/// under s <-> N-s and exactly 0 for the zero mode s = N.
double mode_coupling_factor(const ChainConfig& config, int s);

/// Human-readable diagnostics for a (config, schedule) pair. Structural
/// violations (odd N, omega0 <= 0, bad segments) are rejected at construction;
/// this reports soft issues such as the weak-coupling ratio c_max / omega0^2.
std::vector<std::string> validate(const ChainConfig& config,
                                  const ControlSchedule& schedule);

}  // namespace entchain
