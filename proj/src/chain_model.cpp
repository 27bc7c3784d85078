#include "entchain/chain_model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace entchain {

ChainConfig::ChainConfig(int n, double omega0_in, double temperature_in)
    : n_oscillators(n), omega0(omega0_in), temperature(temperature_in) {
    if (n < 4) throw std::invalid_argument("ChainConfig: N must be >= 4");
    if (n % 2 != 0)
        throw std::invalid_argument(
            "ChainConfig: N must be even (the opposite pair m = N/2 + n must "
            "exist)");
    if (!(omega0 > 0.0))
        throw std::invalid_argument("ChainConfig: omega0 must be > 0");
    if (!(temperature >= 0.0))
        throw std::invalid_argument("ChainConfig: temperature must be >= 0");
}

ControlSchedule::ControlSchedule(std::vector<Segment> segments, double c_max)
    : segments_(std::move(segments)), c_max_(c_max) {
    if (!(c_max_ >= 0.0))
        throw std::invalid_argument("ControlSchedule: c_max must be >= 0");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!(s.duration > 0.0)) {
            std::ostringstream msg;
            msg << "ControlSchedule: segment " << i + 1
                << " has nonpositive duration " << s.duration;
            throw std::invalid_argument(msg.str());
        }
        if (!(s.coupling >= 0.0) || s.coupling > c_max_) {
            std::ostringstream msg;
            msg << "ControlSchedule: segment " << i + 1 << " coupling "
                << s.coupling << " outside [0, " << c_max_ << "]";
            throw std::invalid_argument(msg.str());
        }
    }
}

double ControlSchedule::total_duration() const {
    double total = 0.0;
    for (const Segment& s : segments_) total += s.duration;
    return total;
}

double ControlSchedule::coupling_at(double t) const {
    if (segments_.empty()) return 0.0;
    double end = 0.0;
    for (const Segment& s : segments_) {
        end += s.duration;
        // right-continuous: a boundary belongs to the next segment
        if (t < end - 1e-12 * std::max(1.0, end)) return s.coupling;
    }
    return segments_.back().coupling;
}

ControlSchedule ControlSchedule::appended(
    const std::vector<Segment>& extra) const {
    std::vector<Segment> all = segments_;
    all.insert(all.end(), extra.begin(), extra.end());
    return ControlSchedule(std::move(all), c_max_);
}

double mode_coupling_factor(const ChainConfig& config, int s) {
    const int n = config.n_oscillators;
    if (s < 1 || s > n)
        throw std::invalid_argument("mode_coupling_factor: s out of range 1..N");
    // fold to min(s, N-s) so omega_s == omega_{N-s} bit for bit, and the
    // zero mode s = N evaluates sin(0) exactly
    const int folded = std::min(s, n - s);
    const double sine = std::sin(std::numbers::pi * folded / n);
    return 4.0 * sine * sine;
}

double mode_frequency(const ChainConfig& config, double c, int s) {
    return std::sqrt(config.omega0 * config.omega0 +
                     c * mode_coupling_factor(config, s));
}

std::vector<double> mode_frequencies(const ChainConfig& config, double c) {
    std::vector<double> omega(config.n_oscillators);
    for (int s = 1; s <= config.n_oscillators; ++s)
        omega[s - 1] = mode_frequency(config, c, s);
    return omega;
}

std::vector<std::string> validate(const ChainConfig& config,
                                  const ControlSchedule& schedule) {
    std::vector<std::string> warnings;
    const double w2 = config.omega0 * config.omega0;
    const double ratio = schedule.c_max() / w2;
    if (ratio > 0.1) {
        std::ostringstream msg;
        msg << "weak-coupling regime violated: c_max/omega0^2 = " << ratio
            << " (the optimal-angle analysis assumes c << omega0^2; the "
               "dynamics itself stays exact)";
        warnings.push_back(msg.str());
    }
    for (const Segment& s : schedule.segments()) {
        if (s.coupling / w2 > 0.1) {
            warnings.push_back(
                "a segment coupling exceeds 0.1*omega0^2; bound diagnostics "
                "may be loose");
            break;
        }
    }
    return warnings;
}

}  // namespace entchain
