#include "entchain/mode_dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "entchain/thermodynamics.hpp"

namespace entchain {

ModeMoments initial_moments(const ChainConfig& config) {
    const int n = config.n_oscillators;
    const double f = thermal_factor(config.temperature, config.omega0);
    ModeMoments m;
    m.qq.assign(n, f / (2.0 * config.omega0));
    m.pp.assign(n, f * config.omega0 / 2.0);
    m.qp.assign(n, 0.0);
    m.time = 0.0;
    return m;
}

MomentMap segment_moment_map(double omega, double dt) {
    const double ph = omega * dt;
    const double co = std::cos(ph);
    const double si = std::sin(ph);
    // congruence induced by Q -> Q cos + P sin/w, P -> -w Q sin + P cos
    // acting on the vector (qq, qp, pp)
    MomentMap t;
    t.a[0][0] = co * co;
    t.a[0][1] = 2.0 * si * co / omega;
    t.a[0][2] = si * si / (omega * omega);
    t.a[1][0] = -omega * si * co;
    t.a[1][1] = co * co - si * si;
    t.a[1][2] = si * co / omega;
    t.a[2][0] = omega * omega * si * si;
    t.a[2][1] = -2.0 * omega * si * co;
    t.a[2][2] = co * co;
    return t;
}

MomentMap segment_moment_map_domega2(double omega, double dt) {
    const double ph = omega * dt;
    const double co = std::cos(ph);
    const double si = std::sin(ph);
    const double w = omega;
    const double w2 = w * w;
    // d/d(omega^2) with d(omega)/d(omega^2) = 1/(2 omega),
    // d(cos)/d(omega^2) = -si*dt/(2w), d(sin)/d(omega^2) = co*dt/(2w)
    MomentMap d;
    d.a[0][0] = -si * co * dt / w;
    d.a[0][1] = dt * (co * co - si * si) / w2 - si * co / (w * w2);
    d.a[0][2] = si * co * dt / (w * w2) - si * si / (w2 * w2);
    d.a[1][0] = -si * co / (2.0 * w) - 0.5 * dt * (co * co - si * si);
    d.a[1][1] = -2.0 * si * co * dt / w;
    d.a[1][2] = 0.5 * dt * (co * co - si * si) / w2 - si * co / (2.0 * w * w2);
    d.a[2][0] = si * si + w * si * co * dt;
    d.a[2][1] = -si * co / w - dt * (co * co - si * si);
    d.a[2][2] = -si * co * dt / w;
    return d;
}

namespace {

void apply_map(const MomentMap& t, double& qq, double& qp, double& pp) {
    const double nqq = t.a[0][0] * qq + t.a[0][1] * qp + t.a[0][2] * pp;
    const double nqp = t.a[1][0] * qq + t.a[1][1] * qp + t.a[1][2] * pp;
    const double npp = t.a[2][0] * qq + t.a[2][1] * qp + t.a[2][2] * pp;
    qq = nqq;
    qp = nqp;
    pp = npp;
}

}  // namespace

ModeMoments propagate_segment(const ModeMoments& m, const ChainConfig& config,
                              double c, double dt) {
    if (dt < 0.0) throw std::invalid_argument("propagate_segment: dt < 0");
    const int n = config.n_oscillators;
    ModeMoments out = m;
    if (dt == 0.0) return out;
    for (int s = 1; s <= n; ++s) {
        const MomentMap t = segment_moment_map(mode_frequency(config, c, s), dt);
        apply_map(t, out.qq[s - 1], out.qp[s - 1], out.pp[s - 1]);
    }
    out.time = m.time + dt;
    return out;
}

std::vector<ModeMoments> propagate_schedule(const ModeMoments& m0,
                                            const ChainConfig& config,
                                            const ControlSchedule& schedule,
                                            double sample_dt) {
    if (!(sample_dt > 0.0))
        throw std::invalid_argument("propagate_schedule: sample_dt must be > 0");
    std::vector<ModeMoments> series;
    series.push_back(m0);
    const auto& segs = schedule.segments();
    if (segs.empty()) return series;

    const double total = schedule.total_duration();
    const double snap = 1e-12 * std::max(1.0, total);

    ModeMoments cur = m0;
    double t_local = 0.0;  // time within the schedule
    std::size_t seg = 0;
    double seg_end = segs[0].duration;

    auto advance_to = [&](double target) {
        while (seg + 1 < segs.size() && target > seg_end - snap) {
            const double dt = seg_end - t_local;
            if (dt > 0.0)
                cur = propagate_segment(cur, config, segs[seg].coupling, dt);
            t_local = seg_end;
            ++seg;
            seg_end += segs[seg].duration;
        }
        const double dt = target - t_local;
        if (dt > 0.0) cur = propagate_segment(cur, config, segs[seg].coupling, dt);
        t_local = target;
    };

    long j = 1;
    for (; j * sample_dt < total - snap; ++j) {
        advance_to(j * sample_dt);
        series.push_back(cur);
    }
    advance_to(total);
    series.push_back(cur);
    return series;
}

SingleModeMoments forward_squeeze_moments(double omega, double r, double theta,
                                          double f) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SingleModeMoments m;
    m.qq = f * (std::exp(-2.0 * r) * c * c + std::exp(2.0 * r) * s * s) /
           (2.0 * omega);
    m.pp = f * omega *
           (std::exp(2.0 * r) * c * c + std::exp(-2.0 * r) * s * s) / 2.0;
    m.qp = f * std::sinh(2.0 * r) * s * c;
    return m;
}

SqueezeDecomposition extract_squeeze(const ModeMoments& m,
                                     const ChainConfig& config, double c) {
    const int n = config.n_oscillators;
    const double f = thermal_factor(config.temperature, config.omega0);
    const double purity = f * f / 4.0;
    constexpr double kPurityTol = 1e-6;
    constexpr double kZeroSqueeze = 1e-8;  // sinh(2r) below this counts as r = 0

    SqueezeDecomposition d;
    d.omega.resize(n);
    d.r.resize(n);
    d.theta.resize(n);
    for (int s = 1; s <= n; ++s) {
        const int i = s - 1;
        const double det = m.qq[i] * m.pp[i] - m.qp[i] * m.qp[i];
        if (std::abs(det - purity) > kPurityTol * purity)
            throw std::runtime_error(
                "extract_squeeze: uncertainty product deviates from f(T)^2/4; "
                "the state is not a pure-mode squeezed thermal state");
        const double w = mode_frequency(config, c, s);
        const double qq = m.qq[i] / f;
        const double pp = m.pp[i] / f;
        const double qp = m.qp[i] / f;
        const double ch = std::max(1.0, w * qq + pp / w);  // cosh(2r)
        const double r = 0.5 * std::acosh(ch);
        d.omega[i] = w;
        d.r[i] = r;
        if (std::sinh(2.0 * r) < kZeroSqueeze) {
            d.r[i] = 0.0;
            d.theta[i] = 0.0;  // angle undefined at zero squeezing
            continue;
        }
        // sinh(2r) cos(2theta) = pp/w - w qq, sinh(2r) sin(2theta) = 2 qp
        double two_theta = std::atan2(2.0 * qp, pp / w - w * qq);
        double theta = 0.5 * two_theta;
        if (theta < 0.0) theta += std::numbers::pi;
        if (theta >= std::numbers::pi) theta -= std::numbers::pi;
        d.theta[i] = theta;
    }
    return d;
}

}  // namespace entchain
