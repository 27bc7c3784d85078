#include "entchain/ode_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace entchain {

namespace {

struct State {
    double qq, qp, pp;
};

State rhs(const State& x, double w2) {
    return {2.0 * x.qp, x.pp - w2 * x.qq, -2.0 * w2 * x.qp};
}

State rk4_step(const State& x, double w2, double h) {
    const State k1 = rhs(x, w2);
    const State x2{x.qq + 0.5 * h * k1.qq, x.qp + 0.5 * h * k1.qp,
                   x.pp + 0.5 * h * k1.pp};
    const State k2 = rhs(x2, w2);
    const State x3{x.qq + 0.5 * h * k2.qq, x.qp + 0.5 * h * k2.qp,
                   x.pp + 0.5 * h * k2.pp};
    const State k3 = rhs(x3, w2);
    const State x4{x.qq + h * k3.qq, x.qp + h * k3.qp, x.pp + h * k3.pp};
    const State k4 = rhs(x4, w2);
    return {x.qq + h / 6.0 * (k1.qq + 2.0 * k2.qq + 2.0 * k3.qq + k4.qq),
            x.qp + h / 6.0 * (k1.qp + 2.0 * k2.qp + 2.0 * k3.qp + k4.qp),
            x.pp + h / 6.0 * (k1.pp + 2.0 * k2.pp + 2.0 * k3.pp + k4.pp)};
}

}  // namespace

std::vector<ModeMoments> ode_oracle(const ModeMoments& m0,
                                    const ChainConfig& config,
                                    const ControlSchedule& schedule,
                                    double dt_step) {
    if (!(dt_step > 0.0))
        throw std::invalid_argument("ode_oracle: dt_step must be > 0");
    const int n = config.n_oscillators;
    std::vector<ModeMoments> series;
    series.push_back(m0);
    ModeMoments cur = m0;
    for (const Segment& seg : schedule.segments()) {
        const long steps =
            std::max(1L, static_cast<long>(std::ceil(seg.duration / dt_step)));
        const double h = seg.duration / static_cast<double>(steps);
        for (int s = 1; s <= n; ++s) {
            const double w = mode_frequency(config, seg.coupling, s);
            const double w2 = w * w;
            State x{cur.qq[s - 1], cur.qp[s - 1], cur.pp[s - 1]};
            for (long k = 0; k < steps; ++k) x = rk4_step(x, w2, h);
            cur.qq[s - 1] = x.qq;
            cur.qp[s - 1] = x.qp;
            cur.pp[s - 1] = x.pp;
        }
        cur.time += seg.duration;
        series.push_back(cur);
    }
    return series;
}

}  // namespace entchain
