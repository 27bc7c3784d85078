#include "support/site_oracle.hpp"

#include <cmath>
#include <random>

#include "entchain/thermodynamics.hpp"

namespace entchain::testing {

Eigen::MatrixXd site_initial_covariance(const ChainConfig& config) {
    const int n = config.n_oscillators;
    const double f = thermal_factor(config.temperature, config.omega0);
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        gamma(i, i) = f / config.omega0;
        gamma(n + i, n + i) = f * config.omega0;
    }
    return gamma;
}

namespace {

Eigen::MatrixXd drift_matrix(const ChainConfig& config, double c) {
    const int n = config.n_oscillators;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    const double w2 = config.omega0 * config.omega0;
    for (int i = 0; i < n; ++i) {
        k(i, i) = w2 + 2.0 * c;
        k(i, (i + 1) % n) -= c;
        k(i, (i + n - 1) % n) -= c;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
    a.bottomLeftCorner(n, n) = -k;
    return a;
}

}  // namespace

Eigen::MatrixXd site_evolve_covariance(const ChainConfig& config,
                                       const ControlSchedule& schedule,
                                       double dt_step) {
    Eigen::MatrixXd gamma = site_initial_covariance(config);
    for (const Segment& seg : schedule.segments()) {
        const Eigen::MatrixXd a = drift_matrix(config, seg.coupling);
        const long steps =
            std::max(1L, static_cast<long>(std::ceil(seg.duration / dt_step)));
        const double h = seg.duration / static_cast<double>(steps);
        auto rhs = [&a](const Eigen::MatrixXd& g) -> Eigen::MatrixXd {
            return a * g + g * a.transpose();
        };
        for (long s = 0; s < steps; ++s) {
            const Eigen::MatrixXd k1 = rhs(gamma);
            const Eigen::MatrixXd k2 = rhs(gamma + 0.5 * h * k1);
            const Eigen::MatrixXd k3 = rhs(gamma + 0.5 * h * k2);
            const Eigen::MatrixXd k4 = rhs(gamma + h * k3);
            gamma += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return gamma;
}

Eigen::Matrix4d site_pair_restriction(const Eigen::MatrixXd& gamma, int n,
                                      int m) {
    const int nn = static_cast<int>(gamma.rows()) / 2;
    const int idx[4] = {n - 1, nn + n - 1, m - 1, nn + m - 1};
    Eigen::Matrix4d out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = gamma(idx[i], idx[j]);
    return out;
}

ControlSchedule random_schedule(std::uint64_t seed, int segments, double c_max,
                                double t_total) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> c_dist(0.0, c_max);
    std::uniform_real_distribution<double> d_dist(0.5, 1.5);
    std::vector<Segment> segs(segments);
    for (Segment& s : segs) {
        s.duration = d_dist(rng) * t_total / segments;
        s.coupling = c_dist(rng);
    }
    return ControlSchedule(std::move(segs), c_max);
}

}  // namespace entchain::testing
