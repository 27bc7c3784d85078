#include "entchain/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "entchain/thermodynamics.hpp"

namespace entchain {

namespace {

constexpr double kImagTol = 1e-10;     // residual of the sine-weighted sums
constexpr double kPhysTol = 1e-8;      // symplectic eigenvalue >= 1 - tol
constexpr double kUnitClamp = 1e-12;   // |l| within this of 1 counts as 1

// 4x4 symplectic form for the ordering (q_n, p_n, q_m, p_m)
Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d omega = Eigen::Matrix4d::Zero();
    omega(0, 1) = 1.0;
    omega(1, 0) = -1.0;
    omega(2, 3) = 1.0;
    omega(3, 2) = -1.0;
    return omega;
}

std::array<double, 4> eigenvalue_moduli(const Eigen::Matrix4d& m) {
    Eigen::EigenSolver<Eigen::Matrix4d> solver(m, /*computeEigenvectors=*/false);
    std::array<double, 4> mod;
    for (int i = 0; i < 4; ++i) mod[i] = std::abs(solver.eigenvalues()(i));
    std::sort(mod.begin(), mod.end());
    return mod;
}

}  // namespace

PairCovariance pair_covariance(const ModeMoments& m, const ChainConfig& config,
                               int n, int m_site) {
    const int nn = config.n_oscillators;
    if (n < 1 || n > nn || m_site < 1 || m_site > nn)
        throw std::invalid_argument("pair_covariance: site index out of range");
    if (n == m_site)
        throw std::invalid_argument("pair_covariance: sites must differ");

    // phases e^{2 pi i s (n-m)/N}; the opposite pair reduces to (-1)^s exactly
    const int k = ((n - m_site) % nn + nn) % nn;
    std::vector<double> cos_ph(nn), sin_ph(nn);
    if (k == nn / 2) {
        for (int s = 1; s <= nn; ++s) {
            cos_ph[s - 1] = (s % 2 == 0) ? 1.0 : -1.0;
            sin_ph[s - 1] = 0.0;
        }
    } else {
        for (int s = 1; s <= nn; ++s) {
            const double ph = 2.0 * std::numbers::pi * s * k / nn;
            cos_ph[s - 1] = std::cos(ph);
            sin_ph[s - 1] = std::sin(ph);
        }
    }

    double qq0 = 0.0, pp0 = 0.0, qp0 = 0.0;     // same-site sums
    double qqk = 0.0, ppk = 0.0, qpk = 0.0;     // cross-site cosine sums
    double iqq = 0.0, ipp = 0.0, iqp = 0.0;     // cross-site sine residuals
    for (int i = 0; i < nn; ++i) {
        qq0 += m.qq[i];
        pp0 += m.pp[i];
        qp0 += m.qp[i];
        qqk += cos_ph[i] * m.qq[i];
        ppk += cos_ph[i] * m.pp[i];
        qpk += cos_ph[i] * m.qp[i];
        iqq += sin_ph[i] * m.qq[i];
        ipp += sin_ph[i] * m.pp[i];
        iqp += sin_ph[i] * m.qp[i];
    }
    const double scale = 2.0 / nn;  // convention factor 2 and the 1/N of the DFT
    const double moment_scale = std::max({std::abs(qq0), std::abs(pp0), 1.0});
    if (std::max({std::abs(iqq), std::abs(ipp), std::abs(iqp)}) * scale >
        kImagTol * moment_scale)
        throw std::runtime_error(
            "pair_covariance: imaginary parts do not cancel; the s <-> N-s "
            "mode degeneracy was broken upstream");

    PairCovariance g;
    g.site_n = n;
    g.site_m = m_site;
    g.gamma << scale * qq0, scale * qp0, scale * qqk, scale * qpk,
               scale * qp0, scale * pp0, scale * qpk, scale * ppk,
               scale * qqk, scale * qpk, scale * qq0, scale * qp0,
               scale * qpk, scale * ppk, scale * qp0, scale * pp0;
    return g;
}

std::array<double, 2> symplectic_eigenvalues(const Eigen::Matrix4d& gamma) {
    const auto mod = eigenvalue_moduli(symplectic_form() * gamma);
    // moduli come in equal pairs; after sorting take one of each
    return {mod[0], mod[2]};
}

double log_negativity(const PairCovariance& g) {
    const auto nu = symplectic_eigenvalues(g.gamma);
    if (nu[0] < 1.0 - kPhysTol) {
        std::ostringstream msg;
        msg << "log_negativity: unphysical covariance (symplectic eigenvalue "
            << nu[0] << " < 1)";
        throw std::invalid_argument(msg.str());
    }
    Eigen::Matrix4d pt = g.gamma;
    pt.row(3) *= -1.0;
    pt.col(3) *= -1.0;
    const auto mod = eigenvalue_moduli(symplectic_form() * pt);
    double en = 0.0;
    for (double l : mod) {
        if (l >= 1.0 - kUnitClamp) continue;  // separable direction
        en += -0.5 * std::log2(l);
    }
    return en;
}

std::pair<double, double> simplified_eigenvalues(double a, double b, double c,
                                                 double d) {
    const double rad1 = (a - b - (c - d)) * (a + b + c + d);
    const double rad2 = (a + b - (c + d)) * (a - b + c - d);
    if (rad1 < 0.0 || rad2 < 0.0)
        throw std::domain_error(
            "simplified_eigenvalues: negative radicand; the symmetric-form "
            "assumptions are violated");
    double l1 = std::sqrt(rad1);
    double l2 = std::sqrt(rad2);
    if (l1 > l2) std::swap(l1, l2);
    return {l1, l2};
}

std::optional<std::array<double, 4>> symmetric_form_entries(
    const PairCovariance& g, double omega0) {
    // rescale positions by sqrt(omega0) so the vacuum is the identity
    const double rw = std::sqrt(omega0);
    Eigen::Vector4d scale(rw, 1.0 / rw, rw, 1.0 / rw);
    const Eigen::Matrix4d gs =
        scale.asDiagonal() * g.gamma * scale.asDiagonal();

    const double a = gs(0, 0);
    const double b = gs(0, 2);
    const double c = gs(0, 1);
    const double d = gs(0, 3);
    const double tol = 1e-9 * std::max(1.0, std::abs(a));
    const bool symmetric = std::abs(gs(1, 1) - a) <= tol &&
                           std::abs(gs(2, 2) - a) <= tol &&
                           std::abs(gs(3, 3) - a) <= tol &&
                           std::abs(gs(1, 3) - b) <= tol &&
                           std::abs(gs(2, 3) - c) <= tol &&
                           std::abs(gs(1, 2) - d) <= tol;
    if (!symmetric) return std::nullopt;
    return std::array<double, 4>{a, b, c, d};
}

double max_log_negativity(std::span<const double> r, const ChainConfig& config,
                          ThermalScaling scaling) {
    const int n = config.n_oscillators;
    if (static_cast<int>(r.size()) != n)
        throw std::invalid_argument("max_log_negativity: need one r per mode");
    double sum_odd = 0.0, sum_even = 0.0;
    for (int s = 1; s <= n; ++s) {
        const double e = std::exp(-2.0 * r[s - 1]);
        if (s % 2 == 1)
            sum_odd += e;
        else
            sum_even += e;
    }
    const double f = thermal_factor(config.temperature, config.omega0);
    const double factor = scaling == ThermalScaling::FSquared ? f * f : f;
    const double arg =
        factor * (2.0 / n) * sum_odd * (2.0 / n) * sum_even;
    return std::max(0.0, -0.5 * std::log2(arg));
}

std::vector<double> optimal_angles(int n_modes) {
    std::vector<double> angles(n_modes);
    for (int s = 1; s <= n_modes; ++s)
        angles[s - 1] =
            (s % 2 == 0) ? std::numbers::pi / 4.0 : 3.0 * std::numbers::pi / 4.0;
    return angles;
}

ValidityResult validity_check(double c, std::span<const double> r,
                              const ChainConfig& config) {
    double sum = 0.0;
    for (double rs : r) sum += std::exp(2.0 * rs);
    const double ratio = c * sum / (4.0 * config.n_oscillators);
    return {ratio, ratio < 0.1, ratio < 0.01};
}

double angle_sync_error(const SqueezeDecomposition& decomp, double r_floor) {
    const int n = static_cast<int>(decomp.r.size());
    const auto target = optimal_angles(n);
    // angles live mod pi and a common offset is free; fit the offset as the
    // circular mean of the doubled residuals
    double sx = 0.0, sy = 0.0;
    int used = 0;
    for (int i = 0; i < n; ++i) {
        if (decomp.r[i] < r_floor) continue;
        const double res = 2.0 * (decomp.theta[i] - target[i]);
        sx += std::cos(res);
        sy += std::sin(res);
        ++used;
    }
    if (used == 0) return 0.0;
    const double offset = 0.5 * std::atan2(sy, sx);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        if (decomp.r[i] < r_floor) continue;
        double diff = decomp.theta[i] - target[i] - offset;
        diff = std::remainder(diff, std::numbers::pi);
        worst = std::max(worst, std::abs(diff));
    }
    return worst;
}

}  // namespace entchain
