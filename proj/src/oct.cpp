#include "entchain/oct.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "entchain/thermodynamics.hpp"

namespace entchain {

namespace {

// below this sinh(2r) a mode counts as unsqueezed: the cost has a symmetric
// kink there and the matching subgradient is zero
constexpr double kKinkTol = 1e-6;

constexpr double kFreezeTail = 20.0;  // duration of the final c = 0 segment, / omega0

struct Mode3 {
    double qq, qp, pp;
};

void apply(const MomentMap& t, Mode3& x) {
    const Mode3 y{t.a[0][0] * x.qq + t.a[0][1] * x.qp + t.a[0][2] * x.pp,
                  t.a[1][0] * x.qq + t.a[1][1] * x.qp + t.a[1][2] * x.pp,
                  t.a[2][0] * x.qq + t.a[2][1] * x.qp + t.a[2][2] * x.pp};
    x = y;
}

// costate update uses the transpose of the forward map
void apply_transposed(const MomentMap& t, Mode3& l) {
    const Mode3 y{t.a[0][0] * l.qq + t.a[1][0] * l.qp + t.a[2][0] * l.pp,
                  t.a[0][1] * l.qq + t.a[1][1] * l.qp + t.a[2][1] * l.pp,
                  t.a[0][2] * l.qq + t.a[1][2] * l.qp + t.a[2][2] * l.pp};
    l = y;
}

double dot(const Mode3& a, const Mode3& b) {
    return a.qq * b.qq + a.qp * b.qp + a.pp * b.pp;
}

Mode3 apply_to(const MomentMap& t, const Mode3& x) {
    return {t.a[0][0] * x.qq + t.a[0][1] * x.qp + t.a[0][2] * x.pp,
            t.a[1][0] * x.qq + t.a[1][1] * x.qp + t.a[1][2] * x.pp,
            t.a[2][0] * x.qq + t.a[2][1] * x.qp + t.a[2][2] * x.pp};
}

std::vector<Mode3> initial_modes(const ChainConfig& config) {
    const double f = thermal_factor(config.temperature, config.omega0);
    return std::vector<Mode3>(
        config.n_oscillators,
        Mode3{f / (2.0 * config.omega0), 0.0, f * config.omega0 / 2.0});
}

// terminal moments of every mode after the piecewise-constant protocol;
// boundary_states, when non-null, receives the states before each segment
std::vector<Mode3> forward_pass(const ChainConfig& config,
                                std::span<const double> tau,
                                std::span<const double> c,
                                std::vector<std::vector<Mode3>>* boundary_states) {
    const int n = config.n_oscillators;
    std::vector<Mode3> x = initial_modes(config);
    if (boundary_states) boundary_states->clear();
    for (std::size_t k = 0; k < tau.size(); ++k) {
        if (boundary_states) boundary_states->push_back(x);
        for (int s = 1; s <= n; ++s) {
            const MomentMap t =
                segment_moment_map(mode_frequency(config, c[k], s), tau[k]);
            apply(t, x[s - 1]);
        }
    }
    return x;
}

// e^{-2 r_s} of one mode from its moments at extraction frequency w
double mode_exp_minus_2r(const Mode3& x, double w, double f) {
    const double ch = std::max(1.0, (w * x.qq + x.pp / w) / f);
    return ch - std::sqrt(ch * ch - 1.0);
}

double cost_raw(const ChainConfig& config, std::span<const double> tau,
                std::span<const double> c) {
    const int n = config.n_oscillators;
    const double f = thermal_factor(config.temperature, config.omega0);
    const std::vector<Mode3> x = forward_pass(config, tau, c, nullptr);
    const double c_last = c.empty() ? 0.0 : c.back();
    double sum_odd = 0.0, sum_even = 0.0;
    for (int s = 1; s <= n; ++s) {
        const double g =
            mode_exp_minus_2r(x[s - 1], mode_frequency(config, c_last, s), f);
        (s % 2 == 1 ? sum_odd : sum_even) += g;
    }
    return (2.0 / n) * sum_odd * (2.0 / n) * sum_even;
}

std::vector<double> raw_couplings(const ControlSchedule& p) {
    std::vector<double> c;
    c.reserve(p.segments().size());
    for (const Segment& s : p.segments()) c.push_back(s.coupling);
    return c;
}

std::vector<double> raw_durations(const ControlSchedule& p) {
    std::vector<double> tau;
    tau.reserve(p.segments().size());
    for (const Segment& s : p.segments()) tau.push_back(s.duration);
    return tau;
}

}  // namespace

void OptimizerConfig::validate() const {
    if (n_segments < 1)
        throw std::invalid_argument("OptimizerConfig: n_segments must be >= 1");
    if (horizon < 0.0)
        throw std::invalid_argument("OptimizerConfig: horizon must be >= 0");
    if (!(c_max > 0.0))
        throw std::invalid_argument("OptimizerConfig: c_max must be > 0");
    if (!(step_size > 0.0))
        throw std::invalid_argument("OptimizerConfig: step_size must be > 0");
    if (max_iterations < 1)
        throw std::invalid_argument("OptimizerConfig: max_iterations must be >= 1");
    if (!(convergence_tol > 0.0))
        throw std::invalid_argument("OptimizerConfig: convergence_tol must be > 0");
    if (!(fd_epsilon > 0.0) || fd_epsilon >= c_max / 10.0)
        throw std::invalid_argument(
            "OptimizerConfig: fd_epsilon must lie in (0, c_max/10)");
    if (sync_c < 0.0 || sync_c > c_max)
        throw std::invalid_argument("OptimizerConfig: sync_c outside [0, c_max]");
    if (!(sync_max_time > 0.0))
        throw std::invalid_argument("OptimizerConfig: sync_max_time must be > 0");
    if (peak_tol < 0.0 || peak_tol >= 1.0)
        throw std::invalid_argument("OptimizerConfig: peak_tol outside [0, 1)");
}

double cost_from_squeezing(std::span<const double> r) {
    const int n = static_cast<int>(r.size());
    double sum_odd = 0.0, sum_even = 0.0;
    for (int s = 1; s <= n; ++s)
        (s % 2 == 1 ? sum_odd : sum_even) += std::exp(-2.0 * r[s - 1]);
    return (2.0 / n) * sum_odd * (2.0 / n) * sum_even;
}

double cost(const ControlSchedule& protocol, const ChainConfig& config) {
    const auto tau = raw_durations(protocol);
    const auto c = raw_couplings(protocol);
    return cost_raw(config, tau, c);
}

std::vector<double> gradient_fd(const ControlSchedule& protocol,
                                const ChainConfig& config, double fd_epsilon) {
    if (!(fd_epsilon > 0.0))
        throw std::invalid_argument("gradient_fd: fd_epsilon must be > 0");
    const auto tau = raw_durations(protocol);
    std::vector<double> c = raw_couplings(protocol);
    const double w0sq = config.omega0 * config.omega0;
    std::vector<double> grad(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const double saved = c[k];
        // the dynamics is well defined slightly outside the control bounds as
        // long as every omega_s^2 stays positive, so a central stencil is
        // used even at the bounds; fall back to one-sided only when the
        // downward probe would cross omega^2 = 0
        if (saved - fd_epsilon > -0.25 * w0sq * 0.5) {
            c[k] = saved + fd_epsilon;
            const double jp = cost_raw(config, tau, c);
            c[k] = saved - fd_epsilon;
            const double jm = cost_raw(config, tau, c);
            grad[k] = (jp - jm) / (2.0 * fd_epsilon);
        } else {
            const double j0 = cost_raw(config, tau, c);
            c[k] = saved + fd_epsilon;
            const double jp = cost_raw(config, tau, c);
            grad[k] = (jp - j0) / fd_epsilon;
        }
        c[k] = saved;
    }
    return grad;
}

std::vector<double> gradient_adjoint(const ControlSchedule& protocol,
                                     const ChainConfig& config) {
    const auto tau = raw_durations(protocol);
    const auto c = raw_couplings(protocol);
    const int n = config.n_oscillators;
    const std::size_t m = tau.size();
    std::vector<double> grad(m, 0.0);
    if (m == 0) return grad;

    std::vector<std::vector<Mode3>> bound;  // states entering each segment
    const std::vector<Mode3> xT = forward_pass(config, tau, c, &bound);

    const double f = thermal_factor(config.temperature, config.omega0);
    const double c_last = c.back();

    // terminal cost pieces: J = (2/N)^2 * A_odd * A_even with
    // A = sum of G_s = exp(-2 r_s), G = C - sqrt(C^2-1), C = (w qq + pp/w)/f
    std::vector<double> gC(n, 0.0);      // dG/dC per mode (0 at the kink)
    std::vector<double> omegaT(n), Cs(n);
    double sum_odd = 0.0, sum_even = 0.0;
    for (int s = 1; s <= n; ++s) {
        const int i = s - 1;
        omegaT[i] = mode_frequency(config, c_last, s);
        const double ch = std::max(1.0, (omegaT[i] * xT[i].qq + xT[i].pp / omegaT[i]) / f);
        Cs[i] = ch;
        const double sh = std::sqrt(ch * ch - 1.0);
        const double g = ch - sh;
        (s % 2 == 1 ? sum_odd : sum_even) += g;
        gC[i] = (sh < kKinkTol) ? 0.0 : 1.0 - ch / sh;
    }
    const double norm = (2.0 / n) * (2.0 / n);

    std::vector<Mode3> lambda(n);
    for (int s = 1; s <= n; ++s) {
        const int i = s - 1;
        const double dJdG = norm * (s % 2 == 1 ? sum_even : sum_odd);
        const double w = omegaT[i];
        lambda[i] = Mode3{dJdG * gC[i] * w / f, 0.0, dJdG * gC[i] / (w * f)};
        // the final segment's coupling also moves the extraction frequency
        const double dCdw = (xT[i].qq - xT[i].pp / (w * w)) / f;
        grad[m - 1] += dJdG * gC[i] * dCdw *
                       mode_coupling_factor(config, s) / (2.0 * w);
    }

    for (std::size_t k = m; k-- > 0;) {
        for (int s = 1; s <= n; ++s) {
            const int i = s - 1;
            const double w = mode_frequency(config, c[k], s);
            const MomentMap dT = segment_moment_map_domega2(w, tau[k]);
            grad[k] += mode_coupling_factor(config, s) *
                       dot(lambda[i], apply_to(dT, bound[k][i]));
            const MomentMap t = segment_moment_map(w, tau[k]);
            apply_transposed(t, lambda[i]);
        }
    }
    return grad;
}

std::vector<double> gradient(const ControlSchedule& protocol,
                             const ChainConfig& config,
                             const OptimizerConfig& opt) {
    return opt.gradient_mode == GradientMode::Adjoint
               ? gradient_adjoint(protocol, config)
               : gradient_fd(protocol, config, opt.fd_epsilon);
}

std::string to_string(OptimizeStatus s) {
    switch (s) {
        case OptimizeStatus::Converged: return "converged";
        case OptimizeStatus::MaxIterations: return "max-iterations";
        case OptimizeStatus::Stalled: return "stalled";
    }
    return "unknown";
}

ControlSchedule initial_protocol(const OptimizerConfig& opt,
                                 std::uint64_t seed) {
    opt.validate();
    if (opt.horizon == 0.0) return ControlSchedule({}, opt.c_max);
    const double tau = opt.horizon / opt.n_segments;
    std::vector<Segment> segs(opt.n_segments, Segment{tau, opt.c_max / 2.0});
    if (seed != 0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(0.0, opt.c_max);
        for (Segment& s : segs) s.coupling = dist(rng);
    }
    return ControlSchedule(std::move(segs), opt.c_max);
}

SyncResult synchronize_and_freeze(const ModeMoments& post_squeeze,
                                  const ChainConfig& config,
                                  const OptimizerConfig& opt) {
    opt.validate();
    const int n = config.n_oscillators;

    // squeezing in the freeze frame (c = 0): a state with none can never
    // develop opposite-pair entanglement during the hold
    const SqueezeDecomposition base = extract_squeeze(post_squeeze, config, 0.0);
    double r_total = 0.0;
    for (double r : base.r) r_total += r;
    if (r_total < 1e-9)
        throw std::invalid_argument(
            "synchronize_and_freeze: input state carries no squeezing");

    const double dt = 0.05 / config.omega0;
    const int pair_n = 1;
    const int pair_m = 1 + n / 2;

    const long steps = static_cast<long>(std::ceil(opt.sync_max_time / dt));
    std::vector<double> en(steps + 1);
    std::vector<ModeMoments> states(steps + 1);
    states[0] = post_squeeze;
    en[0] = log_negativity(pair_covariance(post_squeeze, config, pair_n, pair_m));
    for (long i = 1; i <= steps; ++i) {
        states[i] = propagate_segment(states[i - 1], config, opt.sync_c, dt);
        en[i] = log_negativity(pair_covariance(states[i], config, pair_n, pair_m));
    }

    const double best = *std::max_element(en.begin(), en.end());
    const double threshold = (1.0 - opt.peak_tol) * best;
    long peak = -1;
    for (long i = 1; i < steps; ++i) {
        if (en[i] > en[i - 1] && en[i] >= en[i + 1] && en[i] >= threshold &&
            en[i] > 0.0) {
            peak = i;
            break;
        }
    }
    if (peak < 0)
        throw std::runtime_error(
            "synchronize_and_freeze: no negativity peak within sync_max_time");

    // parabolic refinement of the peak instant
    double t_peak = peak * dt;
    const double denom = en[peak - 1] - 2.0 * en[peak] + en[peak + 1];
    if (denom < 0.0) {
        double shift = 0.5 * dt * (en[peak - 1] - en[peak + 1]) / denom;
        shift = std::clamp(shift, -dt, dt);
        t_peak += shift;
    }

    const ModeMoments at_peak =
        propagate_segment(post_squeeze, config, opt.sync_c, t_peak);
    const SqueezeDecomposition peak_decomp =
        extract_squeeze(at_peak, config, opt.sync_c);

    SyncResult result;
    result.peak_EN =
        log_negativity(pair_covariance(at_peak, config, pair_n, pair_m));
    result.peak_time = post_squeeze.time + t_peak;
    result.validity_ratio =
        validity_check(opt.sync_c, peak_decomp.r, config).ratio;
    result.angle_sync_error = angle_sync_error(peak_decomp);
    if (t_peak > 1e-12)
        result.appended.push_back(Segment{t_peak, opt.sync_c});
    result.appended.push_back(Segment{kFreezeTail / config.omega0, 0.0});
    return result;
}

OptimizationResult optimize(const ControlSchedule& initial,
                            const ChainConfig& config,
                            const OptimizerConfig& opt) {
    opt.validate();

    OptimizationResult result;

    if (opt.horizon == 0.0 || initial.segments().empty()) {
        // degenerate sync-only request: nothing to squeeze, nothing to
        // synchronize; emit the freeze stage alone
        result.protocol = ControlSchedule(
            {Segment{kFreezeTail / config.omega0, 0.0}}, opt.c_max);
        result.squeeze_segments = 0;
        result.cost_history = {1.0};
        result.final_squeeze = extract_squeeze(initial_moments(config), config, 0.0);
        result.status = OptimizeStatus::Converged;
        return result;
    }

    const std::vector<double> tau = raw_durations(initial);
    std::vector<double> c = raw_couplings(initial);
    for (double ck : c)
        if (ck < 0.0 || ck > opt.c_max)
            throw std::invalid_argument("optimize: initial protocol violates bounds");
    const std::size_t m = c.size();

    auto project = [&](std::vector<double> v) {
        for (double& x : v) x = std::clamp(x, 0.0, opt.c_max);
        return v;
    };

    double j = cost_raw(config, tau, c);
    result.cost_history.push_back(j);
    double eta = opt.step_size;
    OptimizeStatus status = OptimizeStatus::MaxIterations;

    auto schedule_from = [&](const std::vector<double>& couplings) {
        std::vector<Segment> segs(m);
        for (std::size_t k = 0; k < m; ++k) segs[k] = Segment{tau[k], couplings[k]};
        return ControlSchedule(std::move(segs), opt.c_max);
    };

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        const std::vector<double> g =
            opt.gradient_mode == GradientMode::Adjoint
                ? gradient_adjoint(schedule_from(c), config)
                : gradient_fd(schedule_from(c), config, opt.fd_epsilon);

        bool accepted = false;
        double eta_try = eta;
        for (int halving = 0; halving < 40 && !accepted; ++halving) {
            std::vector<double> trial(m);
            for (std::size_t k = 0; k < m; ++k) trial[k] = c[k] - eta_try * g[k];
            trial = project(std::move(trial));
            if (trial == c) {
                eta_try *= 0.5;
                continue;
            }
            const double j_trial = cost_raw(config, tau, trial);
            if (j_trial < j) {
                const double drop = j - j_trial;
                c = std::move(trial);
                j = j_trial;
                result.cost_history.push_back(j);
                accepted = true;
                if (halving == 0) eta = eta_try * 2.0;
                else eta = eta_try;
                if (drop <= opt.convergence_tol * std::max(std::abs(j), 1e-300)) {
                    status = OptimizeStatus::Converged;
                }
            } else {
                eta_try *= 0.5;
            }
        }
        if (!accepted) {
            // first-order stationarity over the feasible directions
            double kkt = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                double v;
                if (c[k] <= 0.0) v = std::max(0.0, -g[k]);
                else if (c[k] >= opt.c_max) v = std::max(0.0, g[k]);
                else v = std::abs(g[k]);
                kkt = std::max(kkt, v);
            }
            status = kkt <= 1e-6 ? OptimizeStatus::Converged
                                 : OptimizeStatus::Stalled;
            break;
        }
        if (status == OptimizeStatus::Converged) break;
    }

    result.status = status;
    result.squeeze_segments = static_cast<int>(m);

    ControlSchedule squeeze = schedule_from(c);
    ModeMoments post = initial_moments(config);
    for (const Segment& seg : squeeze.segments())
        post = propagate_segment(post, config, seg.coupling, seg.duration);
    result.final_squeeze =
        extract_squeeze(post, config, squeeze.segments().back().coupling);

    double r_total = 0.0;
    for (double r : extract_squeeze(post, config, 0.0).r) r_total += r;
    if (r_total < 1e-9) {
        // descent found nothing to squeeze; keep the bare protocol
        result.protocol =
            squeeze.appended({Segment{kFreezeTail / config.omega0, 0.0}});
        result.peak_EN = 0.0;
        result.peak_time = post.time;
        return result;
    }

    const SyncResult sync = synchronize_and_freeze(post, config, opt);
    result.protocol = squeeze.appended(sync.appended);
    result.peak_EN = sync.peak_EN;
    result.peak_time = sync.peak_time;
    result.validity_ratio_at_peak = sync.validity_ratio;
    result.angle_sync_error_at_peak = sync.angle_sync_error;
    return result;
}

std::vector<std::pair<double, double>> sudden_switch_baseline(
    const ChainConfig& config, double c_value, double horizon,
    double sample_dt) {
    if (c_value < 0.0)
        throw std::invalid_argument("sudden_switch_baseline: c must be >= 0");
    if (!(horizon > 0.0) || !(sample_dt > 0.0))
        throw std::invalid_argument(
            "sudden_switch_baseline: horizon and sample_dt must be > 0");
    const ControlSchedule schedule({Segment{horizon, c_value}}, c_value);
    const auto series =
        propagate_schedule(initial_moments(config), config, schedule, sample_dt);
    const int pair_n = 1;
    const int pair_m = 1 + config.n_oscillators / 2;
    std::vector<std::pair<double, double>> en;
    en.reserve(series.size());
    for (const ModeMoments& m : series)
        en.emplace_back(
            m.time, log_negativity(pair_covariance(m, config, pair_n, pair_m)));
    return en;
}

}  // namespace entchain
