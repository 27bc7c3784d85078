#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "entchain/chain_model.hpp"
#include "entchain/mode_dynamics.hpp"
#include "entchain/ode_oracle.hpp"
#include "entchain/thermodynamics.hpp"
#include "support/site_oracle.hpp"

using namespace entchain;

namespace {

double purity(const ModeMoments& m, int i) {
    return m.qq[i] * m.pp[i] - m.qp[i] * m.qp[i];
}

}  // namespace

TEST_CASE("initial moments of the uncoupled chain") {
    SUBCASE("vacuum") {
        const auto m = initial_moments(ChainConfig(8, 1.0, 0.0));
        for (int i = 0; i < 8; ++i) {
            CHECK(m.qq[i] == 0.5);
            CHECK(m.pp[i] == 0.5);
            CHECK(m.qp[i] == 0.0);
        }
    }
    SUBCASE("thermal at T = 0.5") {
        const auto m = initial_moments(ChainConfig(8, 1.0, 0.5));
        const double expected = 0.5 / std::tanh(1.0);
        CHECK(m.qq[0] == doctest::Approx(0.656518).epsilon(1e-5));
        CHECK(m.qq[3] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(m.pp[3] == doctest::Approx(expected).epsilon(1e-12));
    }
    SUBCASE("ground-state scaling with omega0") {
        const auto m = initial_moments(ChainConfig(8, 2.0, 0.0));
        CHECK(m.qq[0] == 0.25);
        CHECK(m.pp[0] == 1.0);
    }
}

TEST_CASE("vacuum is stationary under c = 0") {
    const ChainConfig config(8, 1.0, 0.0);
    const auto m0 = initial_moments(config);
    for (double dt : {0.1, 3.7, 50.0}) {
        const auto m = propagate_segment(m0, config, 0.0, dt);
        for (int i = 0; i < 8; ++i) {
            CHECK(m.qq[i] == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(m.pp[i] == doctest::Approx(0.5).epsilon(1e-14));
            CHECK(std::abs(m.qp[i]) < 1e-15);
        }
    }
}

TEST_CASE("a full period returns each mode to itself") {
    const ChainConfig config(8, 1.0, 0.0);
    ModeMoments m = initial_moments(config);
    // make it non-trivial first
    m = propagate_segment(m, config, 0.05, 2.3);
    const double c = 0.03;
    for (int s = 1; s <= 8; ++s) {
        const double period = 2.0 * std::numbers::pi / mode_frequency(config, c, s);
        const auto adv = propagate_segment(m, config, c, period);
        const int i = s - 1;
        CHECK(adv.qq[i] == doctest::Approx(m.qq[i]).epsilon(1e-12));
        CHECK(adv.pp[i] == doctest::Approx(m.pp[i]).epsilon(1e-12));
        CHECK(adv.qp[i] == doctest::Approx(m.qp[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("semigroup property holds exactly for a fixed coupling") {
    const ChainConfig config(8, 1.0, 0.0);
    ModeMoments m = initial_moments(config);
    m = propagate_segment(m, config, 0.05, 1.7);
    const double c = 0.02;
    const auto one = propagate_segment(m, config, c, 5.3);
    const auto two = propagate_segment(propagate_segment(m, config, c, 2.65),
                                       config, c, 2.65);
    for (int i = 0; i < 8; ++i) {
        CHECK(two.qq[i] == doctest::Approx(one.qq[i]).epsilon(1e-12));
        CHECK(two.pp[i] == doctest::Approx(one.pp[i]).epsilon(1e-12));
        CHECK(two.qp[i] == doctest::Approx(one.qp[i]).epsilon(1e-12).scale(0.5));
    }
}

TEST_CASE("uncertainty product and per-segment energy are conserved") {
    for (double temperature : {0.0, 0.5}) {
        const ChainConfig config(8, 1.0, temperature);
        const double f = thermal_factor(temperature, 1.0);
        const double target = f * f / 4.0;
        ModeMoments m = initial_moments(config);
        const auto schedule =
            testing::random_schedule(/*seed=*/11, /*segments=*/40, 0.05, 200.0);
        for (const Segment& seg : schedule.segments()) {
            const double e_before = chain_energy(m, config, seg.coupling);
            m = propagate_segment(m, config, seg.coupling, seg.duration);
            const double e_after = chain_energy(m, config, seg.coupling);
            CHECK(e_after == doctest::Approx(e_before).epsilon(1e-10));
            for (int i = 0; i < 8; ++i)
                CHECK(purity(m, i) == doctest::Approx(target).epsilon(1e-10));
        }
    }
}

TEST_CASE("propagate_segment matches the RK4 oracle on one segment") {
    const ChainConfig config(8, 1.0, 0.0);
    const ControlSchedule schedule({Segment{5.0, 0.05}}, 0.05);
    const auto exact =
        propagate_segment(initial_moments(config), config, 0.05, 5.0);
    const auto oracle =
        ode_oracle(initial_moments(config), config, schedule, 1e-3);
    const auto& num = oracle.back();
    const int s4 = 3;
    CHECK(std::abs(exact.qq[s4] - num.qq[s4]) < 1e-8);
    CHECK(std::abs(exact.pp[s4] - num.pp[s4]) < 1e-8);
    CHECK(std::abs(exact.qp[s4] - num.qp[s4]) < 1e-8);
}

TEST_CASE("oracle self-convergence is fourth order") {
    const ChainConfig config(4, 1.0, 0.0);
    const ControlSchedule schedule({Segment{3.0, 0.04}}, 0.04);
    const auto exact =
        propagate_segment(initial_moments(config), config, 0.04, 3.0);
    double errors[2];
    const double steps[2] = {2e-2, 1e-2};
    for (int k = 0; k < 2; ++k) {
        const auto num =
            ode_oracle(initial_moments(config), config, schedule, steps[k])
                .back();
        double err = 0.0;
        for (int i = 0; i < 4; ++i)
            err = std::max({err, std::abs(num.qq[i] - exact.qq[i]),
                            std::abs(num.pp[i] - exact.pp[i]),
                            std::abs(num.qp[i] - exact.qp[i])});
        errors[k] = err;
    }
    CHECK(errors[0] / errors[1] > 8.0);   // ~16 for clean h^4
    CHECK(errors[1] < 1e-9);
}

TEST_CASE("oracle equivalence on random 5-segment schedules") {
    const ChainConfig config(4, 1.0, 0.0);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto schedule = testing::random_schedule(seed, 5, 0.05, 50.0);
        const auto oracle =
            ode_oracle(initial_moments(config), config, schedule, 1e-3);
        ModeMoments m = initial_moments(config);
        std::size_t k = 1;
        for (const Segment& seg : schedule.segments()) {
            m = propagate_segment(m, config, seg.coupling, seg.duration);
            for (int i = 0; i < 4; ++i) {
                CHECK(std::abs(m.qq[i] - oracle[k].qq[i]) < 1e-8);
                CHECK(std::abs(m.pp[i] - oracle[k].pp[i]) < 1e-8);
                CHECK(std::abs(m.qp[i] - oracle[k].qp[i]) < 1e-8);
            }
            ++k;
        }
    }
}

TEST_CASE("c = 0 oracle stays on the vacuum over t = 100") {
    const ChainConfig config(4, 1.0, 0.0);
    const ControlSchedule schedule({Segment{100.0, 0.0}}, 0.0);
    const auto num =
        ode_oracle(initial_moments(config), config, schedule, 1e-3).back();
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(num.qq[i] - 0.5) < 1e-10);
        CHECK(std::abs(num.pp[i] - 0.5) < 1e-10);
        CHECK(std::abs(num.qp[i]) < 1e-10);
    }
}

TEST_CASE("schedule sampling honors boundaries and degenerate cases") {
    const ChainConfig config(8, 1.0, 0.0);
    const auto m0 = initial_moments(config);

    SUBCASE("empty schedule") {
        const auto series = propagate_schedule(m0, config, {}, 0.1);
        REQUIRE(series.size() == 1);
        CHECK(series[0].qq[0] == m0.qq[0]);
    }
    SUBCASE("c = 0 keeps the series constant") {
        const auto series = propagate_schedule(
            m0, config, ControlSchedule({Segment{5.0, 0.0}}, 0.0), 0.5);
        for (const auto& m : series) {
            CHECK(m.qq[2] == doctest::Approx(0.5).epsilon(1e-13));
            CHECK(m.pp[2] == doctest::Approx(0.5).epsilon(1e-13));
        }
    }
    SUBCASE("sudden switch leaves moments continuous") {
        const auto series = propagate_schedule(
            m0, config, ControlSchedule({Segment{4.0, 0.05}}, 0.05), 1.0);
        CHECK(series[0].qq[3] == 0.5);  // t = 0 sample: moments unchanged
        CHECK(series[0].pp[3] == 0.5);
        // and the sample grid plus exact endpoint
        REQUIRE(series.size() == 5);
        CHECK(series.back().time == doctest::Approx(4.0));
    }
    SUBCASE("grid equals closed-form propagation at matching times") {
        const ControlSchedule schedule(
            {Segment{1.3, 0.05}, Segment{2.4, 0.01}}, 0.05);
        const auto series = propagate_schedule(m0, config, schedule, 0.7);
        // sample at t = 2.1 crosses the boundary at 1.3
        ModeMoments direct = propagate_segment(m0, config, 0.05, 1.3);
        direct = propagate_segment(direct, config, 0.01, 0.8);
        const auto& sampled = series[3];
        CHECK(sampled.time == doctest::Approx(2.1));
        for (int i = 0; i < 8; ++i)
            CHECK(sampled.qq[i] == doctest::Approx(direct.qq[i]).epsilon(1e-12));
    }
}

TEST_CASE("squeeze extraction inverts the parametrization") {
    const ChainConfig config(8, 1.0, 0.0);

    SUBCASE("vacuum reports r = 0, theta = 0") {
        const auto d = extract_squeeze(initial_moments(config), config, 0.0);
        for (int i = 0; i < 8; ++i) {
            CHECK(d.r[i] == 0.0);
            CHECK(d.theta[i] == 0.0);
        }
    }
    SUBCASE("pure quadrature squeezing at omega = 1") {
        ModeMoments m = initial_moments(config);
        for (int i = 0; i < 8; ++i) {
            m.qq[i] = std::exp(2.0) / 2.0;
            m.pp[i] = std::exp(-2.0) / 2.0;
            m.qp[i] = 0.0;
        }
        const auto d = extract_squeeze(m, config, 0.0);
        CHECK(d.r[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.theta[0] == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    }
    SUBCASE("sudden switch squeezing r = ln(omega_4/omega0)/2") {
        const auto d =
            extract_squeeze(initial_moments(config), config, 0.05);
        CHECK(d.r[3] ==
              doctest::Approx(0.5 * std::log(std::sqrt(1.2))).epsilon(1e-10));
        CHECK(d.r[3] == doctest::Approx(0.045581).epsilon(1e-4));
        CHECK(d.r[7] == 0.0);  // zero mode unaffected
    }
    SUBCASE("round trip over the (r, theta) range") {
        for (double temperature : {0.0, 0.5}) {
            const ChainConfig cfg(8, 1.0, temperature);
            const double f = thermal_factor(temperature, 1.0);
            for (double r = 0.0; r <= 3.0; r += 0.37) {
                for (double theta = 0.01; theta < std::numbers::pi;
                     theta += 0.24) {
                    ModeMoments m = initial_moments(cfg);
                    const double c = 0.02;
                    for (int s = 1; s <= 8; ++s) {
                        const auto fm = forward_squeeze_moments(
                            mode_frequency(cfg, c, s), r, theta, f);
                        m.qq[s - 1] = fm.qq;
                        m.qp[s - 1] = fm.qp;
                        m.pp[s - 1] = fm.pp;
                    }
                    const auto d = extract_squeeze(m, cfg, c);
                    for (int i = 0; i < 8; ++i) {
                        CHECK(d.r[i] == doctest::Approx(r).epsilon(1e-9).scale(1.0));
                        if (r > 1e-6)
                            CHECK(d.theta[i] ==
                                  doctest::Approx(theta).epsilon(1e-9).scale(1.0));
                    }
                }
            }
        }
    }
    SUBCASE("broken uncertainty product is rejected") {
        ModeMoments m = initial_moments(config);
        m.qq[2] *= 1.001;
        CHECK_THROWS_AS(extract_squeeze(m, config, 0.0), std::runtime_error);
    }
}

TEST_CASE("moment map derivative matches finite differences") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u_dist(0.8, 1.4);
    std::uniform_real_distribution<double> t_dist(0.1, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double u = u_dist(rng);
        const double dt = t_dist(rng);
        const double h = 1e-7;
        const MomentMap up = segment_moment_map(std::sqrt(u + h), dt);
        const MomentMap dn = segment_moment_map(std::sqrt(u - h), dt);
        const MomentMap an = segment_moment_map_domega2(std::sqrt(u), dt);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double fd = (up.a[i][j] - dn.a[i][j]) / (2.0 * h);
                CHECK(an.a[i][j] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
    }
}
