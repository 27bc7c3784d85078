#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "entchain/chain_model.hpp"

using namespace entchain;

TEST_CASE("dispersion relation on the paper grid") {
    const ChainConfig config(8, 1.0, 0.0);

    SUBCASE("uncoupled chain is flat") {
        for (double w : mode_frequencies(config, 0.0)) CHECK(w == 1.0);
    }
    SUBCASE("zero mode stays at omega0") {
        CHECK(mode_frequency(config, 0.05, 8) == 1.0);
    }
    SUBCASE("mode 4 at c = 0.05") {
        CHECK(mode_frequency(config, 0.05, 4) ==
              doctest::Approx(std::sqrt(1.2)).epsilon(1e-12));
    }
}

TEST_CASE("degeneracy omega_s == omega_{N-s} is exact") {
    const ChainConfig config(8, 1.3, 0.0);
    for (double c : {0.0, 0.01, 0.05, 0.3}) {
        const auto w = mode_frequencies(config, c);
        for (int s = 1; s < 8; ++s) CHECK(w[s - 1] == w[8 - s - 1]);
    }
}

TEST_CASE("omega_s is nondecreasing in c, strictly except the zero mode") {
    const ChainConfig config(8, 1.0, 0.0);
    const double cs[] = {0.0, 0.01, 0.02, 0.05, 0.1};
    for (std::size_t i = 1; i < std::size(cs); ++i) {
        const auto lo = mode_frequencies(config, cs[i - 1]);
        const auto hi = mode_frequencies(config, cs[i]);
        for (int s = 1; s <= 8; ++s) {
            if (s == 8)
                CHECK(hi[s - 1] == lo[s - 1]);
            else
                CHECK(hi[s - 1] > lo[s - 1]);
        }
    }
}

TEST_CASE("config invariants are hard errors") {
    CHECK_THROWS_AS(ChainConfig(7, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChainConfig(2, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChainConfig(8, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChainConfig(8, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ChainConfig(8, 1.0, -0.1), std::invalid_argument);
}

TEST_CASE("schedule invariants") {
    CHECK_THROWS_AS(ControlSchedule({Segment{-1.0, 0.0}}, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(ControlSchedule({Segment{1.0, 0.06}}, 0.05),
                    std::invalid_argument);
    CHECK_THROWS_AS(ControlSchedule({Segment{1.0, -0.01}}, 0.05),
                    std::invalid_argument);

    const ControlSchedule s({Segment{2.0, 0.01}, Segment{3.0, 0.04}}, 0.05);
    CHECK(s.total_duration() == doctest::Approx(5.0));
    CHECK(s.coupling_at(0.0) == 0.01);
    CHECK(s.coupling_at(1.9) == 0.01);
    CHECK(s.coupling_at(2.0) == 0.04);  // right-continuous
    CHECK(s.coupling_at(4.9) == 0.04);
    CHECK(s.coupling_at(7.0) == 0.04);  // past the end
}

TEST_CASE("validate reports the weak-coupling diagnostic") {
    const ChainConfig config(8, 1.0, 0.0);
    CHECK(validate(config, ControlSchedule({Segment{1.0, 0.05}}, 0.05)).empty());
    CHECK_FALSE(
        validate(config, ControlSchedule({Segment{1.0, 0.9}}, 0.9)).empty());
}
