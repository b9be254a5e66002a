#include <doctest.h>

#include <cmath>

#include "homeokit/errors.hpp"
#include "homeokit/homeostat.hpp"
#include "homeokit/random.hpp"

using namespace homeokit;

TEST_CASE("profiles") {
    const auto p3 = basic_profiles();
    CHECK(p3.charge.start == 5.0);
    CHECK(p3.charge.delta_pos == 0.8);
    CHECK(p3.charge.delta_neg == 0.1);
    CHECK(p3.charge.fail_point == 0.1);
    CHECK(p3.charge.limit_hi == 15.0);
    CHECK(p3.charge.control_threshold == 2.5);
    CHECK(p3.temperature.start == 10.0);
    CHECK(p3.temperature.fail_point == 55.0);
    CHECK_FALSE(p3.temperature.control_threshold.has_value());
    const auto p5 = conflict_profiles();
    CHECK(p5.charge.delta_pos == 0.3);
    CHECK(p5.temperature.delta_pos == 1.3);
    CHECK(p5.temperature.delta_neg == 0.8);
    CHECK(p5.temperature.control_threshold == 25.0);

    auto bad = p3.charge;
    bad.limit_lo = 20.0;
    CHECK_THROWS_AS(bad.validate("charge"), ConfigError);
    bad = p3.charge;
    bad.fail_point = 16.0;
    CHECK_THROWS_AS(bad.validate("charge"), ConfigError);
}

TEST_CASE("ticks outside both zones") {
    const auto p = basic_profiles();
    auto s = initial_state(p);
    for (int i = 0; i < 10; ++i) s = tick_internal(s, p, false, false);
    CHECK(s.charge == doctest::Approx(4.0));
    CHECK(s.temperature == 10.0);
    CHECK(s.tick == 10);
    CHECK(s.alive);
}

TEST_CASE("charging clamps at the upper limit") {
    const auto p = basic_profiles();
    auto s = initial_state(p);
    s.charge = 14.8;
    s = tick_internal(s, p, true, false);
    CHECK(s.charge == 15.0);
}

TEST_CASE("overheating") {
    const auto p = conflict_profiles();
    auto s = initial_state(p);
    s.temperature = 54.0;
    s = tick_internal(s, p, true, true);
    CHECK_FALSE(s.alive);
    CHECK(s.fail_cause == FailCause::kOverheated);
    CHECK(s.temperature == doctest::Approx(55.3));
    CHECK(to_string(s.fail_cause) == "overheated");
}

TEST_CASE("death is absorbing") {
    const auto p = basic_profiles();
    auto s = initial_state(p);
    while (s.alive) s = tick_internal(s, p, false, false);
    const auto dead = s;
    CHECK_THROWS_AS(tick_internal(s, p, true, true), ContractViolation);
    CHECK(s == dead);
    CHECK(s.fail_cause == FailCause::kChargeDepleted);
}

TEST_CASE("endurance arithmetic") {
    const auto p3 = basic_profiles();
    auto s = initial_state(p3);
    while (s.alive) s = tick_internal(s, p3, false, false);
    CHECK(s.tick == 49);

    s = initial_state(p3);
    s.charge = 15.0;
    while (s.alive) s = tick_internal(s, p3, false, false);
    CHECK(s.tick == 149);

    const auto p5 = conflict_profiles();
    s = initial_state(p5);
    while (s.alive) s = tick_internal(s, p5, true, true);
    CHECK(s.tick == 35);
    CHECK(s.fail_cause == FailCause::kOverheated);
}

TEST_CASE("property: values stay clamped") {
    Rng rng(3, 0);
    for (const auto& p : {basic_profiles(), conflict_profiles()}) {
        for (int run = 0; run < 200; ++run) {
            auto s = initial_state(p);
            while (s.alive && s.tick < 2000) {
                s = tick_internal(s, p, rng.uniform() < 0.3, rng.uniform() < 0.3);
                if (!s.alive) break;
                REQUIRE(s.charge >= p.charge.limit_lo);
                REQUIRE(s.charge <= p.charge.limit_hi);
                REQUIRE(s.temperature >= p.temperature.limit_lo);
                REQUIRE(s.temperature <= p.temperature.limit_hi);
            }
        }
    }
}

TEST_CASE("urgency") {
    const auto p3 = basic_profiles();
    auto s = initial_state(p3);
    s.charge = 15.0;
    CHECK(urgency(s, p3, Need::kCharge, ThermalMode::kSeekWarmth) == 0.0);
    s.charge = 0.1;
    CHECK(urgency(s, p3, Need::kCharge, ThermalMode::kSeekWarmth) == 1.0);
    s.temperature = 40.0;
    CHECK(urgency(s, p3, Need::kTemperature, ThermalMode::kSeekWarmth) == 0.0);
    s.temperature = 10.0;
    CHECK(urgency(s, p3, Need::kTemperature, ThermalMode::kSeekWarmth) == 1.0);

    const auto p5 = conflict_profiles();
    s = initial_state(p5);
    s.temperature = 37.5;
    CHECK(urgency(s, p5, Need::kTemperature, ThermalMode::kAvoidHeat) == doctest::Approx(0.5));
    s.temperature = 15.0;
    CHECK(urgency(s, p5, Need::kTemperature, ThermalMode::kAvoidHeat) == 0.0);
}

TEST_CASE("property: urgency monotonicity") {
    const auto p = conflict_profiles();
    auto s = initial_state(p);
    double prev_c = 2.0, prev_heat = -1.0, prev_warm = 2.0;
    for (int i = 0; i <= 600; ++i) {
        s.charge = p.charge.limit_lo + (p.charge.limit_hi - p.charge.limit_lo) * i / 600.0;
        s.temperature = p.temperature.limit_lo + (p.temperature.limit_hi - p.temperature.limit_lo) * i / 600.0;
        const double c = urgency(s, p, Need::kCharge, ThermalMode::kAvoidHeat);
        const double heat = urgency(s, p, Need::kTemperature, ThermalMode::kAvoidHeat);
        const double warm = urgency(s, p, Need::kTemperature, ThermalMode::kSeekWarmth);
        for (double u : {c, heat, warm}) REQUIRE((u >= 0.0 && u <= 1.0));
        CHECK(c <= prev_c);
        CHECK(heat >= prev_heat);
        CHECK(warm <= prev_warm);
        prev_c = c;
        prev_heat = heat;
        prev_warm = warm;
    }
}
