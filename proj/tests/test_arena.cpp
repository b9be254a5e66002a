#include <doctest.h>

#include <cmath>

#include "homeokit/arena.hpp"
#include "homeokit/errors.hpp"

using namespace homeokit;

namespace {

ArenaConfig single_lamp_arena(double noise) {
    ArenaConfig a;
    a.lamps = {Lamp{112.0, 54.0, {0.0, 0.0, 1.0}, 900.0, 30.0, "blue"}};
    a.ambient_noise = noise;
    return a;
}

// Fraction of seeded runs that reach the >= 500 acu zone within `ticks` control ticks.
double reach_rate(const ArenaConfig& arena, int runs, int ticks) {
    int reached = 0;
    for (int s = 1; s <= runs; ++s) {
        Rng noise = make_rng(s, RngStream::kSensorNoise);
        Rng motion = make_rng(s, RngStream::kMotion);
        Rng start(s, 42);
        RobotPose pose{start.uniform(0, arena.width), start.uniform(0, arena.height), start.uniform(-kPi, kPi),
                       arena.robot_speed};
        ColorReading prev = sense_color(arena.lamps, pose, arena.ambient_noise, noise);
        for (int t = 0; t < ticks; ++t) {
            const auto now = sense_color(arena.lamps, pose, arena.ambient_noise, noise);
            if (now.b >= 500.0) {
                ++reached;
                break;
            }
            pose = chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), now, prev, 2.25, arena, motion);
            prev = now;
        }
    }
    return static_cast<double>(reached) / runs;
}

}  // namespace

TEST_CASE("light field") {
    const std::vector<Lamp> blue{Lamp{100, 50, {0, 0, 1}, 900, 30, "blue"}};
    CHECK(light_at(blue, 100, 50).b == 900.0);
    CHECK(light_at(blue, 130, 50).b == doctest::Approx(545.8775937413701).epsilon(1e-12));
    CHECK(light_at(blue, 100, 50).r == 0.0);

    const std::vector<Lamp> doubled{blue[0], blue[0]};
    CHECK(light_at(doubled, 117, 61).b == doctest::Approx(2.0 * light_at(blue, 117, 61).b).epsilon(1e-15));

    Rng rng(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const auto c = sense_color(blue, RobotPose{rng.uniform(0, 224), rng.uniform(0, 108), 0, 0}, 50.0, rng);
        REQUIRE(c.r >= 0.0);
        REQUIRE(c.g >= 0.0);
        REQUIRE(c.b >= 0.0);
    }
}

TEST_CASE("zones") {
    const auto e1 = two_lamp_arena();
    auto z = zone_membership({0, 0, 600}, e1);
    CHECK(z.in_charge_zone);
    CHECK_FALSE(z.in_heat_zone);

    const auto e2 = conflict_arena();
    z = zone_membership({520, 0, 0}, e2);
    CHECK(z.in_charge_zone);
    CHECK(z.in_heat_zone);
    z = zone_membership({0, 0, 0}, e2);
    CHECK_FALSE(z.in_charge_zone);
    CHECK_FALSE(z.in_heat_zone);
}

TEST_CASE("channel names") {
    CHECK(channel_from_string("b") == Channel::kBlue);
    CHECK(channel_from_string("red") == Channel::kRed);
    CHECK(to_string(Channel::kGreen) == "g");
    CHECK_THROWS_AS(channel_from_string("purple"), ConfigError);
    CHECK(to_string(MotorCommand::seek(Channel::kBlue)) == "seek(b)");
    CHECK(to_string(MotorCommand::flee(Channel::kRed)) == "flee(r)");
    CHECK(to_string(MotorCommand::wander()) == "wander");
}

TEST_CASE("run and tumble") {
    const auto arena = two_lamp_arena();
    Rng rng(1, 0);
    const RobotPose pose{100, 50, 0.3, 7};

    auto next = chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), {0, 0, 120}, {0, 0, 100}, 2.25, arena, rng);
    CHECK(next.heading == pose.heading);
    CHECK(next.x == doctest::Approx(100 + 15.75 * std::cos(0.3)));
    CHECK(next.y == doctest::Approx(50 + 15.75 * std::sin(0.3)));

    next = chromotaxis_step(pose, MotorCommand::flee(Channel::kRed), {120, 0, 0}, {100, 0, 0}, 2.25, arena, rng);
    CHECK(next.heading != pose.heading);
    CHECK(std::abs(wrap_angle(next.heading - pose.heading)) <= kPi / 2);

    next = chromotaxis_step(pose, MotorCommand::flee(Channel::kRed), {80, 0, 0}, {100, 0, 0}, 2.25, arena, rng);
    CHECK(next.heading == pose.heading);

    CHECK_THROWS_AS(chromotaxis_step(pose, MotorCommand::wander(), {}, {}, 0.0, arena, rng), std::invalid_argument);
}

TEST_CASE("seek holds position once the colour is strong") {
    const auto arena = two_lamp_arena();
    Rng rng(1, 0);
    const RobotPose pose{184, 54, 1.0, 7};
    const auto next = chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), {0, 0, 700}, {0, 0, 650}, 2.25, arena, rng);
    CHECK(next == pose);
    auto no_hold = arena;
    no_hold.seek_hold_level = 0.0;
    CHECK_FALSE(chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), {0, 0, 700}, {0, 0, 650}, 2.25, no_hold, rng) == pose);
}

TEST_CASE("walls reflect the heading") {
    const auto arena = two_lamp_arena();
    Rng rng(1, 0);
    const RobotPose pose{220, 54, 0.0, 7};
    const auto next = chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), {0, 0, 2}, {0, 0, 1}, 2.25, arena, rng);
    CHECK(next.x <= 224.0);
    CHECK(next.x == doctest::Approx(224.0 - (220.0 + 15.75 - 224.0)));
    CHECK(std::abs(std::abs(next.heading) - kPi) < 1e-12);

    auto sticky = arena;
    sticky.reflect_walls = false;
    const auto stuck = chromotaxis_step(pose, MotorCommand::seek(Channel::kBlue), {0, 0, 2}, {0, 0, 1}, 2.25, sticky, rng);
    CHECK(stuck.x == 224.0);
    CHECK(stuck.heading == 0.0);
}

TEST_CASE("property: containment") {
    auto arena = two_lamp_arena();
    arena.ambient_noise = 30.0;
    for (bool reflect : {true, false}) {
        arena.reflect_walls = reflect;
        for (std::uint64_t s = 1; s <= 20; ++s) {
            Rng noise(s, 1), motion(s, 2), pick(s, 3);
            RobotPose pose{112, 54, 0, 20};
            auto prev = sense_color(arena.lamps, pose, arena.ambient_noise, noise);
            for (int t = 0; t < 500; ++t) {
                const auto now = sense_color(arena.lamps, pose, arena.ambient_noise, noise);
                const double u = pick.uniform();
                const auto cmd = u < 0.33   ? MotorCommand::wander()
                                 : u < 0.66 ? MotorCommand::seek(Channel::kRed)
                                            : MotorCommand::flee(Channel::kBlue);
                pose = chromotaxis_step(pose, cmd, now, prev, 2.25, arena, motion);
                prev = now;
                REQUIRE(pose.x >= 0.0);
                REQUIRE(pose.x <= arena.width);
                REQUIRE(pose.y >= 0.0);
                REQUIRE(pose.y <= arena.height);
            }
        }
    }
}

TEST_CASE("property: chromotaxis reaches the lamp within 90 s") {
    CHECK(reach_rate(single_lamp_arena(0.0), 100, 40) >= 0.95);
}

TEST_CASE("property: chromotaxis tolerates sensor noise") {
    CHECK(reach_rate(single_lamp_arena(20.0), 100, 40) >= 0.90);
}

TEST_CASE("arena validation") {
    auto a = two_lamp_arena();
    CHECK_NOTHROW(a.validate());
    a.lamps[0].spread = 0.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
    a = two_lamp_arena();
    a.charge_zone.threshold = 0.0;
    CHECK_THROWS_AS(a.validate(), ConfigError);
}
