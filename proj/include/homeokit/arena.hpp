#pragma once

#include <array>
#include <string>
#include <vector>

#include "homeokit/random.hpp"

namespace homeokit {

enum class Channel { kRed = 0, kGreen = 1, kBlue = 2 };
std::string to_string(Channel c);
Channel channel_from_string(const std::string& s);

struct ColorReading {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;

    double operator[](Channel c) const;
    friend bool operator==(const ColorReading&, const ColorReading&) = default;
};

/// Coloured lamp with Gaussian falloff; `weights` scales the peak per channel.
struct Lamp {
    double x = 0.0;
    double y = 0.0;
    std::array<double, 3> weights{0.0, 0.0, 0.0};
    double peak = 900.0;   // acu at the centre
    double spread = 30.0;  // cm
    std::string name;
};

struct RobotPose {
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    double speed = 0.0;  // cm/s

    friend bool operator==(const RobotPose&, const RobotPose&) = default;
};

struct ZoneRule {
    Channel channel = Channel::kBlue;
    double threshold = 500.0;  // acu
};

struct ArenaConfig {
    double width = 224.0;
    double height = 108.0;
    std::vector<Lamp> lamps;
    ZoneRule charge_zone{Channel::kBlue, 500.0};
    ZoneRule heat_zone{Channel::kRed, 300.0};
    double color_threshold = 600.0;   // colour bit for associative training
    double ambient_noise = 0.0;       // acu standard deviation
    double robot_speed = 7.0;         // cm/s
    double tumble_max = kPi / 2.0;    // tumble turns are uniform in [-tumble_max, tumble_max]
    double wander_jitter = 0.3;       // radians, std-dev of the wander heading change per step
    bool reflect_walls = true;        // when false the robot stops at a wall and keeps its heading
    double seek_hold_level = 600.0;   // seek stops the robot once its channel reaches this level; 0 disables

    void validate() const;
};

/// Arena for the basic homeostasis experiment: red warming lamp on the left,
/// blue charging lamp on the right.
ArenaConfig two_lamp_arena();
/// Single red lamp on the left that both charges (inner zone) and heats.
ArenaConfig conflict_arena();

ColorReading light_at(const std::vector<Lamp>& lamps, double x, double y);

/// Noisy sensor reading at the robot pose, floored at 0 per channel.
ColorReading sense_color(const std::vector<Lamp>& lamps, const RobotPose& pose, double ambient_noise, Rng& rng);

struct ZoneMembership {
    bool in_charge_zone = false;
    bool in_heat_zone = false;
};

ZoneMembership zone_membership(const ColorReading& reading, const ArenaConfig& config);

struct MotorCommand {
    enum class Action { kWander, kSeek, kFlee };
    Action action = Action::kWander;
    Channel channel = Channel::kRed;

    static MotorCommand wander() { return {}; }
    static MotorCommand seek(Channel c) { return {Action::kSeek, c}; }
    static MotorCommand flee(Channel c) { return {Action::kFlee, c}; }

    friend bool operator==(const MotorCommand& a, const MotorCommand& b) {
        return a.action == b.action && (a.action == Action::kWander || a.channel == b.channel);
    }
};

/// "wander", "seek(r)", "flee(b)", ...
std::string to_string(const MotorCommand& command);

/// Run-and-tumble on a single sensor: keep the heading while the commanded
/// channel moves the right way between readings, otherwise turn randomly.
/// The robot then advances speed*dt and reflects off the walls.
RobotPose chromotaxis_step(const RobotPose& pose, const MotorCommand& command, const ColorReading& current,
                           const ColorReading& previous, double dt, const ArenaConfig& config, Rng& rng);

}  // namespace homeokit
