#include "homeokit/arena.hpp"

#include <algorithm>
#include <cmath>

#include "homeokit/errors.hpp"

namespace homeokit {

std::string to_string(Channel c) {
    switch (c) {
        case Channel::kRed: return "r";
        case Channel::kGreen: return "g";
        case Channel::kBlue: return "b";
    }
    return "?";
}

Channel channel_from_string(const std::string& s) {
    if (s == "r" || s == "red") return Channel::kRed;
    if (s == "g" || s == "green") return Channel::kGreen;
    if (s == "b" || s == "blue") return Channel::kBlue;
    throw ConfigError("unknown colour channel '" + s + "'");
}

double ColorReading::operator[](Channel c) const {
    switch (c) {
        case Channel::kRed: return r;
        case Channel::kGreen: return g;
        case Channel::kBlue: return b;
    }
    return 0.0;
}

void ArenaConfig::validate() const {
    if (!(width > 0.0 && height > 0.0)) throw ConfigError("arena: dimensions must be positive");
    if (!(charge_zone.threshold > 0.0 && heat_zone.threshold > 0.0 && color_threshold > 0.0))
        throw ConfigError("arena: zone thresholds must be positive");
    if (seek_hold_level < 0.0) throw ConfigError("arena: seek_hold_level must be non-negative");
    if (ambient_noise < 0.0 || robot_speed < 0.0) throw ConfigError("arena: noise and speed must be non-negative");
    for (const auto& l : lamps) {
        if (!(l.peak > 0.0 && l.spread > 0.0)) throw ConfigError("arena: lamp '" + l.name + "' needs peak, spread > 0");
        for (double w : l.weights) {
            if (w < 0.0 || w > 1.0) throw ConfigError("arena: lamp channel weights must lie in [0,1]");
        }
    }
}

ArenaConfig two_lamp_arena() {
    ArenaConfig a;
    a.lamps = {Lamp{40.0, 54.0, {1.0, 0.0, 0.0}, 900.0, 30.0, "red"},
               Lamp{184.0, 54.0, {0.0, 0.0, 1.0}, 900.0, 30.0, "blue"}};
    a.charge_zone = {Channel::kBlue, 500.0};
    a.heat_zone = {Channel::kRed, 300.0};
    return a;
}

ArenaConfig conflict_arena() {
    ArenaConfig a;
    a.lamps = {Lamp{40.0, 54.0, {1.0, 0.0, 0.0}, 900.0, 30.0, "red"}};
    a.charge_zone = {Channel::kRed, 500.0};
    a.heat_zone = {Channel::kRed, 300.0};
    return a;
}

ColorReading light_at(const std::vector<Lamp>& lamps, double x, double y) {
    ColorReading out;
    for (const auto& l : lamps) {
        const double d2 = (x - l.x) * (x - l.x) + (y - l.y) * (y - l.y);
        const double level = l.peak * std::exp(-d2 / (2.0 * l.spread * l.spread));
        out.r += l.weights[0] * level;
        out.g += l.weights[1] * level;
        out.b += l.weights[2] * level;
    }
    return out;
}

ColorReading sense_color(const std::vector<Lamp>& lamps, const RobotPose& pose, double ambient_noise, Rng& rng) {
    ColorReading out = light_at(lamps, pose.x, pose.y);
    if (ambient_noise > 0.0) {
        out.r = std::max(0.0, out.r + rng.normal(0.0, ambient_noise));
        out.g = std::max(0.0, out.g + rng.normal(0.0, ambient_noise));
        out.b = std::max(0.0, out.b + rng.normal(0.0, ambient_noise));
    }
    return out;
}

ZoneMembership zone_membership(const ColorReading& reading, const ArenaConfig& config) {
    return {reading[config.charge_zone.channel] >= config.charge_zone.threshold,
            reading[config.heat_zone.channel] >= config.heat_zone.threshold};
}

std::string to_string(const MotorCommand& command) {
    switch (command.action) {
        case MotorCommand::Action::kWander: return "wander";
        case MotorCommand::Action::kSeek: return "seek(" + to_string(command.channel) + ")";
        case MotorCommand::Action::kFlee: return "flee(" + to_string(command.channel) + ")";
    }
    return "?";
}

namespace {

// Mirrors a coordinate back into [0, extent]; returns true if a wall was hit.
bool reflect(double& v, double extent) {
    bool hit = false;
    for (int i = 0; i < 4 && (v < 0.0 || v > extent); ++i) {
        v = v < 0.0 ? -v : 2.0 * extent - v;
        hit = true;
    }
    v = std::clamp(v, 0.0, extent);
    return hit;
}

}  // namespace

RobotPose chromotaxis_step(const RobotPose& pose, const MotorCommand& command, const ColorReading& current,
                           const ColorReading& previous, double dt, const ArenaConfig& config, Rng& rng) {
    if (!(dt > 0.0)) throw std::invalid_argument("chromotaxis_step: dt must be positive");
    RobotPose next = pose;
    switch (command.action) {
        case MotorCommand::Action::kSeek:
            if (config.seek_hold_level > 0.0 && current[command.channel] >= config.seek_hold_level) return next;
            if (!(current[command.channel] > previous[command.channel]))
                next.heading += rng.uniform(-config.tumble_max, config.tumble_max);
            break;
        case MotorCommand::Action::kFlee:
            if (!(current[command.channel] < previous[command.channel]))
                next.heading += rng.uniform(-config.tumble_max, config.tumble_max);
            break;
        case MotorCommand::Action::kWander:
            next.heading += rng.normal(0.0, config.wander_jitter);
            break;
    }
    next.heading = wrap_angle(next.heading);

    const double step = next.speed * dt;
    double x = next.x + step * std::cos(next.heading);
    double y = next.y + step * std::sin(next.heading);
    if (config.reflect_walls) {
        const bool hit_x = reflect(x, config.width);
        const bool hit_y = reflect(y, config.height);
        double hx = std::cos(next.heading);
        double hy = std::sin(next.heading);
        if (hit_x) hx = -hx;
        if (hit_y) hy = -hy;
        next.heading = std::atan2(hy, hx);
    } else {
        x = std::clamp(x, 0.0, config.width);
        y = std::clamp(y, 0.0, config.height);
    }
    next.x = x;
    next.y = y;
    return next;
}

}  // namespace homeokit
