#include "homeokit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "homeokit/errors.hpp"
#include "homeokit/random.hpp"

namespace homeokit {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
    arena.validate();
    cdm.validate();
    profiles.charge.validate("charge");
    profiles.temperature.validate("temperature");
    if (!(max_minutes > 0.0)) throw ConfigError("max_minutes must be positive");
    if (!(control_tick_s > 0.0)) throw ConfigError("control_tick_s must be positive");
    if (control.micro_steps < 1) throw ConfigError("cdm.micro_steps must be >= 1");
    if (attractors.size() != kNeedBits) throw ConfigError("exactly two attractors (charge, temperature) are required");
    if (start.x < 0.0 || start.x > arena.width || start.y < 0.0 || start.y > arena.height)
        throw ConfigError("robot start pose lies outside the arena");
    if (cmm && (cmm->rows() != kNeedBits || cmm->cols() != kColorBits))
        throw ConfigError("correlation matrix must be 2x3");
}

ExperimentConfig experiment1_config() {
    ExperimentConfig c;
    c.name = "homeostasis";
    c.arena = two_lamp_arena();
    c.profiles = basic_profiles();
    c.mode = ThermalMode::kSeekWarmth;
    c.training_route = {{40.0, 54.0}, {184.0, 54.0}, {112.0, 54.0}};
    return c;
}

ExperimentConfig experiment2_config() {
    ExperimentConfig c;
    c.name = "conflict";
    c.arena = conflict_arena();
    c.profiles = conflict_profiles();
    c.mode = ThermalMode::kAvoidHeat;
    c.training_route = {{40.0, 54.0}, {112.0, 54.0}};
    return c;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const char* fail_direction_name(FailDirection d) { return d == FailDirection::kLow ? "low" : "high"; }

FailDirection fail_direction_from(const std::string& s) {
    if (s == "low") return FailDirection::kLow;
    if (s == "high") return FailDirection::kHigh;
    throw ConfigError("fail_direction must be 'low' or 'high', got '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

Vec2 read_vec(const json& j) {
    if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) return {j.at("x").get<double>(), j.at("y").get<double>()};
    throw ConfigError("expected [x, y] or {\"x\":..,\"y\":..}");
}

ZoneRule read_zone(const json& j, ZoneRule zone) {
    if (j.contains("channel")) zone.channel = channel_from_string(j.at("channel").get<std::string>());
    read(j, "threshold", zone.threshold);
    return zone;
}

json zone_json(const ZoneRule& z) { return {{"channel", to_string(z.channel)}, {"threshold", z.threshold}}; }

SensorProfile read_profile(const json& j, SensorProfile p) {
    read(j, "start", p.start);
    read(j, "delta_pos", p.delta_pos);
    read(j, "delta_neg", p.delta_neg);
    read(j, "fail_point", p.fail_point);
    if (j.contains("limits")) {
        const auto& l = j.at("limits");
        if (!l.is_array() || l.size() != 2) throw ConfigError("profile limits must be [lo, hi]");
        p.limit_lo = l[0].get<double>();
        p.limit_hi = l[1].get<double>();
    }
    if (j.contains("control_threshold")) {
        const auto& t = j.at("control_threshold");
        if (t.is_null()) p.control_threshold.reset();
        else p.control_threshold = t.get<double>();
    }
    if (j.contains("fail_direction")) p.fail_direction = fail_direction_from(j.at("fail_direction").get<std::string>());
    return p;
}

json profile_json(const SensorProfile& p) {
    json j{{"start", p.start},
           {"delta_pos", p.delta_pos},
           {"delta_neg", p.delta_neg},
           {"fail_point", p.fail_point},
           {"limits", {p.limit_lo, p.limit_hi}},
           {"fail_direction", fail_direction_name(p.fail_direction)}};
    j["control_threshold"] = p.control_threshold ? json(*p.control_threshold) : json(nullptr);
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& j, const fs::path& base_dir) {
    try {
        ExperimentConfig c;
        // A "preset" selects the starting point that the remaining keys override.
        if (j.contains("preset")) {
            const auto preset = j.at("preset").get<std::string>();
            if (preset == "experiment1") c = experiment1_config();
            else if (preset == "experiment2") c = experiment2_config();
            else throw ConfigError("unknown preset '" + preset + "'");
        }
        read(j, "name", c.name);

        if (j.contains("arena")) {
            const auto& a = j.at("arena");
            read(a, "width", c.arena.width);
            read(a, "height", c.arena.height);
            if (a.contains("charge_zone")) c.arena.charge_zone = read_zone(a.at("charge_zone"), c.arena.charge_zone);
            if (a.contains("heat_zone")) c.arena.heat_zone = read_zone(a.at("heat_zone"), c.arena.heat_zone);
            read(a, "color_threshold", c.arena.color_threshold);
            read(a, "ambient_noise", c.arena.ambient_noise);
            read(a, "robot_speed", c.arena.robot_speed);
            read(a, "tumble_max", c.arena.tumble_max);
            read(a, "wander_jitter", c.arena.wander_jitter);
            read(a, "reflect_walls", c.arena.reflect_walls);
            read(a, "seek_hold_level", c.arena.seek_hold_level);
            if (a.contains("start")) {
                const auto& s = a.at("start");
                read(s, "x", c.start.x);
                read(s, "y", c.start.y);
                read(s, "heading", c.start.heading);
            }
        }
        c.start.speed = c.arena.robot_speed;

        if (j.contains("lamps")) {
            c.arena.lamps.clear();
            for (const auto& l : j.at("lamps")) {
                Lamp lamp;
                read(l, "name", lamp.name);
                read(l, "x", lamp.x);
                read(l, "y", lamp.y);
                if (l.contains("rgb")) lamp.weights = l.at("rgb").get<std::array<double, 3>>();
                read(l, "peak", lamp.peak);
                read(l, "spread", lamp.spread);
                c.arena.lamps.push_back(lamp);
            }
        }

        if (j.contains("profiles")) {
            const auto& p = j.at("profiles");
            if (p.contains("charge")) c.profiles.charge = read_profile(p.at("charge"), c.profiles.charge);
            if (p.contains("temperature"))
                c.profiles.temperature = read_profile(p.at("temperature"), c.profiles.temperature);
        }
        if (j.contains("mode")) c.mode = thermal_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("controller")) c.controller = controller_kind_from_string(j.at("controller").get<std::string>());
        read(j, "max_minutes", c.max_minutes);
        read(j, "control_tick_s", c.control_tick_s);
        read(j, "seed", c.seed);

        if (j.contains("cdm")) {
            const auto& d = j.at("cdm");
            auto& m = c.cdm;
            read(d, "ctx_mult", m.ctx_mult);
            read(d, "d", m.d);
            read(d, "g_update", m.g_update);
            read(d, "r", m.r);
            read(d, "world", m.world);
            read(d, "n_agents", m.n_agents);
            if (d.contains("init_pos")) m.init_pos = read_vec(d.at("init_pos"));
            read(d, "init_jitter", m.init_jitter);
            read(d, "init_heading", m.init_heading);
            read(d, "max_speed", m.max_speed);
            read(d, "d_lattice", m.d_lattice);
            read(d, "lattice_cutoff", m.lattice_cutoff);
            read(d, "epsilon", m.epsilon);
            read(d, "h", m.h);
            read(d, "lattice_a", m.lattice_a);
            read(d, "lattice_b", m.lattice_b);
            read(d, "lattice_gain", m.lattice_gain);
            read(d, "consensus_gain", m.consensus_gain);
            read(d, "c1", m.c1);
            read(d, "c2", m.c2);
            read(d, "readout_sigma_mult", m.readout_sigma_mult);
            read(d, "readout_fraction", m.readout_fraction);
            read(d, "micro_steps", c.control.micro_steps);
            if (d.contains("attractors")) {
                c.attractors.clear();
                for (const auto& a : d.at("attractors")) {
                    Attractor at;
                    read(a, "label", at.label);
                    at.mu = read_vec(a.at("mu"));
                    read(a, "sigma", at.sigma);
                    c.attractors.push_back(at);
                }
            }
        }
        if (j.contains("urgency")) {
            read(j.at("urgency"), "t_ref", c.control.urgency.t_ref);
            read(j.at("urgency"), "t_safe", c.control.urgency.t_safe);
        }
        if (j.contains("cmm") && !j.at("cmm").is_null()) c.cmm = cmm_from_json(j.at("cmm"));
        if (j.contains("cmm_file") && !j.at("cmm_file").is_null()) {
            fs::path p = j.at("cmm_file").get<std::string>();
            if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
            c.cmm_path = p.string();
        }
        read(j, "online_training", c.online_training);
        if (j.contains("training")) {
            const auto& t = j.at("training");
            read(t, "duration_s", c.training_duration_s);
            if (t.contains("route")) {
                c.training_route.clear();
                for (const auto& w : t.at("route")) {
                    const Vec2 v = read_vec(w);
                    c.training_route.push_back({v.x, v.y});
                }
            }
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
}

json config_to_json(const ExperimentConfig& c) {
    json lamps = json::array();
    for (const auto& l : c.arena.lamps) {
        lamps.push_back({{"name", l.name}, {"x", l.x}, {"y", l.y}, {"rgb", l.weights}, {"peak", l.peak}, {"spread", l.spread}});
    }
    json attractors = json::array();
    for (const auto& a : c.attractors) {
        attractors.push_back({{"label", a.label}, {"mu", {a.mu.x, a.mu.y}}, {"sigma", a.sigma}});
    }
    const auto& m = c.cdm;
    json route = json::array();
    for (const auto& w : c.training_route) route.push_back({w.x, w.y});
    json j{
        {"name", c.name},
        {"arena",
         {{"width", c.arena.width},
          {"height", c.arena.height},
          {"charge_zone", zone_json(c.arena.charge_zone)},
          {"heat_zone", zone_json(c.arena.heat_zone)},
          {"color_threshold", c.arena.color_threshold},
          {"ambient_noise", c.arena.ambient_noise},
          {"robot_speed", c.arena.robot_speed},
          {"tumble_max", c.arena.tumble_max},
          {"wander_jitter", c.arena.wander_jitter},
          {"reflect_walls", c.arena.reflect_walls},
          {"seek_hold_level", c.arena.seek_hold_level},
          {"start", {{"x", c.start.x}, {"y", c.start.y}, {"heading", c.start.heading}}}}},
        {"lamps", lamps},
        {"profiles", {{"charge", profile_json(c.profiles.charge)}, {"temperature", profile_json(c.profiles.temperature)}}},
        {"mode", to_string(c.mode)},
        {"controller", to_string(c.controller)},
        {"max_minutes", c.max_minutes},
        {"control_tick_s", c.control_tick_s},
        {"seed", c.seed},
        {"cdm",
         {{"ctx_mult", m.ctx_mult},
          {"d", m.d},
          {"g_update", m.g_update},
          {"r", m.r},
          {"world", m.world},
          {"n_agents", m.n_agents},
          {"init_pos", {m.init_pos.x, m.init_pos.y}},
          {"init_jitter", m.init_jitter},
          {"init_heading", m.init_heading},
          {"max_speed", m.max_speed},
          {"d_lattice", m.d_lattice},
          {"lattice_cutoff", m.lattice_cutoff},
          {"epsilon", m.epsilon},
          {"h", m.h},
          {"lattice_a", m.lattice_a},
          {"lattice_b", m.lattice_b},
          {"lattice_gain", m.lattice_gain},
          {"consensus_gain", m.consensus_gain},
          {"c1", m.c1},
          {"c2", m.c2},
          {"readout_sigma_mult", m.readout_sigma_mult},
          {"readout_fraction", m.readout_fraction},
          {"micro_steps", c.control.micro_steps},
          {"attractors", attractors}}},
        {"urgency", {{"t_ref", c.control.urgency.t_ref}, {"t_safe", c.control.urgency.t_safe}}},
        {"online_training", c.online_training},
        {"training", {{"duration_s", c.training_duration_s}, {"route", route}}},
    };
    if (c.cmm) j["cmm"] = cmm_to_json(*c.cmm);
    if (c.cmm_path) j["cmm_file"] = *c.cmm_path;
    return j;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open experiment config '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Runs

namespace {

std::int64_t tick_count(double duration_s, double tick_s) {
    if (duration_s <= 0.0) return 0;
    return static_cast<std::int64_t>(std::floor(duration_s / tick_s + 1e-9));
}

TraceRow make_row(std::int64_t tick, double tick_s, const RobotPose& pose, const ColorReading& reading,
                  const InternalState& internal, NeedSignal needs, MotorCommand command, ZoneMembership zones) {
    TraceRow row;
    row.tick = tick;
    row.t_s = static_cast<double>(tick) * tick_s;
    row.pose = pose;
    row.reading = reading;
    row.charge = internal.charge;
    row.temperature = internal.temperature;
    row.needs = needs;
    row.command = command;
    row.zones = zones;
    return row;
}

BitVector color_bits(const ColorReading& reading, double threshold) {
    BitVector out(kColorBits);
    out.set(0, reading.r >= threshold);
    out.set(1, reading.g >= threshold);
    out.set(2, reading.b >= threshold);
    return out;
}

// Trains on coincident colour bits and rising internal sensors; returns true
// if the memory was updated.
bool train_on_coincidence(CorrelationMatrix& cmm, const ColorReading& reading, ZoneMembership zones,
                          double color_threshold) {
    BitVector needs(kNeedBits);
    needs.set(kChargeRow, zones.in_charge_zone);
    needs.set(kThermalRow, zones.in_heat_zone);
    const BitVector colors = color_bits(reading, color_threshold);
    if (needs.none() || colors.none()) return false;
    cmm.train(needs, colors);
    return true;
}

// Moves toward the next waypoint at the given step length, landing exactly on it.
RobotPose follow_route(const RobotPose& pose, const std::vector<Waypoint>& route, std::size_t& next, double step) {
    RobotPose out = pose;
    double remaining = step;
    while (next < route.size() && remaining > 0.0) {
        const double dx = route[next].x - out.x;
        const double dy = route[next].y - out.y;
        const double dist = std::hypot(dx, dy);
        if (dist > 0.0) out.heading = std::atan2(dy, dx);
        if (dist <= remaining) {
            out.x = route[next].x;
            out.y = route[next].y;
            ++next;
            // Stop on every waypoint so it is sampled.
            break;
        }
        out.x += remaining * dx / dist;
        out.y += remaining * dy / dist;
        remaining = 0.0;
    }
    return out;
}

}  // namespace

TrainingResult run_training(const ExperimentConfig& config, double duration_s, std::uint64_t seed) {
    config.validate();
    TrainingResult result{new_cmm(kNeedBits, kColorBits), {}};
    Rng noise = make_rng(seed, RngStream::kSensorNoise);
    Rng motion = make_rng(seed, RngStream::kMotion);
    RobotPose pose = config.start;
    ColorReading previous = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
    std::size_t next_waypoint = 0;
    InternalState internal = initial_state(config.profiles);
    const std::int64_t ticks = tick_count(duration_s, config.control_tick_s);
    for (std::int64_t t = 1; t <= ticks; ++t) {
        const ColorReading reading = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
        const ZoneMembership zones = zone_membership(reading, config.arena);
        if (internal.alive) {
            internal = tick_internal(internal, config.profiles, zones.in_charge_zone, zones.in_heat_zone);
        }
        train_on_coincidence(result.cmm, reading, zones, config.arena.color_threshold);
        result.trace.push_back(make_row(t, config.control_tick_s, pose, reading, internal,
                                        NeedSignal{zones.in_charge_zone ? 1 : 0, zones.in_heat_zone ? 1 : 0},
                                        MotorCommand::wander(), zones));
        if (!config.training_route.empty()) {
            if (next_waypoint >= config.training_route.size()) break;
            pose = follow_route(pose, config.training_route, next_waypoint, pose.speed * config.control_tick_s);
        } else {
            pose = chromotaxis_step(pose, MotorCommand::wander(), reading, previous, config.control_tick_s,
                                    config.arena, motion);
        }
        previous = reading;
    }
    return result;
}

std::vector<MotiveSwitch> schedule_from_json(const json& j) {
    const json& items = j.is_object() ? j.at("schedule") : j;
    std::vector<MotiveSwitch> out;
    try {
        for (const auto& e : items) {
            MotiveSwitch s;
            s.time_s = e.at("time_s").get<double>();
            s.needs_charge = e.at("needs_charge").get<bool>();
            out.push_back(s);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("motive schedule: ") + e.what());
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
        if (out[i].time_s < out[i - 1].time_s) throw ConfigError("motive schedule times must be non-decreasing");
    }
    return out;
}

std::vector<MotiveSwitch> load_schedule(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schedule '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    return schedule_from_json(j);
}

std::vector<TraceRow> run_poc(const ExperimentConfig& config, const CorrelationMatrix& cmm,
                              const std::vector<MotiveSwitch>& schedule, std::uint64_t seed,
                              std::optional<double> duration_s) {
    config.validate();
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (schedule[i].time_s < schedule[i - 1].time_s) throw ConfigError("motive schedule times must be non-decreasing");
    }
    Rng noise = make_rng(seed, RngStream::kSensorNoise);
    Rng motion = make_rng(seed, RngStream::kMotion);
    RobotPose pose = config.start;
    ColorReading previous = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
    InternalState internal = initial_state(config.profiles);
    std::vector<TraceRow> trace;
    std::size_t next_switch = 0;
    bool needs_charge = false;
    const std::int64_t ticks = tick_count(duration_s.value_or(config.max_duration_s()), config.control_tick_s);
    for (std::int64_t t = 1; t <= ticks; ++t) {
        const double now = static_cast<double>(t) * config.control_tick_s;
        while (next_switch < schedule.size() && schedule[next_switch].time_s <= now) {
            needs_charge = schedule[next_switch++].needs_charge;
        }
        const ColorReading reading = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
        const ZoneMembership zones = zone_membership(reading, config.arena);
        if (internal.alive) {
            internal = tick_internal(internal, config.profiles, zones.in_charge_zone, zones.in_heat_zone);
        }
        const NeedSignal needs{needs_charge ? 1 : 0, 0};
        const auto out = command_for_needs(needs, {needs_charge ? 1.0 : 0.0, 0.0}, cmm, config.mode,
                                           ConflictRule::kHigherUrgency);
        trace.push_back(make_row(t, config.control_tick_s, pose, reading, internal, needs, out.command, zones));
        pose = chromotaxis_step(pose, out.command, reading, previous, config.control_tick_s, config.arena, motion);
        previous = reading;
    }
    return trace;
}

CorrelationMatrix resolve_cmm(const ExperimentConfig& config) {
    if (config.cmm) return *config.cmm;
    if (config.cmm_path) {
        auto m = load_cmm(*config.cmm_path);
        if (m.rows() != kNeedBits || m.cols() != kColorBits)
            throw ConfigError("'" + *config.cmm_path + "' is not a 2x3 correlation matrix");
        return m;
    }
    return run_training(config, config.training_duration_s, config.seed).cmm;
}

RunRecord run_experiment(const ExperimentConfig& config, bool keep_trace) {
    return run_experiment(config, resolve_cmm(config), keep_trace);
}

RunRecord run_experiment(const ExperimentConfig& config, const CorrelationMatrix& cmm, bool keep_trace) {
    config.validate();
    RunRecord record;
    record.seed = config.seed;
    record.controller = config.controller;

    Rng noise = make_rng(config.seed, RngStream::kSensorNoise);
    Rng motion = make_rng(config.seed, RngStream::kMotion);
    auto controller = make_controller(config.controller, config.cdm, config.attractors, cmm, config.mode,
                                      config.profiles, config.control, config.seed);
    CorrelationMatrix memory = cmm;

    InternalState internal = initial_state(config.profiles);
    RobotPose pose = config.start;
    ColorReading previous = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
    const std::int64_t ticks = tick_count(config.max_duration_s(), config.control_tick_s);

    for (std::int64_t t = 1; t <= ticks; ++t) {
        const ColorReading reading = sense_color(config.arena.lamps, pose, config.arena.ambient_noise, noise);
        const ZoneMembership zones = zone_membership(reading, config.arena);
        internal = tick_internal(internal, config.profiles, zones.in_charge_zone, zones.in_heat_zone);
        if (!internal.alive) {
            if (keep_trace) {
                auto row = make_row(t, config.control_tick_s, pose, reading, internal, {}, MotorCommand::wander(), zones);
                row.halted = true;
                record.trace.push_back(row);
            }
            record.fail_cause = internal.fail_cause;
            record.survival_s = static_cast<double>(internal.tick) * config.control_tick_s;
            return record;
        }
        if (config.online_training && train_on_coincidence(memory, reading, zones, config.arena.color_threshold)) {
            // Rebuild the controller's memory view: only the CDM controller exposes it.
            if (auto* cdm = dynamic_cast<CdmController*>(controller.get())) cdm->memory() = memory;
            else controller = make_controller(config.controller, config.cdm, config.attractors, memory, config.mode,
                                              config.profiles, config.control, config.seed);
        }
        const ControllerOutput out = controller->tick(internal);
        if (out.untrained_recall) ++record.untrained_recalls;
        if (keep_trace) {
            record.trace.push_back(
                make_row(t, config.control_tick_s, pose, reading, internal, out.needs, out.command, zones));
        }
        pose = chromotaxis_step(pose, out.command, reading, previous, config.control_tick_s, config.arena, motion);
        previous = reading;
    }
    record.fail_cause = FailCause::kNone;
    record.survival_s = config.max_duration_s();
    return record;
}

std::vector<RunRecord> run_replicates_serial(const ExperimentConfig& config, std::size_t n, std::uint64_t base_seed,
                                             bool keep_trace) {
    if (n == 0) throw std::invalid_argument("run_replicates: n must be >= 1");
    const CorrelationMatrix cmm = resolve_cmm(config);
    std::vector<RunRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ExperimentConfig c = config;
        c.seed = base_seed + i;
        out.push_back(run_experiment(c, cmm, keep_trace));
        out.back().replicate = i;
    }
    return out;
}

std::vector<RunRecord> run_replicates(const ExperimentConfig& config, std::size_t n, std::uint64_t base_seed,
                                      bool keep_trace) {
    if (n == 0) throw std::invalid_argument("run_replicates: n must be >= 1");
    const CorrelationMatrix cmm = resolve_cmm(config);
    std::vector<RunRecord> out(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        ExperimentConfig c = config;
        c.seed = base_seed + static_cast<std::uint64_t>(i);
        out[static_cast<std::size_t>(i)] = run_experiment(c, cmm, keep_trace);
        out[static_cast<std::size_t>(i)].replicate = static_cast<std::size_t>(i);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::ofstream open_for_write(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void write_trace_csv(const std::vector<TraceRow>& trace, const fs::path& path) {
    auto out = open_for_write(path);
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << fmt::format("{},{:.2f},{:.4f},{:.4f},{:.6f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{},{},{},{},{}\n", r.tick,
                           r.t_s, r.pose.x, r.pose.y, r.pose.heading, r.reading.r, r.reading.g, r.reading.b, r.charge,
                           r.temperature, r.needs.needs_charge, r.needs.needs_thermal,
                           r.halted ? std::string("halt") : to_string(r.command), r.zones.in_charge_zone ? 1 : 0,
                           r.zones.in_heat_zone ? 1 : 0);
    }
    finish(out, path);
}

void write_summary_csv(const std::vector<RunRecord>& records, const fs::path& path) {
    auto out = open_for_write(path);
    out << kSummaryHeader << '\n';
    for (const auto& r : records) {
        out << fmt::format("{},{},{},{:.2f},{:.4f},{}\n", r.replicate, r.seed, to_string(r.controller), r.survival_s,
                           r.survival_min(), to_string(r.fail_cause));
    }
    finish(out, path);
}

void export_csv(const std::vector<RunRecord>& records, const fs::path& summary_path,
                const std::optional<fs::path>& trace_dir) {
    write_summary_csv(records, summary_path);
    if (!trace_dir) return;
    for (const auto& r : records) {
        write_trace_csv(r.trace, *trace_dir / fmt::format("trace_{}_seed{}.csv", r.replicate, r.seed));
    }
}

std::vector<double> read_summary_survival(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open summary '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("'" + path.string() + "' is empty");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const auto it = std::find(header.begin(), header.end(), "survival_s");
    if (it == header.end()) throw ConfigError("'" + path.string() + "' has no survival_s column");
    const auto col = static_cast<std::size_t>(it - header.begin());
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        for (std::size_t i = 0; i <= col; ++i) {
            if (!std::getline(ss, cell, ',')) throw ConfigError("'" + path.string() + "': short row '" + line + "'");
        }
        try {
            out.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError("'" + path.string() + "': bad survival value '" + cell + "'");
        }
    }
    return out;
}

}  // namespace homeokit
