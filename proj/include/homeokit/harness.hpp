#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "homeokit/arena.hpp"
#include "homeokit/cdm.hpp"
#include "homeokit/cmm.hpp"
#include "homeokit/controller.hpp"
#include "homeokit/homeostat.hpp"

namespace homeokit {

struct Waypoint {
    double x = 0.0;
    double y = 0.0;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ArenaConfig arena = two_lamp_arena();
    RobotPose start{112.0, 54.0, 0.0, 7.0};
    InternalProfiles profiles = basic_profiles();
    ThermalMode mode = ThermalMode::kSeekWarmth;
    ControllerKind controller = ControllerKind::kCdm;
    double max_minutes = 29.0;
    double control_tick_s = 2.25;
    std::uint64_t seed = 1;
    CdmConfig cdm;
    std::vector<Attractor> attractors = default_attractors();
    ControllerConfig control;
    std::optional<CorrelationMatrix> cmm;   // trained memory, inline in the config
    std::optional<std::string> cmm_path;    // or loaded from a file (resolved against the config's directory)
    bool online_training = false;
    std::vector<Waypoint> training_route;   // scripted traversal for training; empty means wander
    double training_duration_s = 600.0;

    double max_duration_s() const { return max_minutes * 60.0; }
    void validate() const;
};

/// Basic homeostasis experiment (two lamps, seek-warmth).
ExperimentConfig experiment1_config();
/// Conflicting-decision experiment (one lamp, avoid-heat).
ExperimentConfig experiment2_config();

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

struct TraceRow {
    std::int64_t tick = 0;
    double t_s = 0.0;
    RobotPose pose;
    ColorReading reading;
    double charge = 0.0;
    double temperature = 0.0;
    NeedSignal needs;
    MotorCommand command;
    ZoneMembership zones;
    bool halted = false;  // the internal state failed on this tick; no command was issued
};

struct RunRecord {
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    ControllerKind controller = ControllerKind::kCdm;
    double survival_s = 0.0;
    FailCause fail_cause = FailCause::kNone;
    std::vector<TraceRow> trace;
    std::size_t untrained_recalls = 0;

    double survival_min() const { return survival_s / 60.0; }
};

struct TrainingResult {
    CorrelationMatrix cmm;
    std::vector<TraceRow> trace;
};

/// Roams the arena (scripted route if configured, otherwise wander) and trains
/// the memory whenever a colour bit coincides with a rising internal sensor.
TrainingResult run_training(const ExperimentConfig& config, double duration_s, std::uint64_t seed);

struct MotiveSwitch {
    double time_s = 0.0;
    bool needs_charge = false;
};

std::vector<MotiveSwitch> schedule_from_json(const nlohmann::json& j);
std::vector<MotiveSwitch> load_schedule(const std::filesystem::path& path);

/// Post-training check with need signals taken from a scripted schedule
/// instead of the decision component. Runs for `duration_s` (default: the
/// config's max duration) without a survival check.
std::vector<TraceRow> run_poc(const ExperimentConfig& config, const CorrelationMatrix& cmm,
                              const std::vector<MotiveSwitch>& schedule, std::uint64_t seed,
                              std::optional<double> duration_s = std::nullopt);

/// The memory a run uses: inline, from file, or trained on the spot.
CorrelationMatrix resolve_cmm(const ExperimentConfig& config);

/// One survival run at control-tick resolution.
RunRecord run_experiment(const ExperimentConfig& config, bool keep_trace = true);
RunRecord run_experiment(const ExperimentConfig& config, const CorrelationMatrix& cmm, bool keep_trace = true);

/// Seeds base_seed .. base_seed + n - 1; runs execute in parallel.
std::vector<RunRecord> run_replicates(const ExperimentConfig& config, std::size_t n, std::uint64_t base_seed,
                                      bool keep_trace = false);
/// Single-threaded reference for run_replicates.
std::vector<RunRecord> run_replicates_serial(const ExperimentConfig& config, std::size_t n, std::uint64_t base_seed,
                                             bool keep_trace = false);

inline constexpr const char* kSummaryHeader = "replicate,seed,controller,survival_s,survival_min,fail_cause";
inline constexpr const char* kTraceHeader =
    "tick,t_s,x_cm,y_cm,heading,r_acu,g_acu,b_acu,charge,temperature,needs_charge,needs_thermal,command,"
    "in_charge_zone,in_heat_zone";

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path);
void write_summary_csv(const std::vector<RunRecord>& records, const std::filesystem::path& path);

/// Writes `summary_path`; when `trace_dir` is set, also one
/// `trace_<replicate>_seed<seed>.csv` per record.
void export_csv(const std::vector<RunRecord>& records, const std::filesystem::path& summary_path,
                const std::optional<std::filesystem::path>& trace_dir = std::nullopt);

/// Survival times (seconds) from a summary CSV.
std::vector<double> read_summary_survival(const std::filesystem::path& path);

}  // namespace homeokit
