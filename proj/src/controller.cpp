#include "homeokit/controller.hpp"

#include "homeokit/errors.hpp"

namespace homeokit {

std::string to_string(ControllerKind kind) { return kind == ControllerKind::kCdm ? "cdm" : "threshold"; }

ControllerKind controller_kind_from_string(const std::string& s) {
    if (s == "cdm") return ControllerKind::kCdm;
    if (s == "threshold") return ControllerKind::kThreshold;
    throw ConfigError("unknown controller '" + s + "' (expected cdm or threshold)");
}

std::string to_string(ThermalMode mode) { return mode == ThermalMode::kSeekWarmth ? "seek-warmth" : "avoid-heat"; }

ThermalMode thermal_mode_from_string(const std::string& s) {
    if (s == "seek-warmth") return ThermalMode::kSeekWarmth;
    if (s == "avoid-heat") return ThermalMode::kAvoidHeat;
    throw ConfigError("unknown mode '" + s + "' (expected seek-warmth or avoid-heat)");
}

std::array<double, 2> need_urgencies(const InternalState& internal, const InternalProfiles& profiles, ThermalMode mode,
                                     const UrgencyConfig& config) {
    return {urgency(internal, profiles, Need::kCharge, mode, config),
            urgency(internal, profiles, Need::kTemperature, mode, config)};
}

ControllerOutput command_for_needs(NeedSignal needs, std::array<double, 2> urgencies, const CorrelationMatrix& cmm,
                                   ThermalMode mode, ConflictRule rule) {
    ControllerOutput out;
    out.needs = needs;
    out.urgencies = urgencies;
    if (!needs.any()) return out;

    bool thermal = needs.needs_thermal != 0;
    if (needs.needs_charge && needs.needs_thermal) {
        thermal = rule == ConflictRule::kThermalFirst || urgencies[1] > urgencies[0];
    }

    BitVector input(kNeedBits);
    input.set(thermal ? kThermalRow : kChargeRow, true);
    const BitVector colors = cmm.recall(input);
    for (std::size_t c = 0; c < colors.size() && c < kColorBits; ++c) {
        if (!colors[c]) continue;
        const auto channel = static_cast<Channel>(c);
        const bool flee = thermal && mode == ThermalMode::kAvoidHeat;
        out.command = flee ? MotorCommand::flee(channel) : MotorCommand::seek(channel);
        return out;
    }
    out.untrained_recall = true;
    return out;
}

ControllerOutput cdm_controller_tick(const InternalState& internal, CdmState& cdm, const CdmConfig& cdm_config,
                                     const CorrelationMatrix& cmm, ThermalMode mode, const InternalProfiles& profiles,
                                     const ControllerConfig& config) {
    if (!internal.alive) throw ContractViolation("controller tick on a dead internal state");
    if (cdm.attractors.size() != kNeedBits) throw ConfigError("cdm controller expects charge and temperature attractors");
    const auto u = need_urgencies(internal, profiles, mode, config.urgency);
    for (int k = 0; k < config.micro_steps; ++k) step_cdm(cdm, u, cdm_config);
    const auto readout = read_signals(cdm, cdm_config);
    const NeedSignal needs{readout.signals[kChargeRow], readout.signals[kThermalRow]};
    return command_for_needs(needs, u, cmm, mode, ConflictRule::kHigherUrgency);
}

ControllerOutput threshold_controller_tick(const InternalState& internal, const CorrelationMatrix& cmm,
                                           ThermalMode mode, const InternalProfiles& profiles,
                                           const ControllerConfig& config) {
    if (!internal.alive) throw ContractViolation("controller tick on a dead internal state");
    const double charge_threshold = profiles.charge.control_threshold.value_or(2.5);
    NeedSignal needs;
    needs.needs_charge = internal.charge < charge_threshold ? 1 : 0;
    if (mode == ThermalMode::kSeekWarmth) {
        // No temperature threshold here: the robot warms itself whenever it is not charging.
        needs.needs_thermal = needs.needs_charge ? 0 : 1;
    } else {
        const double t = profiles.temperature.control_threshold.value_or(config.thermal_threshold);
        needs.needs_thermal = internal.temperature > t ? 1 : 0;
    }
    return command_for_needs(needs, need_urgencies(internal, profiles, mode, config.urgency), cmm, mode,
                             ConflictRule::kThermalFirst);
}

CdmController::CdmController(CdmConfig cdm_config, std::vector<Attractor> attractors, CorrelationMatrix cmm,
                             ThermalMode mode, InternalProfiles profiles, ControllerConfig config, std::uint64_t seed)
    : cdm_config_(std::move(cdm_config)),
      cmm_(std::move(cmm)),
      mode_(mode),
      profiles_(std::move(profiles)),
      config_(config),
      state_(init_cdm(cdm_config_, std::move(attractors), seed)) {}

ControllerOutput CdmController::tick(const InternalState& internal) {
    return cdm_controller_tick(internal, state_, cdm_config_, cmm_, mode_, profiles_, config_);
}

ThresholdController::ThresholdController(CorrelationMatrix cmm, ThermalMode mode, InternalProfiles profiles,
                                         ControllerConfig config)
    : cmm_(std::move(cmm)), mode_(mode), profiles_(std::move(profiles)), config_(config) {}

ControllerOutput ThresholdController::tick(const InternalState& internal) {
    return threshold_controller_tick(internal, cmm_, mode_, profiles_, config_);
}

std::unique_ptr<Controller> make_controller(ControllerKind kind, const CdmConfig& cdm_config,
                                            const std::vector<Attractor>& attractors, const CorrelationMatrix& cmm, ThermalMode mode,
                                            const InternalProfiles& profiles, const ControllerConfig& config,
                                            std::uint64_t seed) {
    if (kind == ControllerKind::kCdm)
        return std::make_unique<CdmController>(cdm_config, attractors, cmm, mode, profiles, config, seed);
    return std::make_unique<ThresholdController>(cmm, mode, profiles, config);
}

}  // namespace homeokit
