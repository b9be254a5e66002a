#include "homeokit/homeostat.hpp"

#include <algorithm>

#include "homeokit/errors.hpp"

namespace homeokit {

void SensorProfile::validate(const std::string& name) const {
    if (!(limit_lo < limit_hi)) throw ConfigError(name + ": limit_lo must be below limit_hi");
    if (fail_point < limit_lo || fail_point > limit_hi) throw ConfigError(name + ": fail point outside limits");
    if (start < limit_lo || start > limit_hi) throw ConfigError(name + ": start value outside limits");
    if (delta_pos < 0.0 || delta_neg < 0.0) throw ConfigError(name + ": deltas must be non-negative");
}

InternalProfiles basic_profiles() {
    InternalProfiles p;
    p.charge = {5.0, 0.8, 0.1, 0.1, 0.01, 15.0, 2.5, FailDirection::kLow};
    p.temperature = {10.0, 1.8, 0.5, 55.0, 10.0, 60.0, std::nullopt, FailDirection::kHigh};
    return p;
}

InternalProfiles conflict_profiles() {
    InternalProfiles p;
    p.charge = {5.0, 0.3, 0.1, 0.1, 0.01, 15.0, 2.5, FailDirection::kLow};
    p.temperature = {10.0, 1.3, 0.8, 55.0, 10.0, 60.0, 25.0, FailDirection::kHigh};
    return p;
}

std::string to_string(FailCause cause) {
    switch (cause) {
        case FailCause::kNone: return "none";
        case FailCause::kChargeDepleted: return "charge-depleted";
        case FailCause::kOverheated: return "overheated";
    }
    return "unknown";
}

InternalState initial_state(const InternalProfiles& profiles) {
    profiles.charge.validate("charge");
    profiles.temperature.validate("temperature");
    return InternalState{profiles.charge.start, profiles.temperature.start, true, FailCause::kNone, 0};
}

namespace {

double advance(double value, const SensorProfile& p, bool in_zone) {
    value += in_zone ? p.delta_pos : -p.delta_neg;
    return std::clamp(value, p.limit_lo, p.limit_hi);
}

bool failed(double value, const SensorProfile& p) {
    return p.fail_direction == FailDirection::kLow ? value <= p.fail_point + kFailTolerance
                                                   : value >= p.fail_point - kFailTolerance;
}

}  // namespace

InternalState tick_internal(const InternalState& state, const InternalProfiles& profiles, bool in_charge_zone,
                            bool in_heat_zone) {
    if (!state.alive) throw ContractViolation("tick_internal called on a dead state");
    InternalState next = state;
    next.charge = advance(state.charge, profiles.charge, in_charge_zone);
    next.temperature = advance(state.temperature, profiles.temperature, in_heat_zone);
    ++next.tick;
    if (failed(next.charge, profiles.charge)) {
        next.alive = false;
        next.fail_cause = FailCause::kChargeDepleted;
    } else if (failed(next.temperature, profiles.temperature)) {
        next.alive = false;
        next.fail_cause = FailCause::kOverheated;
    }
    return next;
}

double urgency(const InternalState& state, const InternalProfiles& profiles, Need need, ThermalMode mode,
               const UrgencyConfig& config) {
    if (need == Need::kCharge) {
        const auto& p = profiles.charge;
        return std::clamp((p.limit_hi - state.charge) / (p.limit_hi - p.fail_point), 0.0, 1.0);
    }
    const auto& p = profiles.temperature;
    if (mode == ThermalMode::kSeekWarmth)
        return std::clamp((config.t_ref - state.temperature) / (config.t_ref - p.limit_lo), 0.0, 1.0);
    return std::clamp((state.temperature - config.t_safe) / (p.fail_point - config.t_safe), 0.0, 1.0);
}

}  // namespace homeokit
