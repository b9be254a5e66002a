#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace homeokit {

enum class FailDirection { kLow, kHigh };

/// How one simulated internal sensor evolves per control tick.
struct SensorProfile {
    double start = 0.0;
    double delta_pos = 0.0;   // applied while in the sensor's zone
    double delta_neg = 0.0;   // subtracted while outside it
    double fail_point = 0.0;
    double limit_lo = 0.0;
    double limit_hi = 1.0;
    std::optional<double> control_threshold;
    FailDirection fail_direction = FailDirection::kLow;

    void validate(const std::string& name) const;
};

struct InternalProfiles {
    SensorProfile charge;
    SensorProfile temperature;
};

/// Basic homeostasis experiment (blue charger, red warmer).
InternalProfiles basic_profiles();
/// Conflicting-decision experiment (one lamp both charges and heats).
InternalProfiles conflict_profiles();

enum class FailCause { kNone, kChargeDepleted, kOverheated };
std::string to_string(FailCause cause);

struct InternalState {
    double charge = 0.0;
    double temperature = 0.0;
    bool alive = true;
    FailCause fail_cause = FailCause::kNone;
    std::int64_t tick = 0;

    friend bool operator==(const InternalState&, const InternalState&) = default;
};

InternalState initial_state(const InternalProfiles& profiles);

/// Fail-point comparisons accept this much accumulated rounding, so that e.g.
/// 49 decrements of 0.1 from 5.0 register as reaching 0.1.
inline constexpr double kFailTolerance = 1e-9;

/// One control tick: apply zone deltas, clamp to limits, then check fail points.
/// Throws ContractViolation on a dead state.
InternalState tick_internal(const InternalState& state, const InternalProfiles& profiles, bool in_charge_zone,
                            bool in_heat_zone);

enum class Need { kCharge, kTemperature };
enum class ThermalMode { kSeekWarmth, kAvoidHeat };

/// Reference points of the sensor-to-urgency maps.
struct UrgencyConfig {
    double t_ref = 40.0;    // seek-warmth: urgency 0 at or above this temperature
    double t_safe = 20.0;   // avoid-heat: urgency 0 at or below this temperature
};

/// Need intensity in [0,1]. Charge urgency rises linearly from 0 at the upper
/// limit to 1 at the fail point. Temperature urgency depends on the mode.
double urgency(const InternalState& state, const InternalProfiles& profiles, Need need, ThermalMode mode,
               const UrgencyConfig& config = {});

}  // namespace homeokit
