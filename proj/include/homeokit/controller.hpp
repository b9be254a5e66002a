#pragma once

#include <array>
#include <memory>
#include <string>

#include "homeokit/arena.hpp"
#include "homeokit/cdm.hpp"
#include "homeokit/cmm.hpp"
#include "homeokit/homeostat.hpp"

namespace homeokit {

// Row order of the need bits in the correlation matrix; columns are r, g, b.
inline constexpr std::size_t kChargeRow = 0;
inline constexpr std::size_t kThermalRow = 1;
inline constexpr std::size_t kNeedBits = 2;
inline constexpr std::size_t kColorBits = 3;

struct NeedSignal {
    int needs_charge = 0;
    int needs_thermal = 0;

    bool any() const { return needs_charge != 0 || needs_thermal != 0; }
    friend bool operator==(const NeedSignal&, const NeedSignal&) = default;
};

enum class ControllerKind { kCdm, kThreshold };
std::string to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& s);

std::string to_string(ThermalMode mode);
ThermalMode thermal_mode_from_string(const std::string& s);

struct ControllerConfig {
    int micro_steps = 20;             // CDM steps per control tick
    UrgencyConfig urgency;
    double thermal_threshold = 25.0;  // threshold baseline, avoid-heat only; overridden by the profile when set
};

struct ControllerOutput {
    MotorCommand command;
    NeedSignal needs;
    std::array<double, 2> urgencies{0.0, 0.0};  // charge, temperature
    bool untrained_recall = false;              // a need was active but recalled no colour
};

/// How a controller settles two simultaneous needs.
enum class ConflictRule {
    kHigherUrgency,  // larger urgency wins, ties go to charge
    kThermalFirst,   // thermal need always wins
};

/// Shared back half of both controllers: pick the need, recall its colour and
/// turn it into a chromotaxis command.
ControllerOutput command_for_needs(NeedSignal needs, std::array<double, 2> urgencies, const CorrelationMatrix& cmm,
                                   ThermalMode mode, ConflictRule rule);

std::array<double, 2> need_urgencies(const InternalState& internal, const InternalProfiles& profiles, ThermalMode mode,
                                     const UrgencyConfig& config);

/// Decision via the virtual flock: urgencies drive attractor amplitudes for
/// `micro_steps` CDM steps, then the flock's position is read out as needs.
ControllerOutput cdm_controller_tick(const InternalState& internal, CdmState& cdm, const CdmConfig& cdm_config,
                                     const CorrelationMatrix& cmm, ThermalMode mode, const InternalProfiles& profiles,
                                     const ControllerConfig& config);

/// Fixed-threshold baseline without hysteresis.
ControllerOutput threshold_controller_tick(const InternalState& internal, const CorrelationMatrix& cmm,
                                           ThermalMode mode, const InternalProfiles& profiles,
                                           const ControllerConfig& config);

/// Decision component behind one interface so runs can swap implementations.
class Controller {
public:
    virtual ~Controller() = default;
    virtual ControllerKind kind() const = 0;
    virtual ControllerOutput tick(const InternalState& internal) = 0;
};

class CdmController final : public Controller {
public:
    CdmController(CdmConfig cdm_config, std::vector<Attractor> attractors, CorrelationMatrix cmm, ThermalMode mode,
                  InternalProfiles profiles, ControllerConfig config, std::uint64_t seed);

    ControllerKind kind() const override { return ControllerKind::kCdm; }
    ControllerOutput tick(const InternalState& internal) override;

    const CdmState& cdm_state() const { return state_; }
    CorrelationMatrix& memory() { return cmm_; }

private:
    CdmConfig cdm_config_;
    CorrelationMatrix cmm_;
    ThermalMode mode_;
    InternalProfiles profiles_;
    ControllerConfig config_;
    CdmState state_;
};

class ThresholdController final : public Controller {
public:
    ThresholdController(CorrelationMatrix cmm, ThermalMode mode, InternalProfiles profiles, ControllerConfig config);

    ControllerKind kind() const override { return ControllerKind::kThreshold; }
    ControllerOutput tick(const InternalState& internal) override;

private:
    CorrelationMatrix cmm_;
    ThermalMode mode_;
    InternalProfiles profiles_;
    ControllerConfig config_;
};

std::unique_ptr<Controller> make_controller(ControllerKind kind, const CdmConfig& cdm_config,
                                            const std::vector<Attractor>& attractors, const CorrelationMatrix& cmm, ThermalMode mode,
                                            const InternalProfiles& profiles, const ControllerConfig& config,
                                            std::uint64_t seed);

}  // namespace homeokit
