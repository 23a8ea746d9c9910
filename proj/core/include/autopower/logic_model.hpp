#pragma once

#include <map>
#include <string>

#include "autopower/clock_model.hpp"
#include "autopower/datamodel.hpp"
#include "autopower/diagnostics.hpp"
#include "autopower/regress.hpp"

namespace autopower {

/// Logic-group model for one component. Register power is register count
/// times a learned per-register power rate; combinational power is a
/// hardware-only stable power times a learned workload variation ratio.
/// `reg_count` is the same fit as the clock model's register-count model
/// (fitted once there, copied here).
struct LogicComponentModel {
    LinearModel reg_count;
    TreeEnsemble activity;   // per-register power rate, hardware + events
    LinearModel stable;      // mean combinational power, hardware only
    TreeEnsemble variation;  // comb_power / stable ratio, hardware + events
    FeatureLayout hw_layout;
    FeatureLayout full_layout;

    bool operator==(const LogicComponentModel&) const = default;
};

struct LogicGroupModel {
    std::map<std::string, LogicComponentModel> components;

    bool operator==(const LogicGroupModel&) const = default;
};

struct LogicComponentPower {
    double register_power = 0.0; // mW
    double comb_power = 0.0;     // mW
};

/// Trains activity, stable and variation models per component. Activity
/// labels are register_power / golden register count; stable power is the
/// per-config mean of comb_power over the training workloads; variation
/// labels are comb_power divided by that mean. Throws InputError naming the
/// config if its stable power is 0. `clock` supplies the register-count
/// fits to reuse.
LogicGroupModel train_logic(const TrainingDataset& dataset, const RegressorParams& params,
                            const ClockGroupModel& clock, TrainDiagnostics* diag = nullptr);

LogicComponentPower predict_logic_component(const LogicComponentModel& model,
                                            const DesignConfig& config,
                                            const WorkloadEvents& event_rates);

/// Predicts every trained component; outputs are clamped at 0.
std::map<std::string, LogicComponentPower> predict_logic(const LogicGroupModel& model,
                                                         const DesignConfig& config,
                                                         const WorkloadEvents& event_rates);

} // namespace autopower
