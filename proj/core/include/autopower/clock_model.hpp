#pragma once

#include <map>
#include <string>
#include <vector>

#include "autopower/datamodel.hpp"
#include "autopower/diagnostics.hpp"
#include "autopower/regress.hpp"

namespace autopower {

/// Named feature layout shared by the group models: hardware parameters of
/// one component (or position), optionally followed by event and
/// program-feature names. Fitted models carry their layout so prediction can
/// assemble vectors by name and fail loudly on a mismatch.
struct FeatureLayout {
    std::vector<std::string> hw;
    std::vector<std::string> events;
    std::vector<std::string> program_features;

    std::size_t size() const { return hw.size() + events.size() + program_features.size(); }

    /// Looks every name up in the config / events maps; throws InputError
    /// naming the first missing feature. `events` may be null only when the
    /// layout has no event or program-feature names.
    std::vector<double> assemble(const DesignConfig& config,
                                 const WorkloadEvents* events) const;

    static FeatureLayout hardware_only(const DesignConfig& config,
                                       std::span<const std::string> param_names);
    static FeatureLayout with_events(const DesignConfig& config,
                                     std::span<const std::string> param_names,
                                     const WorkloadEvents& events);

    bool operator==(const FeatureLayout&) const = default;
};

/// Decoupled clock model for one component: a linear register-count model
/// and gating-rate model over hardware parameters, and a boosted-tree model
/// for the effective active rate over hardware plus event features. The
/// effective active rate absorbs the raw gated-register active rate and the
/// gating-cell overhead into one learned factor with units of
/// power-per-gated-register.
struct ClockComponentModel {
    LinearModel reg_count;
    LinearModel gating;
    TreeEnsemble active_rate;
    FeatureLayout hw_layout;
    FeatureLayout full_layout;

    bool operator==(const ClockComponentModel&) const = default;
};

struct ClockGroupModel {
    std::map<std::string, ClockComponentModel> components;

    bool operator==(const ClockGroupModel&) const = default;
};

/// Per-component clock power split. total == ungated + gated + cell exactly.
/// Gating-cell power is folded into the gated term by the effective active
/// rate, so `cell` is reported as 0.
struct ClockPowerBreakdown {
    double ungated = 0.0; // mW
    double gated = 0.0;   // mW
    double cell = 0.0;    // mW
    double total = 0.0;   // mW
    double register_count = 0.0;
    double gating_rate = 0.0;
    double active_rate = 0.0;
};

/// Inverts the clock-power composition to obtain the effective-active-rate
/// label: (clock_power - R*(1-g)*p_reg) / (R*g), clamped at 0. Requires
/// R > 0. For g = 0 the label is unconstrained; returns 0 if the power is
/// consistent with a fully ungated component, otherwise throws InputError.
double derive_active_rate_label(double clock_power, double register_count,
                                double gating_rate, double p_reg,
                                bool* clamped = nullptr);

/// Trains all three sub-models per component on a (typically few-shot)
/// dataset whose event counters have already been normalized to per-cycle
/// rates. Register-count and gating fits use hardware features only; the
/// active-rate fit uses hardware plus event features over every
/// (config, workload) pair.
ClockGroupModel train_clock(const TrainingDataset& dataset, const TechLibrary& tech,
                            const RegressorParams& params,
                            TrainDiagnostics* diag = nullptr);

ClockPowerBreakdown predict_clock_component(const ClockComponentModel& model,
                                            const DesignConfig& config,
                                            const WorkloadEvents& event_rates,
                                            const TechLibrary& tech);

/// Predicts every trained component. Throws ModelError if the config
/// declares a component the model was not trained on.
std::map<std::string, ClockPowerBreakdown> predict_clock(
    const ClockGroupModel& model, const DesignConfig& config,
    const WorkloadEvents& event_rates, const TechLibrary& tech);

} // namespace autopower
