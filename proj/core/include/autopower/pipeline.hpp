#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "autopower/clock_model.hpp"
#include "autopower/datamodel.hpp"
#include "autopower/diagnostics.hpp"
#include "autopower/logic_model.hpp"
#include "autopower/regress.hpp"
#include "autopower/sram_model.hpp"

namespace autopower {

inline constexpr int kBundleSchemaVersion = 1;
inline constexpr int kDefaultWindowCycles = 50;

struct PipelineParams {
    RegressorParams regressor;
    ScalingFitOptions scaling;

    bool operator==(const PipelineParams&) const = default;
};

/// Records everything needed to reproduce a training run.
struct TrainManifest {
    int bundle_schema_version = kBundleSchemaVersion;
    int dataset_schema_version = kDatasetSchemaVersion;
    int tech_schema_version = kTechSchemaVersion;
    std::vector<std::string> train_config_ids; // sorted
    std::vector<std::string> workload_ids;     // sorted
    PipelineParams params;
    // Event counters are divided by cycle count before entering any model,
    // so one model serves both average power and windowed trace prediction.
    std::string feature_normalization = "per_cycle_rates";

    bool operator==(const TrainManifest&) const = default;
};

struct AutoPowerModel {
    TrainManifest manifest;
    TechLibrary tech;
    ClockGroupModel clock;
    SramGroupModel sram;
    LogicGroupModel logic;

    bool operator==(const AutoPowerModel&) const = default;
};

enum class BaselineVariant { monolithic, per_component };

std::string to_string(BaselineVariant variant);
BaselineVariant baseline_variant_from_string(const std::string& name);

/// Boosted-tree baseline over concatenated hardware + event features:
/// either one model for total power, or one model per component whose
/// predictions are summed.
struct BaselineModel {
    BaselineVariant variant = BaselineVariant::monolithic;
    TrainManifest manifest;
    std::map<std::string, TreeEnsemble> models; // "total" or component name
    std::map<std::string, FeatureLayout> layouts;

    bool operator==(const BaselineModel&) const = default;
};

struct MetricSet {
    double mape = 0.0;                // percent
    std::optional<double> r2;         // absent when golden variance is 0
    std::optional<double> pearson_r;  // absent when either variance is 0
    int n = 0;
};

struct EvaluationReport {
    MetricSet total;
    std::map<std::string, MetricSet> per_group;
    std::map<std::string, MetricSet> per_component;

    struct Sample {
        std::string config_id;
        std::string workload_id;
        double predicted = 0.0;
        double golden = 0.0;
        std::map<std::string, double> predicted_groups;
        std::map<std::string, double> golden_groups;
    };
    std::vector<Sample> samples;
};

struct PowerTrace {
    int window_cycles = kDefaultWindowCycles;
    std::vector<PowerReport> windows;
};

// ---- operations ------------------------------------------------------------

/// Normalizes event counters and program features to per-cycle rates.
WorkloadEvents to_per_cycle_rates(const WorkloadEvents& events);

/// Trains all three group models on the configurations listed in
/// train_config_ids (at least 2). Labels of other configurations are never
/// read. Deterministic: identical inputs give identical models.
AutoPowerModel train(const TrainingDataset& dataset, const TechLibrary& tech,
                     const PipelineParams& params,
                     std::span<const std::string> train_config_ids,
                     TrainDiagnostics* diag = nullptr);

/// Full per-component, per-group power prediction for one workload run.
PowerReport predict(const AutoPowerModel& model, const DesignConfig& config,
                    const WorkloadEvents& events);

BaselineModel train_baseline(const TrainingDataset& dataset, const PipelineParams& params,
                             BaselineVariant variant,
                             std::span<const std::string> train_config_ids,
                             TrainDiagnostics* diag = nullptr);

double predict_baseline_total(const BaselineModel& model, const DesignConfig& config,
                              const WorkloadEvents& events);

/// MAPE / R^2 / Pearson r over (predicted, golden) pairs. Requires at least
/// 2 pairs and strictly positive golden values; r2 and pearson_r are absent
/// when the corresponding variance is 0.
MetricSet evaluate(std::span<const std::pair<double, double>> predicted_golden);

/// Predicts every (test config, workload) sample with golden labels and
/// computes total, per-group and per-component metrics. Sub-metrics that are
/// not computable on a slice (fewer than 2 pairs, zero golden) are omitted.
EvaluationReport evaluate_model(const AutoPowerModel& model, const TrainingDataset& dataset,
                                std::span<const std::string> test_config_ids);

EvaluationReport evaluate_baseline(const BaselineModel& model, const TrainingDataset& dataset,
                                   std::span<const std::string> test_config_ids);

/// Applies the trained model per window; every window must cover exactly
/// window_cycles cycles. No retraining or trace-specific tuning.
PowerTrace predict_trace(const AutoPowerModel& model, const DesignConfig& config,
                         std::span<const WorkloadEvents> windows,
                         int window_cycles = kDefaultWindowCycles);

// ---- bundle and report i/o --------------------------------------------------

std::string model_to_json_text(const AutoPowerModel& model);
AutoPowerModel model_from_json_text(const std::string& text, const std::string& origin);
void save_model(const AutoPowerModel& model, const std::string& path);
AutoPowerModel load_model(const std::string& path);

std::string baseline_to_json_text(const BaselineModel& model);
BaselineModel baseline_from_json_text(const std::string& text, const std::string& origin);
void save_baseline(const BaselineModel& model, const std::string& path);
BaselineModel load_baseline(const std::string& path);

std::string report_to_json_text(const EvaluationReport& report);
std::string report_to_csv_text(const EvaluationReport& report);
std::string trace_to_csv_text(const PowerTrace& trace);

} // namespace autopower
