#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "autopower/clock_model.hpp" // FeatureLayout
#include "autopower/datamodel.hpp"
#include "autopower/diagnostics.hpp"
#include "autopower/regress.hpp"

namespace autopower {

/// Proportional scaling law for one SRAM position, fitted from training
/// block geometries. Capacity (width*depth*count) and throughput
/// (width*count) each scale as k times the product of a parameter subset.
/// Derived formulas: Width = Throughput / count_divisor,
/// Count = round(Throughput / Width), Depth = Capacity / Throughput.
struct ScalingLaw {
    std::vector<std::string> capacity_params; // sorted
    double k_cap = 0.0;
    std::vector<std::string> throughput_params; // sorted
    double k_thr = 0.0;
    double fit_error = 0.0; // max of the two relative RMS fit errors
    std::int64_t count_divisor = 1;
    std::int64_t mask_sectors = 1;
    bool resolved = true;

    /// Training samples kept for the nearest-config fallback used when the
    /// law is unresolved. Parameter values follow the position's sorted
    /// parameter names.
    struct TrainingSample {
        std::vector<double> params;
        BlockGeometry geometry;
        bool operator==(const TrainingSample&) const = default;
    };
    std::vector<TrainingSample> training_samples;

    bool operator==(const ScalingLaw&) const = default;
};

struct ScalingFitOptions {
    int max_subset = 3;
    double exact_threshold = 1e-6;  // relative RMS error counted as exact
    double accept_threshold = 0.05; // accepted with a warning up to here

    bool operator==(const ScalingFitOptions&) const = default;
};

/// How a block is tiled with one macro shape: n_col macros stacked along the
/// depth dimension, n_row tiled along the width dimension.
/// total_macros = n_col * n_row * block count.
struct MacroPlan {
    MacroSpec macro;
    std::int64_t n_col = 1;
    std::int64_t n_row = 1;
    std::int64_t total_macros = 1;

    bool operator==(const MacroPlan&) const = default;
};

struct MacroActivity {
    double f_read_macro = 0.0;
    double f_write_macro = 0.0;
};

/// Everything needed to predict one position's power: the geometry scaling
/// law, read/write activity regressors over hardware + event features, and
/// the per-position address/data pin-toggle constant.
struct SramPositionModel {
    SramPosition position;
    ScalingLaw law;
    TreeEnsemble read_activity;
    TreeEnsemble write_activity;
    double pin_toggle_const = 0.0; // mW
    FeatureLayout full_layout;

    bool operator==(const SramPositionModel&) const = default;
};

struct SramGroupModel {
    std::map<std::string, SramPositionModel> positions;

    bool operator==(const SramGroupModel&) const = default;
};

/// Intermediate quantities of one position prediction, for reports/tests.
struct SramPredictionDetail {
    BlockGeometry geometry;
    MacroPlan plan;
    BlockActivity block_activity;
    MacroActivity macro_activity;
    double power = 0.0; // mW
    bool used_fallback = false;
};

/// Enumerates all parameter subsets of the position up to max_subset
/// (including the empty subset as the degenerate constant law) and fits
/// y = k * product(params) through the origin by least squares, separately
/// for capacity and throughput. Picks the minimal-error subset; ties break
/// toward the smaller subset, then lexicographic parameter names. A law
/// whose error exceeds accept_threshold is marked unresolved and prediction
/// falls back to the nearest training geometry.
ScalingLaw fit_scaling_law(
    std::span<const std::pair<const DesignConfig*, BlockGeometry>> samples,
    const SramPosition& position, const ScalingFitOptions& options,
    TrainDiagnostics* diag = nullptr);

/// Evaluates the law's derived formulas and rounds to positive integers.
/// Throws ModelError if a formula evaluates to a non-positive value.
BlockGeometry predict_block_geometry(const ScalingLaw& law, const DesignConfig& config,
                                     const SramPosition& position);

/// Picks the macro and tiling with the fewest total macros; ties break by
/// minimal wasted bits, then smaller macro area. ceil-based tiling always
/// yields a feasible plan.
MacroPlan map_block_to_macros(const BlockGeometry& geometry, const TechLibrary& tech);

/// Block-to-macro frequency mapping: each access touches one row of macros,
/// so per-macro frequency is the block frequency divided by n_col.
MacroActivity map_activity_to_macro(const BlockActivity& activity, const MacroPlan& plan);

/// Estimates the pin-toggle constant as the mean residual between measured
/// power and the read/write energy of all macros, clamped at 0.
struct PinConstSample {
    MacroActivity activity;
    MacroPlan plan;
    double measured_power = 0.0; // mW
};
double fit_pin_toggle_const(std::span<const PinConstSample> samples,
                            bool* clamped = nullptr);

/// Trains the geometry law, the two activity regressors and the pin
/// constant for every declared position. Event counters must already be
/// per-cycle rates.
SramGroupModel train_sram(const TrainingDataset& dataset, const TechLibrary& tech,
                          const RegressorParams& params, const ScalingFitOptions& options,
                          TrainDiagnostics* diag = nullptr);

/// Geometry -> plan -> block activity -> macro activity -> power summed over
/// all macros of all blocks, plus the pin constant.
double predict_sram_power(const SramPositionModel& model, const DesignConfig& config,
                          const WorkloadEvents& event_rates, const TechLibrary& tech,
                          SramPredictionDetail* detail = nullptr);

} // namespace autopower
