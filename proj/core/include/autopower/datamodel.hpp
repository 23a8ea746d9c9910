#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "autopower/errors.hpp"

namespace autopower {

/// Hardware parameters of one CPU configuration, plus the per-component
/// parameter subsets used to build component feature vectors.
struct DesignConfig {
    std::string config_id;
    std::map<std::string, double> params; // name -> value, all > 0
    std::map<std::string, std::vector<std::string>> component_params;

    bool operator==(const DesignConfig&) const = default;
};

/// Event counters for one (configuration, workload) run. `events` are
/// per-component activity counters from a performance simulator;
/// `program_features` are microarchitecture-independent counts (e.g. number
/// of branch instructions). All values are absolute counts over `cycles`.
struct WorkloadEvents {
    std::string config_id;
    std::string workload_id;
    std::uint64_t cycles = 0;
    std::map<std::string, double> events;
    std::map<std::string, double> program_features;

    bool operator==(const WorkloadEvents&) const = default;
};

/// One SRAM macro shape supported by the technology library.
struct MacroSpec {
    std::int64_t width = 0;  // bits
    std::int64_t depth = 0;  // words
    double p_read = 0.0;     // mW per unit read frequency (reads/cycle)
    double p_write = 0.0;    // mW per unit write frequency

    bool operator==(const MacroSpec&) const = default;
};

struct TechLibrary {
    double p_reg = 0.0;   // clock pin power per register with active clock, mW
    double p_latch = 0.0; // latch pin power per gating cell, mW
    std::vector<MacroSpec> macros;

    bool operator==(const TechLibrary&) const = default;
};

/// An architectural SRAM role within a component (e.g. "IFU/meta") and the
/// hardware parameters its geometry may scale with.
struct SramPosition {
    std::string component;
    std::string position;
    std::vector<std::string> params;

    bool operator==(const SramPosition&) const = default;
};

/// Logical SRAM block shape at the RTL level. `mask_sectors` is the write
/// mask granularity; it must divide `width`.
struct BlockGeometry {
    std::int64_t width = 0;
    std::int64_t depth = 0;
    std::int64_t count = 0;
    std::int64_t mask_sectors = 1;

    bool operator==(const BlockGeometry&) const = default;
};

/// Average per-block access frequencies. Writes are counted fractionally:
/// a write with k of m mask sectors valid counts as k/m writes, accounted
/// for when the labels are collected.
struct BlockActivity {
    double f_read_block = 0.0;
    double f_write_block = 0.0;

    bool operator==(const BlockActivity&) const = default;
};

// ---- training label rows ------------------------------------------------

struct ClockStructureLabel {
    std::string config_id;
    std::string component;
    double register_count = 0.0;
    double gating_rate = 0.0; // in [0,1]

    bool operator==(const ClockStructureLabel&) const = default;
};

struct ClockPowerLabel {
    std::string config_id;
    std::string workload_id;
    std::string component;
    double clock_power = 0.0; // mW

    bool operator==(const ClockPowerLabel&) const = default;
};

struct SramGeometryLabel {
    std::string config_id;
    std::string position;
    BlockGeometry geometry;

    bool operator==(const SramGeometryLabel&) const = default;
};

struct SramActivityLabel {
    std::string config_id;
    std::string workload_id;
    std::string position;
    BlockActivity activity;
    double sram_power = 0.0; // mW

    bool operator==(const SramActivityLabel&) const = default;
};

struct LogicLabel {
    std::string config_id;
    std::string workload_id;
    std::string component;
    double register_power = 0.0; // mW, excluding clock pins
    double comb_power = 0.0;     // mW

    bool operator==(const LogicLabel&) const = default;
};

/// A fully validated training dataset. Immutable after load; safe to share
/// across threads.
struct TrainingDataset {
    std::vector<DesignConfig> configs;
    std::vector<WorkloadEvents> events;
    std::vector<SramPosition> sram_positions;
    std::vector<ClockStructureLabel> clock_structure;
    std::vector<ClockPowerLabel> clock_power;
    std::vector<SramGeometryLabel> sram_geometry;
    std::vector<SramActivityLabel> sram_activity;
    std::vector<LogicLabel> logic;

    bool operator==(const TrainingDataset&) const = default;

    const DesignConfig* find_config(const std::string& config_id) const;
    const WorkloadEvents* find_events(const std::string& config_id,
                                      const std::string& workload_id) const;
    const SramPosition* find_position(const std::string& position) const;
    std::vector<std::string> config_ids() const;      // sorted
    std::vector<std::string> workload_ids() const;    // sorted
    std::vector<std::string> component_names() const; // sorted union
};

// ---- prediction output ----------------------------------------------------

struct ComponentPower {
    double clock_power = 0.0;
    double sram_power = 0.0;
    double register_power = 0.0;
    double comb_power = 0.0;
};

/// Predicted power decomposed by component and power group, in mW. Group
/// totals and the grand total are the plain sums of the component entries,
/// so the aggregation identities hold exactly.
struct PowerReport {
    std::map<std::string, ComponentPower> components;
    double clock_total = 0.0;
    double sram_total = 0.0;
    double register_total = 0.0;
    double comb_total = 0.0;
    double grand_total = 0.0;

    /// Recomputes all totals from the component entries.
    void finalize();
};

// ---- file i/o --------------------------------------------------------------

inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr int kTechSchemaVersion = 1;

/// Parses and fully validates a dataset file. Throws InputError with field
/// context on parse errors, referential-integrity violations and invariant
/// violations.
TrainingDataset load_dataset(const std::string& path);
TrainingDataset dataset_from_json_text(const std::string& text, const std::string& origin);
std::string dataset_to_json_text(const TrainingDataset& dataset);
void save_dataset(const TrainingDataset& dataset, const std::string& path);

TechLibrary load_tech_library(const std::string& path);
TechLibrary tech_from_json_text(const std::string& text, const std::string& origin);
std::string tech_to_json_text(const TechLibrary& tech);
void save_tech_library(const TechLibrary& tech, const std::string& path);

/// Validates every documented invariant; throws InputError naming the field.
void validate(const TrainingDataset& dataset);
void validate(const TechLibrary& tech);

// ---- feature assembly ------------------------------------------------------

/// Feature names for a component: the component's hardware parameters sorted
/// alphabetically, then (when events is non-null) the event names and the
/// program-feature names, each section sorted alphabetically.
std::vector<std::string> feature_names(const DesignConfig& config,
                                       const std::string& component,
                                       const WorkloadEvents* events);

/// Feature values in the order produced by feature_names. Deterministic:
/// equal inputs yield identical vectors. Throws InputError for an unknown
/// component.
std::vector<double> feature_vector(const DesignConfig& config,
                                   const std::string& component,
                                   const WorkloadEvents* events);

/// Same contract, for an explicit hardware-parameter subset (used for SRAM
/// positions and the monolithic baseline).
std::vector<std::string> feature_names_for(const DesignConfig& config,
                                           std::span<const std::string> param_names,
                                           const WorkloadEvents* events);
std::vector<double> feature_vector_for(const DesignConfig& config,
                                       std::span<const std::string> param_names,
                                       const WorkloadEvents* events);

/// Returns a copy of the dataset restricted to the given configurations:
/// configs, events and all labels filtered, positions kept. Throws
/// InputError for an unknown id.
TrainingDataset restrict_to_configs(const TrainingDataset& dataset,
                                    std::span<const std::string> config_ids);

} // namespace autopower
