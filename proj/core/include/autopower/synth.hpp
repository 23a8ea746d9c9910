#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "autopower/datamodel.hpp"
#include "autopower/sram_model.hpp"

namespace autopower {

/// SplitMix64: a small, portable, explicitly specified pseudo-random
/// generator so synthetic datasets are identical across platforms and
/// implementations.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
///
/// Doubles in [0,1) take the top 53 bits: (next() >> 11) * 2^-53. Substreams
/// are seeded as seed ^ fnv1a64(tag), with FNV-1a over the tag string
/// (offset 0xcbf29ce484222325, prime 0x100000001b3). Normal deviates use
/// Box-Muller on two consecutive uniforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);    // [lo, hi)
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi); // [lo, hi]
    double normal();                         // standard normal, Box-Muller

private:
    std::uint64_t state_;
};

std::uint64_t fnv1a64(const std::string& text);

// ---- generative specification ----------------------------------------------

/// value = intercept + sum(coeffs[name] * param[name]) over hardware params.
struct HwLaw {
    double intercept = 0.0;
    std::map<std::string, double> coeffs;

    bool operator==(const HwLaw&) const = default;
};

/// value = intercept + sum over per-cycle event rates and program-feature
/// rates. Independent of hardware parameters so activity is learnable from
/// few known configurations.
struct RateLaw {
    double intercept = 0.0;
    std::map<std::string, double> event_coeffs;
    std::map<std::string, double> pf_coeffs;

    bool operator==(const RateLaw&) const = default;
};

/// Hardware parameter sampled along the config scale index:
/// value(s) = round(min + (max - min) * s / (n_configs - 1)). The default
/// spec uses ranges whose step is integral, so values are exact.
struct SynthParamSpec {
    std::string name;
    double min = 1.0;
    double max = 1.0;

    bool operator==(const SynthParamSpec&) const = default;
};

/// Per-workload base rate drawn uniformly from [rate_min, rate_max].
struct SynthEventSpec {
    std::string name;
    double rate_min = 0.0;
    double rate_max = 0.0;

    bool operator==(const SynthEventSpec&) const = default;
};

struct SynthComponentSpec {
    std::string name;
    std::vector<std::string> params;
    HwLaw register_count;
    HwLaw gating_rate;
    RateLaw active_rate;       // effective active rate
    RateLaw register_activity; // register_power / register_count
    HwLaw comb_stable;
    RateLaw comb_variation;    // normalized to mean 1 over the workloads

    bool operator==(const SynthComponentSpec&) const = default;
};

struct SynthPositionSpec {
    std::string component;
    std::string position;
    std::vector<std::string> params;
    std::vector<std::string> capacity_params;
    double k_cap = 0.0;
    std::vector<std::string> throughput_params;
    double k_thr = 0.0;
    std::int64_t count = 1;
    std::int64_t mask_sectors = 1;
    RateLaw read_activity;
    RateLaw write_activity; // raw writes; multiplied by the mask valid fraction
    double mask_valid_min = 1.0;
    double mask_valid_max = 1.0;
    double pin_toggle_const = 0.0;

    bool operator==(const SynthPositionSpec&) const = default;
};

/// A phase-structured long workload for windowed trace prediction: windows
/// cycle through the base workloads' rate profiles with a small jitter.
struct SynthTraceSpec {
    std::string trace_id;
    int config_index = 0;
    int n_windows = 120;
    int phase_length = 15; // windows per phase
    double jitter = 0.04;  // relative rate jitter within a phase

    bool operator==(const SynthTraceSpec&) const = default;
};

struct GenerativeSpec {
    std::uint64_t seed = 1;
    int n_configs = 15;
    int n_workloads = 8;
    double noise = 0.0; // relative standard deviation on continuous labels
    std::uint64_t cycles_min = 20000;
    std::uint64_t cycles_max = 200000;
    std::vector<SynthParamSpec> parameters;
    std::vector<SynthEventSpec> events;
    std::vector<SynthEventSpec> program_features;
    std::vector<SynthComponentSpec> components;
    std::vector<SynthPositionSpec> positions;
    std::vector<SynthTraceSpec> traces;
    TechLibrary tech;

    bool operator==(const GenerativeSpec&) const = default;
};

/// Default spec mirroring the experimental scale of the method: 15
/// configurations growing small to large, 8 workloads, 4 components and 4
/// SRAM positions chosen to exercise multi-parameter capacity scaling,
/// multi-macro tiling in both dimensions, multi-bank blocks and fractional
/// masked writes.
GenerativeSpec default_generative_spec();

GenerativeSpec spec_from_json_text(const std::string& text, const std::string& origin);
std::string spec_to_json_text(const GenerativeSpec& spec);
GenerativeSpec load_generative_spec(const std::string& path);

// ---- oracle ----------------------------------------------------------------

struct OracleComponentWorkload {
    double active_rate = 0.0;
    double clock_power = 0.0;
    double register_activity = 0.0;
    double register_power = 0.0;
    double comb_variation = 0.0;
    double comb_power = 0.0;
};

struct OracleComponent {
    double register_count = 0.0;
    double gating_rate = 0.0;
    double comb_stable = 0.0;
    std::map<std::string, OracleComponentWorkload> per_workload;
};

struct OraclePositionWorkload {
    double f_read_block = 0.0;
    double f_write_block = 0.0; // after mask accounting
    double raw_write_rate = 0.0;
    double mask_valid_fraction = 1.0;
    double f_read_macro = 0.0;
    double f_write_macro = 0.0;
    double sram_power = 0.0;
};

struct OraclePosition {
    BlockGeometry geometry;
    MacroPlan plan;
    double pin_toggle_const = 0.0;
    std::map<std::string, OraclePositionWorkload> per_workload;
};

struct OracleTotals {
    double clock = 0.0;
    double sram = 0.0;
    double reg = 0.0;
    double comb = 0.0;
    double total = 0.0;
};

struct OracleConfig {
    std::string config_id;
    int scale_index = 0;
    std::map<std::string, OracleComponent> components;
    std::map<std::string, OraclePosition> positions;
    std::map<std::string, OracleTotals> totals; // per workload
};

struct OracleTrace {
    std::string trace_id;
    std::string config_id;
    int window_cycles = 50;
    std::vector<WorkloadEvents> windows;      // counts per window
    std::vector<OracleTotals> window_truth;   // noise-free per-window power
};

/// Ground-truth record of every intermediate quantity, noise-free. When
/// noise > 0 the dataset labels are perturbed but this oracle keeps the
/// clean values; labels clamped back into their valid range are listed in
/// clamped_labels.
struct SynthOracle {
    double noise = 0.0;
    GenerativeSpec spec;
    std::vector<OracleConfig> configs;
    std::vector<OracleTrace> traces;
    std::vector<std::string> clamped_labels;
};

struct SynthOutput {
    TrainingDataset dataset;
    TechLibrary tech;
    SynthOracle oracle;
};

/// Deterministic generation: two calls with the same spec produce identical
/// output, byte for byte once serialized. The dataset passes full
/// validation. Throws InputError if a law produces an invalid label
/// (non-positive where positivity is required, gating rate outside [0,1],
/// non-integral geometry).
SynthOutput generate(const GenerativeSpec& spec);

std::string oracle_to_json_text(const SynthOracle& oracle);
SynthOracle oracle_from_json_text(const std::string& text, const std::string& origin);
void save_oracle(const SynthOracle& oracle, const std::string& path);
SynthOracle load_oracle(const std::string& path);

/// Windowed-events input file for trace prediction; self-contained (embeds
/// the DesignConfig).
struct TraceInput {
    DesignConfig config;
    int window_cycles = 50;
    std::vector<WorkloadEvents> windows;
};
std::string trace_input_to_json_text(const TraceInput& input);
TraceInput trace_input_from_json_text(const std::string& text, const std::string& origin);
TraceInput load_trace_input(const std::string& path);

} // namespace autopower
