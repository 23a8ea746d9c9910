#include "autopower/synth.hpp"

#include <algorithm>
#include <cmath>

#include "json_util.hpp"

namespace autopower {

using detail::json;

// ---- portable rng ------------------------------------------------------------

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

std::int64_t SplitMix64::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw InputError("uniform_int: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(
                    static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) %
                    span);
}

double SplitMix64::normal() {
    double u1 = 1.0 - uniform(); // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

SplitMix64 stream(std::uint64_t seed, const std::string& tag) {
    return SplitMix64(seed ^ fnv1a64(tag));
}

} // namespace

// ---- default spec --------------------------------------------------------------

GenerativeSpec default_generative_spec() {
    GenerativeSpec s;
    s.seed = 1;
    s.n_configs = 15;
    s.n_workloads = 8;
    s.noise = 0.0;
    s.cycles_min = 20000;
    s.cycles_max = 200000;

    s.parameters = {
        {"FetchWidth", 4, 18},    {"DecodeWidth", 1, 15},      {"FetchBufferEntry", 5, 47},
        {"RobEntry", 16, 128},    {"IntPhyRegister", 36, 134}, {"BranchCount", 6, 20},
        {"LDQEntry", 4, 46},      {"MemIssueWidth", 2, 16},    {"ICacheWay", 2, 16},
        {"DTLBEntry", 8, 36},     {"MSHREntry", 2, 30},
    };
    s.events = {
        {"icache_miss", 0.01, 0.2},
        {"dcache_miss", 0.01, 0.25},
        {"rob_flush", 0.005, 0.1},
        {"mshr_full", 0.002, 0.08},
    };
    s.program_features = {
        {"branch_insns", 0.05, 0.3},
        {"mem_insns", 0.1, 0.4},
    };

    SynthComponentSpec ifu;
    ifu.name = "IFU";
    ifu.params = {"FetchWidth", "DecodeWidth", "FetchBufferEntry"};
    ifu.register_count = {220.0, {{"FetchWidth", 42.0}, {"FetchBufferEntry", 12.0}}};
    ifu.gating_rate = {0.60, {{"DecodeWidth", 0.010}}};
    ifu.active_rate = {0.0006, {{"icache_miss", 0.004}}, {{"branch_insns", 0.0008}}};
    ifu.register_activity = {0.0004, {{"icache_miss", 0.002}}, {{"branch_insns", 0.0004}}};
    ifu.comb_stable = {2.0, {{"FetchWidth", 0.45}, {"FetchBufferEntry", 0.06}}};
    ifu.comb_variation = {0.8, {{"icache_miss", 3.0}}, {}};

    SynthComponentSpec rob;
    rob.name = "ROB";
    rob.params = {"DecodeWidth", "RobEntry"};
    rob.register_count = {150.0, {{"RobEntry", 11.0}, {"DecodeWidth", 30.0}}};
    rob.gating_rate = {0.55, {{"DecodeWidth", 0.012}}};
    rob.active_rate = {0.0005, {{"rob_flush", 0.006}}, {{"branch_insns", 0.0006}}};
    rob.register_activity = {0.0003, {{"rob_flush", 0.003}}, {}};
    rob.comb_stable = {1.5, {{"RobEntry", 0.09}}};
    rob.comb_variation = {0.9, {{"rob_flush", 2.0}}, {}};

    SynthComponentSpec lsu;
    lsu.name = "LSU";
    lsu.params = {"LDQEntry", "MemIssueWidth"};
    lsu.register_count = {90.0, {{"LDQEntry", 18.0}, {"MemIssueWidth", 40.0}}};
    lsu.gating_rate = {0.50, {{"MemIssueWidth", 0.010}}};
    lsu.active_rate = {0.0007, {{"dcache_miss", 0.005}}, {}};
    lsu.register_activity = {0.0005, {{"dcache_miss", 0.0025}}, {}};
    lsu.comb_stable = {1.2, {{"LDQEntry", 0.22}}};
    lsu.comb_variation = {0.85, {{"dcache_miss", 2.5}}, {{"mem_insns", 0.5}}};

    SynthComponentSpec dc;
    dc.name = "DC";
    dc.params = {"DTLBEntry", "MSHREntry", "MemIssueWidth"};
    dc.register_count = {200.0, {{"DTLBEntry", 9.0}, {"MSHREntry", 25.0}}};
    dc.gating_rate = {0.62, {{"MSHREntry", 0.008}}};
    dc.active_rate = {0.0005, {{"dcache_miss", 0.0045}, {"mshr_full", 0.001}}, {}};
    dc.register_activity = {0.0004, {{"mshr_full", 0.002}}, {}};
    dc.comb_stable = {2.2, {{"DTLBEntry", 0.15}}};
    dc.comb_variation = {0.9, {{"mshr_full", 1.8}}, {}};

    s.components = {ifu, rob, lsu, dc};

    SynthPositionSpec meta;
    meta.component = "IFU";
    meta.position = "IFU/meta";
    meta.params = {"FetchWidth", "DecodeWidth", "FetchBufferEntry"};
    meta.capacity_params = {"DecodeWidth", "FetchWidth"};
    meta.k_cap = 240.0;
    meta.throughput_params = {"FetchWidth"};
    meta.k_thr = 30.0;
    meta.count = 1;
    meta.mask_sectors = 1;
    meta.read_activity = {0.05, {{"icache_miss", 0.5}}, {{"branch_insns", 0.1}}};
    meta.write_activity = {0.02, {{"icache_miss", 0.3}}, {}};
    meta.pin_toggle_const = 0.015;

    SynthPositionSpec table;
    table.component = "ROB";
    table.position = "ROB/table";
    table.params = {"DecodeWidth", "RobEntry"};
    table.capacity_params = {"DecodeWidth", "RobEntry"};
    table.k_cap = 48.0;
    table.throughput_params = {"DecodeWidth"};
    table.k_thr = 12.0;
    table.count = 1;
    table.mask_sectors = 1;
    table.read_activity = {0.08, {{"rob_flush", 0.8}}, {{"branch_insns", 0.2}}};
    table.write_activity = {0.05, {{"rob_flush", 0.5}}, {}};
    table.pin_toggle_const = 0.02;

    SynthPositionSpec ldq;
    ldq.component = "LSU";
    ldq.position = "LSU/ldq";
    ldq.params = {"LDQEntry", "MemIssueWidth"};
    ldq.capacity_params = {"LDQEntry", "MemIssueWidth"};
    ldq.k_cap = 32.0;
    ldq.throughput_params = {"MemIssueWidth"};
    ldq.k_thr = 8.0;
    ldq.count = 2;
    ldq.mask_sectors = 2;
    ldq.read_activity = {0.06, {{"dcache_miss", 0.6}}, {{"mem_insns", 0.15}}};
    ldq.write_activity = {0.04, {{"dcache_miss", 0.4}}, {}};
    ldq.mask_valid_min = 0.5;
    ldq.mask_valid_max = 1.0;
    ldq.pin_toggle_const = 0.01;

    SynthPositionSpec data;
    data.component = "DC";
    data.position = "DC/data";
    data.params = {"DTLBEntry", "MSHREntry", "MemIssueWidth"};
    data.capacity_params = {"DTLBEntry", "MemIssueWidth"};
    data.k_cap = 128.0;
    data.throughput_params = {"MemIssueWidth"};
    data.k_thr = 64.0;
    data.count = 1;
    data.mask_sectors = 4;
    data.read_activity = {0.04, {{"dcache_miss", 0.6}}, {}};
    data.write_activity = {0.03, {{"dcache_miss", 0.4}}, {{"mem_insns", 0.05}}};
    data.mask_valid_min = 0.25;
    data.mask_valid_max = 1.0;
    data.pin_toggle_const = 0.025;

    s.positions = {meta, table, ldq, data};

    s.tech.p_reg = 0.002;
    s.tech.p_latch = 0.001;
    s.tech.macros = {
        {16, 64, 0.9, 1.1},
        {32, 64, 1.6, 1.9},
        {64, 64, 3.0, 3.4},
        {64, 256, 5.2, 6.0},
    };

    s.traces = {
        {"gemm_like", 2, 120, 15, 0.04},
        {"spmm_like", 3, 120, 15, 0.04},
    };
    return s;
}

// ---- law evaluation ------------------------------------------------------------

namespace {

double eval_hw_law(const HwLaw& law, const std::map<std::string, double>& params,
                   const std::string& ctx) {
    double v = law.intercept;
    for (const auto& [name, coeff] : law.coeffs) {
        auto it = params.find(name);
        if (it == params.end())
            throw InputError(ctx + ": law references unknown parameter '" + name + "'");
        v += coeff * it->second;
    }
    return v;
}

double eval_rate_law(const RateLaw& law, const std::map<std::string, double>& event_rates,
                     const std::map<std::string, double>& pf_rates, const std::string& ctx) {
    double v = law.intercept;
    for (const auto& [name, coeff] : law.event_coeffs) {
        auto it = event_rates.find(name);
        if (it == event_rates.end())
            throw InputError(ctx + ": law references unknown event '" + name + "'");
        v += coeff * it->second;
    }
    for (const auto& [name, coeff] : law.pf_coeffs) {
        auto it = pf_rates.find(name);
        if (it == pf_rates.end())
            throw InputError(ctx + ": law references unknown program feature '" + name + "'");
        v += coeff * it->second;
    }
    return v;
}

// Same selection rule as the model-side macro mapping, implemented
// independently so the oracle checks the mapper rather than echoing it.
MacroPlan plan_for(const BlockGeometry& g, const TechLibrary& tech) {
    std::vector<MacroSpec> macros = tech.macros;
    std::sort(macros.begin(), macros.end(), [](const MacroSpec& a, const MacroSpec& b) {
        return a.width != b.width ? a.width < b.width : a.depth < b.depth;
    });
    MacroPlan best;
    std::int64_t best_key[3] = {0, 0, 0};
    bool have = false;
    for (const auto& m : macros) {
        std::int64_t n_col = (g.depth + m.depth - 1) / m.depth;
        std::int64_t n_row = (g.width + m.width - 1) / m.width;
        std::int64_t key[3] = {n_col * n_row,
                               n_col * m.depth * n_row * m.width - g.depth * g.width,
                               m.width * m.depth};
        bool better = !have;
        if (have)
            better = std::lexicographical_compare(key, key + 3, best_key, best_key + 3);
        if (better) {
            best = {m, n_col, n_row, n_col * n_row * g.count};
            std::copy(key, key + 3, best_key);
            have = true;
        }
    }
    return best;
}

double require_positive_integral(double v, const std::string& ctx) {
    if (!(v > 0.0)) throw InputError(ctx + ": law produced non-positive value " + std::to_string(v));
    double r = std::round(v);
    if (std::fabs(v - r) > 1e-9)
        throw InputError(ctx + ": law produced non-integral value " + std::to_string(v));
    return r;
}

struct WorkloadProfile {
    std::string workload_id;
    std::map<std::string, double> event_rates;
    std::map<std::string, double> pf_rates;
};

// Applies multiplicative Gaussian noise and clamps back into [lo, hi];
// clamped labels are recorded by key.
struct Noiser {
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string>* clamped = nullptr;

    double apply(double clean, const std::string& key, double lo, double hi) {
        if (noise <= 0.0) return clean;
        SplitMix64 rng = stream(seed, "noise/" + key);
        double noisy = clean * (1.0 + noise * rng.normal());
        if (noisy < lo || noisy > hi) {
            if (clamped) clamped->push_back(key);
            noisy = std::clamp(noisy, lo, hi);
        }
        return noisy;
    }
};

constexpr double kInf = 1e300;

} // namespace

// ---- generation -----------------------------------------------------------------

SynthOutput generate(const GenerativeSpec& spec) {
    if (spec.n_configs < 2) throw InputError("generate: n_configs must be >= 2");
    if (spec.n_workloads < 1) throw InputError("generate: n_workloads must be >= 1");
    if (spec.noise < 0.0) throw InputError("generate: noise must be >= 0");
    if (spec.cycles_min < 1 || spec.cycles_max < spec.cycles_min)
        throw InputError("generate: invalid cycles range");
    validate(spec.tech);

    SynthOutput out;
    out.tech = spec.tech;
    out.oracle.noise = spec.noise;
    out.oracle.spec = spec;

    Noiser noiser{spec.noise, spec.seed, &out.oracle.clamped_labels};

    // Configurations along the scale index, parameters affine in the index.
    const int n = spec.n_configs;
    for (int s = 0; s < n; ++s) {
        DesignConfig config;
        config.config_id = "C" + std::to_string(s + 1);
        for (const auto& p : spec.parameters) {
            double v = p.min + (p.max - p.min) * static_cast<double>(s) /
                                   static_cast<double>(n - 1);
            v = std::round(v);
            if (!(v > 0.0))
                throw InputError("generate: parameter " + p.name + " non-positive at scale " +
                                 std::to_string(s));
            config.params[p.name] = v;
        }
        for (const auto& c : spec.components) config.component_params[c.name] = c.params;
        out.dataset.configs.push_back(std::move(config));
    }
    for (const auto& p : spec.positions)
        out.dataset.sram_positions.push_back({p.component, p.position, p.params});

    // Per-workload base rate profiles.
    std::vector<WorkloadProfile> workloads;
    for (int w = 0; w < spec.n_workloads; ++w) {
        WorkloadProfile profile;
        profile.workload_id = "W" + std::to_string(w + 1);
        SplitMix64 rng = stream(spec.seed, "workload/" + profile.workload_id);
        for (const auto& e : spec.events)
            profile.event_rates[e.name] = rng.uniform(e.rate_min, e.rate_max);
        for (const auto& e : spec.program_features)
            profile.pf_rates[e.name] = rng.uniform(e.rate_min, e.rate_max);
        workloads.push_back(std::move(profile));
    }

    // Helper shared by the dataset path and the trace path: power of one
    // (config, rates) sample, with all intermediates.
    struct SampleTruth {
        std::map<std::string, OracleComponentWorkload> components;
        std::map<std::string, OraclePositionWorkload> positions;
        OracleTotals totals;
    };
    auto truth_for =
        [&](const DesignConfig& config, const std::map<std::string, double>& event_rates,
            const std::map<std::string, double>& pf_rates,
            const std::map<std::string, double>& comb_var_mean,
            const std::map<std::string, double>& mask_fraction,
            const std::map<std::string, OraclePosition>& position_geoms) -> SampleTruth {
        SampleTruth t;
        for (const auto& comp : spec.components) {
            const std::string ctx = "component " + comp.name;
            double reg_count = eval_hw_law(comp.register_count, config.params, ctx);
            double gating = eval_hw_law(comp.gating_rate, config.params, ctx);
            OracleComponentWorkload cw;
            cw.active_rate = eval_rate_law(comp.active_rate, event_rates, pf_rates, ctx);
            if (cw.active_rate < 0.0)
                throw InputError("generate: " + ctx + " active rate negative");
            cw.clock_power = reg_count * (1.0 - gating) * spec.tech.p_reg +
                             cw.active_rate * reg_count * gating;
            cw.register_activity =
                eval_rate_law(comp.register_activity, event_rates, pf_rates, ctx);
            if (cw.register_activity < 0.0)
                throw InputError("generate: " + ctx + " register activity negative");
            cw.register_power = reg_count * cw.register_activity;
            double stable = eval_hw_law(comp.comb_stable, config.params, ctx);
            double raw_var = eval_rate_law(comp.comb_variation, event_rates, pf_rates, ctx);
            cw.comb_variation = raw_var / comb_var_mean.at(comp.name);
            cw.comb_power = stable * cw.comb_variation;
            if (cw.comb_power < 0.0) throw InputError("generate: " + ctx + " comb power negative");
            t.totals.clock += cw.clock_power;
            t.totals.reg += cw.register_power;
            t.totals.comb += cw.comb_power;
            t.components[comp.name] = cw;
        }
        for (const auto& pos : spec.positions) {
            const std::string ctx = "position " + pos.position;
            const OraclePosition& og = position_geoms.at(pos.position);
            OraclePositionWorkload pw;
            pw.f_read_block = eval_rate_law(pos.read_activity, event_rates, pf_rates, ctx);
            pw.raw_write_rate = eval_rate_law(pos.write_activity, event_rates, pf_rates, ctx);
            if (pw.f_read_block < 0.0 || pw.raw_write_rate < 0.0)
                throw InputError("generate: " + ctx + " activity negative");
            pw.mask_valid_fraction = mask_fraction.at(pos.position);
            pw.f_write_block = pw.raw_write_rate * pw.mask_valid_fraction;
            pw.f_read_macro = pw.f_read_block / static_cast<double>(og.plan.n_col);
            pw.f_write_macro = pw.f_write_block / static_cast<double>(og.plan.n_col);
            pw.sram_power = static_cast<double>(og.plan.total_macros) *
                                (pw.f_read_macro * og.plan.macro.p_read +
                                 pw.f_write_macro * og.plan.macro.p_write) +
                            pos.pin_toggle_const;
            t.totals.sram += pw.sram_power;
            t.positions[pos.position] = pw;
        }
        t.totals.total = t.totals.clock + t.totals.sram + t.totals.reg + t.totals.comb;
        return t;
    };

    // Dataset: events, labels, oracle record per config.
    for (int s = 0; s < n; ++s) {
        const DesignConfig& config = out.dataset.configs[static_cast<std::size_t>(s)];
        OracleConfig oc;
        oc.config_id = config.config_id;
        oc.scale_index = s;

        // Geometry per position (workload independent).
        for (const auto& pos : spec.positions) {
            const std::string ctx = config.config_id + "/" + pos.position;
            double capacity = pos.k_cap;
            for (const auto& p : pos.capacity_params) capacity *= config.params.at(p);
            double throughput = pos.k_thr;
            for (const auto& p : pos.throughput_params) throughput *= config.params.at(p);
            OraclePosition op;
            op.geometry.width =
                static_cast<std::int64_t>(require_positive_integral(
                    throughput / static_cast<double>(pos.count), ctx + " width"));
            op.geometry.depth = static_cast<std::int64_t>(
                require_positive_integral(capacity / throughput, ctx + " depth"));
            op.geometry.count = pos.count;
            op.geometry.mask_sectors = pos.mask_sectors;
            if (op.geometry.width % op.geometry.mask_sectors != 0)
                throw InputError("generate: " + ctx + ": mask_sectors does not divide width");
            op.plan = plan_for(op.geometry, spec.tech);
            op.pin_toggle_const = pos.pin_toggle_const;
            oc.positions[pos.position] = op;

            SramGeometryLabel gl;
            gl.config_id = config.config_id;
            gl.position = pos.position;
            gl.geometry = op.geometry;
            out.dataset.sram_geometry.push_back(gl);
        }

        // Effective per-cycle rates per workload: counts are integers, so the
        // rate a model sees is count / cycles; every label uses that rate.
        std::vector<std::map<std::string, double>> event_rates(workloads.size());
        std::vector<std::map<std::string, double>> pf_rates(workloads.size());
        std::vector<WorkloadEvents> rows(workloads.size());
        for (std::size_t w = 0; w < workloads.size(); ++w) {
            const WorkloadProfile& profile = workloads[w];
            SplitMix64 rng =
                stream(spec.seed, "cycles/" + config.config_id + "/" + profile.workload_id);
            std::uint64_t cycles = static_cast<std::uint64_t>(
                rng.uniform_int(static_cast<std::int64_t>(spec.cycles_min),
                                static_cast<std::int64_t>(spec.cycles_max)));
            WorkloadEvents row;
            row.config_id = config.config_id;
            row.workload_id = profile.workload_id;
            row.cycles = cycles;
            for (const auto& [name, rate] : profile.event_rates) {
                double count = std::round(rate * static_cast<double>(cycles));
                row.events[name] = count;
                event_rates[w][name] = count / static_cast<double>(cycles);
            }
            for (const auto& [name, rate] : profile.pf_rates) {
                double count = std::round(rate * static_cast<double>(cycles));
                row.program_features[name] = count;
                pf_rates[w][name] = count / static_cast<double>(cycles);
            }
            rows[w] = std::move(row);
        }

        // Mask valid fraction per (position, workload), quantized to whole
        // sectors so a partially masked write counts as k/m writes.
        std::map<std::string, std::vector<double>> mask_fractions;
        for (const auto& pos : spec.positions) {
            std::vector<double>& fractions = mask_fractions[pos.position];
            for (const auto& profile : workloads) {
                if (pos.mask_sectors <= 1) {
                    fractions.push_back(1.0);
                    continue;
                }
                SplitMix64 rng = stream(spec.seed, "mask/" + pos.position + "/" +
                                                       profile.workload_id);
                std::int64_t lo = static_cast<std::int64_t>(
                    std::ceil(pos.mask_valid_min * static_cast<double>(pos.mask_sectors)));
                std::int64_t hi = static_cast<std::int64_t>(
                    std::floor(pos.mask_valid_max * static_cast<double>(pos.mask_sectors)));
                lo = std::max<std::int64_t>(lo, 1);
                hi = std::min<std::int64_t>(hi, pos.mask_sectors);
                std::int64_t valid = rng.uniform_int(lo, hi);
                fractions.push_back(static_cast<double>(valid) /
                                    static_cast<double>(pos.mask_sectors));
            }
        }

        // Per-config mean of the raw variation law, for normalization.
        std::map<std::string, double> comb_var_mean;
        for (const auto& comp : spec.components) {
            double sum = 0.0;
            for (std::size_t w = 0; w < workloads.size(); ++w)
                sum += eval_rate_law(comp.comb_variation, event_rates[w], pf_rates[w],
                                     "component " + comp.name);
            double mean = sum / static_cast<double>(workloads.size());
            if (!(mean > 0.0))
                throw InputError("generate: comb variation mean non-positive for " + comp.name);
            comb_var_mean[comp.name] = mean;
        }

        // Structure labels and the structural part of the oracle.
        for (const auto& comp : spec.components) {
            const std::string ctx = config.config_id + "/" + comp.name;
            double reg_count = eval_hw_law(comp.register_count, config.params, ctx);
            double gating = eval_hw_law(comp.gating_rate, config.params, ctx);
            if (!(reg_count > 0.0))
                throw InputError("generate: " + ctx + ": register count non-positive");
            if (gating < 0.0 || gating > 1.0)
                throw InputError("generate: " + ctx + ": gating rate outside [0,1]");
            OracleComponent ocomp;
            ocomp.register_count = reg_count;
            ocomp.gating_rate = gating;
            ocomp.comb_stable = eval_hw_law(comp.comb_stable, config.params, ctx);
            if (!(ocomp.comb_stable > 0.0))
                throw InputError("generate: " + ctx + ": stable comb power non-positive");
            oc.components[comp.name] = ocomp;

            ClockStructureLabel sl;
            sl.config_id = config.config_id;
            sl.component = comp.name;
            sl.register_count = noiser.apply(reg_count, "R/" + ctx, 0.0, kInf);
            sl.gating_rate = noiser.apply(gating, "g/" + ctx, 0.0, 1.0);
            out.dataset.clock_structure.push_back(sl);
        }

        for (std::size_t w = 0; w < workloads.size(); ++w) {
            const std::string wid = workloads[w].workload_id;
            std::map<std::string, double> mask_of;
            for (const auto& pos : spec.positions)
                mask_of[pos.position] = mask_fractions.at(pos.position)[w];

            SampleTruth t = truth_for(config, event_rates[w], pf_rates[w], comb_var_mean,
                                      mask_of, oc.positions);

            out.dataset.events.push_back(rows[w]);
            for (const auto& comp : spec.components) {
                const OracleComponentWorkload& cw = t.components.at(comp.name);
                const std::string key = config.config_id + "/" + wid + "/" + comp.name;
                oc.components[comp.name].per_workload[wid] = cw;

                ClockPowerLabel cl;
                cl.config_id = config.config_id;
                cl.workload_id = wid;
                cl.component = comp.name;
                cl.clock_power = noiser.apply(cw.clock_power, "Pclk/" + key, 0.0, kInf);
                out.dataset.clock_power.push_back(cl);

                LogicLabel ll;
                ll.config_id = config.config_id;
                ll.workload_id = wid;
                ll.component = comp.name;
                ll.register_power = noiser.apply(cw.register_power, "Preg/" + key, 0.0, kInf);
                ll.comb_power = noiser.apply(cw.comb_power, "Pcomb/" + key, 0.0, kInf);
                out.dataset.logic.push_back(ll);
            }
            for (const auto& pos : spec.positions) {
                const OraclePositionWorkload& pw = t.positions.at(pos.position);
                const std::string key = config.config_id + "/" + wid + "/" + pos.position;
                oc.positions[pos.position].per_workload[wid] = pw;

                SramActivityLabel al;
                al.config_id = config.config_id;
                al.workload_id = wid;
                al.position = pos.position;
                al.activity.f_read_block = noiser.apply(pw.f_read_block, "fR/" + key, 0.0, kInf);
                al.activity.f_write_block = noiser.apply(pw.f_write_block, "fW/" + key, 0.0, kInf);
                al.sram_power = noiser.apply(pw.sram_power, "Psram/" + key, 0.0, kInf);
                out.dataset.sram_activity.push_back(al);
            }
            oc.totals[wid] = t.totals;
        }
        out.oracle.configs.push_back(std::move(oc));
    }

    // Trace sets: phase-structured windows over one config.
    for (const auto& ts : spec.traces) {
        if (ts.config_index < 0 || ts.config_index >= n)
            throw InputError("generate: trace '" + ts.trace_id + "' config_index out of range");
        if (ts.n_windows < 0 || ts.phase_length < 1)
            throw InputError("generate: trace '" + ts.trace_id + "' invalid window counts");
        const DesignConfig& config = out.dataset.configs[static_cast<std::size_t>(ts.config_index)];
        const OracleConfig& oc = out.oracle.configs[static_cast<std::size_t>(ts.config_index)];

        // The trace truth uses the same variation normalization as the
        // dataset labels: rebuild the raw variation mean exactly as the
        // dataset path did for this config.
        std::map<std::string, double> comb_var_mean;
        {
            std::vector<std::map<std::string, double>> event_rates;
            std::vector<std::map<std::string, double>> pf_rates;
            for (const auto& profile : workloads) {
                SplitMix64 rng = stream(spec.seed, "cycles/" + config.config_id + "/" +
                                                       profile.workload_id);
                std::uint64_t cycles = static_cast<std::uint64_t>(
                    rng.uniform_int(static_cast<std::int64_t>(spec.cycles_min),
                                    static_cast<std::int64_t>(spec.cycles_max)));
                std::map<std::string, double> er, pr;
                for (const auto& [name, rate] : profile.event_rates)
                    er[name] = std::round(rate * static_cast<double>(cycles)) /
                               static_cast<double>(cycles);
                for (const auto& [name, rate] : profile.pf_rates)
                    pr[name] = std::round(rate * static_cast<double>(cycles)) /
                               static_cast<double>(cycles);
                event_rates.push_back(std::move(er));
                pf_rates.push_back(std::move(pr));
            }
            for (const auto& comp : spec.components) {
                double sum = 0.0;
                for (std::size_t w = 0; w < workloads.size(); ++w)
                    sum += eval_rate_law(comp.comb_variation, event_rates[w], pf_rates[w],
                                         "component " + comp.name);
                comb_var_mean[comp.name] = sum / static_cast<double>(workloads.size());
            }
        }

        // Each phase behaves like its base workload, including the workload's
        // mask valid fraction, so the windowed truth stays consistent with
        // what the aggregate labels expose.
        std::map<std::string, std::map<std::string, double>> mask_of_workload;
        for (const auto& pos : spec.positions) {
            for (const auto& profile : workloads) {
                double fraction = 1.0;
                if (pos.mask_sectors > 1) {
                    SplitMix64 rng = stream(spec.seed, "mask/" + pos.position + "/" +
                                                           profile.workload_id);
                    std::int64_t lo = static_cast<std::int64_t>(
                        std::ceil(pos.mask_valid_min * static_cast<double>(pos.mask_sectors)));
                    std::int64_t hi = static_cast<std::int64_t>(
                        std::floor(pos.mask_valid_max * static_cast<double>(pos.mask_sectors)));
                    lo = std::max<std::int64_t>(lo, 1);
                    hi = std::min<std::int64_t>(hi, pos.mask_sectors);
                    fraction = static_cast<double>(rng.uniform_int(lo, hi)) /
                               static_cast<double>(pos.mask_sectors);
                }
                mask_of_workload[pos.position][profile.workload_id] = fraction;
            }
        }

        OracleTrace trace;
        trace.trace_id = ts.trace_id;
        trace.config_id = config.config_id;
        trace.window_cycles = 50;
        SplitMix64 rng = stream(spec.seed, "trace/" + ts.trace_id);
        for (int w = 0; w < ts.n_windows; ++w) {
            const WorkloadProfile& phase =
                workloads[static_cast<std::size_t>((w / ts.phase_length) %
                                                   static_cast<int>(workloads.size()))];
            std::map<std::string, double> mask_of;
            for (const auto& pos : spec.positions)
                mask_of[pos.position] = mask_of_workload.at(pos.position).at(phase.workload_id);
            WorkloadEvents window;
            window.config_id = config.config_id;
            window.workload_id = ts.trace_id + "#" + std::to_string(w);
            window.cycles = static_cast<std::uint64_t>(trace.window_cycles);
            std::map<std::string, double> er, pr;
            const double cycles = static_cast<double>(trace.window_cycles);
            for (const auto& [name, rate] : phase.event_rates) {
                double jittered = rate * (1.0 + ts.jitter * (2.0 * rng.uniform() - 1.0));
                double count = std::max(0.0, std::round(jittered * cycles));
                window.events[name] = count;
                er[name] = count / cycles;
            }
            for (const auto& [name, rate] : phase.pf_rates) {
                double jittered = rate * (1.0 + ts.jitter * (2.0 * rng.uniform() - 1.0));
                double count = std::max(0.0, std::round(jittered * cycles));
                window.program_features[name] = count;
                pr[name] = count / cycles;
            }
            SampleTruth t = truth_for(config, er, pr, comb_var_mean, mask_of, oc.positions);
            trace.windows.push_back(std::move(window));
            trace.window_truth.push_back(t.totals);
        }
        out.oracle.traces.push_back(std::move(trace));
    }

    validate(out.dataset);
    return out;
}

// ---- json ------------------------------------------------------------------------

namespace {

json hw_law_to_json(const HwLaw& law) {
    json j;
    j["intercept"] = law.intercept;
    j["coeffs"] = detail::number_map_to_json(law.coeffs);
    return j;
}

HwLaw hw_law_from_json(const json& j, const std::string& ctx) {
    HwLaw law;
    law.intercept = detail::require_number(j, "intercept", ctx);
    law.coeffs = detail::number_map_from_json(detail::require(j, "coeffs", ctx), ctx + ".coeffs");
    return law;
}

json rate_law_to_json(const RateLaw& law) {
    json j;
    j["intercept"] = law.intercept;
    j["event_coeffs"] = detail::number_map_to_json(law.event_coeffs);
    j["pf_coeffs"] = detail::number_map_to_json(law.pf_coeffs);
    return j;
}

RateLaw rate_law_from_json(const json& j, const std::string& ctx) {
    RateLaw law;
    law.intercept = detail::require_number(j, "intercept", ctx);
    law.event_coeffs =
        detail::number_map_from_json(detail::require(j, "event_coeffs", ctx), ctx + ".event_coeffs");
    law.pf_coeffs =
        detail::number_map_from_json(detail::require(j, "pf_coeffs", ctx), ctx + ".pf_coeffs");
    return law;
}

json range_list_to_json(const std::vector<SynthEventSpec>& specs) {
    json arr = json::array();
    for (const auto& e : specs) {
        json j;
        j["name"] = e.name;
        j["rate_min"] = e.rate_min;
        j["rate_max"] = e.rate_max;
        arr.push_back(j);
    }
    return arr;
}

std::vector<SynthEventSpec> range_list_from_json(const json& arr, const std::string& ctx) {
    std::vector<SynthEventSpec> out;
    for (const auto& j : arr) {
        SynthEventSpec e;
        e.name = detail::require_string(j, "name", ctx);
        e.rate_min = detail::require_number(j, "rate_min", ctx);
        e.rate_max = detail::require_number(j, "rate_max", ctx);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<std::string> string_list(const json& arr, const std::string& ctx) {
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw InputError(ctx + ": expected strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

} // namespace

std::string spec_to_json_text(const GenerativeSpec& spec) {
    json j;
    j["schema_version"] = 1;
    j["seed"] = spec.seed;
    j["n_configs"] = spec.n_configs;
    j["n_workloads"] = spec.n_workloads;
    j["noise"] = spec.noise;
    j["cycles_min"] = spec.cycles_min;
    j["cycles_max"] = spec.cycles_max;

    json params = json::array();
    for (const auto& p : spec.parameters) {
        json pj;
        pj["name"] = p.name;
        pj["min"] = p.min;
        pj["max"] = p.max;
        params.push_back(pj);
    }
    j["parameters"] = params;
    j["events"] = range_list_to_json(spec.events);
    j["program_features"] = range_list_to_json(spec.program_features);

    json comps = json::array();
    for (const auto& c : spec.components) {
        json cj;
        cj["name"] = c.name;
        cj["params"] = c.params;
        cj["register_count"] = hw_law_to_json(c.register_count);
        cj["gating_rate"] = hw_law_to_json(c.gating_rate);
        cj["active_rate"] = rate_law_to_json(c.active_rate);
        cj["register_activity"] = rate_law_to_json(c.register_activity);
        cj["comb_stable"] = hw_law_to_json(c.comb_stable);
        cj["comb_variation"] = rate_law_to_json(c.comb_variation);
        comps.push_back(cj);
    }
    j["components"] = comps;

    json positions = json::array();
    for (const auto& p : spec.positions) {
        json pj;
        pj["component"] = p.component;
        pj["position"] = p.position;
        pj["params"] = p.params;
        pj["capacity_params"] = p.capacity_params;
        pj["k_cap"] = p.k_cap;
        pj["throughput_params"] = p.throughput_params;
        pj["k_thr"] = p.k_thr;
        pj["count"] = p.count;
        pj["mask_sectors"] = p.mask_sectors;
        pj["read_activity"] = rate_law_to_json(p.read_activity);
        pj["write_activity"] = rate_law_to_json(p.write_activity);
        pj["mask_valid_min"] = p.mask_valid_min;
        pj["mask_valid_max"] = p.mask_valid_max;
        pj["pin_toggle_const"] = p.pin_toggle_const;
        positions.push_back(pj);
    }
    j["positions"] = positions;

    json traces = json::array();
    for (const auto& t : spec.traces) {
        json tj;
        tj["trace_id"] = t.trace_id;
        tj["config_index"] = t.config_index;
        tj["n_windows"] = t.n_windows;
        tj["phase_length"] = t.phase_length;
        tj["jitter"] = t.jitter;
        traces.push_back(tj);
    }
    j["traces"] = traces;

    json tech;
    tech["p_reg"] = spec.tech.p_reg;
    tech["p_latch"] = spec.tech.p_latch;
    json macros = json::array();
    for (const auto& m : spec.tech.macros) {
        json mj;
        mj["width"] = m.width;
        mj["depth"] = m.depth;
        mj["p_read"] = m.p_read;
        mj["p_write"] = m.p_write;
        macros.push_back(mj);
    }
    tech["macros"] = macros;
    j["tech"] = tech;
    return detail::dump_canonical(j);
}

GenerativeSpec spec_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    detail::check_schema_version(j, 1, origin);
    GenerativeSpec spec;
    spec.seed = static_cast<std::uint64_t>(detail::require_int(j, "seed", origin));
    spec.n_configs = static_cast<int>(detail::require_int(j, "n_configs", origin));
    spec.n_workloads = static_cast<int>(detail::require_int(j, "n_workloads", origin));
    spec.noise = detail::require_number(j, "noise", origin);
    spec.cycles_min = static_cast<std::uint64_t>(detail::require_int(j, "cycles_min", origin));
    spec.cycles_max = static_cast<std::uint64_t>(detail::require_int(j, "cycles_max", origin));

    for (const auto& pj : detail::require_array(j, "parameters", origin)) {
        SynthParamSpec p;
        p.name = detail::require_string(pj, "name", origin + ".parameters[]");
        p.min = detail::require_number(pj, "min", origin + ".parameters[]");
        p.max = detail::require_number(pj, "max", origin + ".parameters[]");
        spec.parameters.push_back(std::move(p));
    }
    spec.events = range_list_from_json(detail::require_array(j, "events", origin),
                                       origin + ".events");
    spec.program_features = range_list_from_json(
        detail::require_array(j, "program_features", origin), origin + ".program_features");

    for (const auto& cj : detail::require_array(j, "components", origin)) {
        const std::string ctx = origin + ".components[]";
        SynthComponentSpec c;
        c.name = detail::require_string(cj, "name", ctx);
        c.params = string_list(detail::require_array(cj, "params", ctx), ctx + ".params");
        c.register_count = hw_law_from_json(detail::require_object(cj, "register_count", ctx), ctx);
        c.gating_rate = hw_law_from_json(detail::require_object(cj, "gating_rate", ctx), ctx);
        c.active_rate = rate_law_from_json(detail::require_object(cj, "active_rate", ctx), ctx);
        c.register_activity =
            rate_law_from_json(detail::require_object(cj, "register_activity", ctx), ctx);
        c.comb_stable = hw_law_from_json(detail::require_object(cj, "comb_stable", ctx), ctx);
        c.comb_variation =
            rate_law_from_json(detail::require_object(cj, "comb_variation", ctx), ctx);
        spec.components.push_back(std::move(c));
    }
    for (const auto& pj : detail::require_array(j, "positions", origin)) {
        const std::string ctx = origin + ".positions[]";
        SynthPositionSpec p;
        p.component = detail::require_string(pj, "component", ctx);
        p.position = detail::require_string(pj, "position", ctx);
        p.params = string_list(detail::require_array(pj, "params", ctx), ctx + ".params");
        p.capacity_params =
            string_list(detail::require_array(pj, "capacity_params", ctx), ctx + ".capacity_params");
        p.k_cap = detail::require_number(pj, "k_cap", ctx);
        p.throughput_params = string_list(detail::require_array(pj, "throughput_params", ctx),
                                          ctx + ".throughput_params");
        p.k_thr = detail::require_number(pj, "k_thr", ctx);
        p.count = detail::require_int(pj, "count", ctx);
        p.mask_sectors = detail::require_int(pj, "mask_sectors", ctx);
        p.read_activity = rate_law_from_json(detail::require_object(pj, "read_activity", ctx), ctx);
        p.write_activity =
            rate_law_from_json(detail::require_object(pj, "write_activity", ctx), ctx);
        p.mask_valid_min = detail::require_number(pj, "mask_valid_min", ctx);
        p.mask_valid_max = detail::require_number(pj, "mask_valid_max", ctx);
        p.pin_toggle_const = detail::require_number(pj, "pin_toggle_const", ctx);
        spec.positions.push_back(std::move(p));
    }
    for (const auto& tj : detail::require_array(j, "traces", origin)) {
        const std::string ctx = origin + ".traces[]";
        SynthTraceSpec t;
        t.trace_id = detail::require_string(tj, "trace_id", ctx);
        t.config_index = static_cast<int>(detail::require_int(tj, "config_index", ctx));
        t.n_windows = static_cast<int>(detail::require_int(tj, "n_windows", ctx));
        t.phase_length = static_cast<int>(detail::require_int(tj, "phase_length", ctx));
        t.jitter = detail::require_number(tj, "jitter", ctx);
        spec.traces.push_back(std::move(t));
    }
    const json& tech = detail::require_object(j, "tech", origin);
    spec.tech.p_reg = detail::require_number(tech, "p_reg", origin + ".tech");
    spec.tech.p_latch = detail::require_number(tech, "p_latch", origin + ".tech");
    for (const auto& mj : detail::require_array(tech, "macros", origin + ".tech")) {
        MacroSpec m;
        m.width = detail::require_int(mj, "width", origin + ".tech.macros[]");
        m.depth = detail::require_int(mj, "depth", origin + ".tech.macros[]");
        m.p_read = detail::require_number(mj, "p_read", origin + ".tech.macros[]");
        m.p_write = detail::require_number(mj, "p_write", origin + ".tech.macros[]");
        spec.tech.macros.push_back(m);
    }
    return spec;
}

GenerativeSpec load_generative_spec(const std::string& path) {
    return spec_from_json_text(detail::read_text_file(path), path);
}

namespace {

json totals_to_json(const OracleTotals& t) {
    json j;
    j["clock"] = t.clock;
    j["sram"] = t.sram;
    j["register"] = t.reg;
    j["comb"] = t.comb;
    j["total"] = t.total;
    return j;
}

OracleTotals totals_from_json(const json& j, const std::string& ctx) {
    OracleTotals t;
    t.clock = detail::require_number(j, "clock", ctx);
    t.sram = detail::require_number(j, "sram", ctx);
    t.reg = detail::require_number(j, "register", ctx);
    t.comb = detail::require_number(j, "comb", ctx);
    t.total = detail::require_number(j, "total", ctx);
    return t;
}

json events_row_to_json(const WorkloadEvents& e) {
    json j;
    j["config_id"] = e.config_id;
    j["workload_id"] = e.workload_id;
    j["cycles"] = e.cycles;
    j["events"] = detail::number_map_to_json(e.events);
    j["program_features"] = detail::number_map_to_json(e.program_features);
    return j;
}

WorkloadEvents events_row_from_json(const json& j, const std::string& ctx) {
    WorkloadEvents e;
    e.config_id = detail::require_string(j, "config_id", ctx);
    e.workload_id = detail::require_string(j, "workload_id", ctx);
    e.cycles = static_cast<std::uint64_t>(detail::require_int(j, "cycles", ctx));
    e.events = detail::number_map_from_json(detail::require(j, "events", ctx), ctx);
    e.program_features =
        detail::number_map_from_json(detail::require(j, "program_features", ctx), ctx);
    return e;
}

} // namespace

std::string oracle_to_json_text(const SynthOracle& oracle) {
    json j;
    j["schema_version"] = 1;
    j["noise"] = oracle.noise;
    j["spec"] = detail::parse_json(spec_to_json_text(oracle.spec), "spec");
    j["clamped_labels"] = oracle.clamped_labels;

    json configs = json::array();
    for (const auto& oc : oracle.configs) {
        json cj;
        cj["config_id"] = oc.config_id;
        cj["scale_index"] = oc.scale_index;
        json comps = json::object();
        for (const auto& [name, comp] : oc.components) {
            json kj;
            kj["register_count"] = comp.register_count;
            kj["gating_rate"] = comp.gating_rate;
            kj["comb_stable"] = comp.comb_stable;
            json pw = json::object();
            for (const auto& [wid, cw] : comp.per_workload) {
                json wj;
                wj["active_rate"] = cw.active_rate;
                wj["clock_power"] = cw.clock_power;
                wj["register_activity"] = cw.register_activity;
                wj["register_power"] = cw.register_power;
                wj["comb_variation"] = cw.comb_variation;
                wj["comb_power"] = cw.comb_power;
                pw[wid] = wj;
            }
            kj["per_workload"] = pw;
            comps[name] = kj;
        }
        cj["components"] = comps;

        json positions = json::object();
        for (const auto& [name, pos] : oc.positions) {
            json pj;
            pj["geometry"] = json{{"width", pos.geometry.width},
                                  {"depth", pos.geometry.depth},
                                  {"count", pos.geometry.count},
                                  {"mask_sectors", pos.geometry.mask_sectors}};
            pj["plan"] = json{{"macro_width", pos.plan.macro.width},
                              {"macro_depth", pos.plan.macro.depth},
                              {"p_read", pos.plan.macro.p_read},
                              {"p_write", pos.plan.macro.p_write},
                              {"n_col", pos.plan.n_col},
                              {"n_row", pos.plan.n_row},
                              {"total_macros", pos.plan.total_macros}};
            pj["pin_toggle_const"] = pos.pin_toggle_const;
            json pw = json::object();
            for (const auto& [wid, w] : pos.per_workload) {
                json wj;
                wj["f_read_block"] = w.f_read_block;
                wj["f_write_block"] = w.f_write_block;
                wj["raw_write_rate"] = w.raw_write_rate;
                wj["mask_valid_fraction"] = w.mask_valid_fraction;
                wj["f_read_macro"] = w.f_read_macro;
                wj["f_write_macro"] = w.f_write_macro;
                wj["sram_power"] = w.sram_power;
                pw[wid] = wj;
            }
            pj["per_workload"] = pw;
            positions[name] = pj;
        }
        cj["positions"] = positions;

        json totals = json::object();
        for (const auto& [wid, t] : oc.totals) totals[wid] = totals_to_json(t);
        cj["totals"] = totals;
        configs.push_back(cj);
    }
    j["configs"] = configs;

    json traces = json::array();
    for (const auto& t : oracle.traces) {
        json tj;
        tj["trace_id"] = t.trace_id;
        tj["config_id"] = t.config_id;
        tj["window_cycles"] = t.window_cycles;
        json windows = json::array();
        for (const auto& w : t.windows) windows.push_back(events_row_to_json(w));
        tj["windows"] = windows;
        json truth = json::array();
        for (const auto& tt : t.window_truth) truth.push_back(totals_to_json(tt));
        tj["window_truth"] = truth;
        traces.push_back(tj);
    }
    j["traces"] = traces;
    return detail::dump_canonical(j);
}

SynthOracle oracle_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    detail::check_schema_version(j, 1, origin);
    SynthOracle oracle;
    oracle.noise = detail::require_number(j, "noise", origin);
    oracle.spec = spec_from_json_text(detail::require(j, "spec", origin).dump() + "\n",
                                      origin + ".spec");
    for (const auto& c : detail::require_array(j, "clamped_labels", origin))
        oracle.clamped_labels.push_back(c.get<std::string>());

    for (const auto& cj : detail::require_array(j, "configs", origin)) {
        const std::string ctx = origin + ".configs[]";
        OracleConfig oc;
        oc.config_id = detail::require_string(cj, "config_id", ctx);
        oc.scale_index = static_cast<int>(detail::require_int(cj, "scale_index", ctx));
        for (const auto& [name, kj] : detail::require_object(cj, "components", ctx).items()) {
            OracleComponent comp;
            comp.register_count = detail::require_number(kj, "register_count", ctx);
            comp.gating_rate = detail::require_number(kj, "gating_rate", ctx);
            comp.comb_stable = detail::require_number(kj, "comb_stable", ctx);
            for (const auto& [wid, wj] : detail::require_object(kj, "per_workload", ctx).items()) {
                OracleComponentWorkload cw;
                cw.active_rate = detail::require_number(wj, "active_rate", ctx);
                cw.clock_power = detail::require_number(wj, "clock_power", ctx);
                cw.register_activity = detail::require_number(wj, "register_activity", ctx);
                cw.register_power = detail::require_number(wj, "register_power", ctx);
                cw.comb_variation = detail::require_number(wj, "comb_variation", ctx);
                cw.comb_power = detail::require_number(wj, "comb_power", ctx);
                comp.per_workload[wid] = cw;
            }
            oc.components[name] = std::move(comp);
        }
        for (const auto& [name, pj] : detail::require_object(cj, "positions", ctx).items()) {
            OraclePosition pos;
            const json& g = detail::require_object(pj, "geometry", ctx);
            pos.geometry.width = detail::require_int(g, "width", ctx);
            pos.geometry.depth = detail::require_int(g, "depth", ctx);
            pos.geometry.count = detail::require_int(g, "count", ctx);
            pos.geometry.mask_sectors = detail::require_int(g, "mask_sectors", ctx);
            const json& p = detail::require_object(pj, "plan", ctx);
            pos.plan.macro.width = detail::require_int(p, "macro_width", ctx);
            pos.plan.macro.depth = detail::require_int(p, "macro_depth", ctx);
            pos.plan.macro.p_read = detail::require_number(p, "p_read", ctx);
            pos.plan.macro.p_write = detail::require_number(p, "p_write", ctx);
            pos.plan.n_col = detail::require_int(p, "n_col", ctx);
            pos.plan.n_row = detail::require_int(p, "n_row", ctx);
            pos.plan.total_macros = detail::require_int(p, "total_macros", ctx);
            pos.pin_toggle_const = detail::require_number(pj, "pin_toggle_const", ctx);
            for (const auto& [wid, wj] : detail::require_object(pj, "per_workload", ctx).items()) {
                OraclePositionWorkload w;
                w.f_read_block = detail::require_number(wj, "f_read_block", ctx);
                w.f_write_block = detail::require_number(wj, "f_write_block", ctx);
                w.raw_write_rate = detail::require_number(wj, "raw_write_rate", ctx);
                w.mask_valid_fraction = detail::require_number(wj, "mask_valid_fraction", ctx);
                w.f_read_macro = detail::require_number(wj, "f_read_macro", ctx);
                w.f_write_macro = detail::require_number(wj, "f_write_macro", ctx);
                w.sram_power = detail::require_number(wj, "sram_power", ctx);
                pos.per_workload[wid] = w;
            }
            oc.positions[name] = std::move(pos);
        }
        for (const auto& [wid, tj] : detail::require_object(cj, "totals", ctx).items())
            oc.totals[wid] = totals_from_json(tj, ctx);
        oracle.configs.push_back(std::move(oc));
    }
    for (const auto& tj : detail::require_array(j, "traces", origin)) {
        const std::string ctx = origin + ".traces[]";
        OracleTrace t;
        t.trace_id = detail::require_string(tj, "trace_id", ctx);
        t.config_id = detail::require_string(tj, "config_id", ctx);
        t.window_cycles = static_cast<int>(detail::require_int(tj, "window_cycles", ctx));
        for (const auto& wj : detail::require_array(tj, "windows", ctx))
            t.windows.push_back(events_row_from_json(wj, ctx));
        for (const auto& wj : detail::require_array(tj, "window_truth", ctx))
            t.window_truth.push_back(totals_from_json(wj, ctx));
        oracle.traces.push_back(std::move(t));
    }
    return oracle;
}

void save_oracle(const SynthOracle& oracle, const std::string& path) {
    detail::write_text_file(path, oracle_to_json_text(oracle));
}

SynthOracle load_oracle(const std::string& path) {
    return oracle_from_json_text(detail::read_text_file(path), path);
}

std::string trace_input_to_json_text(const TraceInput& input) {
    json j;
    j["schema_version"] = 1;
    json config;
    config["config_id"] = input.config.config_id;
    config["params"] = detail::number_map_to_json(input.config.params);
    json cp = json::object();
    for (const auto& [comp, names] : input.config.component_params) cp[comp] = names;
    config["component_params"] = cp;
    j["config"] = config;
    j["window_cycles"] = input.window_cycles;
    json windows = json::array();
    for (const auto& w : input.windows) windows.push_back(events_row_to_json(w));
    j["windows"] = windows;
    return detail::dump_canonical(j);
}

TraceInput trace_input_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    detail::check_schema_version(j, 1, origin);
    TraceInput input;
    const json& config = detail::require_object(j, "config", origin);
    input.config.config_id = detail::require_string(config, "config_id", origin + ".config");
    input.config.params = detail::number_map_from_json(
        detail::require(config, "params", origin + ".config"), origin + ".config.params");
    for (const auto& [comp, names] :
         detail::require_object(config, "component_params", origin + ".config").items())
        input.config.component_params[comp] =
            string_list(names, origin + ".config.component_params");
    input.window_cycles = static_cast<int>(detail::require_int(j, "window_cycles", origin));
    for (const auto& wj : detail::require_array(j, "windows", origin))
        input.windows.push_back(events_row_from_json(wj, origin + ".windows[]"));
    return input;
}

TraceInput load_trace_input(const std::string& path) {
    return trace_input_from_json_text(detail::read_text_file(path), path);
}

} // namespace autopower
