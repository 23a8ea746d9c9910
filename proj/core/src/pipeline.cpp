#include "autopower/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <tuple>

#include "json_util.hpp"
#include "model_json.hpp"

namespace autopower {

using detail::json;

// ---- normalization -----------------------------------------------------------

WorkloadEvents to_per_cycle_rates(const WorkloadEvents& events) {
    if (events.cycles < 1)
        throw InputError("events " + events.config_id + "/" + events.workload_id +
                         ": cycles must be >= 1");
    WorkloadEvents out = events;
    const double cycles = static_cast<double>(events.cycles);
    for (auto& [name, v] : out.events) v /= cycles;
    for (auto& [name, v] : out.program_features) v /= cycles;
    return out;
}

namespace {

TrainingDataset normalized_copy(const TrainingDataset& dataset) {
    TrainingDataset out = dataset;
    for (auto& e : out.events) e = to_per_cycle_rates(e);
    return out;
}

std::vector<std::string> sorted_unique(std::span<const std::string> ids) {
    std::vector<std::string> out(ids.begin(), ids.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

// ---- training -----------------------------------------------------------------

AutoPowerModel train(const TrainingDataset& dataset, const TechLibrary& tech,
                     const PipelineParams& params,
                     std::span<const std::string> train_config_ids, TrainDiagnostics* diag) {
    validate(tech);
    std::vector<std::string> ids = sorted_unique(train_config_ids);
    if (ids.size() < 2)
        throw InputError("train: need at least 2 training configs, got " +
                         std::to_string(ids.size()));

    TrainingDataset split = restrict_to_configs(dataset, ids);
    TrainingDataset rates = normalized_copy(split);

    AutoPowerModel model;
    model.tech = tech;
    model.clock = train_clock(rates, tech, params.regressor, diag);
    model.sram = train_sram(rates, tech, params.regressor, params.scaling, diag);
    model.logic = train_logic(rates, params.regressor, model.clock, diag);

    model.manifest.train_config_ids = ids;
    model.manifest.workload_ids = rates.workload_ids();
    model.manifest.params = params;
    return model;
}

PowerReport predict(const AutoPowerModel& model, const DesignConfig& config,
                    const WorkloadEvents& events) {
    WorkloadEvents rates = to_per_cycle_rates(events);

    PowerReport report;
    auto clock = predict_clock(model.clock, config, rates, model.tech);
    for (const auto& [name, breakdown] : clock)
        report.components[name].clock_power = breakdown.total;

    for (const auto& [name, pm] : model.sram.positions) {
        double power = predict_sram_power(pm, config, rates, model.tech);
        report.components[pm.position.component].sram_power += power;
    }

    auto logic = predict_logic(model.logic, config, rates);
    for (const auto& [name, lp] : logic) {
        report.components[name].register_power = lp.register_power;
        report.components[name].comb_power = lp.comb_power;
    }

    report.finalize();
    return report;
}

// ---- baselines ------------------------------------------------------------------

std::string to_string(BaselineVariant variant) {
    return variant == BaselineVariant::monolithic ? "monolithic" : "per-component";
}

BaselineVariant baseline_variant_from_string(const std::string& name) {
    if (name == "monolithic") return BaselineVariant::monolithic;
    if (name == "per-component" || name == "per_component") return BaselineVariant::per_component;
    throw InputError("unknown baseline variant '" + name +
                     "' (expected monolithic or per-component)");
}

namespace {

// Golden group powers summed per (config, workload): total and per component.
struct GoldenTotals {
    std::map<std::pair<std::string, std::string>, double> total;
    std::map<std::tuple<std::string, std::string, std::string>, double> per_component;
};

GoldenTotals golden_totals(const TrainingDataset& dataset) {
    GoldenTotals g;
    std::map<std::string, std::string> component_of_position;
    for (const auto& p : dataset.sram_positions) component_of_position[p.position] = p.component;

    auto add = [&](const std::string& config, const std::string& workload,
                   const std::string& component, double value) {
        g.total[{config, workload}] += value;
        g.per_component[{config, workload, component}] += value;
    };
    for (const auto& l : dataset.clock_power)
        add(l.config_id, l.workload_id, l.component, l.clock_power);
    for (const auto& l : dataset.sram_activity)
        add(l.config_id, l.workload_id, component_of_position.at(l.position), l.sram_power);
    for (const auto& l : dataset.logic) {
        add(l.config_id, l.workload_id, l.component, l.register_power);
        add(l.config_id, l.workload_id, l.component, l.comb_power);
    }
    return g;
}

// The golden total of a sample is trustworthy only when every group
// contributed a label for it.
void require_complete_labels(const TrainingDataset& dataset, const std::string& context) {
    std::set<std::pair<std::string, std::string>> clock, logic, sram;
    for (const auto& l : dataset.clock_power) clock.insert({l.config_id, l.workload_id});
    for (const auto& l : dataset.logic) logic.insert({l.config_id, l.workload_id});
    for (const auto& l : dataset.sram_activity) sram.insert({l.config_id, l.workload_id});
    for (const auto& e : dataset.events) {
        std::pair<std::string, std::string> key{e.config_id, e.workload_id};
        if (!clock.count(key))
            throw InputError(context + ": missing clock power labels for (" + e.config_id + ", " +
                             e.workload_id + ")");
        if (!logic.count(key))
            throw InputError(context + ": missing logic labels for (" + e.config_id + ", " +
                             e.workload_id + ")");
        if (!dataset.sram_positions.empty() && !sram.count(key))
            throw InputError(context + ": missing sram labels for (" + e.config_id + ", " +
                             e.workload_id + ")");
    }
}

std::vector<std::string> all_param_names(const DesignConfig& config) {
    std::vector<std::string> names;
    for (const auto& [k, v] : config.params) names.push_back(k);
    return names;
}

} // namespace

BaselineModel train_baseline(const TrainingDataset& dataset, const PipelineParams& params,
                             BaselineVariant variant,
                             std::span<const std::string> train_config_ids,
                             TrainDiagnostics* diag) {
    std::vector<std::string> ids = sorted_unique(train_config_ids);
    if (ids.size() < 2)
        throw InputError("train_baseline: need at least 2 training configs, got " +
                         std::to_string(ids.size()));

    TrainingDataset split = restrict_to_configs(dataset, ids);
    TrainingDataset rates = normalized_copy(split);
    require_complete_labels(rates, "train_baseline");
    GoldenTotals golden = golden_totals(rates);

    BaselineModel model;
    model.variant = variant;
    model.manifest.train_config_ids = ids;
    model.manifest.workload_ids = rates.workload_ids();
    model.manifest.params = params;

    auto fit_target = [&](const std::string& key, const FeatureLayout& layout,
                          const std::function<double(const std::string&, const std::string&)>& label) {
        std::vector<std::vector<double>> rows;
        std::vector<double> labels;
        for (const auto& e : rates.events) {
            const DesignConfig* config = rates.find_config(e.config_id);
            rows.push_back(layout.assemble(*config, &e));
            labels.push_back(label(e.config_id, e.workload_id));
        }
        if (rows.empty()) throw InputError("train_baseline: no training samples");
        model.models[key] = fit_gbrt(Matrix::from_rows(rows), labels, params.regressor);
        model.layouts[key] = layout;
        if (diag)
            diag->note("baseline/" + key,
                       "trained on " + std::to_string(rows.size()) + " samples");
    };

    const DesignConfig& first = rates.configs.front();
    const WorkloadEvents& first_events = rates.events.front();
    if (variant == BaselineVariant::monolithic) {
        FeatureLayout layout =
            FeatureLayout::with_events(first, all_param_names(first), first_events);
        fit_target("total", layout, [&](const std::string& c, const std::string& w) {
            auto it = golden.total.find({c, w});
            if (it == golden.total.end())
                throw InputError("train_baseline: missing labels for (" + c + ", " + w + ")");
            return it->second;
        });
    } else {
        for (const auto& component : rates.component_names()) {
            auto pit = first.component_params.find(component);
            if (pit == first.component_params.end())
                throw InputError("train_baseline: component '" + component +
                                 "' missing from config " + first.config_id);
            FeatureLayout layout = FeatureLayout::with_events(first, pit->second, first_events);
            fit_target(component, layout, [&](const std::string& c, const std::string& w) {
                auto it = golden.per_component.find({c, w, component});
                if (it == golden.per_component.end())
                    throw InputError("train_baseline: missing labels for (" + c + ", " + w + ", " +
                                     component + ")");
                return it->second;
            });
        }
    }
    return model;
}

double predict_baseline_total(const BaselineModel& model, const DesignConfig& config,
                              const WorkloadEvents& events) {
    WorkloadEvents rates = to_per_cycle_rates(events);
    double total = 0.0;
    for (const auto& [key, ensemble] : model.models) {
        std::vector<double> x = model.layouts.at(key).assemble(config, &rates);
        total += std::max(predict_gbrt(ensemble, x), 0.0);
    }
    return total;
}

// ---- metrics --------------------------------------------------------------------

MetricSet evaluate(std::span<const std::pair<double, double>> predicted_golden) {
    if (predicted_golden.size() < 2)
        throw InputError("evaluate: need at least 2 (predicted, golden) pairs");

    const double n = static_cast<double>(predicted_golden.size());
    double mape = 0.0;
    double pred_mean = 0.0, gold_mean = 0.0;
    for (const auto& [p, g] : predicted_golden) {
        if (!(g > 0.0)) throw InputError("evaluate: golden value must be > 0 for MAPE");
        mape += std::fabs(p - g) / g;
        pred_mean += p;
        gold_mean += g;
    }
    mape = mape / n * 100.0;
    pred_mean /= n;
    gold_mean /= n;

    double ss_res = 0.0, ss_tot = 0.0, pred_var = 0.0, cov = 0.0;
    for (const auto& [p, g] : predicted_golden) {
        ss_res += (p - g) * (p - g);
        ss_tot += (g - gold_mean) * (g - gold_mean);
        pred_var += (p - pred_mean) * (p - pred_mean);
        cov += (p - pred_mean) * (g - gold_mean);
    }

    MetricSet m;
    m.mape = mape;
    m.n = static_cast<int>(predicted_golden.size());
    if (ss_tot > 0.0) m.r2 = 1.0 - ss_res / ss_tot;
    if (ss_tot > 0.0 && pred_var > 0.0)
        m.pearson_r = cov / std::sqrt(pred_var * ss_tot);
    return m;
}

namespace {

std::optional<MetricSet> try_evaluate(const std::vector<std::pair<double, double>>& pairs) {
    try {
        return evaluate(pairs);
    } catch (const InputError&) {
        return std::nullopt;
    }
}

EvaluationReport build_report(
    const std::vector<EvaluationReport::Sample>& samples) {
    EvaluationReport report;
    report.samples = samples;

    std::vector<std::pair<double, double>> total_pairs;
    std::map<std::string, std::vector<std::pair<double, double>>> group_pairs;
    std::map<std::string, std::vector<std::pair<double, double>>> component_pairs;
    for (const auto& s : samples) {
        total_pairs.emplace_back(s.predicted, s.golden);
        for (const auto& [group, pred] : s.predicted_groups) {
            auto git = s.golden_groups.find(group);
            if (git == s.golden_groups.end()) continue;
            if (group.rfind("component/", 0) == 0)
                component_pairs[group.substr(10)].emplace_back(pred, git->second);
            else
                group_pairs[group].emplace_back(pred, git->second);
        }
    }

    report.total = evaluate(total_pairs);
    for (const auto& [name, pairs] : group_pairs)
        if (auto m = try_evaluate(pairs)) report.per_group[name] = *m;
    for (const auto& [name, pairs] : component_pairs)
        if (auto m = try_evaluate(pairs)) report.per_component[name] = *m;
    return report;
}

} // namespace

EvaluationReport evaluate_model(const AutoPowerModel& model, const TrainingDataset& dataset,
                                std::span<const std::string> test_config_ids) {
    std::vector<std::string> ids = sorted_unique(test_config_ids);
    if (ids.empty()) throw InputError("evaluate_model: no test configs given");
    TrainingDataset split = restrict_to_configs(dataset, ids);
    require_complete_labels(split, "evaluate_model");
    GoldenTotals golden = golden_totals(split);

    std::map<std::string, std::string> component_of_position;
    for (const auto& p : split.sram_positions) component_of_position[p.position] = p.component;

    // Golden per-group sums per (config, workload).
    std::map<std::pair<std::string, std::string>, std::map<std::string, double>> golden_groups;
    for (const auto& l : split.clock_power)
        golden_groups[{l.config_id, l.workload_id}]["clock"] += l.clock_power;
    for (const auto& l : split.sram_activity)
        golden_groups[{l.config_id, l.workload_id}]["sram"] += l.sram_power;
    for (const auto& l : split.logic) {
        auto& g = golden_groups[{l.config_id, l.workload_id}];
        g["register"] += l.register_power;
        g["comb"] += l.comb_power;
    }

    std::vector<EvaluationReport::Sample> samples;
    for (const auto& e : split.events) {
        auto git = golden.total.find({e.config_id, e.workload_id});
        if (git == golden.total.end())
            throw InputError("evaluate_model: missing golden labels for (" + e.config_id + ", " +
                             e.workload_id + ")");
        const DesignConfig* config = split.find_config(e.config_id);
        PowerReport pred = predict(model, *config, e);

        EvaluationReport::Sample s;
        s.config_id = e.config_id;
        s.workload_id = e.workload_id;
        s.predicted = pred.grand_total;
        s.golden = git->second;
        s.predicted_groups["clock"] = pred.clock_total;
        s.predicted_groups["sram"] = pred.sram_total;
        s.predicted_groups["register"] = pred.register_total;
        s.predicted_groups["comb"] = pred.comb_total;
        s.golden_groups = golden_groups.at({e.config_id, e.workload_id});
        for (const auto& [name, p] : pred.components) {
            s.predicted_groups["component/" + name] =
                p.clock_power + p.sram_power + p.register_power + p.comb_power;
            auto cit = golden.per_component.find({e.config_id, e.workload_id, name});
            if (cit != golden.per_component.end())
                s.golden_groups["component/" + name] = cit->second;
        }
        samples.push_back(std::move(s));
    }
    if (samples.size() < 2)
        throw InputError("evaluate_model: need at least 2 evaluation samples");
    return build_report(samples);
}

EvaluationReport evaluate_baseline(const BaselineModel& model, const TrainingDataset& dataset,
                                   std::span<const std::string> test_config_ids) {
    std::vector<std::string> ids = sorted_unique(test_config_ids);
    if (ids.empty()) throw InputError("evaluate_baseline: no test configs given");
    TrainingDataset split = restrict_to_configs(dataset, ids);
    require_complete_labels(split, "evaluate_baseline");
    GoldenTotals golden = golden_totals(split);

    std::vector<EvaluationReport::Sample> samples;
    for (const auto& e : split.events) {
        auto git = golden.total.find({e.config_id, e.workload_id});
        if (git == golden.total.end())
            throw InputError("evaluate_baseline: missing golden labels for (" + e.config_id +
                             ", " + e.workload_id + ")");
        const DesignConfig* config = split.find_config(e.config_id);
        EvaluationReport::Sample s;
        s.config_id = e.config_id;
        s.workload_id = e.workload_id;
        s.predicted = predict_baseline_total(model, *config, e);
        s.golden = git->second;
        samples.push_back(std::move(s));
    }
    if (samples.size() < 2)
        throw InputError("evaluate_baseline: need at least 2 evaluation samples");
    return build_report(samples);
}

// ---- trace -----------------------------------------------------------------------

PowerTrace predict_trace(const AutoPowerModel& model, const DesignConfig& config,
                         std::span<const WorkloadEvents> windows, int window_cycles) {
    if (window_cycles < 1) throw InputError("predict_trace: window_cycles must be >= 1");
    PowerTrace trace;
    trace.window_cycles = window_cycles;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        if (windows[i].cycles != static_cast<std::uint64_t>(window_cycles))
            throw InputError("predict_trace: window " + std::to_string(i) + " covers " +
                             std::to_string(windows[i].cycles) + " cycles, expected " +
                             std::to_string(window_cycles));
        trace.windows.push_back(predict(model, config, windows[i]));
    }
    return trace;
}

// ---- serialization ------------------------------------------------------------------

namespace {

json layout_to_json(const FeatureLayout& layout) {
    json j;
    j["hw"] = layout.hw;
    j["events"] = layout.events;
    j["program_features"] = layout.program_features;
    return j;
}

FeatureLayout layout_from_json(const json& j, const std::string& ctx) {
    FeatureLayout layout;
    auto read = [&](const char* key, std::vector<std::string>& out) {
        for (const auto& n : detail::require_array(j, key, ctx)) {
            if (!n.is_string()) throw InputError(ctx + "." + key + ": expected strings");
            out.push_back(n.get<std::string>());
        }
    };
    read("hw", layout.hw);
    read("events", layout.events);
    read("program_features", layout.program_features);
    return layout;
}

json tech_to_json_inner(const TechLibrary& tech) {
    json j;
    j["p_reg"] = tech.p_reg;
    j["p_latch"] = tech.p_latch;
    json macros = json::array();
    for (const auto& m : tech.macros) {
        json mj;
        mj["width"] = m.width;
        mj["depth"] = m.depth;
        mj["p_read"] = m.p_read;
        mj["p_write"] = m.p_write;
        macros.push_back(mj);
    }
    j["macros"] = macros;
    return j;
}

TechLibrary tech_from_json_inner(const json& j, const std::string& ctx) {
    TechLibrary tech;
    tech.p_reg = detail::require_number(j, "p_reg", ctx);
    tech.p_latch = detail::require_number(j, "p_latch", ctx);
    for (const auto& mj : detail::require_array(j, "macros", ctx)) {
        MacroSpec m;
        m.width = detail::require_int(mj, "width", ctx + ".macros[]");
        m.depth = detail::require_int(mj, "depth", ctx + ".macros[]");
        m.p_read = detail::require_number(mj, "p_read", ctx + ".macros[]");
        m.p_write = detail::require_number(mj, "p_write", ctx + ".macros[]");
        tech.macros.push_back(m);
    }
    return tech;
}

json law_to_json(const ScalingLaw& law) {
    json j;
    j["capacity_params"] = law.capacity_params;
    j["k_cap"] = law.k_cap;
    j["throughput_params"] = law.throughput_params;
    j["k_thr"] = law.k_thr;
    j["fit_error"] = law.fit_error;
    j["count_divisor"] = law.count_divisor;
    j["mask_sectors"] = law.mask_sectors;
    j["resolved"] = law.resolved;
    json samples = json::array();
    for (const auto& s : law.training_samples) {
        json sj;
        sj["params"] = s.params;
        sj["width"] = s.geometry.width;
        sj["depth"] = s.geometry.depth;
        sj["count"] = s.geometry.count;
        sj["mask_sectors"] = s.geometry.mask_sectors;
        samples.push_back(sj);
    }
    j["training_samples"] = samples;
    return j;
}

ScalingLaw law_from_json(const json& j, const std::string& ctx) {
    ScalingLaw law;
    for (const auto& n : detail::require_array(j, "capacity_params", ctx))
        law.capacity_params.push_back(n.get<std::string>());
    law.k_cap = detail::require_number(j, "k_cap", ctx);
    for (const auto& n : detail::require_array(j, "throughput_params", ctx))
        law.throughput_params.push_back(n.get<std::string>());
    law.k_thr = detail::require_number(j, "k_thr", ctx);
    law.fit_error = detail::require_number(j, "fit_error", ctx);
    law.count_divisor = detail::require_int(j, "count_divisor", ctx);
    law.mask_sectors = detail::require_int(j, "mask_sectors", ctx);
    const json& resolved = detail::require(j, "resolved", ctx);
    if (!resolved.is_boolean()) throw InputError(ctx + ".resolved: expected a boolean");
    law.resolved = resolved.get<bool>();
    for (const auto& sj : detail::require_array(j, "training_samples", ctx)) {
        ScalingLaw::TrainingSample s;
        for (const auto& v : detail::require_array(sj, "params", ctx + ".training_samples[]"))
            s.params.push_back(v.get<double>());
        s.geometry.width = detail::require_int(sj, "width", ctx);
        s.geometry.depth = detail::require_int(sj, "depth", ctx);
        s.geometry.count = detail::require_int(sj, "count", ctx);
        s.geometry.mask_sectors = detail::require_int(sj, "mask_sectors", ctx);
        law.training_samples.push_back(std::move(s));
    }
    return law;
}

json params_to_json(const PipelineParams& p) {
    json j;
    j["l2_lambda"] = p.regressor.l2_lambda;
    j["n_trees"] = p.regressor.n_trees;
    j["max_depth"] = p.regressor.max_depth;
    j["learning_rate"] = p.regressor.learning_rate;
    j["min_samples_leaf"] = p.regressor.min_samples_leaf;
    j["max_subset"] = p.scaling.max_subset;
    j["scaling_exact_threshold"] = p.scaling.exact_threshold;
    j["scaling_accept_threshold"] = p.scaling.accept_threshold;
    return j;
}

PipelineParams params_from_json(const json& j, const std::string& ctx) {
    PipelineParams p;
    p.regressor.l2_lambda = detail::require_number(j, "l2_lambda", ctx);
    p.regressor.n_trees = static_cast<int>(detail::require_int(j, "n_trees", ctx));
    p.regressor.max_depth = static_cast<int>(detail::require_int(j, "max_depth", ctx));
    p.regressor.learning_rate = detail::require_number(j, "learning_rate", ctx);
    p.regressor.min_samples_leaf =
        static_cast<int>(detail::require_int(j, "min_samples_leaf", ctx));
    p.scaling.max_subset = static_cast<int>(detail::require_int(j, "max_subset", ctx));
    p.scaling.exact_threshold = detail::require_number(j, "scaling_exact_threshold", ctx);
    p.scaling.accept_threshold = detail::require_number(j, "scaling_accept_threshold", ctx);
    return p;
}

json manifest_to_json(const TrainManifest& m) {
    json j;
    j["bundle_schema_version"] = m.bundle_schema_version;
    j["dataset_schema_version"] = m.dataset_schema_version;
    j["tech_schema_version"] = m.tech_schema_version;
    j["train_config_ids"] = m.train_config_ids;
    j["workload_ids"] = m.workload_ids;
    j["params"] = params_to_json(m.params);
    j["feature_normalization"] = m.feature_normalization;
    return j;
}

TrainManifest manifest_from_json(const json& j, const std::string& ctx) {
    TrainManifest m;
    m.bundle_schema_version =
        static_cast<int>(detail::require_int(j, "bundle_schema_version", ctx));
    if (m.bundle_schema_version != kBundleSchemaVersion)
        throw InputError(ctx + ": unknown bundle schema version " +
                         std::to_string(m.bundle_schema_version));
    m.dataset_schema_version =
        static_cast<int>(detail::require_int(j, "dataset_schema_version", ctx));
    m.tech_schema_version = static_cast<int>(detail::require_int(j, "tech_schema_version", ctx));
    for (const auto& id : detail::require_array(j, "train_config_ids", ctx))
        m.train_config_ids.push_back(id.get<std::string>());
    for (const auto& id : detail::require_array(j, "workload_ids", ctx))
        m.workload_ids.push_back(id.get<std::string>());
    m.params = params_from_json(detail::require_object(j, "params", ctx), ctx + ".params");
    m.feature_normalization = detail::require_string(j, "feature_normalization", ctx);
    return m;
}

} // namespace

std::string model_to_json_text(const AutoPowerModel& model) {
    json j;
    j["kind"] = "autopower";
    j["manifest"] = manifest_to_json(model.manifest);
    j["tech"] = tech_to_json_inner(model.tech);

    json clock = json::object();
    for (const auto& [name, cm] : model.clock.components) {
        json cj;
        cj["reg_count"] = linear_to_json(cm.reg_count);
        cj["gating"] = linear_to_json(cm.gating);
        cj["active_rate"] = ensemble_to_json(cm.active_rate);
        cj["hw_layout"] = layout_to_json(cm.hw_layout);
        cj["full_layout"] = layout_to_json(cm.full_layout);
        clock[name] = cj;
    }
    j["clock"] = clock;

    json sram = json::object();
    for (const auto& [name, pm] : model.sram.positions) {
        json pj;
        pj["component"] = pm.position.component;
        pj["position"] = pm.position.position;
        pj["params"] = pm.position.params;
        pj["law"] = law_to_json(pm.law);
        pj["read_activity"] = ensemble_to_json(pm.read_activity);
        pj["write_activity"] = ensemble_to_json(pm.write_activity);
        pj["pin_toggle_const"] = pm.pin_toggle_const;
        pj["full_layout"] = layout_to_json(pm.full_layout);
        sram[name] = pj;
    }
    j["sram"] = sram;

    json logic = json::object();
    for (const auto& [name, lm] : model.logic.components) {
        json lj;
        lj["reg_count"] = linear_to_json(lm.reg_count);
        lj["activity"] = ensemble_to_json(lm.activity);
        lj["stable"] = linear_to_json(lm.stable);
        lj["variation"] = ensemble_to_json(lm.variation);
        lj["hw_layout"] = layout_to_json(lm.hw_layout);
        lj["full_layout"] = layout_to_json(lm.full_layout);
        logic[name] = lj;
    }
    j["logic"] = logic;

    return detail::dump_canonical(j);
}

AutoPowerModel model_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    if (detail::require_string(j, "kind", origin) != "autopower")
        throw InputError(origin + ": not an autopower model bundle");

    AutoPowerModel model;
    model.manifest =
        manifest_from_json(detail::require_object(j, "manifest", origin), origin + ".manifest");
    model.tech = tech_from_json_inner(detail::require_object(j, "tech", origin), origin + ".tech");

    for (const auto& [name, cj] : detail::require_object(j, "clock", origin).items()) {
        const std::string ctx = origin + ".clock." + name;
        ClockComponentModel cm;
        cm.reg_count = linear_from_json(detail::require_object(cj, "reg_count", ctx), ctx);
        cm.gating = linear_from_json(detail::require_object(cj, "gating", ctx), ctx);
        cm.active_rate = ensemble_from_json(detail::require_object(cj, "active_rate", ctx), ctx);
        cm.hw_layout = layout_from_json(detail::require_object(cj, "hw_layout", ctx), ctx);
        cm.full_layout = layout_from_json(detail::require_object(cj, "full_layout", ctx), ctx);
        model.clock.components[name] = std::move(cm);
    }
    for (const auto& [name, pj] : detail::require_object(j, "sram", origin).items()) {
        const std::string ctx = origin + ".sram." + name;
        SramPositionModel pm;
        pm.position.component = detail::require_string(pj, "component", ctx);
        pm.position.position = detail::require_string(pj, "position", ctx);
        for (const auto& n : detail::require_array(pj, "params", ctx))
            pm.position.params.push_back(n.get<std::string>());
        pm.law = law_from_json(detail::require_object(pj, "law", ctx), ctx + ".law");
        pm.read_activity = ensemble_from_json(detail::require_object(pj, "read_activity", ctx), ctx);
        pm.write_activity =
            ensemble_from_json(detail::require_object(pj, "write_activity", ctx), ctx);
        pm.pin_toggle_const = detail::require_number(pj, "pin_toggle_const", ctx);
        pm.full_layout = layout_from_json(detail::require_object(pj, "full_layout", ctx), ctx);
        model.sram.positions[name] = std::move(pm);
    }
    for (const auto& [name, lj] : detail::require_object(j, "logic", origin).items()) {
        const std::string ctx = origin + ".logic." + name;
        LogicComponentModel lm;
        lm.reg_count = linear_from_json(detail::require_object(lj, "reg_count", ctx), ctx);
        lm.activity = ensemble_from_json(detail::require_object(lj, "activity", ctx), ctx);
        lm.stable = linear_from_json(detail::require_object(lj, "stable", ctx), ctx);
        lm.variation = ensemble_from_json(detail::require_object(lj, "variation", ctx), ctx);
        lm.hw_layout = layout_from_json(detail::require_object(lj, "hw_layout", ctx), ctx);
        lm.full_layout = layout_from_json(detail::require_object(lj, "full_layout", ctx), ctx);
        model.logic.components[name] = std::move(lm);
    }
    return model;
}

void save_model(const AutoPowerModel& model, const std::string& path) {
    detail::write_text_file(path, model_to_json_text(model));
}

AutoPowerModel load_model(const std::string& path) {
    return model_from_json_text(detail::read_text_file(path), path);
}

std::string baseline_to_json_text(const BaselineModel& model) {
    json j;
    j["kind"] = "baseline";
    j["variant"] = to_string(model.variant);
    j["manifest"] = manifest_to_json(model.manifest);
    json models = json::object();
    for (const auto& [key, ensemble] : model.models) {
        json mj;
        mj["model"] = ensemble_to_json(ensemble);
        mj["layout"] = layout_to_json(model.layouts.at(key));
        models[key] = mj;
    }
    j["models"] = models;
    return detail::dump_canonical(j);
}

BaselineModel baseline_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    if (detail::require_string(j, "kind", origin) != "baseline")
        throw InputError(origin + ": not a baseline model bundle");
    BaselineModel model;
    model.variant = baseline_variant_from_string(detail::require_string(j, "variant", origin));
    model.manifest =
        manifest_from_json(detail::require_object(j, "manifest", origin), origin + ".manifest");
    for (const auto& [key, mj] : detail::require_object(j, "models", origin).items()) {
        const std::string ctx = origin + ".models." + key;
        model.models[key] = ensemble_from_json(detail::require_object(mj, "model", ctx), ctx);
        model.layouts[key] = layout_from_json(detail::require_object(mj, "layout", ctx), ctx);
    }
    return model;
}

void save_baseline(const BaselineModel& model, const std::string& path) {
    detail::write_text_file(path, baseline_to_json_text(model));
}

BaselineModel load_baseline(const std::string& path) {
    return baseline_from_json_text(detail::read_text_file(path), path);
}

// ---- reports -----------------------------------------------------------------------

namespace {

json metric_to_json(const MetricSet& m) {
    json j;
    j["mape_percent"] = m.mape;
    j["r2"] = m.r2 ? json(*m.r2) : json(nullptr);
    j["pearson_r"] = m.pearson_r ? json(*m.pearson_r) : json(nullptr);
    j["n"] = m.n;
    return j;
}

} // namespace

std::string report_to_json_text(const EvaluationReport& report) {
    json j;
    j["metrics"] = json::object();
    j["metrics"]["total"] = metric_to_json(report.total);
    json groups = json::object();
    for (const auto& [name, m] : report.per_group) groups[name] = metric_to_json(m);
    j["metrics"]["per_group"] = groups;
    json components = json::object();
    for (const auto& [name, m] : report.per_component) components[name] = metric_to_json(m);
    j["metrics"]["per_component"] = components;

    json samples = json::array();
    for (const auto& s : report.samples) {
        json sj;
        sj["config_id"] = s.config_id;
        sj["workload_id"] = s.workload_id;
        sj["predicted"] = s.predicted;
        sj["golden"] = s.golden;
        sj["predicted_groups"] = detail::number_map_to_json(s.predicted_groups);
        sj["golden_groups"] = detail::number_map_to_json(s.golden_groups);
        samples.push_back(sj);
    }
    j["samples"] = samples;
    return detail::dump_canonical(j);
}

namespace {

std::string csv_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

} // namespace

std::string report_to_csv_text(const EvaluationReport& report) {
    std::ostringstream out;
    out << "config_id,workload_id,predicted_mw,golden_mw,abs_pct_error,"
           "clock_pred,clock_golden,sram_pred,sram_golden,"
           "register_pred,register_golden,comb_pred,comb_golden\n";
    auto field = [](const std::map<std::string, double>& m, const std::string& k) {
        auto it = m.find(k);
        return it == m.end() ? 0.0 : it->second;
    };
    for (const auto& s : report.samples) {
        double pct = s.golden != 0.0 ? std::fabs(s.predicted - s.golden) / s.golden * 100.0 : 0.0;
        out << s.config_id << ',' << s.workload_id << ',' << csv_number(s.predicted) << ','
            << csv_number(s.golden) << ',' << csv_number(pct);
        for (const char* g : {"clock", "sram", "register", "comb"})
            out << ',' << csv_number(field(s.predicted_groups, g)) << ','
                << csv_number(field(s.golden_groups, g));
        out << '\n';
    }
    return out.str();
}

std::string trace_to_csv_text(const PowerTrace& trace) {
    std::ostringstream out;
    out << "window,clock_mw,sram_mw,register_mw,comb_mw,total_mw\n";
    for (std::size_t i = 0; i < trace.windows.size(); ++i) {
        const PowerReport& r = trace.windows[i];
        out << i << ',' << csv_number(r.clock_total) << ',' << csv_number(r.sram_total) << ','
            << csv_number(r.register_total) << ',' << csv_number(r.comb_total) << ','
            << csv_number(r.grand_total) << '\n';
    }
    return out.str();
}

} // namespace autopower
