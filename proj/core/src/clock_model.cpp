#include "autopower/clock_model.hpp"

#include <algorithm>
#include <cmath>

namespace autopower {

namespace {

std::vector<std::string> sorted_copy(std::span<const std::string> names) {
    std::vector<std::string> out(names.begin(), names.end());
    std::sort(out.begin(), out.end());
    return out;
}

template <typename Map>
std::vector<std::string> keys_of(const Map& m) {
    std::vector<std::string> out;
    out.reserve(m.size());
    for (const auto& [k, v] : m) out.push_back(k);
    return out;
}

// Consistency tolerance for g = 0 labels: the clock power must equal the
// fully ungated value R * p_reg.
constexpr double kUngatedTolerance = 1e-9;

} // namespace

FeatureLayout FeatureLayout::hardware_only(const DesignConfig& config,
                                           std::span<const std::string> param_names) {
    FeatureLayout layout;
    layout.hw = sorted_copy(param_names);
    for (const auto& n : layout.hw)
        if (!config.params.count(n))
            throw InputError("config " + config.config_id + ": unknown parameter '" + n + "'");
    return layout;
}

FeatureLayout FeatureLayout::with_events(const DesignConfig& config,
                                         std::span<const std::string> param_names,
                                         const WorkloadEvents& events) {
    FeatureLayout layout = hardware_only(config, param_names);
    layout.events = keys_of(events.events);
    layout.program_features = keys_of(events.program_features);
    return layout;
}

std::vector<double> FeatureLayout::assemble(const DesignConfig& config,
                                            const WorkloadEvents* ev) const {
    std::vector<double> values;
    values.reserve(size());
    for (const auto& n : hw) {
        auto it = config.params.find(n);
        if (it == config.params.end())
            throw InputError("config " + config.config_id + ": missing parameter '" + n + "'");
        values.push_back(it->second);
    }
    if (!events.empty() || !program_features.empty()) {
        if (!ev) throw ModelError("feature assembly: events required but not supplied");
        for (const auto& n : events) {
            auto it = ev->events.find(n);
            if (it == ev->events.end())
                throw InputError("events " + ev->config_id + "/" + ev->workload_id +
                                 ": missing event '" + n + "'");
            values.push_back(it->second);
        }
        for (const auto& n : program_features) {
            auto it = ev->program_features.find(n);
            if (it == ev->program_features.end())
                throw InputError("events " + ev->config_id + "/" + ev->workload_id +
                                 ": missing program feature '" + n + "'");
            values.push_back(it->second);
        }
    }
    return values;
}

double derive_active_rate_label(double clock_power, double register_count, double gating_rate,
                                double p_reg, bool* clamped) {
    if (clamped) *clamped = false;
    if (!(register_count > 0.0))
        throw InputError("active-rate label: register count must be > 0");
    if (gating_rate < 0.0 || gating_rate > 1.0)
        throw InputError("active-rate label: gating rate must be in [0,1]");
    if (gating_rate == 0.0) {
        // Fully ungated: the label is unconstrained, but the power must be
        // consistent with R * p_reg.
        double expected = register_count * p_reg;
        if (std::fabs(clock_power - expected) > kUngatedTolerance * std::max(1.0, expected))
            throw InputError("active-rate label: gating rate 0 but clock power " +
                             std::to_string(clock_power) + " != R*p_reg " +
                             std::to_string(expected));
        return 0.0;
    }
    double numerator = clock_power - register_count * (1.0 - gating_rate) * p_reg;
    if (numerator < 0.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return numerator / (register_count * gating_rate);
}

ClockGroupModel train_clock(const TrainingDataset& dataset, const TechLibrary& tech,
                            const RegressorParams& params, TrainDiagnostics* diag) {
    params.validate();
    if (dataset.configs.size() < 2)
        throw InputError("train_clock: need at least 2 configs, got " +
                         std::to_string(dataset.configs.size()));

    // structure labels keyed by (config, component)
    std::map<std::pair<std::string, std::string>, const ClockStructureLabel*> structure;
    for (const auto& l : dataset.clock_structure) structure[{l.config_id, l.component}] = &l;

    ClockGroupModel model;
    for (const auto& component : dataset.component_names()) {
        const DesignConfig& first = dataset.configs.front();
        auto pit = first.component_params.find(component);
        if (pit == first.component_params.end())
            throw InputError("train_clock: component '" + component + "' missing from config " +
                             first.config_id);

        ClockComponentModel cm;
        cm.hw_layout = FeatureLayout::hardware_only(first, pit->second);

        std::vector<std::vector<double>> hw_rows;
        std::vector<double> reg_labels, gate_labels;
        for (const auto& config : dataset.configs) {
            auto it = structure.find({config.config_id, component});
            if (it == structure.end())
                throw InputError("train_clock: missing register/gating label for (" +
                                 config.config_id + ", " + component + ")");
            hw_rows.push_back(cm.hw_layout.assemble(config, nullptr));
            reg_labels.push_back(it->second->register_count);
            gate_labels.push_back(it->second->gating_rate);
        }

        bool single_hw = std::all_of(hw_rows.begin(), hw_rows.end(),
                                     [&](const auto& r) { return r == hw_rows.front(); });
        bool constant_reg = std::all_of(reg_labels.begin(), reg_labels.end(),
                                        [&](double v) { return v == reg_labels.front(); });
        bool constant_gate = std::all_of(gate_labels.begin(), gate_labels.end(),
                                         [&](double v) { return v == gate_labels.front(); });
        if (diag && single_hw && (!constant_reg || !constant_gate))
            diag->warn("clock/" + component,
                       "underdetermined: one distinct hardware vector with varying labels; "
                       "fit falls back to the label mean");

        Matrix hw = Matrix::from_rows(hw_rows);
        cm.reg_count = fit_linear(hw, reg_labels, params.l2_lambda);
        cm.gating = fit_linear(hw, gate_labels, params.l2_lambda);

        if (diag) {
            double reg_rmse = 0.0, gate_rmse = 0.0;
            for (std::size_t i = 0; i < hw_rows.size(); ++i) {
                double dr = predict_linear(cm.reg_count, hw_rows[i]) - reg_labels[i];
                double dg = predict_linear(cm.gating, hw_rows[i]) - gate_labels[i];
                reg_rmse += dr * dr;
                gate_rmse += dg * dg;
            }
            reg_rmse = std::sqrt(reg_rmse / static_cast<double>(hw_rows.size()));
            gate_rmse = std::sqrt(gate_rmse / static_cast<double>(hw_rows.size()));
            diag->note("clock/" + component, "register-count fit rmse " + std::to_string(reg_rmse) +
                                                 ", gating fit rmse " + std::to_string(gate_rmse));
        }

        // Active-rate labels from the golden R and g, one per (config, workload).
        std::vector<std::vector<double>> full_rows;
        std::vector<double> rate_labels;
        int clamp_count = 0;
        for (const auto& l : dataset.clock_power) {
            if (l.component != component) continue;
            const DesignConfig* config = dataset.find_config(l.config_id);
            const WorkloadEvents* ev = dataset.find_events(l.config_id, l.workload_id);
            auto it = structure.find({l.config_id, component});
            if (!config || !ev || it == structure.end())
                throw InputError("train_clock: incomplete labels for (" + l.config_id + ", " +
                                 l.workload_id + ", " + component + ")");
            if (cm.full_layout.hw.empty() && cm.full_layout.events.empty())
                cm.full_layout = FeatureLayout::with_events(*config, pit->second, *ev);
            bool clamped = false;
            double alpha = derive_active_rate_label(l.clock_power, it->second->register_count,
                                                    it->second->gating_rate, tech.p_reg, &clamped);
            if (clamped) ++clamp_count;
            full_rows.push_back(cm.full_layout.assemble(*config, ev));
            rate_labels.push_back(alpha);
        }
        if (full_rows.empty())
            throw InputError("train_clock: no clock power labels for component '" + component + "'");
        if (diag && clamp_count > 0)
            diag->warn("clock/" + component, std::to_string(clamp_count) +
                                                 " active-rate label(s) clamped to 0");

        cm.active_rate = fit_gbrt(Matrix::from_rows(full_rows), rate_labels, params);
        if (diag)
            diag->note("clock/" + component,
                       "active-rate model trained on " + std::to_string(full_rows.size()) + " samples");
        model.components[component] = std::move(cm);
    }
    return model;
}

ClockPowerBreakdown predict_clock_component(const ClockComponentModel& model,
                                            const DesignConfig& config,
                                            const WorkloadEvents& event_rates,
                                            const TechLibrary& tech) {
    std::vector<double> hw = model.hw_layout.assemble(config, nullptr);
    std::vector<double> full = model.full_layout.assemble(config, &event_rates);

    ClockPowerBreakdown out;
    out.register_count = std::max(predict_linear(model.reg_count, hw), 0.0);
    out.gating_rate = std::clamp(predict_linear(model.gating, hw), 0.0, 1.0);
    out.active_rate = std::max(predict_gbrt(model.active_rate, full), 0.0);
    out.ungated = out.register_count * (1.0 - out.gating_rate) * tech.p_reg;
    out.gated = out.active_rate * out.register_count * out.gating_rate;
    out.cell = 0.0; // folded into the gated term by the effective active rate
    out.total = out.ungated + out.gated + out.cell;
    return out;
}

std::map<std::string, ClockPowerBreakdown> predict_clock(const ClockGroupModel& model,
                                                         const DesignConfig& config,
                                                         const WorkloadEvents& event_rates,
                                                         const TechLibrary& tech) {
    for (const auto& [comp, names] : config.component_params)
        if (!model.components.count(comp))
            throw ModelError("predict_clock: untrained component '" + comp + "'");
    std::map<std::string, ClockPowerBreakdown> out;
    for (const auto& [name, cm] : model.components)
        out[name] = predict_clock_component(cm, config, event_rates, tech);
    return out;
}

} // namespace autopower
