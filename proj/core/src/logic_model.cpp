#include "autopower/logic_model.hpp"

#include <algorithm>
#include <cmath>

namespace autopower {

LogicGroupModel train_logic(const TrainingDataset& dataset, const RegressorParams& params,
                            const ClockGroupModel& clock, TrainDiagnostics* diag) {
    params.validate();

    std::map<std::pair<std::string, std::string>, const ClockStructureLabel*> structure;
    for (const auto& l : dataset.clock_structure) structure[{l.config_id, l.component}] = &l;

    LogicGroupModel model;
    for (const auto& component : dataset.component_names()) {
        auto cit = clock.components.find(component);
        if (cit == clock.components.end())
            throw InputError("train_logic: component '" + component +
                             "' has no register-count model");

        const DesignConfig& first = dataset.configs.front();
        auto pit = first.component_params.find(component);
        if (pit == first.component_params.end())
            throw InputError("train_logic: component '" + component + "' missing from config " +
                             first.config_id);

        LogicComponentModel lm;
        lm.reg_count = cit->second.reg_count; // fitted once in the clock model
        lm.hw_layout = cit->second.hw_layout;

        // Stable power per config: mean comb power over the training workloads.
        std::map<std::string, std::pair<double, int>> comb_sum; // config -> (sum, n)
        for (const auto& l : dataset.logic) {
            if (l.component != component) continue;
            auto& [sum, n] = comb_sum[l.config_id];
            sum += l.comb_power;
            n += 1;
        }
        for (const auto& config : dataset.configs)
            if (!comb_sum.count(config.config_id))
                throw InputError("train_logic: missing logic labels for (" + config.config_id +
                                 ", " + component + ")");

        std::map<std::string, double> stable;
        std::vector<std::vector<double>> hw_rows;
        std::vector<double> stable_labels;
        for (const auto& config : dataset.configs) {
            const auto& [sum, n] = comb_sum.at(config.config_id);
            double mean = sum / static_cast<double>(n);
            if (mean == 0.0)
                throw InputError("train_logic: stable combinational power is 0 for config " +
                                 config.config_id + ", component " + component +
                                 "; variation labels are undefined");
            stable[config.config_id] = mean;
            hw_rows.push_back(lm.hw_layout.assemble(config, nullptr));
            stable_labels.push_back(mean);
        }
        lm.stable = fit_linear(Matrix::from_rows(hw_rows), stable_labels, params.l2_lambda);

        // Per-workload labels: activity = register_power / golden R,
        // variation = comb_power / stable.
        std::vector<std::vector<double>> full_rows;
        std::vector<double> act_labels, var_labels;
        for (const auto& l : dataset.logic) {
            if (l.component != component) continue;
            const DesignConfig* config = dataset.find_config(l.config_id);
            const WorkloadEvents* ev = dataset.find_events(l.config_id, l.workload_id);
            auto sit = structure.find({l.config_id, component});
            if (!config || !ev || sit == structure.end())
                throw InputError("train_logic: incomplete labels for (" + l.config_id + ", " +
                                 l.workload_id + ", " + component + ")");
            if (lm.full_layout.hw.empty() && lm.full_layout.events.empty())
                lm.full_layout = FeatureLayout::with_events(*config, pit->second, *ev);

            double reg_count = sit->second->register_count;
            double act;
            if (reg_count > 0.0) {
                act = l.register_power / reg_count;
            } else if (l.register_power == 0.0) {
                act = 0.0;
            } else {
                throw InputError("train_logic: register power " + std::to_string(l.register_power) +
                                 " with zero register count for (" + l.config_id + ", " +
                                 component + ")");
            }
            full_rows.push_back(lm.full_layout.assemble(*config, ev));
            act_labels.push_back(act);
            var_labels.push_back(l.comb_power / stable.at(l.config_id));
        }

        lm.activity = fit_gbrt(Matrix::from_rows(full_rows), act_labels, params);
        lm.variation = fit_gbrt(Matrix::from_rows(full_rows), var_labels, params);
        if (diag)
            diag->note("logic/" + component, "activity/variation models trained on " +
                                                 std::to_string(full_rows.size()) + " samples");
        model.components[component] = std::move(lm);
    }
    return model;
}

LogicComponentPower predict_logic_component(const LogicComponentModel& model,
                                            const DesignConfig& config,
                                            const WorkloadEvents& event_rates) {
    std::vector<double> hw = model.hw_layout.assemble(config, nullptr);
    std::vector<double> full = model.full_layout.assemble(config, &event_rates);

    LogicComponentPower out;
    double reg_count = std::max(predict_linear(model.reg_count, hw), 0.0);
    double activity = std::max(predict_gbrt(model.activity, full), 0.0);
    double stable = std::max(predict_linear(model.stable, hw), 0.0);
    double variation = std::max(predict_gbrt(model.variation, full), 0.0);
    out.register_power = reg_count * activity;
    out.comb_power = stable * variation;
    return out;
}

std::map<std::string, LogicComponentPower> predict_logic(const LogicGroupModel& model,
                                                         const DesignConfig& config,
                                                         const WorkloadEvents& event_rates) {
    for (const auto& [comp, names] : config.component_params)
        if (!model.components.count(comp))
            throw ModelError("predict_logic: untrained component '" + comp + "'");
    std::map<std::string, LogicComponentPower> out;
    for (const auto& [name, lm] : model.components)
        out[name] = predict_logic_component(lm, config, event_rates);
    return out;
}

} // namespace autopower
