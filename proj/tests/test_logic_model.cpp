#include <doctest.h>

#include <cmath>

#include "autopower/logic_model.hpp"

using namespace autopower;

namespace {

// One component "ALU" driven by DecodeWidth, two configs, four workloads.
TrainingDataset logic_dataset(const std::vector<std::vector<double>>& comb_power,
                              const std::vector<std::vector<double>>& register_power,
                              const std::vector<double>& reg_counts) {
    TrainingDataset ds;
    for (std::size_t i = 0; i < 2; ++i) {
        DesignConfig c;
        c.config_id = "C" + std::to_string(i + 1);
        c.params = {{"DecodeWidth", 1.0 + 2.0 * static_cast<double>(i)}};
        c.component_params = {{"ALU", {"DecodeWidth"}}};
        ds.configs.push_back(c);
        ds.clock_structure.push_back({c.config_id, "ALU", reg_counts[i], 0.5});
        for (std::size_t w = 0; w < comb_power[i].size(); ++w) {
            WorkloadEvents e;
            e.config_id = c.config_id;
            e.workload_id = "W" + std::to_string(w + 1);
            e.cycles = 1;
            e.events = {{"ops", 0.1 * static_cast<double>(w + 1)}};
            ds.events.push_back(e);
            ds.logic.push_back(
                {c.config_id, e.workload_id, "ALU", register_power[i][w], comb_power[i][w]});
        }
    }
    return ds;
}

ClockGroupModel reg_count_model(const TrainingDataset& ds, double lambda) {
    // only the register-count fit matters for logic training
    TechLibrary tech;
    tech.p_reg = 0.002;
    tech.macros = {{32, 64, 1.0, 1.0}};
    TrainingDataset with_clock = ds;
    for (const auto& l : ds.logic)
        with_clock.clock_power.push_back({l.config_id, l.workload_id, l.component, 0.001});
    // clock power labels: g=0.5 fixed, consistent positive values
    for (auto& l : with_clock.clock_power) {
        for (const auto& s : ds.clock_structure)
            if (s.config_id == l.config_id)
                l.clock_power = s.register_count * 0.5 * 0.002 * 1.5;
    }
    RegressorParams params;
    params.l2_lambda = lambda;
    return train_clock(with_clock, tech, params);
}

} // namespace

TEST_CASE("train_logic: identical comb power across workloads means variation 1") {
    TrainingDataset ds = logic_dataset({{3.0, 3.0, 3.0, 3.0}, {6.0, 6.0, 6.0, 6.0}},
                                       {{0.2, 0.2, 0.2, 0.2}, {0.4, 0.4, 0.4, 0.4}},
                                       {100.0, 300.0});
    ClockGroupModel clock = reg_count_model(ds, 1e-9);
    RegressorParams params;
    params.l2_lambda = 1e-9;
    LogicGroupModel model = train_logic(ds, params, clock);

    const LogicComponentModel& lm = model.components.at("ALU");
    WorkloadEvents probe;
    probe.config_id = "C1";
    probe.workload_id = "Wx";
    probe.cycles = 1;
    probe.events = {{"ops", 0.25}};
    double variation = predict_gbrt(lm.variation, lm.full_layout.assemble(ds.configs[0], &probe));
    CHECK(variation == doctest::Approx(1.0).epsilon(1e-9));

    LogicComponentPower p = predict_logic_component(lm, ds.configs[0], probe);
    double stable = predict_linear(lm.stable, lm.hw_layout.assemble(ds.configs[0], nullptr));
    CHECK(p.comb_power == doctest::Approx(stable).epsilon(1e-9));
    CHECK(stable == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("train_logic: zero register power everywhere predicts zero") {
    TrainingDataset ds = logic_dataset({{3.0, 4.0, 5.0, 4.0}, {6.0, 8.0, 10.0, 8.0}},
                                       {{0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0}},
                                       {100.0, 300.0});
    ClockGroupModel clock = reg_count_model(ds, 1e-9);
    LogicGroupModel model = train_logic(ds, RegressorParams{}, clock);
    WorkloadEvents probe;
    probe.config_id = "C1";
    probe.workload_id = "Wx";
    probe.cycles = 1;
    probe.events = {{"ops", 0.3}};
    LogicComponentPower p = predict_logic_component(model.components.at("ALU"), ds.configs[0], probe);
    CHECK(p.register_power == 0.0);
}

TEST_CASE("train_logic: zero stable power is an error naming the config") {
    TrainingDataset ds = logic_dataset({{0.0, 0.0, 0.0, 0.0}, {6.0, 8.0, 10.0, 8.0}},
                                       {{0.1, 0.1, 0.1, 0.1}, {0.2, 0.2, 0.2, 0.2}},
                                       {100.0, 300.0});
    ClockGroupModel clock = reg_count_model(ds, 1e-9);
    std::string message;
    try {
        train_logic(ds, RegressorParams{}, clock);
    } catch (const InputError& e) {
        message = e.what();
    }
    CHECK(message.find("C1") != std::string::npos);
    CHECK(message.find("stable") != std::string::npos);
}

TEST_CASE("train_logic: variation labels average to one per config") {
    TrainingDataset ds = logic_dataset({{2.0, 4.0, 6.0, 4.0}, {5.0, 10.0, 15.0, 10.0}},
                                       {{0.1, 0.2, 0.3, 0.2}, {0.2, 0.4, 0.6, 0.4}},
                                       {100.0, 300.0});
    ClockGroupModel clock = reg_count_model(ds, 1e-9);
    RegressorParams params;
    params.l2_lambda = 1e-9;
    LogicGroupModel model = train_logic(ds, params, clock);
    const LogicComponentModel& lm = model.components.at("ALU");

    // at the training points, the fitted variation averages to 1 per config
    for (const auto& config : ds.configs) {
        double sum = 0.0;
        int n = 0;
        for (const auto& e : ds.events) {
            if (e.config_id != config.config_id) continue;
            sum += predict_gbrt(lm.variation, lm.full_layout.assemble(config, &e));
            ++n;
        }
        CHECK(sum / n == doctest::Approx(1.0).epsilon(1e-3));
    }

    // stable model recovers the per-config mean comb power
    double stable1 = predict_linear(lm.stable, lm.hw_layout.assemble(ds.configs[0], nullptr));
    CHECK(stable1 == doctest::Approx(4.0).epsilon(1e-6));
    double stable2 = predict_linear(lm.stable, lm.hw_layout.assemble(ds.configs[1], nullptr));
    CHECK(stable2 == doctest::Approx(10.0).epsilon(1e-6));
}

TEST_CASE("predict_logic: factorization is invariant to compensating rescaling") {
    DesignConfig c;
    c.config_id = "C";
    c.params = {{"DecodeWidth", 2.0}};
    c.component_params = {{"ALU", {"DecodeWidth"}}};
    WorkloadEvents e;
    e.config_id = "C";
    e.workload_id = "W";
    e.cycles = 1;

    auto make = [&](double reg_count, double activity) {
        LogicComponentModel m;
        m.hw_layout = FeatureLayout::hardware_only(c, c.component_params.at("ALU"));
        m.full_layout = m.hw_layout;
        m.reg_count.weights = {0.0};
        m.reg_count.intercept = reg_count;
        m.activity.base_score = activity;
        m.activity.n_features = 1;
        m.stable.weights = {0.0};
        m.stable.intercept = 5.0;
        m.variation.base_score = 1.2;
        m.variation.n_features = 1;
        return m;
    };
    LogicComponentPower a = predict_logic_component(make(400.0, 0.001), c, e);
    LogicComponentPower b = predict_logic_component(make(100.0, 0.004), c, e);
    CHECK(a.register_power == doctest::Approx(b.register_power).epsilon(1e-12));
    CHECK(a.comb_power == doctest::Approx(5.0 * 1.2).epsilon(1e-12));

    // outputs are clamped at zero
    LogicComponentPower neg = predict_logic_component(make(-50.0, 0.001), c, e);
    CHECK(neg.register_power == 0.0);
}

TEST_CASE("predict_logic: untrained component is an error") {
    DesignConfig c;
    c.config_id = "C";
    c.params = {{"DecodeWidth", 2.0}};
    c.component_params = {{"ALU", {"DecodeWidth"}}, {"FPU", {"DecodeWidth"}}};
    WorkloadEvents e;
    e.cycles = 1;
    LogicGroupModel model; // empty
    CHECK_THROWS_AS(predict_logic(model, c, e), ModelError);
}
