#include <benchmark/benchmark.h>

#include <vector>

#include "autopower/pipeline.hpp"
#include "autopower/synth.hpp"

namespace {

using namespace autopower;

const SynthOutput& synth_output() {
    static SynthOutput out = generate(default_generative_spec());
    return out;
}

PipelineParams bench_params() {
    PipelineParams params;
    params.regressor.l2_lambda = 1e-9;
    return params;
}

const AutoPowerModel& trained_model() {
    static AutoPowerModel model = [] {
        const SynthOutput& out = synth_output();
        std::vector<std::string> ids{"C1", "C15"};
        return train(out.dataset, out.tech, bench_params(), ids);
    }();
    return model;
}

void BM_Generate(benchmark::State& state) {
    GenerativeSpec spec = default_generative_spec();
    spec.traces.clear();
    for (auto _ : state) {
        SynthOutput out = generate(spec);
        benchmark::DoNotOptimize(out.dataset.events.size());
    }
}
BENCHMARK(BM_Generate);

void BM_TrainTwoConfigs(benchmark::State& state) {
    const SynthOutput& out = synth_output();
    std::vector<std::string> ids{"C1", "C15"};
    PipelineParams params = bench_params();
    for (auto _ : state) {
        AutoPowerModel model = train(out.dataset, out.tech, params, ids);
        benchmark::DoNotOptimize(model.clock.components.size());
    }
}
BENCHMARK(BM_TrainTwoConfigs);

void BM_PredictOne(benchmark::State& state) {
    const SynthOutput& out = synth_output();
    const AutoPowerModel& model = trained_model();
    const DesignConfig& config = *out.dataset.find_config("C8");
    const WorkloadEvents& events = *out.dataset.find_events("C8", "W1");
    for (auto _ : state) {
        PowerReport report = predict(model, config, events);
        benchmark::DoNotOptimize(report.grand_total);
    }
}
BENCHMARK(BM_PredictOne);

void BM_PredictTrace120(benchmark::State& state) {
    const SynthOutput& out = synth_output();
    const AutoPowerModel& model = trained_model();
    const OracleTrace& trace = out.oracle.traces.front();
    const DesignConfig& config = *out.dataset.find_config(trace.config_id);
    for (auto _ : state) {
        PowerTrace predicted = predict_trace(model, config, trace.windows, trace.window_cycles);
        benchmark::DoNotOptimize(predicted.windows.size());
    }
}
BENCHMARK(BM_PredictTrace120);

void BM_FitGbrt(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    SplitMix64 rng(7);
    Matrix X(n, 6);
    std::vector<double> y(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < 6; ++c) X.at(r, c) = rng.uniform(0.0, 10.0);
        y[r] = X.at(r, 0) * 2.0 + rng.uniform(0.0, 1.0);
    }
    RegressorParams params;
    for (auto _ : state) {
        TreeEnsemble m = fit_gbrt(X, y, params);
        benchmark::DoNotOptimize(m.trees.size());
    }
}
BENCHMARK(BM_FitGbrt)->Arg(16)->Arg(64)->Arg(256);

void BM_FitScalingLaw(benchmark::State& state) {
    const SynthOutput& out = synth_output();
    const SramPosition& position = out.dataset.sram_positions.front();
    std::vector<std::pair<const DesignConfig*, BlockGeometry>> samples;
    for (const auto& l : out.dataset.sram_geometry)
        if (l.position == position.position)
            samples.emplace_back(out.dataset.find_config(l.config_id), l.geometry);
    ScalingFitOptions options;
    for (auto _ : state) {
        ScalingLaw law = fit_scaling_law(samples, position, options);
        benchmark::DoNotOptimize(law.fit_error);
    }
}
BENCHMARK(BM_FitScalingLaw);

} // namespace

BENCHMARK_MAIN();
