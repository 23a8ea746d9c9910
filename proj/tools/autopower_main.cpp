// Command-line front end: train, predict, evaluate, synth and trace
// subcommands over the dataset / tech-library / model-bundle JSON formats.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "autopower/pipeline.hpp"
#include "autopower/synth.hpp"

namespace {

using namespace autopower;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUserError = 2;

std::vector<std::string> split_ids(const std::string& csv) {
    std::vector<std::string> out;
    std::string current;
    for (char c : csv) {
        if (c == ',') {
            if (!current.empty()) out.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) out.push_back(current);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path + ": cannot open for writing");
    out << text;
}

void print_diagnostics(const TrainDiagnostics& diag, bool quiet) {
    if (!quiet)
        for (const auto& note : diag.info)
            std::cout << "  " << note.context << ": " << note.message << "\n";
    for (const auto& warning : diag.warnings)
        std::cout << "  warning " << warning.context << ": " << warning.message << "\n";
}

std::string format_optional(const std::optional<double>& v) {
    if (!v) return "n/a";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.3f", *v);
    return buffer;
}

std::string format_metric(const MetricSet& m) {
    char buffer[128];
    std::snprintf(buffer, sizeof(buffer), "MAPE %.2f%% R2 %s PearsonR %s", m.mape,
                  format_optional(m.r2).c_str(), format_optional(m.pearson_r).c_str());
    return buffer;
}

struct CommonOptions {
    bool quiet = false;
};

struct TrainOptions {
    std::string dataset_path;
    std::string tech_path;
    std::string train_configs;
    std::string out_path;
    std::string baseline_variant;
    std::string baseline_out;
    PipelineParams params;
};

int run_train(const TrainOptions& opt, const CommonOptions& common) {
    TrainingDataset dataset = load_dataset(opt.dataset_path);
    TechLibrary tech = load_tech_library(opt.tech_path);
    std::vector<std::string> ids = split_ids(opt.train_configs);

    TrainDiagnostics diag;
    AutoPowerModel model = train(dataset, tech, opt.params, ids, &diag);
    save_model(model, opt.out_path);

    std::cout << "trained on " << model.manifest.train_config_ids.size() << " configs, "
              << model.manifest.workload_ids.size() << " workloads\n";
    print_diagnostics(diag, common.quiet);
    std::cout << "model written: " << opt.out_path << "\n";

    if (!opt.baseline_variant.empty()) {
        BaselineVariant variant = baseline_variant_from_string(opt.baseline_variant);
        TrainDiagnostics bdiag;
        BaselineModel baseline = train_baseline(dataset, opt.params, variant, ids, &bdiag);
        std::string path = opt.baseline_out;
        if (path.empty()) {
            std::filesystem::path p(opt.out_path);
            p.replace_extension(".baseline.json");
            path = p.string();
        }
        save_baseline(baseline, path);
        std::cout << "baseline (" << to_string(variant) << ") written: " << path << "\n";
    }
    return kExitOk;
}

struct PredictOptions {
    std::string model_path;
    std::string dataset_path;
    std::string config_id;
    std::string workload_id;
    std::string out_path;
};

int run_predict(const PredictOptions& opt) {
    AutoPowerModel model = load_model(opt.model_path);
    TrainingDataset dataset = load_dataset(opt.dataset_path);
    const DesignConfig* config = dataset.find_config(opt.config_id);
    if (!config) throw InputError("unknown config id '" + opt.config_id + "'");
    const WorkloadEvents* events = dataset.find_events(opt.config_id, opt.workload_id);
    if (!events)
        throw InputError("no events for (" + opt.config_id + ", " + opt.workload_id + ")");

    PowerReport report = predict(model, *config, *events);
    nlohmann::json j;
    j["config_id"] = opt.config_id;
    j["workload_id"] = opt.workload_id;
    nlohmann::json comps = nlohmann::json::object();
    for (const auto& [name, p] : report.components) {
        comps[name] = {{"clock_power", p.clock_power},
                       {"sram_power", p.sram_power},
                       {"register_power", p.register_power},
                       {"comb_power", p.comb_power}};
    }
    j["components"] = comps;
    j["totals"] = {{"clock", report.clock_total},
                   {"sram", report.sram_total},
                   {"register", report.register_total},
                   {"comb", report.comb_total},
                   {"total", report.grand_total}};
    std::string text = j.dump(2) + "\n";
    if (opt.out_path.empty())
        std::cout << text;
    else {
        write_file(opt.out_path, text);
        std::cout << "report written: " << opt.out_path << "\n";
    }
    return kExitOk;
}

struct EvaluateOptions {
    std::string model_path;
    std::string dataset_path;
    std::string test_configs;
    std::string out_path;
    std::string csv_path;
    std::string compare_path;
};

int run_evaluate(const EvaluateOptions& opt) {
    AutoPowerModel model = load_model(opt.model_path);
    TrainingDataset dataset = load_dataset(opt.dataset_path);

    std::vector<std::string> test_ids = split_ids(opt.test_configs);
    if (test_ids.empty()) {
        // default: every config the model was not trained on
        for (const auto& id : dataset.config_ids())
            if (std::find(model.manifest.train_config_ids.begin(),
                          model.manifest.train_config_ids.end(),
                          id) == model.manifest.train_config_ids.end())
                test_ids.push_back(id);
    }

    EvaluationReport report = evaluate_model(model, dataset, test_ids);
    std::cout << "total: " << format_metric(report.total) << "\n";
    for (const auto& [group, m] : report.per_group)
        std::cout << "group " << group << ": " << format_metric(m) << "\n";

    std::string json_text = report_to_json_text(report);
    if (!opt.compare_path.empty()) {
        BaselineModel baseline = load_baseline(opt.compare_path);
        EvaluationReport base_report = evaluate_baseline(baseline, dataset, test_ids);
        std::cout << "method comparison\n";
        std::printf("  %-24s %10s %8s %10s\n", "method", "MAPE", "R2", "PearsonR");
        auto row = [](const std::string& name, const MetricSet& m) {
            std::printf("  %-24s %9.2f%% %8s %10s\n", name.c_str(), m.mape,
                        format_optional(m.r2).c_str(), format_optional(m.pearson_r).c_str());
        };
        row("autopower", report.total);
        row("baseline-" + to_string(baseline.variant), base_report.total);

        nlohmann::json j = nlohmann::json::parse(json_text);
        j["comparison"] = {{"baseline_variant", to_string(baseline.variant)},
                           {"baseline_mape_percent", base_report.total.mape},
                           {"baseline_r2", base_report.total.r2
                                               ? nlohmann::json(*base_report.total.r2)
                                               : nlohmann::json(nullptr)}};
        json_text = j.dump(2) + "\n";
    }
    if (!opt.out_path.empty()) write_file(opt.out_path, json_text);
    if (!opt.csv_path.empty()) write_file(opt.csv_path, report_to_csv_text(report));
    return kExitOk;
}

struct SynthOptions {
    std::string spec_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    bool emit_traces = true;
};

int run_synth(const SynthOptions& opt) {
    GenerativeSpec spec =
        opt.spec_path.empty() ? default_generative_spec() : load_generative_spec(opt.spec_path);
    if (opt.seed) spec.seed = *opt.seed;

    std::filesystem::create_directories(opt.out_dir);
    SynthOutput out = generate(spec);
    std::filesystem::path dir(opt.out_dir);
    save_dataset(out.dataset, (dir / "dataset.json").string());
    save_tech_library(out.tech, (dir / "tech.json").string());
    save_oracle(out.oracle, (dir / "oracle.json").string());
    std::cout << "dataset: " << out.dataset.configs.size() << " configs, "
              << out.dataset.workload_ids().size() << " workloads, "
              << out.dataset.sram_positions.size() << " positions\n";

    if (opt.emit_traces) {
        for (const auto& t : out.oracle.traces) {
            TraceInput input;
            input.config = *out.dataset.find_config(t.config_id);
            input.window_cycles = t.window_cycles;
            input.windows = t.windows;
            std::string path = (dir / ("trace_" + t.trace_id + ".json")).string();
            write_file(path, trace_input_to_json_text(input));
            std::cout << "trace input written: " << path << "\n";
        }
    }
    std::cout << "written: dataset.json tech.json oracle.json in " << opt.out_dir << "\n";
    return kExitOk;
}

struct TraceOptions {
    std::string model_path;
    std::string windows_path;
    std::string out_path;
    std::optional<int> window_override;
    std::string golden_path;
    std::string trace_id;
};

int run_trace(const TraceOptions& opt) {
    AutoPowerModel model = load_model(opt.model_path);
    TraceInput input = load_trace_input(opt.windows_path);

    int window_cycles = kDefaultWindowCycles;
    if (opt.window_override) {
        window_cycles = *opt.window_override;
    } else if (input.window_cycles != kDefaultWindowCycles) {
        throw InputError("windows file uses " + std::to_string(input.window_cycles) +
                         "-cycle windows; pass --window " + std::to_string(input.window_cycles) +
                         " to accept");
    }

    PowerTrace trace = predict_trace(model, input.config, input.windows, window_cycles);
    write_file(opt.out_path, trace_to_csv_text(trace));
    std::cout << "windows " << trace.windows.size() << "  window_cycles " << trace.window_cycles
              << "\n";
    std::cout << "trace written: " << opt.out_path << "\n";

    if (!opt.golden_path.empty()) {
        SynthOracle oracle = load_oracle(opt.golden_path);
        const OracleTrace* golden = nullptr;
        for (const auto& t : oracle.traces)
            if (t.trace_id == opt.trace_id) golden = &t;
        if (!golden) throw InputError("oracle has no trace '" + opt.trace_id + "'");
        if (golden->window_truth.size() != trace.windows.size())
            throw InputError("trace window count differs from the oracle");

        double max_pred = 0.0, max_true = 0.0;
        double min_pred = 1e300, min_true = 1e300;
        double err_sum = 0.0;
        for (std::size_t i = 0; i < trace.windows.size(); ++i) {
            double p = trace.windows[i].grand_total;
            double g = golden->window_truth[i].total;
            max_pred = std::max(max_pred, p);
            max_true = std::max(max_true, g);
            min_pred = std::min(min_pred, p);
            min_true = std::min(min_true, g);
            err_sum += std::fabs(p - g) / g;
        }
        double max_err = std::fabs(max_pred - max_true) / max_true * 100.0;
        double min_err = std::fabs(min_pred - min_true) / min_true * 100.0;
        double avg_err = err_sum / static_cast<double>(trace.windows.size()) * 100.0;
        std::printf("Max Power Error %.1f%%  Min Power Error %.1f%%  Average Error %.1f%%\n",
                    max_err, min_err, avg_err);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Few-shot architecture-level CPU power modeling by power-group decoupling"};
    app.require_subcommand(1);

    CommonOptions common;

    TrainOptions train_opt;
    CLI::App* cmd_train = app.add_subcommand("train", "Train a power model from a dataset");
    cmd_train->add_flag("-q,--quiet", common.quiet, "Suppress per-model training diagnostics");
    cmd_train->add_option("--dataset", train_opt.dataset_path, "Dataset JSON file")->required();
    cmd_train->add_option("--tech", train_opt.tech_path, "Technology library JSON file")
        ->required();
    cmd_train
        ->add_option("--train-configs", train_opt.train_configs,
                     "Comma-separated config ids (at least 2)")
        ->required();
    cmd_train->add_option("--out", train_opt.out_path, "Output model bundle path")->required();
    cmd_train->add_option("--baseline", train_opt.baseline_variant,
                          "Also train a baseline: monolithic or per-component");
    cmd_train->add_option("--baseline-out", train_opt.baseline_out,
                          "Baseline bundle path (default: <out>.baseline.json)");
    cmd_train
        ->add_option("--l2-lambda", train_opt.params.regressor.l2_lambda,
                     "Ridge penalty for the linear sub-models")
        ->envname("AUTOPOWER_L2_LAMBDA")
        ->capture_default_str();
    cmd_train
        ->add_option("--n-trees", train_opt.params.regressor.n_trees,
                     "Boosting rounds per tree ensemble")
        ->envname("AUTOPOWER_N_TREES")
        ->capture_default_str();
    cmd_train->add_option("--max-depth", train_opt.params.regressor.max_depth, "Tree depth limit")
        ->envname("AUTOPOWER_MAX_DEPTH")
        ->capture_default_str();
    cmd_train
        ->add_option("--learning-rate", train_opt.params.regressor.learning_rate,
                     "Boosting learning rate in (0,1]")
        ->envname("AUTOPOWER_LEARNING_RATE")
        ->capture_default_str();
    cmd_train
        ->add_option("--min-samples-leaf", train_opt.params.regressor.min_samples_leaf,
                     "Minimum samples per tree leaf")
        ->envname("AUTOPOWER_MIN_SAMPLES_LEAF")
        ->capture_default_str();
    cmd_train
        ->add_option("--max-subset", train_opt.params.scaling.max_subset,
                     "Largest parameter subset tried by the scaling-law fit")
        ->envname("AUTOPOWER_MAX_SUBSET")
        ->capture_default_str();

    PredictOptions predict_opt;
    CLI::App* cmd_predict =
        app.add_subcommand("predict", "Predict one (config, workload) power report");
    cmd_predict->add_option("--model", predict_opt.model_path, "Model bundle")->required();
    cmd_predict->add_option("--dataset", predict_opt.dataset_path, "Dataset with configs/events")
        ->required();
    cmd_predict->add_option("--config", predict_opt.config_id, "Config id")->required();
    cmd_predict->add_option("--workload", predict_opt.workload_id, "Workload id")->required();
    cmd_predict->add_option("--out", predict_opt.out_path, "Write the report here (else stdout)");

    EvaluateOptions eval_opt;
    CLI::App* cmd_eval = app.add_subcommand("evaluate", "Evaluate a model on held-out configs");
    cmd_eval->add_option("--model", eval_opt.model_path, "Model bundle")->required();
    cmd_eval->add_option("--dataset", eval_opt.dataset_path, "Dataset JSON file")->required();
    cmd_eval->add_option("--test-configs", eval_opt.test_configs,
                         "Comma-separated config ids (default: all non-training configs)");
    cmd_eval->add_option("--out", eval_opt.out_path, "report.json path");
    cmd_eval->add_option("--csv", eval_opt.csv_path, "report.csv path");
    cmd_eval->add_option("--compare", eval_opt.compare_path,
                         "Baseline bundle for a side-by-side comparison");

    SynthOptions synth_opt;
    CLI::App* cmd_synth =
        app.add_subcommand("synth", "Generate a synthetic dataset with a ground-truth oracle");
    cmd_synth->add_option("--spec", synth_opt.spec_path,
                          "Generative spec JSON (default: built-in 15-config spec)");
    cmd_synth->add_option("--out-dir", synth_opt.out_dir, "Output directory")->required();
    std::int64_t seed_value = -1;
    cmd_synth->add_option("--seed", seed_value, "Override the spec seed");
    cmd_synth->add_flag("--no-traces", "Skip writing trace_<id>.json inputs");

    TraceOptions trace_opt;
    CLI::App* cmd_trace =
        app.add_subcommand("trace", "Predict a windowed power trace from per-window events");
    cmd_trace->add_option("--model", trace_opt.model_path, "Model bundle")->required();
    cmd_trace->add_option("--windows", trace_opt.windows_path, "Windowed-events JSON file")
        ->required();
    cmd_trace->add_option("--out", trace_opt.out_path, "Trace CSV path")->required();
    int window_value = 0;
    CLI::Option* window_flag =
        cmd_trace->add_option("--window", window_value, "Window length in cycles (default 50)");
    cmd_trace->add_option("--golden", trace_opt.golden_path,
                          "oracle.json with trace ground truth");
    cmd_trace->add_option("--trace-id", trace_opt.trace_id, "Trace id inside the oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUserError;
    }

    try {
        if (*cmd_train) return run_train(train_opt, common);
        if (*cmd_predict) return run_predict(predict_opt);
        if (*cmd_eval) return run_evaluate(eval_opt);
        if (*cmd_synth) {
            if (cmd_synth->count("--seed") > 0) {
                if (seed_value < 0) throw InputError("--seed must be >= 0");
                synth_opt.seed = static_cast<std::uint64_t>(seed_value);
            }
            synth_opt.emit_traces = cmd_synth->count("--no-traces") == 0;
            return run_synth(synth_opt);
        }
        if (*cmd_trace) {
            if (window_flag->count() > 0) trace_opt.window_override = window_value;
            return run_trace(trace_opt);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
