#include "autopower/sram_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace autopower {

namespace {

std::vector<std::string> sorted_copy(std::span<const std::string> names) {
    std::vector<std::string> out(names.begin(), names.end());
    std::sort(out.begin(), out.end());
    return out;
}

double product_of(const DesignConfig& config, const std::vector<std::string>& names) {
    double p = 1.0;
    for (const auto& n : names) {
        auto it = config.params.find(n);
        if (it == config.params.end())
            throw InputError("config " + config.config_id + ": missing parameter '" + n + "'");
        p *= it->second;
    }
    return p;
}

struct SubsetFit {
    std::vector<std::string> params;
    double k = 0.0;
    double error = 0.0; // relative RMS
};

// Least squares through the origin for y = k * x, with the relative RMS
// error of the fit. Targets are geometry products, always >= 1.
SubsetFit fit_subset(const std::vector<std::string>& subset, std::span<const double> x,
                     std::span<const double> y) {
    SubsetFit fit;
    fit.params = subset;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    fit.k = sxx > 0.0 ? sxy / sxx : 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double rel = (fit.k * x[i] - y[i]) / y[i];
        sq += rel * rel;
    }
    fit.error = std::sqrt(sq / static_cast<double>(x.size()));
    return fit;
}

// Prefers lower error, then fewer parameters, then lexicographically
// smaller parameter names.
bool better_fit(const SubsetFit& a, const SubsetFit& b) {
    if (a.error != b.error) return a.error < b.error;
    if (a.params.size() != b.params.size()) return a.params.size() < b.params.size();
    return a.params < b.params;
}

SubsetFit best_proportional_law(
    std::span<const std::pair<const DesignConfig*, BlockGeometry>> samples,
    const std::vector<std::string>& names, int max_subset,
    const std::function<double(const BlockGeometry&)>& target) {
    std::vector<double> y;
    y.reserve(samples.size());
    for (const auto& [config, geom] : samples) y.push_back(target(geom));

    SubsetFit best;
    bool have_best = false;
    const std::size_t n = names.size();
    const std::size_t limit = std::size_t{1} << n;
    // Bitmask enumeration over the sorted names visits subsets in an order
    // where ties resolve correctly via better_fit.
    for (std::size_t mask = 0; mask < limit; ++mask) {
        std::vector<std::string> subset;
        for (std::size_t b = 0; b < n; ++b)
            if (mask & (std::size_t{1} << b)) subset.push_back(names[b]);
        if (static_cast<int>(subset.size()) > max_subset) continue;
        std::vector<double> x;
        x.reserve(samples.size());
        for (const auto& [config, geom] : samples) x.push_back(product_of(*config, subset));
        SubsetFit fit = fit_subset(subset, x, y);
        if (!std::isfinite(fit.k) || !std::isfinite(fit.error)) continue;
        if (!have_best || better_fit(fit, best)) {
            best = fit;
            have_best = true;
        }
    }
    if (!have_best) throw InputError("fit_scaling_law: no fittable parameter subset");
    return best;
}

} // namespace

ScalingLaw fit_scaling_law(
    std::span<const std::pair<const DesignConfig*, BlockGeometry>> samples,
    const SramPosition& position, const ScalingFitOptions& options, TrainDiagnostics* diag) {
    if (samples.size() < 2)
        throw InputError("fit_scaling_law[" + position.position + "]: need at least 2 samples");
    if (options.max_subset < 1)
        throw InputError("fit_scaling_law: max_subset must be >= 1");

    const std::vector<std::string> names = sorted_copy(position.params);

    SubsetFit cap = best_proportional_law(samples, names, options.max_subset,
                                          [](const BlockGeometry& g) {
                                              return static_cast<double>(g.width) *
                                                     static_cast<double>(g.depth) *
                                                     static_cast<double>(g.count);
                                          });
    SubsetFit thr = best_proportional_law(samples, names, options.max_subset,
                                          [](const BlockGeometry& g) {
                                              return static_cast<double>(g.width) *
                                                     static_cast<double>(g.count);
                                          });

    ScalingLaw law;
    law.capacity_params = cap.params;
    law.k_cap = cap.k;
    law.throughput_params = thr.params;
    law.k_thr = thr.k;
    law.fit_error = std::max(cap.error, thr.error);

    // The multi-bank divisor is the block count of the smallest training
    // config (by capacity); Width = Throughput / divisor.
    std::size_t smallest = 0;
    double smallest_cap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const BlockGeometry& g = samples[i].second;
        double c = static_cast<double>(g.width) * static_cast<double>(g.depth) *
                   static_cast<double>(g.count);
        if (c < smallest_cap ||
            (c == smallest_cap &&
             samples[i].first->config_id < samples[smallest].first->config_id)) {
            smallest_cap = c;
            smallest = i;
        }
    }
    law.count_divisor = samples[smallest].second.count;
    law.mask_sectors = samples[smallest].second.mask_sectors;

    for (const auto& [config, geom] : samples) {
        ScalingLaw::TrainingSample ts;
        ts.params.reserve(names.size());
        for (const auto& n : names) ts.params.push_back(config->params.at(n));
        ts.geometry = geom;
        law.training_samples.push_back(std::move(ts));
    }

    law.resolved = law.fit_error <= options.accept_threshold;
    if (diag) {
        auto join = [](const std::vector<std::string>& v) {
            std::string s;
            for (const auto& n : v) s += (s.empty() ? "" : ",") + n;
            return s.empty() ? "-" : s;
        };
        diag->note("sram/" + position.position,
                   "capacity {" + join(law.capacity_params) + "} k=" + std::to_string(law.k_cap) +
                       ", throughput {" + join(law.throughput_params) +
                       "} k=" + std::to_string(law.k_thr) +
                       ", fit_error=" + std::to_string(law.fit_error));
        if (!law.resolved)
            diag->warn("sram/" + position.position,
                       "scaling law unresolved (fit_error " + std::to_string(law.fit_error) +
                           " > " + std::to_string(options.accept_threshold) +
                           "); falling back to nearest training geometry");
        else if (law.fit_error > options.exact_threshold)
            diag->warn("sram/" + position.position,
                       "scaling law accepted with fit_error " + std::to_string(law.fit_error));
    }
    return law;
}

BlockGeometry predict_block_geometry(const ScalingLaw& law, const DesignConfig& config,
                                     const SramPosition& position) {
    const std::vector<std::string> names = sorted_copy(position.params);
    if (!law.resolved) {
        // Nearest training config in the position's parameter space.
        if (law.training_samples.empty())
            throw ModelError("predict_block_geometry[" + position.position +
                             "]: unresolved law without training samples");
        std::vector<double> p;
        p.reserve(names.size());
        for (const auto& n : names) {
            auto it = config.params.find(n);
            if (it == config.params.end())
                throw InputError("config " + config.config_id + ": missing parameter '" + n + "'");
            p.push_back(it->second);
        }
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < law.training_samples.size(); ++i) {
            double d = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k) {
                double delta = p[k] - law.training_samples[i].params[k];
                d += delta * delta;
            }
            if (d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        return law.training_samples[best].geometry;
    }

    double capacity = law.k_cap * product_of(config, law.capacity_params);
    double throughput = law.k_thr * product_of(config, law.throughput_params);
    double width = throughput / static_cast<double>(law.count_divisor);
    if (!(capacity > 0.0) || !(throughput > 0.0) || !(width > 0.0))
        throw ModelError("predict_block_geometry[" + position.position +
                         "]: formula evaluates to a non-positive value");
    double count = throughput / width;
    double depth = capacity / throughput;
    if (!(depth > 0.0))
        throw ModelError("predict_block_geometry[" + position.position +
                         "]: depth evaluates to a non-positive value");

    BlockGeometry g;
    g.width = std::max<std::int64_t>(1, std::llround(width));
    g.depth = std::max<std::int64_t>(1, std::llround(depth));
    g.count = std::max<std::int64_t>(1, std::llround(count));
    g.mask_sectors = (law.mask_sectors >= 1 && g.width % law.mask_sectors == 0)
                         ? law.mask_sectors
                         : 1;
    return g;
}

MacroPlan map_block_to_macros(const BlockGeometry& geometry, const TechLibrary& tech) {
    if (tech.macros.empty()) throw InputError("map_block_to_macros: empty macro library");

    // Canonical candidate order so ties after (count, waste, area) are
    // impossible: macro shapes are unique.
    std::vector<MacroSpec> macros = tech.macros;
    std::sort(macros.begin(), macros.end(), [](const MacroSpec& a, const MacroSpec& b) {
        if (a.width != b.width) return a.width < b.width;
        return a.depth < b.depth;
    });

    MacroPlan best;
    bool have_best = false;
    std::int64_t best_count = 0, best_waste = 0, best_area = 0;
    for (const auto& m : macros) {
        std::int64_t n_col = (geometry.depth + m.depth - 1) / m.depth;
        std::int64_t n_row = (geometry.width + m.width - 1) / m.width;
        std::int64_t per_block = n_col * n_row;
        std::int64_t waste = n_col * m.depth * n_row * m.width - geometry.depth * geometry.width;
        std::int64_t area = m.width * m.depth;
        bool better = !have_best;
        if (have_best) {
            if (per_block != best_count)
                better = per_block < best_count;
            else if (waste != best_waste)
                better = waste < best_waste;
            else
                better = area < best_area;
        }
        if (better) {
            best.macro = m;
            best.n_col = n_col;
            best.n_row = n_row;
            best.total_macros = per_block * geometry.count;
            best_count = per_block;
            best_waste = waste;
            best_area = area;
            have_best = true;
        }
    }
    return best;
}

MacroActivity map_activity_to_macro(const BlockActivity& activity, const MacroPlan& plan) {
    MacroActivity out;
    out.f_read_macro = activity.f_read_block / static_cast<double>(plan.n_col);
    out.f_write_macro = activity.f_write_block / static_cast<double>(plan.n_col);
    return out;
}

double fit_pin_toggle_const(std::span<const PinConstSample> samples, bool* clamped) {
    if (clamped) *clamped = false;
    if (samples.empty()) throw InputError("fit_pin_toggle_const: need at least 1 sample");
    double sum = 0.0;
    for (const auto& s : samples) {
        double energy = static_cast<double>(s.plan.total_macros) *
                        (s.activity.f_read_macro * s.plan.macro.p_read +
                         s.activity.f_write_macro * s.plan.macro.p_write);
        sum += s.measured_power - energy;
    }
    double c = sum / static_cast<double>(samples.size());
    if (c < 0.0) {
        if (clamped) *clamped = true;
        return 0.0;
    }
    return c;
}

SramGroupModel train_sram(const TrainingDataset& dataset, const TechLibrary& tech,
                          const RegressorParams& params, const ScalingFitOptions& options,
                          TrainDiagnostics* diag) {
    params.validate();
    SramGroupModel model;
    for (const auto& position : dataset.sram_positions) {
        SramPositionModel pm;
        pm.position = position;

        std::vector<std::pair<const DesignConfig*, BlockGeometry>> geom_samples;
        for (const auto& l : dataset.sram_geometry) {
            if (l.position != position.position) continue;
            const DesignConfig* config = dataset.find_config(l.config_id);
            geom_samples.emplace_back(config, l.geometry);
        }
        for (const auto& config : dataset.configs) {
            bool found = std::any_of(geom_samples.begin(), geom_samples.end(),
                                     [&](const auto& s) { return s.first == &config; });
            if (!found)
                throw InputError("train_sram: missing geometry label for (" + config.config_id +
                                 ", " + position.position + ")");
        }
        pm.law = fit_scaling_law(geom_samples, position, options, diag);

        std::vector<std::vector<double>> rows;
        std::vector<double> read_labels, write_labels;
        std::vector<PinConstSample> const_samples;
        std::map<std::string, const BlockGeometry*> geometry_of;
        for (const auto& [config, geom] : geom_samples) geometry_of[config->config_id] = &geom;

        for (const auto& l : dataset.sram_activity) {
            if (l.position != position.position) continue;
            const DesignConfig* config = dataset.find_config(l.config_id);
            const WorkloadEvents* ev = dataset.find_events(l.config_id, l.workload_id);
            if (!config || !ev)
                throw InputError("train_sram: incomplete labels for (" + l.config_id + ", " +
                                 l.workload_id + ", " + position.position + ")");
            if (pm.full_layout.hw.empty() && pm.full_layout.events.empty())
                pm.full_layout = FeatureLayout::with_events(*config, position.params, *ev);
            rows.push_back(pm.full_layout.assemble(*config, ev));
            read_labels.push_back(l.activity.f_read_block);
            write_labels.push_back(l.activity.f_write_block);

            // Pin-constant sample from the golden geometry and activity.
            MacroPlan plan = map_block_to_macros(*geometry_of.at(l.config_id), tech);
            const_samples.push_back(
                {map_activity_to_macro(l.activity, plan), plan, l.sram_power});
        }
        if (rows.empty())
            throw InputError("train_sram: no activity labels for position '" + position.position +
                             "'");

        pm.read_activity = fit_gbrt(Matrix::from_rows(rows), read_labels, params);
        pm.write_activity = fit_gbrt(Matrix::from_rows(rows), write_labels, params);
        bool clamped = false;
        pm.pin_toggle_const = fit_pin_toggle_const(const_samples, &clamped);
        if (diag && clamped)
            diag->warn("sram/" + position.position, "pin-toggle constant clamped to 0");
        if (diag)
            diag->note("sram/" + position.position,
                       "activity models trained on " + std::to_string(rows.size()) +
                           " samples, pin const " + std::to_string(pm.pin_toggle_const) + " mW");
        model.positions[position.position] = std::move(pm);
    }
    return model;
}

double predict_sram_power(const SramPositionModel& model, const DesignConfig& config,
                          const WorkloadEvents& event_rates, const TechLibrary& tech,
                          SramPredictionDetail* detail) {
    BlockGeometry geom = predict_block_geometry(model.law, config, model.position);
    MacroPlan plan = map_block_to_macros(geom, tech);

    std::vector<double> features = model.full_layout.assemble(config, &event_rates);
    BlockActivity activity;
    activity.f_read_block = std::max(predict_gbrt(model.read_activity, features), 0.0);
    activity.f_write_block = std::max(predict_gbrt(model.write_activity, features), 0.0);
    MacroActivity macro = map_activity_to_macro(activity, plan);

    double power = static_cast<double>(plan.total_macros) *
                       (macro.f_read_macro * plan.macro.p_read +
                        macro.f_write_macro * plan.macro.p_write) +
                   model.pin_toggle_const;
    if (detail) {
        detail->geometry = geom;
        detail->plan = plan;
        detail->block_activity = activity;
        detail->macro_activity = macro;
        detail->power = power;
        detail->used_fallback = !model.law.resolved;
    }
    return power;
}

} // namespace autopower
