#include "autopower/datamodel.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "json_util.hpp"

namespace autopower {

using detail::json;

namespace {

bool finite(double v) { return std::isfinite(v); }

std::vector<std::string> sorted(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return names;
}

template <typename Map>
std::vector<std::string> sorted_keys(const Map& m) {
    std::vector<std::string> keys;
    keys.reserve(m.size());
    for (const auto& [k, v] : m) keys.push_back(k);
    return keys; // std::map iterates in sorted order already
}

} // namespace

// ---- lookups ----------------------------------------------------------------

const DesignConfig* TrainingDataset::find_config(const std::string& config_id) const {
    for (const auto& c : configs)
        if (c.config_id == config_id) return &c;
    return nullptr;
}

const WorkloadEvents* TrainingDataset::find_events(const std::string& config_id,
                                                   const std::string& workload_id) const {
    for (const auto& e : events)
        if (e.config_id == config_id && e.workload_id == workload_id) return &e;
    return nullptr;
}

const SramPosition* TrainingDataset::find_position(const std::string& position) const {
    for (const auto& p : sram_positions)
        if (p.position == position) return &p;
    return nullptr;
}

std::vector<std::string> TrainingDataset::config_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : configs) ids.push_back(c.config_id);
    return sorted(std::move(ids));
}

std::vector<std::string> TrainingDataset::workload_ids() const {
    std::set<std::string> ids;
    for (const auto& e : events) ids.insert(e.workload_id);
    return {ids.begin(), ids.end()};
}

std::vector<std::string> TrainingDataset::component_names() const {
    std::set<std::string> names;
    for (const auto& c : configs)
        for (const auto& [comp, params] : c.component_params) names.insert(comp);
    return {names.begin(), names.end()};
}

void PowerReport::finalize() {
    clock_total = sram_total = register_total = comb_total = 0.0;
    for (const auto& [name, p] : components) {
        clock_total += p.clock_power;
        sram_total += p.sram_power;
        register_total += p.register_power;
        comb_total += p.comb_power;
    }
    grand_total = clock_total + sram_total + register_total + comb_total;
}

// ---- validation --------------------------------------------------------------

void validate(const TechLibrary& tech) {
    if (!(tech.p_reg > 0.0) || !finite(tech.p_reg))
        throw InputError("tech.p_reg: must be > 0");
    if (tech.p_latch < 0.0 || !finite(tech.p_latch))
        throw InputError("tech.p_latch: must be >= 0");
    if (tech.macros.empty()) throw InputError("tech.macros: must not be empty");
    std::set<std::pair<std::int64_t, std::int64_t>> shapes;
    for (std::size_t i = 0; i < tech.macros.size(); ++i) {
        const MacroSpec& m = tech.macros[i];
        const std::string ctx = "tech.macros[" + std::to_string(i) + "]";
        if (m.width < 1) throw InputError(ctx + ".width: must be >= 1");
        if (m.depth < 1) throw InputError(ctx + ".depth: must be >= 1");
        if (m.p_read < 0.0 || !finite(m.p_read)) throw InputError(ctx + ".p_read: must be >= 0");
        if (m.p_write < 0.0 || !finite(m.p_write)) throw InputError(ctx + ".p_write: must be >= 0");
        if (!shapes.insert({m.width, m.depth}).second)
            throw InputError(ctx + ": duplicate macro shape " + std::to_string(m.width) + "x" +
                             std::to_string(m.depth));
    }
}

void validate(const TrainingDataset& ds) {
    std::unordered_set<std::string> config_ids;
    for (const auto& c : ds.configs) {
        const std::string ctx = "configs[" + c.config_id + "]";
        if (c.config_id.empty()) throw InputError("configs[].config_id: must not be empty");
        if (!config_ids.insert(c.config_id).second)
            throw InputError(ctx + ".config_id: duplicate id");
        for (const auto& [name, value] : c.params)
            if (!(value > 0.0) || !finite(value))
                throw InputError(ctx + ".params." + name + ": must be > 0");
        for (const auto& [comp, names] : c.component_params)
            for (const auto& name : names)
                if (!c.params.count(name))
                    throw InputError(ctx + ".component_params." + comp + ": parameter '" + name +
                                     "' not in params");
    }

    std::set<std::pair<std::string, std::string>> event_keys;
    for (const auto& e : ds.events) {
        const std::string ctx = "events[" + e.config_id + "/" + e.workload_id + "]";
        if (!config_ids.count(e.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + e.config_id + "'");
        if (!event_keys.insert({e.config_id, e.workload_id}).second)
            throw InputError(ctx + ": duplicate (config_id, workload_id)");
        if (e.cycles < 1) throw InputError(ctx + ".cycles: must be >= 1");
        for (const auto& [name, v] : e.events)
            if (v < 0.0 || !finite(v)) throw InputError(ctx + ".events." + name + ": must be >= 0");
        for (const auto& [name, v] : e.program_features)
            if (v < 0.0 || !finite(v))
                throw InputError(ctx + ".program_features." + name + ": must be >= 0");
    }

    auto component_known = [&](const std::string& config_id, const std::string& comp) {
        const DesignConfig* c = ds.find_config(config_id);
        return c && c->component_params.count(comp) > 0;
    };
    auto require_events_row = [&](const std::string& config_id, const std::string& workload_id,
                                  const std::string& ctx) {
        if (!event_keys.count({config_id, workload_id}))
            throw InputError(ctx + ": no events row for (" + config_id + ", " + workload_id + ")");
    };

    std::set<std::string> position_names;
    for (const auto& p : ds.sram_positions) {
        const std::string ctx = "sram_positions[" + p.position + "]";
        if (!position_names.insert(p.position).second)
            throw InputError(ctx + ": duplicate position name");
        for (const auto& c : ds.configs) {
            if (!c.component_params.count(p.component))
                throw InputError(ctx + ".component: '" + p.component + "' not declared by config " +
                                 c.config_id);
            for (const auto& name : p.params)
                if (!c.params.count(name))
                    throw InputError(ctx + ".params: parameter '" + name + "' not in config " +
                                     c.config_id);
        }
    }

    std::set<std::pair<std::string, std::string>> cs_keys;
    for (const auto& l : ds.clock_structure) {
        const std::string ctx = "clock_labels.structure[" + l.config_id + "/" + l.component + "]";
        if (!config_ids.count(l.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + l.config_id + "'");
        if (!component_known(l.config_id, l.component))
            throw InputError(ctx + ".component: unknown component '" + l.component + "'");
        if (!cs_keys.insert({l.config_id, l.component}).second)
            throw InputError(ctx + ": duplicate (config_id, component)");
        if (l.register_count < 0.0 || !finite(l.register_count))
            throw InputError(ctx + ".register_count: must be >= 0");
        if (l.gating_rate < 0.0 || l.gating_rate > 1.0 || !finite(l.gating_rate))
            throw InputError(ctx + ".gating_rate: must be in [0,1]");
    }

    std::set<std::tuple<std::string, std::string, std::string>> cp_keys;
    for (const auto& l : ds.clock_power) {
        const std::string ctx =
            "clock_labels.power[" + l.config_id + "/" + l.workload_id + "/" + l.component + "]";
        if (!config_ids.count(l.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + l.config_id + "'");
        require_events_row(l.config_id, l.workload_id, ctx);
        if (!component_known(l.config_id, l.component))
            throw InputError(ctx + ".component: unknown component '" + l.component + "'");
        if (!cp_keys.insert({l.config_id, l.workload_id, l.component}).second)
            throw InputError(ctx + ": duplicate key");
        if (l.clock_power < 0.0 || !finite(l.clock_power))
            throw InputError(ctx + ".clock_power: must be >= 0");
    }

    std::set<std::pair<std::string, std::string>> sg_keys;
    for (const auto& l : ds.sram_geometry) {
        const std::string ctx = "sram_labels.geometry[" + l.config_id + "/" + l.position + "]";
        if (!config_ids.count(l.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + l.config_id + "'");
        if (!position_names.count(l.position))
            throw InputError(ctx + ".position: unknown position '" + l.position + "'");
        if (!sg_keys.insert({l.config_id, l.position}).second)
            throw InputError(ctx + ": duplicate (config_id, position)");
        const BlockGeometry& g = l.geometry;
        if (g.width < 1) throw InputError(ctx + ".width: must be >= 1");
        if (g.depth < 1) throw InputError(ctx + ".depth: must be >= 1");
        if (g.count < 1) throw InputError(ctx + ".count: must be >= 1");
        if (g.mask_sectors < 1) throw InputError(ctx + ".mask_sectors: must be >= 1");
        if (g.width % g.mask_sectors != 0)
            throw InputError(ctx + ".mask_sectors: must divide width");
    }

    std::set<std::tuple<std::string, std::string, std::string>> sa_keys;
    for (const auto& l : ds.sram_activity) {
        const std::string ctx =
            "sram_labels.activity[" + l.config_id + "/" + l.workload_id + "/" + l.position + "]";
        if (!config_ids.count(l.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + l.config_id + "'");
        require_events_row(l.config_id, l.workload_id, ctx);
        if (!position_names.count(l.position))
            throw InputError(ctx + ".position: unknown position '" + l.position + "'");
        if (!sa_keys.insert({l.config_id, l.workload_id, l.position}).second)
            throw InputError(ctx + ": duplicate key");
        if (l.activity.f_read_block < 0.0 || !finite(l.activity.f_read_block))
            throw InputError(ctx + ".f_read_block: must be >= 0");
        if (l.activity.f_write_block < 0.0 || !finite(l.activity.f_write_block))
            throw InputError(ctx + ".f_write_block: must be >= 0");
        if (l.sram_power < 0.0 || !finite(l.sram_power))
            throw InputError(ctx + ".sram_power: must be >= 0");
    }

    std::set<std::tuple<std::string, std::string, std::string>> lg_keys;
    for (const auto& l : ds.logic) {
        const std::string ctx =
            "logic_labels[" + l.config_id + "/" + l.workload_id + "/" + l.component + "]";
        if (!config_ids.count(l.config_id))
            throw InputError(ctx + ".config_id: unknown config '" + l.config_id + "'");
        require_events_row(l.config_id, l.workload_id, ctx);
        if (!component_known(l.config_id, l.component))
            throw InputError(ctx + ".component: unknown component '" + l.component + "'");
        if (!lg_keys.insert({l.config_id, l.workload_id, l.component}).second)
            throw InputError(ctx + ": duplicate key");
        if (l.register_power < 0.0 || !finite(l.register_power))
            throw InputError(ctx + ".register_power: must be >= 0");
        if (l.comb_power < 0.0 || !finite(l.comb_power))
            throw InputError(ctx + ".comb_power: must be >= 0");
    }
}

// ---- json <-> types -----------------------------------------------------------

namespace {

json config_to_json(const DesignConfig& c) {
    json j;
    j["config_id"] = c.config_id;
    j["params"] = detail::number_map_to_json(c.params);
    json cp = json::object();
    for (const auto& [comp, names] : c.component_params) cp[comp] = names;
    j["component_params"] = cp;
    return j;
}

DesignConfig config_from_json(const json& j, const std::string& ctx) {
    DesignConfig c;
    c.config_id = detail::require_string(j, "config_id", ctx);
    c.params = detail::number_map_from_json(detail::require(j, "params", ctx), ctx + ".params");
    const json& cp = detail::require_object(j, "component_params", ctx);
    for (const auto& [comp, names] : cp.items()) {
        if (!names.is_array()) throw InputError(ctx + ".component_params." + comp + ": expected an array");
        std::vector<std::string> list;
        for (const auto& n : names) {
            if (!n.is_string()) throw InputError(ctx + ".component_params." + comp + ": expected strings");
            list.push_back(n.get<std::string>());
        }
        c.component_params[comp] = std::move(list);
    }
    return c;
}

json events_to_json(const WorkloadEvents& e) {
    json j;
    j["config_id"] = e.config_id;
    j["workload_id"] = e.workload_id;
    j["cycles"] = e.cycles;
    j["events"] = detail::number_map_to_json(e.events);
    j["program_features"] = detail::number_map_to_json(e.program_features);
    return j;
}

WorkloadEvents events_from_json(const json& j, const std::string& ctx) {
    WorkloadEvents e;
    e.config_id = detail::require_string(j, "config_id", ctx);
    e.workload_id = detail::require_string(j, "workload_id", ctx);
    std::int64_t cycles = detail::require_int(j, "cycles", ctx);
    if (cycles < 0) throw InputError(ctx + ".cycles: must be >= 0");
    e.cycles = static_cast<std::uint64_t>(cycles);
    e.events = detail::number_map_from_json(detail::require(j, "events", ctx), ctx + ".events");
    e.program_features = detail::number_map_from_json(detail::require(j, "program_features", ctx),
                                                      ctx + ".program_features");
    return e;
}

json geometry_to_json(const BlockGeometry& g) {
    json j;
    j["width"] = g.width;
    j["depth"] = g.depth;
    j["count"] = g.count;
    j["mask_sectors"] = g.mask_sectors;
    return j;
}

BlockGeometry geometry_from_json(const json& j, const std::string& ctx) {
    BlockGeometry g;
    g.width = detail::require_int(j, "width", ctx);
    g.depth = detail::require_int(j, "depth", ctx);
    g.count = detail::require_int(j, "count", ctx);
    g.mask_sectors = detail::require_int(j, "mask_sectors", ctx);
    return g;
}

} // namespace

std::string dataset_to_json_text(const TrainingDataset& ds) {
    json j;
    j["schema_version"] = kDatasetSchemaVersion;

    json configs = json::array();
    for (const auto& c : ds.configs) configs.push_back(config_to_json(c));
    j["configs"] = configs;

    json events = json::array();
    for (const auto& e : ds.events) events.push_back(events_to_json(e));
    j["events"] = events;

    json positions = json::array();
    for (const auto& p : ds.sram_positions) {
        json pj;
        pj["component"] = p.component;
        pj["position"] = p.position;
        pj["params"] = p.params;
        positions.push_back(pj);
    }
    j["sram_positions"] = positions;

    json structure = json::array();
    for (const auto& l : ds.clock_structure) {
        json lj;
        lj["config_id"] = l.config_id;
        lj["component"] = l.component;
        lj["register_count"] = l.register_count;
        lj["gating_rate"] = l.gating_rate;
        structure.push_back(lj);
    }
    json cpower = json::array();
    for (const auto& l : ds.clock_power) {
        json lj;
        lj["config_id"] = l.config_id;
        lj["workload_id"] = l.workload_id;
        lj["component"] = l.component;
        lj["clock_power"] = l.clock_power;
        cpower.push_back(lj);
    }
    j["clock_labels"] = json{{"structure", structure}, {"power", cpower}};

    json geometry = json::array();
    for (const auto& l : ds.sram_geometry) {
        json lj = geometry_to_json(l.geometry);
        lj["config_id"] = l.config_id;
        lj["position"] = l.position;
        geometry.push_back(lj);
    }
    json activity = json::array();
    for (const auto& l : ds.sram_activity) {
        json lj;
        lj["config_id"] = l.config_id;
        lj["workload_id"] = l.workload_id;
        lj["position"] = l.position;
        lj["f_read_block"] = l.activity.f_read_block;
        lj["f_write_block"] = l.activity.f_write_block;
        lj["sram_power"] = l.sram_power;
        activity.push_back(lj);
    }
    j["sram_labels"] = json{{"geometry", geometry}, {"activity", activity}};

    json logic = json::array();
    for (const auto& l : ds.logic) {
        json lj;
        lj["config_id"] = l.config_id;
        lj["workload_id"] = l.workload_id;
        lj["component"] = l.component;
        lj["register_power"] = l.register_power;
        lj["comb_power"] = l.comb_power;
        logic.push_back(lj);
    }
    j["logic_labels"] = logic;

    return detail::dump_canonical(j);
}

TrainingDataset dataset_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    detail::check_schema_version(j, kDatasetSchemaVersion, origin);

    TrainingDataset ds;
    const json& configs = detail::require_array(j, "configs", origin);
    for (std::size_t i = 0; i < configs.size(); ++i)
        ds.configs.push_back(config_from_json(configs[i], origin + ".configs[" + std::to_string(i) + "]"));

    const json& events = detail::require_array(j, "events", origin);
    for (std::size_t i = 0; i < events.size(); ++i)
        ds.events.push_back(events_from_json(events[i], origin + ".events[" + std::to_string(i) + "]"));

    const json& positions = detail::require_array(j, "sram_positions", origin);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const std::string ctx = origin + ".sram_positions[" + std::to_string(i) + "]";
        SramPosition p;
        p.component = detail::require_string(positions[i], "component", ctx);
        p.position = detail::require_string(positions[i], "position", ctx);
        for (const auto& n : detail::require_array(positions[i], "params", ctx)) {
            if (!n.is_string()) throw InputError(ctx + ".params: expected strings");
            p.params.push_back(n.get<std::string>());
        }
        ds.sram_positions.push_back(std::move(p));
    }

    const json& clock = detail::require_object(j, "clock_labels", origin);
    const json& structure = detail::require_array(clock, "structure", origin + ".clock_labels");
    for (std::size_t i = 0; i < structure.size(); ++i) {
        const std::string ctx = origin + ".clock_labels.structure[" + std::to_string(i) + "]";
        ClockStructureLabel l;
        l.config_id = detail::require_string(structure[i], "config_id", ctx);
        l.component = detail::require_string(structure[i], "component", ctx);
        l.register_count = detail::require_number(structure[i], "register_count", ctx);
        l.gating_rate = detail::require_number(structure[i], "gating_rate", ctx);
        ds.clock_structure.push_back(std::move(l));
    }
    const json& cpower = detail::require_array(clock, "power", origin + ".clock_labels");
    for (std::size_t i = 0; i < cpower.size(); ++i) {
        const std::string ctx = origin + ".clock_labels.power[" + std::to_string(i) + "]";
        ClockPowerLabel l;
        l.config_id = detail::require_string(cpower[i], "config_id", ctx);
        l.workload_id = detail::require_string(cpower[i], "workload_id", ctx);
        l.component = detail::require_string(cpower[i], "component", ctx);
        l.clock_power = detail::require_number(cpower[i], "clock_power", ctx);
        ds.clock_power.push_back(std::move(l));
    }

    const json& sram = detail::require_object(j, "sram_labels", origin);
    const json& geometry = detail::require_array(sram, "geometry", origin + ".sram_labels");
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        const std::string ctx = origin + ".sram_labels.geometry[" + std::to_string(i) + "]";
        SramGeometryLabel l;
        l.config_id = detail::require_string(geometry[i], "config_id", ctx);
        l.position = detail::require_string(geometry[i], "position", ctx);
        l.geometry = geometry_from_json(geometry[i], ctx);
        ds.sram_geometry.push_back(std::move(l));
    }
    const json& activity = detail::require_array(sram, "activity", origin + ".sram_labels");
    for (std::size_t i = 0; i < activity.size(); ++i) {
        const std::string ctx = origin + ".sram_labels.activity[" + std::to_string(i) + "]";
        SramActivityLabel l;
        l.config_id = detail::require_string(activity[i], "config_id", ctx);
        l.workload_id = detail::require_string(activity[i], "workload_id", ctx);
        l.position = detail::require_string(activity[i], "position", ctx);
        l.activity.f_read_block = detail::require_number(activity[i], "f_read_block", ctx);
        l.activity.f_write_block = detail::require_number(activity[i], "f_write_block", ctx);
        l.sram_power = detail::require_number(activity[i], "sram_power", ctx);
        ds.sram_activity.push_back(std::move(l));
    }

    const json& logic = detail::require_array(j, "logic_labels", origin);
    for (std::size_t i = 0; i < logic.size(); ++i) {
        const std::string ctx = origin + ".logic_labels[" + std::to_string(i) + "]";
        LogicLabel l;
        l.config_id = detail::require_string(logic[i], "config_id", ctx);
        l.workload_id = detail::require_string(logic[i], "workload_id", ctx);
        l.component = detail::require_string(logic[i], "component", ctx);
        l.register_power = detail::require_number(logic[i], "register_power", ctx);
        l.comb_power = detail::require_number(logic[i], "comb_power", ctx);
        ds.logic.push_back(std::move(l));
    }

    validate(ds);
    return ds;
}

TrainingDataset load_dataset(const std::string& path) {
    return dataset_from_json_text(detail::read_text_file(path), path);
}

void save_dataset(const TrainingDataset& dataset, const std::string& path) {
    detail::write_text_file(path, dataset_to_json_text(dataset));
}

std::string tech_to_json_text(const TechLibrary& tech) {
    json j;
    j["schema_version"] = kTechSchemaVersion;
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
    return detail::dump_canonical(j);
}

TechLibrary tech_from_json_text(const std::string& text, const std::string& origin) {
    json j = detail::parse_json(text, origin);
    detail::check_schema_version(j, kTechSchemaVersion, origin);
    TechLibrary tech;
    tech.p_reg = detail::require_number(j, "p_reg", origin);
    tech.p_latch = detail::require_number(j, "p_latch", origin);
    const json& macros = detail::require_array(j, "macros", origin);
    for (std::size_t i = 0; i < macros.size(); ++i) {
        const std::string ctx = origin + ".macros[" + std::to_string(i) + "]";
        MacroSpec m;
        m.width = detail::require_int(macros[i], "width", ctx);
        m.depth = detail::require_int(macros[i], "depth", ctx);
        m.p_read = detail::require_number(macros[i], "p_read", ctx);
        m.p_write = detail::require_number(macros[i], "p_write", ctx);
        tech.macros.push_back(m);
    }
    validate(tech);
    return tech;
}

TechLibrary load_tech_library(const std::string& path) {
    return tech_from_json_text(detail::read_text_file(path), path);
}

void save_tech_library(const TechLibrary& tech, const std::string& path) {
    detail::write_text_file(path, tech_to_json_text(tech));
}

// ---- feature assembly ----------------------------------------------------------

std::vector<std::string> feature_names_for(const DesignConfig& config,
                                           std::span<const std::string> param_names,
                                           const WorkloadEvents* events) {
    std::vector<std::string> names(param_names.begin(), param_names.end());
    std::sort(names.begin(), names.end());
    for (const auto& n : names)
        if (!config.params.count(n))
            throw InputError("config " + config.config_id + ": unknown parameter '" + n + "'");
    if (events) {
        for (const auto& n : sorted_keys(events->events)) names.push_back(n);
        for (const auto& n : sorted_keys(events->program_features)) names.push_back(n);
    }
    return names;
}

std::vector<double> feature_vector_for(const DesignConfig& config,
                                       std::span<const std::string> param_names,
                                       const WorkloadEvents* events) {
    std::vector<std::string> hw(param_names.begin(), param_names.end());
    std::sort(hw.begin(), hw.end());
    std::vector<double> values;
    values.reserve(hw.size() + (events ? events->events.size() + events->program_features.size() : 0));
    for (const auto& n : hw) {
        auto it = config.params.find(n);
        if (it == config.params.end())
            throw InputError("config " + config.config_id + ": unknown parameter '" + n + "'");
        values.push_back(it->second);
    }
    if (events) {
        for (const auto& [name, v] : events->events) values.push_back(v);
        for (const auto& [name, v] : events->program_features) values.push_back(v);
    }
    return values;
}

std::vector<std::string> feature_names(const DesignConfig& config, const std::string& component,
                                       const WorkloadEvents* events) {
    auto it = config.component_params.find(component);
    if (it == config.component_params.end())
        throw InputError("config " + config.config_id + ": unknown component '" + component + "'");
    return feature_names_for(config, it->second, events);
}

std::vector<double> feature_vector(const DesignConfig& config, const std::string& component,
                                   const WorkloadEvents* events) {
    auto it = config.component_params.find(component);
    if (it == config.component_params.end())
        throw InputError("config " + config.config_id + ": unknown component '" + component + "'");
    return feature_vector_for(config, it->second, events);
}

TrainingDataset restrict_to_configs(const TrainingDataset& dataset,
                                    std::span<const std::string> config_ids) {
    std::set<std::string> keep;
    for (const auto& id : config_ids) {
        if (!dataset.find_config(id)) throw InputError("unknown config id '" + id + "'");
        keep.insert(id);
    }
    TrainingDataset out;
    out.sram_positions = dataset.sram_positions;
    for (const auto& c : dataset.configs)
        if (keep.count(c.config_id)) out.configs.push_back(c);
    for (const auto& e : dataset.events)
        if (keep.count(e.config_id)) out.events.push_back(e);
    for (const auto& l : dataset.clock_structure)
        if (keep.count(l.config_id)) out.clock_structure.push_back(l);
    for (const auto& l : dataset.clock_power)
        if (keep.count(l.config_id)) out.clock_power.push_back(l);
    for (const auto& l : dataset.sram_geometry)
        if (keep.count(l.config_id)) out.sram_geometry.push_back(l);
    for (const auto& l : dataset.sram_activity)
        if (keep.count(l.config_id)) out.sram_activity.push_back(l);
    for (const auto& l : dataset.logic)
        if (keep.count(l.config_id)) out.logic.push_back(l);
    return out;
}

} // namespace autopower
