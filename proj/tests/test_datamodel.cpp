#include <doctest.h>

#include <json.hpp>

#include "autopower/datamodel.hpp"

using namespace autopower;
using nlohmann::json;

namespace {

// Two configs, one workload, complete labels for one component and one
// position. Small enough to reason about by hand.
TrainingDataset minimal_dataset() {
    TrainingDataset ds;

    DesignConfig c1;
    c1.config_id = "C1";
    c1.params = {{"DecodeWidth", 1.0}, {"FetchWidth", 4.0}, {"FetchBufferEntry", 5.0}};
    c1.component_params = {{"IFU", {"FetchWidth", "DecodeWidth", "FetchBufferEntry"}}};
    DesignConfig c2 = c1;
    c2.config_id = "C2";
    c2.params = {{"DecodeWidth", 2.0}, {"FetchWidth", 8.0}, {"FetchBufferEntry", 16.0}};
    ds.configs = {c1, c2};

    for (const auto& id : {"C1", "C2"}) {
        WorkloadEvents e;
        e.config_id = id;
        e.workload_id = "W1";
        e.cycles = 1000;
        e.events = {{"misses", 7.0}};
        e.program_features = {{"branches", 50.0}};
        ds.events.push_back(e);
    }

    ds.sram_positions = {{"IFU", "IFU/meta", {"FetchWidth", "DecodeWidth"}}};

    ds.clock_structure = {{"C1", "IFU", 400.0, 0.5}, {"C2", "IFU", 800.0, 0.6}};
    ds.clock_power = {{"C1", "W1", "IFU", 0.8}, {"C2", "W1", "IFU", 1.6}};
    ds.sram_geometry = {{"C1", "IFU/meta", {120, 8, 1, 1}}, {"C2", "IFU/meta", {240, 16, 1, 1}}};
    ds.sram_activity = {{"C1", "W1", "IFU/meta", {0.2, 0.1}, 0.9},
                        {"C2", "W1", "IFU/meta", {0.3, 0.2}, 1.7}};
    ds.logic = {{"C1", "W1", "IFU", 0.3, 1.1}, {"C2", "W1", "IFU", 0.6, 2.2}};
    return ds;
}

} // namespace

TEST_CASE("dataset: serialization round-trip is field-exact and byte-stable") {
    TrainingDataset ds = minimal_dataset();
    std::string text = dataset_to_json_text(ds);
    TrainingDataset back = dataset_from_json_text(text, "dataset.json");
    CHECK(back == ds);
    CHECK(back.configs.size() == 2);
    CHECK(dataset_to_json_text(back) == text);
}

TEST_CASE("dataset: referential integrity names the dangling id") {
    TrainingDataset ds = minimal_dataset();
    ds.clock_structure.push_back({"C99", "IFU", 100.0, 0.5});
    std::string message;
    try {
        validate(ds);
    } catch (const InputError& e) {
        message = e.what();
    }
    CHECK(message.find("C99") != std::string::npos);
}

TEST_CASE("dataset: gating rate outside [0,1] is an invariant violation") {
    TrainingDataset ds = minimal_dataset();
    ds.clock_structure[0].gating_rate = 1.3;
    std::string message;
    try {
        validate(ds);
    } catch (const InputError& e) {
        message = e.what();
    }
    CHECK(message.find("gating_rate") != std::string::npos);
}

TEST_CASE("dataset: every out-of-range field mutation fails to load") {
    const std::string valid = dataset_to_json_text(minimal_dataset());

    struct Mutation {
        const char* pointer;
        json value;
    };
    const Mutation mutations[] = {
        {"/schema_version", 99},
        {"/configs/0/params/FetchWidth", -1.0},
        {"/configs/0/params/FetchWidth", 0.0},
        {"/configs/1/config_id", "C1"}, // duplicate id
        {"/configs/0/component_params/IFU/0", "NoSuchParam"},
        {"/events/0/cycles", 0},
        {"/events/0/events/misses", -2.0},
        {"/events/0/program_features/branches", -1.0},
        {"/events/1/config_id", "C1"}, // duplicate (config, workload)
        {"/sram_positions/0/params/0", "NoSuchParam"},
        {"/sram_positions/0/component", "NoSuchComponent"},
        {"/clock_labels/structure/0/gating_rate", 1.3},
        {"/clock_labels/structure/0/gating_rate", -0.1},
        {"/clock_labels/structure/0/register_count", -5.0},
        {"/clock_labels/structure/0/config_id", "C99"},
        {"/clock_labels/structure/0/component", "XPU"},
        {"/clock_labels/power/0/clock_power", -0.4},
        {"/clock_labels/power/0/workload_id", "W9"},
        {"/sram_labels/geometry/0/width", 0},
        {"/sram_labels/geometry/0/depth", 0},
        {"/sram_labels/geometry/0/count", 0},
        {"/sram_labels/geometry/0/mask_sectors", 7}, // does not divide width 120
        {"/sram_labels/geometry/0/position", "IFU/nope"},
        {"/sram_labels/activity/0/f_read_block", -0.1},
        {"/sram_labels/activity/0/f_write_block", -0.1},
        {"/sram_labels/activity/0/sram_power", -0.1},
        {"/sram_labels/activity/0/config_id", "C42"},
        {"/logic_labels/0/register_power", -1.0},
        {"/logic_labels/0/comb_power", -1.0},
        {"/logic_labels/0/component", "XPU"},
    };
    for (const auto& m : mutations) {
        CAPTURE(m.pointer);
        json j = json::parse(valid);
        j[json::json_pointer(m.pointer)] = m.value;
        CHECK_THROWS_AS(dataset_from_json_text(j.dump() + "\n", "mutated.json"), InputError);
    }

    // the unmutated text still loads
    CHECK_NOTHROW(dataset_from_json_text(valid, "dataset.json"));
}

TEST_CASE("dataset: parse errors carry position context") {
    std::string message;
    try {
        dataset_from_json_text("{ \"schema_version\": 1, ", "broken.json");
    } catch (const InputError& e) {
        message = e.what();
    }
    CHECK(message.find("broken.json") != std::string::npos);
    CHECK(message.find("line") != std::string::npos);
}

TEST_CASE("tech library: round-trip and invariants") {
    TechLibrary tech;
    tech.p_reg = 0.002;
    tech.p_latch = 0.001;
    tech.macros = {{32, 64, 2.0, 2.5}};
    std::string text = tech_to_json_text(tech);
    TechLibrary back = tech_from_json_text(text, "tech.json");
    CHECK(back == tech);
    CHECK(tech_to_json_text(back) == text);

    TechLibrary dup = tech;
    dup.macros.push_back({32, 64, 1.0, 1.0});
    std::string message;
    try {
        validate(dup);
    } catch (const InputError& e) {
        message = e.what();
    }
    CHECK(message.find("duplicate macro shape") != std::string::npos);

    TechLibrary zero = tech;
    zero.p_reg = 0.0;
    CHECK_THROWS_AS(validate(zero), InputError);

    TechLibrary empty = tech;
    empty.macros.clear();
    CHECK_THROWS_AS(validate(empty), InputError);
}

TEST_CASE("feature_vector: alphabetical hardware order, then events, then program features") {
    TrainingDataset ds = minimal_dataset();
    const DesignConfig& c1 = ds.configs[0];

    // alphabetical: DecodeWidth < FetchBufferEntry < FetchWidth
    std::vector<double> hw = feature_vector(c1, "IFU", nullptr);
    CHECK(hw == std::vector<double>{1.0, 5.0, 4.0});
    CHECK(feature_names(c1, "IFU", nullptr) ==
          std::vector<std::string>{"DecodeWidth", "FetchBufferEntry", "FetchWidth"});

    CHECK_THROWS_AS(feature_vector(c1, "XPU", nullptr), InputError);

    const WorkloadEvents& e = ds.events[0];
    std::vector<double> full = feature_vector(c1, "IFU", &e);
    CHECK(full == std::vector<double>{1.0, 5.0, 4.0, 7.0, 50.0});

    // determinism
    CHECK(feature_vector(c1, "IFU", &e) == full);
}

TEST_CASE("power report totals are plain sums of the entries") {
    PowerReport r;
    r.components["A"] = {1.0, 2.0, 3.0, 4.0};
    r.components["B"] = {0.5, 0.25, 0.125, 0.0625};
    r.finalize();
    CHECK(r.clock_total == 1.5);
    CHECK(r.sram_total == 2.25);
    CHECK(r.register_total == 3.125);
    CHECK(r.comb_total == 4.0625);
    CHECK(r.grand_total == r.clock_total + r.sram_total + r.register_total + r.comb_total);
}

TEST_CASE("restrict_to_configs keeps positions and filters everything else") {
    TrainingDataset ds = minimal_dataset();
    std::vector<std::string> keep{"C2"};
    TrainingDataset sub = restrict_to_configs(ds, keep);
    CHECK(sub.configs.size() == 1);
    CHECK(sub.configs[0].config_id == "C2");
    CHECK(sub.events.size() == 1);
    CHECK(sub.sram_positions.size() == 1);
    CHECK(sub.clock_structure.size() == 1);
    CHECK(sub.logic.size() == 1);

    std::vector<std::string> unknown{"C9"};
    CHECK_THROWS_AS(restrict_to_configs(ds, unknown), InputError);
}
