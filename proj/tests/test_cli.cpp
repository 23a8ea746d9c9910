#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr
};

std::string cli_binary() {
    const char* env = std::getenv("AUTOPOWER_BIN");
    REQUIRE_MESSAGE(env != nullptr, "AUTOPOWER_BIN must point at the built CLI");
    return env;
}

RunResult run(const std::string& args) {
    std::string command = cli_binary() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buffer{};
    while (std::fgets(buffer.data(), buffer.size(), pipe)) result.output += buffer.data();
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// One workspace shared by the whole file: synth once, train once.
struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / "autopower_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

Workspace& workspace() {
    static Workspace ws;
    return ws;
}

} // namespace

TEST_CASE("cli: synth writes dataset, tech, oracle and trace inputs") {
    Workspace& ws = workspace();
    RunResult r = run("synth --out-dir " + ws.dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(ws.path("dataset.json")));
    CHECK(fs::exists(ws.path("tech.json")));
    CHECK(fs::exists(ws.path("oracle.json")));
    CHECK(fs::exists(ws.path("trace_gemm_like.json")));
    CHECK(fs::exists(ws.path("trace_spmm_like.json")));

    // idempotent: rerunning rewrites byte-identical files
    std::string before = slurp(ws.path("dataset.json"));
    RunResult again = run("synth --out-dir " + ws.dir.string());
    CHECK(again.exit_code == 0);
    CHECK(slurp(ws.path("dataset.json")) == before);
}

TEST_CASE("cli: train writes the model bundle deterministically") {
    Workspace& ws = workspace();
    std::string cmd = "train --dataset " + ws.path("dataset.json") + " --tech " +
                      ws.path("tech.json") + " --train-configs C1,C15 --l2-lambda 1e-9 --out " +
                      ws.path("model.json");
    RunResult r = run(cmd);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("model written") != std::string::npos);
    CHECK(fs::exists(ws.path("model.json")));

    std::string first = slurp(ws.path("model.json"));
    RunResult again = run(cmd);
    CHECK(again.exit_code == 0);
    CHECK(slurp(ws.path("model.json")) == first);

    // unknown training config id
    RunResult bad = run("train --dataset " + ws.path("dataset.json") + " --tech " +
                        ws.path("tech.json") + " --train-configs C1,C99 --out " +
                        ws.path("bad.json"));
    CHECK(bad.exit_code == 2);
    CHECK(bad.output.find("C99") != std::string::npos);
}

TEST_CASE("cli: train can emit a baseline bundle alongside") {
    Workspace& ws = workspace();
    RunResult r = run("train --dataset " + ws.path("dataset.json") + " --tech " +
                      ws.path("tech.json") +
                      " --train-configs C1,C15 --l2-lambda 1e-9 --baseline monolithic --out " +
                      ws.path("model.json"));
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(ws.path("model.baseline.json")));
}

TEST_CASE("cli: evaluate prints metrics and writes both report files") {
    Workspace& ws = workspace();
    RunResult r = run("evaluate --model " + ws.path("model.json") + " --dataset " +
                      ws.path("dataset.json") + " --out " + ws.path("report.json") + " --csv " +
                      ws.path("report.csv") + " --compare " + ws.path("model.baseline.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("MAPE 0.0") != std::string::npos); // near-exact on the oracle
    CHECK(r.output.find("method comparison") != std::string::npos);
    CHECK(r.output.find("baseline-monolithic") != std::string::npos);
    CHECK(fs::exists(ws.path("report.json")));
    CHECK(fs::exists(ws.path("report.csv")));

    nlohmann::json report = nlohmann::json::parse(slurp(ws.path("report.json")));
    CHECK(report["samples"].size() == 13 * 8);
    CHECK(report.contains("comparison"));

    // rerunning rewrites byte-identical reports
    std::string json_before = slurp(ws.path("report.json"));
    std::string csv_before = slurp(ws.path("report.csv"));
    RunResult again = run("evaluate --model " + ws.path("model.json") + " --dataset " +
                          ws.path("dataset.json") + " --out " + ws.path("report.json") +
                          " --csv " + ws.path("report.csv") + " --compare " +
                          ws.path("model.baseline.json"));
    CHECK(again.exit_code == 0);
    CHECK(slurp(ws.path("report.json")) == json_before);
    CHECK(slurp(ws.path("report.csv")) == csv_before);

    // missing test labels: strip the logic labels of one test config
    nlohmann::json ds = nlohmann::json::parse(slurp(ws.path("dataset.json")));
    nlohmann::json kept = nlohmann::json::array();
    for (const auto& row : ds["logic_labels"])
        if (row["config_id"] != "C3") kept.push_back(row);
    ds["logic_labels"] = kept;
    std::ofstream(ws.path("incomplete.json")) << ds.dump(2) << "\n";
    RunResult missing = run("evaluate --model " + ws.path("model.json") + " --dataset " +
                            ws.path("incomplete.json") + " --test-configs C3");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("cli: predict prints a per-component report") {
    Workspace& ws = workspace();
    RunResult r = run("predict --model " + ws.path("model.json") + " --dataset " +
                      ws.path("dataset.json") + " --config C7 --workload W3");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.output);
    CHECK(j["totals"]["total"].get<double>() > 0.0);
    CHECK(j["components"].size() == 4);

    RunResult bad = run("predict --model " + ws.path("model.json") + " --dataset " +
                        ws.path("dataset.json") + " --config C99 --workload W3");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: trace writes a csv and reports errors against the oracle") {
    Workspace& ws = workspace();
    RunResult r = run("trace --model " + ws.path("model.json") + " --windows " +
                      ws.path("trace_gemm_like.json") + " --out " + ws.path("trace.csv") +
                      " --golden " + ws.path("oracle.json") + " --trace-id gemm_like");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Max Power Error") != std::string::npos);
    CHECK(r.output.find("Min Power Error") != std::string::npos);
    CHECK(r.output.find("Average Error") != std::string::npos);

    std::string csv = slurp(ws.path("trace.csv"));
    CHECK(csv.rfind("window,clock_mw,sram_mw,register_mw,comb_mw,total_mw", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 120);

    // identical windows produce identical csv rows
    nlohmann::json tw = nlohmann::json::parse(slurp(ws.path("trace_gemm_like.json")));
    nlohmann::json first_window = tw["windows"][0];
    tw["windows"] = nlohmann::json::array({first_window, first_window, first_window});
    std::ofstream(ws.path("trace_const.json")) << tw.dump(2) << "\n";
    RunResult constant = run("trace --model " + ws.path("model.json") + " --windows " +
                             ws.path("trace_const.json") + " --out " + ws.path("trace_const.csv"));
    CHECK(constant.exit_code == 0);
    std::istringstream lines(slurp(ws.path("trace_const.csv")));
    std::string header, row1, row2, row3;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    std::getline(lines, row3);
    CHECK(row1.substr(1) == row2.substr(1)); // same except the window index
    CHECK(row2.substr(1) == row3.substr(1));

    // window size mismatch requires an explicit override
    tw["window_cycles"] = 40;
    for (auto& w : tw["windows"]) w["cycles"] = 40;
    std::ofstream(ws.path("trace_40.json")) << tw.dump(2) << "\n";
    RunResult mismatch = run("trace --model " + ws.path("model.json") + " --windows " +
                             ws.path("trace_40.json") + " --out " + ws.path("trace40.csv"));
    CHECK(mismatch.exit_code == 2);
    RunResult overridden = run("trace --model " + ws.path("model.json") + " --windows " +
                               ws.path("trace_40.json") + " --out " + ws.path("trace40.csv") +
                               " --window 40");
    CHECK(overridden.exit_code == 0);
}

TEST_CASE("cli: exit codes for bad invocations") {
    Workspace& ws = workspace();
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("train --dataset missing.json --tech " + ws.path("tech.json") +
              " --train-configs C1,C2 --out x.json")
              .exit_code == 2);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("train --help").exit_code == 0);
}
