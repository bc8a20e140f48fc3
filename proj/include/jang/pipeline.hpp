#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "jang/initial_data.hpp"
#include "jang/jang_solver.hpp"
#include "jang/verifier.hpp"

namespace jang {

using Json = nlohmann::json;

// Exit codes of the CLI and of RunReport::exit_code.
enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailure = 1,
    kExitConfigError = 2,
    kExitSolverFailure = 3,
};

struct RunConfig {
    Json data_descriptor;          // {"family":..,"params":{..}} or {"samples":{..}}
    SolverConfig solver;
    std::string boundary = "auto"; // "past-horizon" | "future-horizon" | "alpha:<x>" | "auto"
    double alpha = 0.0;
    int levels = 3;                // refinement levels for the verify stage
    std::vector<std::string> checks;  // subset of validate/solve/verify/penrose or "all"
    std::string out_dir;
};

RunConfig parse_run_config(const Json& j);
Json run_config_to_json(const RunConfig& c);

// Data descriptor -> InitialData ({"family": name, "params": {...}} or
// {"samples": {"r": [...], "g11": [...], "rho": [...], "ka": [...], "kb": [...]}}).
InitialData load_data_descriptor(const Json& descriptor);

struct RunReport {
    int exit_code = kExitOk;
    Json json;  // full machine-readable report
};

// Executes validate -> solve -> geometry -> verify -> penrose; a stage
// failure halts downstream stages but the partial report is still emitted.
RunReport run(const RunConfig& config);

// Concurrent batch over independent runs; the aggregate preserves config
// order and is byte-deterministic for a fixed build and inputs.
RunReport run_batch(const std::vector<RunConfig>& configs, int workers);

// Writes solution/geometry/residual CSV profiles; returns the manifest.
std::vector<std::string> emit_profiles(const InitialData& data, const JangSolution& sol,
                                       const GeometryProfile& geom, const std::string& dir);

}  // namespace jang
