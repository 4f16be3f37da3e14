#pragma once

#include <cstdint>
#include <string>

#include "cmefsp/bench.hpp"
#include "cmefsp/network.hpp"
#include "cmefsp/solver.hpp"

namespace cmefsp {

struct SsaCompareConfig {
  bool enabled = false;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::size_t grid_points = 20;
};

struct OutputConfig {
  std::string dir = ".";
  bool snapshots = true;
  bool error_trace = true;
  bool state_size_trace = true;
  SsaCompareConfig ssa;
};

/// A fully validated run description: the model (builtin or inline), the
/// initial state, solver settings with all defaults resolved, and output
/// selection.
struct RunConfig {
  std::string model_json;  // normalized "model" object, round-trippable
  ReactionNetwork network;
  State x0;
  SolverConfig solver;
  OutputConfig output;
  bool override_budget = false;
};

/// Parses and validates the JSON config format. Unknown keys anywhere are
/// errors; syntax errors report the position. See README for the schema.
RunConfig parse_config(const std::string& text);

/// Normalized JSON for a RunConfig; parse_config(to_json(c)) reproduces c.
std::string to_json(const RunConfig& config);

/// Config-file form of a benchmark model (inline network + its default
/// solver settings). Numbers survive the round trip losslessly.
std::string export_model_config(const BenchmarkModel& model);

/// Builds a named benchmark model with parameters given as a JSON object
/// (same keys as the config format's model.params).
BenchmarkModel builtin_model(const std::string& name, const std::string& params_json = "{}");

/// Exit codes produced by run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitCapacity = 4;
inline constexpr int kExitNumerical = 5;

/// Executes the run end to end: budget check, adaptive solve, optional SSA
/// comparison, and all enabled output files plus a manifest. Returns the
/// process exit code; failures still flush partial outputs and a manifest
/// with a failure marker.
int run(const RunConfig& config);

}  // namespace cmefsp
