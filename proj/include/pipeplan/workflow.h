// Run configuration and the steps shared by the command-line subcommands:
// raster composition, candidate graph, trend table and planning input.
//
// A run is described by one JSON document. Relative paths inside it resolve
// against the document's directory.

#ifndef PIPEPLAN_WORKFLOW_H_
#define PIPEPLAN_WORKFLOW_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pipeplan/candidate_graph.h"
#include "pipeplan/cost_model.h"
#include "pipeplan/planning.h"
#include "pipeplan/raster.h"
#include "pipeplan/scenario.h"

namespace pipeplan {

struct TrendSettings {
  int count = 3;
  double tolerance = 0.02;
  // Upper end of the fitted range, Mt/a; <= 0 means the largest total
  // emission over all periods and scenarios.
  double max_flow = 0.0;
  // When non-empty, used as is instead of fitting.
  std::vector<Trend> pinned;
};

struct RunConfig {
  std::filesystem::path base_dir;
  std::filesystem::path output_dir;
  GridSpec grid;
  LayerSet layers;
  std::vector<TerminalSpec> nodes;
  nlohmann::json scenarios;  // document for load_scenarios
  HydraulicParams hydraulics;
  CostParams cost;
  TrendSettings trends;
  HorizonParams horizon;
  SolverConfig solver;
  bool relaxed_coupling = false;
  // Of the effective document and referenced files, ignoring output_dir and
  // the solver time_limit and threads.
  std::string hash;
};

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);

// Parses and validates a configuration document. Missing referenced files are
// IoError; everything else that is wrong is ValidationError (including a node
// list without an emitter or without a sink).
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path,
                      const nlohmann::json& overrides = nlohmann::json::object());

RasterMap build_raster(const RunConfig& cfg);

// Largest period total of emitter demand over all periods and scenarios.
double peak_emission(const RunConfig& cfg);

TrendFit resolve_trends(const RunConfig& cfg);

PlanningInput make_planning_input(const RunConfig& cfg,
                                  const CandidateGraph& graph,
                                  const std::vector<Trend>& trends);

}  // namespace pipeplan

#endif  // PIPEPLAN_WORKFLOW_H_
