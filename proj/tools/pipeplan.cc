// pipeplan: route, size and plan CO2 pipeline networks from one config file.
//
// Exit codes: 0 ok, 2 usage, 3 invalid input, 4 infeasible model, 5 solver
// limit (plan written but not proven optimal, or no plan), 6 I/O, 7 no route.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pipeplan/candidate_graph.h"
#include "pipeplan/economics.h"
#include "pipeplan/errors.h"
#include "pipeplan/export.h"
#include "pipeplan/planning.h"
#include "pipeplan/workflow.h"

namespace fs = std::filesystem;
using namespace pipeplan;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit {
  kOk = 0,
  kUsage = 2,
  kInvalid = 3,
  kInfeasible = 4,
  kSolverLimit = 5,
  kIo = 6,
  kNoRoute = 7,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string output_dir;
  std::string backend;
  double time_limit = 0.0;
  bool relaxed_coupling = false;
  bool om_no_overlap = false;
  bool quiet = false;
};

RunConfig load(const Options& o) {
  nlohmann::json over = nlohmann::json::object();
  if (!o.output_dir.empty()) over["output_dir"] = fs::absolute(o.output_dir).string();
  if (!o.backend.empty()) over["solver"]["backend"] = o.backend;
  if (o.time_limit > 0.0) over["solver"]["time_limit"] = o.time_limit;
  if (o.relaxed_coupling) over["relaxed_coupling"] = true;
  if (o.om_no_overlap) over["om_no_overlap"] = true;
  return load_config(o.config, over);
}

void write_text(const fs::path& path, const std::string& text) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

void write_json(const fs::path& path, const ojson& doc) {
  write_text(path, doc.dump(2) + "\n");
}

std::optional<nlohmann::json> read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

nlohmann::json require_json(const fs::path& path) {
  auto j = read_json(path);
  if (!j) throw IoError("cannot read " + path.string());
  return *j;
}

// Cached artifact whose config hash matches, if any.
std::optional<nlohmann::json> cached(const fs::path& path,
                                     const std::string& hash) {
  auto j = read_json(path);
  if (j && j->value("config_hash", std::string()) == hash) return j;
  return std::nullopt;
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v + 0.0);
  return buf;
}

// ---- route ------------------------------------------------------------

CandidateGraph route(const RunConfig& cfg, bool quiet) {
  const RasterMap raster = build_raster(cfg);
  const GraphBuild gb = build_candidate_graph(raster, cfg.nodes);
  std::ostringstream r;
  write_raster(r, raster);
  write_text(cfg.output_dir / "raster.txt", r.str());
  ojson doc;
  doc["config_hash"] = cfg.hash;
  doc["graph"] = graph_to_json(gb.graph, cfg.grid);
  write_json(cfg.output_dir / "graph.json", doc);
  if (!quiet) {
    std::cout << "graph: " << gb.graph.num_nodes() << " nodes, "
              << gb.graph.num_arcs() << " arcs, "
              << fmt(gb.graph.total_length_km()) << " km total ("
              << gb.pairs.size() << " routed pairs)\n"
              << "wrote " << (cfg.output_dir / "graph.json").string() << "\n";
  }
  return gb.graph;
}

CandidateGraph ensure_graph(const RunConfig& cfg) {
  if (auto j = cached(cfg.output_dir / "graph.json", cfg.hash)) {
    return graph_from_json(j->at("graph"));
  }
  return route(cfg, true);
}

// ---- fit-trends -------------------------------------------------------

std::vector<Trend> fit(const RunConfig& cfg, bool quiet) {
  const TrendFit f = resolve_trends(cfg);
  ojson doc;
  doc["config_hash"] = cfg.hash;
  doc["max_relative_error"] = f.max_relative_error;
  doc["tolerance"] = cfg.trends.tolerance;
  doc["tolerance_met"] = f.tolerance_met;
  doc["trends"] = ojson::parse(nlohmann::json(f.trends).dump());
  write_json(cfg.output_dir / "trends.json", doc);
  if (!quiet) {
    std::cout << "trend  q_min  q_max  slope[EUR/(Mt/a km)]  intercept[EUR/km]\n";
    for (const Trend& t : f.trends) {
      std::cout << t.index << "  " << fmt(t.q_min) << "  " << fmt(t.q_max)
                << "  " << fmt(t.slope, 1) << "  " << fmt(t.intercept, 1)
                << "\n";
    }
    std::cout << "max relative error " << fmt(100 * f.max_relative_error, 3)
              << "%\n";
  }
  if (!f.tolerance_met) {
    std::cerr << "warning: " << cfg.trends.count << " trends reach "
              << fmt(100 * f.max_relative_error, 3) << "%, above the "
              << fmt(100 * cfg.trends.tolerance, 3) << "% tolerance\n";
  }
  return f.trends;
}

std::vector<Trend> ensure_trends(const RunConfig& cfg) {
  if (auto j = cached(cfg.output_dir / "trends.json", cfg.hash)) {
    return j->at("trends").get<std::vector<Trend>>();
  }
  return fit(cfg, true);
}

// ---- solve ------------------------------------------------------------

void print_breakdown(const PlanSolution& plan) {
  for (const ScenarioResult& r : plan.scenarios) {
    const CostBreakdown& c = r.cost;
    std::cout << plan.model << "  " << r.scenario << "  I0 " << fmt(to_mio(c.i0))
              << "  O0 " << fmt(to_mio(c.o0)) << "  I1 " << fmt(to_mio(c.i1))
              << "  R " << fmt(to_mio(c.r)) << "  O1 " << fmt(to_mio(c.o1))
              << "  total " << fmt(to_mio(c.total));
    if (c.regret) std::cout << "  regret " << fmt(to_mio(*c.regret));
    std::cout << "  [Mio EUR]\n";
  }
  if (plan.status != "OPTIMAL") {
    std::cout << "status " << plan.status << ", gap " << fmt(100 * plan.gap, 4)
              << "%\n";
  }
}

std::vector<int> select_scenarios(const PlanningInput& in,
                                  const std::string& id) {
  if (id.empty()) {
    std::vector<int> all(in.scenarios.num_scenarios());
    for (int s = 0; s < in.scenarios.num_scenarios(); ++s) all[s] = s;
    return all;
  }
  const int s = in.scenarios.find(id);
  if (s < 0) throw UsageError("unknown scenario '" + id + "'");
  return {s};
}

ojson plans_doc(const RunConfig& cfg, const std::string& model,
                const std::vector<PlanSolution>& plans,
                const PlanningInput& in) {
  ojson doc;
  doc["config_hash"] = cfg.hash;
  doc["model"] = model;
  doc["plans"] = ojson::array();
  for (const PlanSolution& p : plans) doc["plans"].push_back(plan_to_json(p, in));
  return doc;
}

std::vector<PlanSolution> load_plans(const nlohmann::json& doc,
                                     const PlanningInput& in) {
  std::vector<PlanSolution> out;
  for (const auto& p : doc.at("plans")) out.push_back(plan_from_json(p, in));
  return out;
}

// B_s for every scenario, from the cache when it matches the config.
std::vector<PlanSolution> best_plans(const RunConfig& cfg,
                                     const PlanningInput& in, bool quiet) {
  const fs::path path = cfg.output_dir / "best_solutions.json";
  if (auto j = cached(path, cfg.hash)) {
    auto plans = load_plans(*j, in);
    if (plans.size() == static_cast<std::size_t>(in.scenarios.num_scenarios())) {
      if (!quiet) std::cout << "best solutions: cached in " << path.string() << "\n";
      return plans;
    }
  }
  auto plans = best_solutions(in, cfg.solver);
  write_json(path, plans_doc(cfg, "m1", plans, in));
  if (!quiet) std::cout << "best solutions: computed, cached in " << path.string() << "\n";
  return plans;
}

int solve(const RunConfig& cfg, const std::string& model,
          const std::string& scenario, bool quiet) {
  const CandidateGraph graph = ensure_graph(cfg);
  const std::vector<Trend> trends = ensure_trends(cfg);
  const PlanningInput in = make_planning_input(cfg, graph, trends);
  std::vector<PlanSolution> plans;
  ojson doc;
  if (model == "regret") {
    if (!scenario.empty()) {
      throw UsageError("the regret model covers all scenarios; drop --scenario");
    }
    const auto best = best_plans(cfg, in, quiet);
    std::map<std::string, double> bs;
    std::size_t largest = 0;
    for (std::size_t s = 0; s < best.size(); ++s) {
      bs[in.scenarios.scenarios[s].id] = best[s].objective;
      if (best[s].objective > best[largest].objective) largest = s;
    }
    plans.push_back(solve_min_max_regret(in, bs, cfg.solver, &best[largest]));
    doc = plans_doc(cfg, model, plans, in);
    doc["best"] = bs;
    if (!quiet) {
      std::cout << "system regret x = " << fmt(to_mio(*plans[0].regret))
                << " Mio EUR\n";
    }
  } else {
    for (int s : select_scenarios(in, scenario)) {
      plans.push_back(model == "m1" ? solve_m1(in, s, cfg.solver)
                                    : solve_m2(in, s, cfg.solver));
    }
    doc = plans_doc(cfg, model, plans, in);
  }
  const fs::path out = cfg.output_dir / ("solution_" + model + ".json");
  write_json(out, doc);
  int code = kOk;
  for (const PlanSolution& p : plans) {
    if (!quiet) print_breakdown(p);
    if (p.status != "OPTIMAL") code = kSolverLimit;
  }
  if (!quiet) std::cout << "wrote " << out.string() << "\n";
  return code;
}

// ---- report / export --------------------------------------------------

struct Solutions {
  PlanningInput in;
  std::vector<PlanSolution> m1, m2, regret;
};

std::vector<PlanSolution> read_model(const RunConfig& cfg,
                                     const PlanningInput& in,
                                     const std::string& model) {
  const fs::path path = cfg.output_dir / ("solution_" + model + ".json");
  const nlohmann::json doc = require_json(path);
  if (doc.value("config_hash", std::string()) != cfg.hash) {
    throw ValidationError(path.string() +
                          " was produced by a different configuration");
  }
  return load_plans(doc, in);
}

std::vector<ScenarioTotals> totals_from_solutions(const RunConfig& cfg) {
  const PlanningInput in =
      make_planning_input(cfg, ensure_graph(cfg), ensure_trends(cfg));
  const auto m1 = read_model(cfg, in, "m1");
  const auto m2 = read_model(cfg, in, "m2");
  const auto rg = read_model(cfg, in, "regret");
  if (rg.size() != 1) throw ValidationError("regret solution must hold one plan");
  std::vector<ScenarioTotals> rows;
  for (const Scenario& s : in.scenarios.scenarios) {
    auto by = [&](const std::vector<PlanSolution>& plans) -> double {
      for (const PlanSolution& p : plans) {
        if (p.scenarios.size() == 1 && p.scenarios[0].scenario == s.id) {
          return to_mio(p.objective);
        }
      }
      throw ValidationError("no plan for scenario " + s.id +
                            "; solve m1 and m2 for every scenario first");
    };
    const ScenarioResult* r = rg[0].find(s.id);
    if (!r) throw ValidationError("regret plan lacks scenario " + s.id);
    rows.push_back({s.id, by(m1), by(m2), to_mio(r->cost.total)});
  }
  return rows;
}

std::vector<ScenarioTotals> totals_from_file(const fs::path& path) {
  std::vector<ScenarioTotals> rows;
  try {
    for (const auto& r : require_json(path)) {
      rows.push_back({r.at("scenario").get<std::string>(), r.at("z_m1").get<double>(),
                      r.at("z_m2").get<double>(), r.at("z_r").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return rows;
}

std::vector<ReferenceRow> reference_from_file(const fs::path& path) {
  std::vector<ReferenceRow> rows;
  auto opt = [](const nlohmann::json& r, const char* k) -> std::optional<double> {
    if (r.contains(k)) return r[k].get<double>();
    return std::nullopt;
  };
  try {
    for (const auto& r : require_json(path)) {
      rows.push_back({r.at("scenario").get<std::string>(), opt(r, "potential"),
                      opt(r, "regret"), opt(r, "benefit")});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return rows;
}

int report(const std::optional<RunConfig>& cfg, const std::string& totals_path,
           const std::string& reference_path, double tolerance) {
  const std::vector<ScenarioTotals> totals =
      totals_path.empty() ? totals_from_solutions(*cfg) : totals_from_file(totals_path);
  const RegretReport rep = regret_report(totals);
  std::cout << "scenario  z_m1  z_m2  z_r  potential  regret  benefit  [Mio EUR]\n";
  for (const RegretRow& r : rep.rows) {
    std::cout << r.scenario << "  " << fmt(round_report(r.z_m1)) << "  "
              << fmt(round_report(r.z_m2)) << "  " << fmt(round_report(r.z_r))
              << "  " << fmt(round_report(r.potential)) << "  "
              << fmt(round_report(r.regret)) << "  "
              << fmt(round_report(r.benefit)) << "\n";
  }
  std::cout << "system regret " << fmt(round_report(rep.system_regret)) << "\n";
  if (cfg) {
    ojson doc;
    doc["config_hash"] = cfg->hash;
    doc["rows"] = ojson::array();
    for (const RegretRow& r : rep.rows) {
      doc["rows"].push_back({{"scenario", r.scenario}, {"z_m1", r.z_m1},
                             {"z_m2", r.z_m2}, {"z_r", r.z_r},
                             {"potential", r.potential}, {"regret", r.regret},
                             {"benefit", r.benefit}});
    }
    doc["system_regret"] = rep.system_regret;
    write_json(cfg->output_dir / "report.json", doc);
  }
  if (!reference_path.empty()) {
    const auto diff =
        compare_with_reference(rep, reference_from_file(reference_path), tolerance);
    for (const Discrepancy& d : diff) {
      std::cout << "DISCREPANCY " << d.scenario << " " << d.field << ": computed "
                << fmt(d.computed) << ", reference " << fmt(d.reference) << "\n";
    }
    if (diff.empty()) std::cout << "reference agrees within " << fmt(tolerance) << "\n";
  }
  return kOk;
}

int export_files(const RunConfig& cfg, const std::string& format,
                 const std::string& model) {
  if (format == "csv") {
    const RegretReport rep = regret_report(totals_from_solutions(cfg));
    std::ostringstream a, b;
    write_totals_csv(a, rep, cfg.hash);
    write_differences_csv(b, rep, cfg.hash);
    write_text(cfg.output_dir / "totals.csv", a.str());
    write_text(cfg.output_dir / "differences.csv", b.str());
    std::cout << "wrote totals.csv and differences.csv (" << rep.rows.size()
              << " rows each)\n";
    return kOk;
  }
  const PlanningInput in =
      make_planning_input(cfg, ensure_graph(cfg), ensure_trends(cfg));
  const auto plans = read_model(cfg, in, model);
  const fs::path dir = cfg.output_dir / "geojson";
  auto stamp = [&](ojson fc) {
    fc["config_hash"] = cfg.hash;
    return fc;
  };
  write_json(dir / "nodes.geojson", stamp(node_features(in)));
  int files = 1;
  for (const PlanSolution& p : plans) {
    const std::string tag =
        model == "regret" ? model : model + "_" + p.scenarios.at(0).scenario;
    write_json(dir / (tag + "_period0.geojson"),
               stamp(period0_features(p, in, cfg.grid)));
    ++files;
    for (const ScenarioResult& r : p.scenarios) {
      write_json(dir / (model + "_" + r.scenario + "_period1.geojson"),
                 stamp(period1_features(p, r, in, cfg.grid)));
      ++files;
    }
  }
  std::cout << "wrote " << files << " GeoJSON files to " << dir.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Plan CO2 pipeline networks under demand scenarios"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", o.config, "run configuration (JSON)")
        ->required();
    sub->add_option("-o,--output-dir", o.output_dir, "override output_dir");
    sub->add_option("--backend", o.backend, "solver backend: builtin, builtin-bigm");
    sub->add_option("--time-limit", o.time_limit, "solver time limit per model, s");
    sub->add_flag("--relaxed-coupling", o.relaxed_coupling,
                  "treat upgrade flow couplings as capacities (<=)");
    sub->add_flag("--om-no-overlap", o.om_no_overlap,
                  "start period-1 O&M one year after the upgrade");
    sub->add_flag("-q,--quiet", o.quiet, "less output");
  };

  CLI::App* route_cmd = app.add_subcommand("route", "rasterize and build the candidate graph");
  add_common(route_cmd);
  CLI::App* fit_cmd = app.add_subcommand("fit-trends", "fit the piecewise-linear cost trends");
  add_common(fit_cmd);

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a planning model");
  add_common(solve_cmd);
  std::string model = "m1";
  std::string scenario;
  solve_cmd->add_option("-m,--model", model, "m1, m2 or regret")
      ->check(CLI::IsMember({"m1", "m2", "regret"}));
  solve_cmd->add_option("-s,--scenario", scenario, "single scenario id (m1, m2)");

  CLI::App* export_cmd = app.add_subcommand("export", "export solutions");
  add_common(export_cmd);
  std::string format;
  std::string export_model = "regret";
  export_cmd->add_option("-f,--format", format, "geojson or csv")->required();
  export_cmd->add_option("-m,--model", export_model, "solution to map (geojson)")
      ->check(CLI::IsMember({"m1", "m2", "regret"}));

  CLI::App* report_cmd = app.add_subcommand("report", "potential, regret and benefit table");
  std::string totals_path, reference_path;
  double tolerance = 0.002;
  report_cmd->add_option("-c,--config", o.config, "run configuration (JSON)");
  report_cmd->add_option("-o,--output-dir", o.output_dir, "override output_dir");
  report_cmd->add_option("--totals", totals_path,
                         "JSON list of {scenario, z_m1, z_m2, z_r} in Mio EUR instead of solutions");
  report_cmd->add_option("--reference", reference_path,
                         "JSON list of {scenario, potential, regret, benefit} to compare with");
  report_cmd->add_option("--tolerance", tolerance, "reference tolerance, Mio EUR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (route_cmd->parsed()) {
      route(load(o), o.quiet);
      return kOk;
    }
    if (fit_cmd->parsed()) {
      fit(load(o), o.quiet);
      return kOk;
    }
    if (solve_cmd->parsed()) return solve(load(o), model, scenario, o.quiet);
    if (export_cmd->parsed()) {
      if (format != "geojson" && format != "csv") {
        throw UsageError("unknown export format '" + format + "' (geojson, csv)");
      }
      return export_files(load(o), format, export_model);
    }
    if (report_cmd->parsed()) {
      if (o.config.empty() && totals_path.empty()) {
        throw UsageError("report needs --config or --totals");
      }
      std::optional<RunConfig> cfg;
      if (!o.config.empty()) cfg = load(o);
      return report(cfg, totals_path, reference_path, tolerance);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const NoRouteError& e) {
    std::cerr << "no route between " << e.from_id() << " and " << e.to_id()
              << ": " << e.what() << "\n";
    return kNoRoute;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible (scenario " << e.scenario() << "): " << e.what()
              << "\n";
    return kInfeasible;
  } catch (const SolverLimitError& e) {
    std::cerr << "solver limit: " << e.what() << "\n";
    return kSolverLimit;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
