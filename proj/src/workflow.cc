#include "pipeplan/workflow.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

nlohmann::json read_json_file(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

// Collects referenced file contents so the hash covers them too.
struct Resolver {
  fs::path base;
  std::string digest_input;

  fs::path path(const std::string& p) const {
    const fs::path q(p);
    return q.is_absolute() ? q : base / q;
  }
  std::string text(const std::string& p) {
    const std::string t = read_file(path(p));
    digest_input += '\0';
    digest_input += t;
    return t;
  }
  nlohmann::json json(const nlohmann::json& ref) {
    if (!ref.is_string()) return ref;
    const std::string t = text(ref.get<std::string>());
    try {
      return nlohmann::json::parse(t);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(ref.get<std::string>() + ": " + e.what());
    }
  }
};

std::vector<Cell> read_cells(const nlohmann::json& j) {
  std::vector<Cell> cells;
  for (const auto& c : j) cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
  return cells;
}

GeoLayer parse_layer(const nlohmann::json& j, const GridSpec& grid,
                     Resolver& res) {
  GeoLayer layer;
  layer.kind = layer_kind_from_string(j.at("kind").get<std::string>());
  layer.name = j.value("name", std::string(to_string(layer.kind)));
  layer.factor_override = j.value("factor", 0.0);
  if (is_value_layer(layer.kind)) {
    if (j.contains("values")) {
      layer.values = j["values"].get<std::vector<double>>();
    } else if (j.contains("ascii_grid")) {
      std::istringstream in(res.text(j["ascii_grid"].get<std::string>()));
      layer.values = read_ascii_grid(in, grid);
    } else {
      throw ValidationError("layer '" + layer.name +
                            "' needs 'values' or 'ascii_grid'");
    }
  } else {
    if (j.contains("cells")) layer.cells = read_cells(j["cells"]);
    if (j.contains("geojson")) {
      const auto more = rasterize_geojson(res.json(j["geojson"]), grid);
      layer.cells.insert(layer.cells.end(), more.begin(), more.end());
    }
  }
  return layer;
}

}  // namespace

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const nlohmann::json& doc, const fs::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  Resolver res{base_dir, {}};
  try {
    cfg.output_dir = res.path(doc.value("output_dir", std::string("out")));

    const auto& g = doc.at("grid");
    cfg.grid.width = g.at("width").get<int>();
    cfg.grid.height = g.at("height").get<int>();
    cfg.grid.cell_size = g.value("cell_size", cfg.grid.cell_size);
    cfg.grid.origin_x = g.value("origin_x", 0.0);
    cfg.grid.origin_y = g.value("origin_y", 0.0);
    cfg.grid.projection = g.value("projection", cfg.grid.projection);
    cfg.grid.validate();

    for (const auto& l : doc.value("layers", nlohmann::json::array())) {
      cfg.layers.layers.push_back(parse_layer(l, cfg.grid, res));
    }
    if (doc.contains("blocked")) {
      const auto& b = doc["blocked"];
      if (b.is_array()) {
        cfg.layers.blocked = read_cells(b);
      } else {
        cfg.layers.blocked = rasterize_geojson(res.json(b.at("geojson")), cfg.grid);
      }
    }

    const RasterMap frame(cfg.grid);
    bool emitter = false;
    bool sink = false;
    for (const auto& n : doc.at("nodes")) {
      TerminalSpec t;
      t.id = n.at("id").get<std::string>();
      t.kind = node_kind_from_string(n.at("kind").get<std::string>());
      if (n.contains("cell")) {
        const Cell c{n["cell"].at(0).get<int>(), n["cell"].at(1).get<int>()};
        if (!frame.contains(c)) {
          throw ValidationError("node '" + t.id + "' lies outside the grid");
        }
        t.location = frame.center(c);
      } else {
        t.location = {n.at("x").get<double>(), n.at("y").get<double>()};
      }
      emitter |= t.kind == NodeKind::kEmitter;
      sink |= t.kind == NodeKind::kSink;
      cfg.nodes.push_back(t);
    }
    if (!emitter) throw ValidationError("configuration has no emitter node");
    if (!sink) throw ValidationError("configuration has no sink node");

    cfg.scenarios = res.json(doc.at("scenarios"));
    if (doc.contains("hydraulics")) cfg.hydraulics = doc["hydraulics"].get<HydraulicParams>();
    if (doc.contains("cost")) cfg.cost = doc["cost"].get<CostParams>();
    cfg.hydraulics.validate();
    cfg.cost.validate();

    if (doc.contains("trends")) {
      const auto& t = doc["trends"];
      cfg.trends.count = t.value("count", cfg.trends.count);
      cfg.trends.tolerance = t.value("tolerance", cfg.trends.tolerance);
      cfg.trends.max_flow = t.value("max_flow", cfg.trends.max_flow);
      if (t.contains("table")) {
        cfg.trends.pinned = t["table"].get<std::vector<Trend>>();
        validate_trends(cfg.trends.pinned);
      }
    }
    if (doc.contains("horizon")) cfg.horizon = doc["horizon"].get<HorizonParams>();
    cfg.horizon.validate();

    if (doc.contains("solver")) {
      const auto& s = doc["solver"];
      cfg.solver.backend = s.value("backend", cfg.solver.backend);
      auto& o = cfg.solver.options;
      o.time_limit_seconds = s.value("time_limit", o.time_limit_seconds);
      o.relative_gap = s.value("relative_gap", o.relative_gap);
      o.node_limit = s.value("node_limit", o.node_limit);
      o.threads = s.value("threads", o.threads);
      o.seed = s.value("seed", o.seed);
      if (!(o.time_limit_seconds > 0.0) || !(o.relative_gap >= 0.0)) {
        throw ValidationError("solver time_limit must be > 0 and gap >= 0");
      }
    }
    cfg.relaxed_coupling = doc.value("relaxed_coupling", false);
    if (doc.value("om_no_overlap", false)) cfg.horizon.om_no_overlap = true;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed configuration: ") + e.what());
  } catch (const ParameterError& e) {
    throw ValidationError(e.what());
  }
  // Run-time limits and the output location do not change a solved model.
  nlohmann::json hashed = doc;
  hashed.erase("output_dir");
  if (hashed.contains("solver")) {
    hashed["solver"].erase("time_limit");
    hashed["solver"].erase("threads");
  }
  cfg.hash = fnv1a_hex(hashed.dump() + res.digest_input);
  return cfg;
}

RunConfig load_config(const fs::path& path, const nlohmann::json& overrides) {
  nlohmann::json doc = read_json_file(path);
  doc.merge_patch(overrides);
  return parse_config(doc, path.parent_path());
}

RasterMap build_raster(const RunConfig& cfg) {
  return compose_raster(cfg.layers, cfg.grid);
}

double peak_emission(const RunConfig& cfg) {
  auto total = [](const nlohmann::json& table) {
    double sum = 0.0;
    for (const auto& [id, v] : table.items()) {
      if (v.get<double>() > 0.0) sum += v.get<double>();
    }
    return sum;
  };
  double peak = total(cfg.scenarios.at("period0"));
  for (const auto& s : cfg.scenarios.at("scenarios")) {
    peak = std::max(peak, total(s.at("period1")));
  }
  return peak;
}

TrendFit resolve_trends(const RunConfig& cfg) {
  if (!cfg.trends.pinned.empty()) {
    return {cfg.trends.pinned, 0.0, true};
  }
  double max_flow = cfg.trends.max_flow;
  if (max_flow <= 0.0) max_flow = peak_emission(cfg);
  if (max_flow <= 0.0) {
    throw ValidationError("no emissions in any scenario; nothing to size");
  }
  return fit_trends(cfg.cost, cfg.hydraulics, max_flow, cfg.trends.count,
                    cfg.trends.tolerance);
}

PlanningInput make_planning_input(const RunConfig& cfg,
                                  const CandidateGraph& graph,
                                  const std::vector<Trend>& trends) {
  PlanningInput in;
  in.graph = graph;
  in.trends = trends;
  in.scenarios = load_scenarios(cfg.scenarios, graph);
  in.horizon = cfg.horizon;
  in.relaxed_coupling = cfg.relaxed_coupling;
  in.validate();
  return in;
}

}  // namespace pipeplan
