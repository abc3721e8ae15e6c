#include "pipeplan/raster.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "pipeplan/errors.h"

namespace pipeplan {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_multiplier(double v, const std::string& where) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw InvalidLayerError("multiplier " + format_double(v) + " at " + where +
                            " is not finite and positive");
  }
}

std::string cell_name(Cell c) {
  return "cell (" + std::to_string(c.row) + ", " + std::to_string(c.col) + ")";
}

// Per-cell factor of one layer, or 1 where the layer does not apply.
std::vector<double> layer_factors(const GeoLayer& layer, const GridSpec& spec) {
  const int n = spec.width * spec.height;
  std::vector<double> f(n, 1.0);
  if (is_value_layer(layer.kind)) {
    if (static_cast<int>(layer.values.size()) != n) {
      throw InvalidLayerError("layer '" + layer.name + "' has " +
                              std::to_string(layer.values.size()) +
                              " values for a grid of " + std::to_string(n) +
                              " cells");
    }
    for (int i = 0; i < n; ++i) {
      if (!std::isnan(layer.values[i])) {
        f[i] = layer.factor_for_value(layer.values[i]);
      }
    }
    return f;
  }
  const double factor = layer.feature_factor();
  for (const Cell& c : layer.cells) {
    if (c.row < 0 || c.row >= spec.height || c.col < 0 || c.col >= spec.width) {
      throw InvalidLayerError("layer '" + layer.name + "' touches " +
                              cell_name(c) + " outside the grid");
    }
    f[c.row * spec.width + c.col] = factor;
  }
  return f;
}

RasterMap finish(const GridSpec& spec, std::vector<double> mult,
                 const std::vector<Cell>& blocked) {
  RasterMap raster(spec, std::move(mult));
  for (const Cell& c : blocked) {
    if (!raster.contains(c)) {
      throw InvalidLayerError("blocked " + cell_name(c) + " outside the grid");
    }
    raster.set_blocked(c, true);
  }
  return raster;
}

// Grid-continuous coordinates: u along columns, v along rows (down).
struct GridPoint {
  double u;
  double v;
};

GridPoint to_grid(const Point& p, const GridSpec& spec) {
  const double top = spec.origin_y + spec.height * spec.cell_size;
  return {(p.x - spec.origin_x) / spec.cell_size, (top - p.y) / spec.cell_size};
}

// Cells crossed by segment a-b (clipped to the grid), Amanatides-Woo walk.
void trace_segment(GridPoint a, GridPoint b, const GridSpec& spec,
                   std::vector<Cell>& out) {
  const double w = spec.width;
  const double h = spec.height;
  double t0 = 0.0;
  double t1 = 1.0;
  const double du = b.u - a.u;
  const double dv = b.v - a.v;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
    return true;
  };
  if (!clip(-du, a.u) || !clip(du, w - a.u) || !clip(-dv, a.v) ||
      !clip(dv, h - a.v)) {
    return;
  }
  GridPoint s{a.u + t0 * du, a.v + t0 * dv};
  GridPoint e{a.u + t1 * du, a.v + t1 * dv};
  auto cell_of = [&](GridPoint p) {
    int col = std::clamp(static_cast<int>(std::floor(p.u)), 0, spec.width - 1);
    int row = std::clamp(static_cast<int>(std::floor(p.v)), 0, spec.height - 1);
    return Cell{row, col};
  };
  Cell cur = cell_of(s);
  const Cell last = cell_of(e);
  const double su = e.u - s.u;
  const double sv = e.v - s.v;
  const int step_c = su > 0 ? 1 : -1;
  const int step_r = sv > 0 ? 1 : -1;
  const double inf = std::numeric_limits<double>::infinity();
  const double delta_u = su != 0.0 ? std::abs(1.0 / su) : inf;
  const double delta_v = sv != 0.0 ? std::abs(1.0 / sv) : inf;
  double next_u = su != 0.0
                      ? ((step_c > 0 ? cur.col + 1 : cur.col) - s.u) / su
                      : inf;
  double next_v = sv != 0.0
                      ? ((step_r > 0 ? cur.row + 1 : cur.row) - s.v) / sv
                      : inf;
  out.push_back(cur);
  const int guard = spec.width + spec.height + 4;
  for (int k = 0; k < guard && !(cur == last); ++k) {
    if (next_u < next_v) {
      cur.col += step_c;
      next_u += delta_u;
    } else {
      cur.row += step_r;
      next_v += delta_v;
    }
    if (cur.row < 0 || cur.row >= spec.height || cur.col < 0 ||
        cur.col >= spec.width) {
      break;
    }
    out.push_back(cur);
  }
}

Point read_position(const nlohmann::json& pos) {
  if (!pos.is_array() || pos.size() < 2) {
    throw ValidationError("GeoJSON position must be [x, y]");
  }
  return {pos[0].get<double>(), pos[1].get<double>()};
}

std::vector<Point> read_line(const nlohmann::json& coords) {
  std::vector<Point> pts;
  for (const auto& p : coords) pts.push_back(read_position(p));
  return pts;
}

void rasterize_line(const std::vector<Point>& pts, const GridSpec& spec,
                    std::vector<Cell>& out) {
  if (pts.size() == 1) {
    trace_segment(to_grid(pts[0], spec), to_grid(pts[0], spec), spec, out);
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    trace_segment(to_grid(pts[i - 1], spec), to_grid(pts[i], spec), spec, out);
  }
}

// Even-odd fill over all rings of one polygon (so holes are excluded).
void rasterize_polygon(const nlohmann::json& rings, const GridSpec& spec,
                       std::vector<Cell>& out) {
  std::vector<std::vector<GridPoint>> grid_rings;
  double umin = std::numeric_limits<double>::infinity();
  double umax = -umin;
  double vmin = umin;
  double vmax = -umin;
  for (const auto& ring : rings) {
    std::vector<Point> pts = read_line(ring);
    rasterize_line(pts, spec, out);
    std::vector<GridPoint> g;
    for (const Point& p : pts) {
      GridPoint q = to_grid(p, spec);
      umin = std::min(umin, q.u);
      umax = std::max(umax, q.u);
      vmin = std::min(vmin, q.v);
      vmax = std::max(vmax, q.v);
      g.push_back(q);
    }
    grid_rings.push_back(std::move(g));
  }
  if (grid_rings.empty()) return;
  const int c0 = std::max(0, static_cast<int>(std::floor(umin)));
  const int c1 = std::min(spec.width - 1, static_cast<int>(std::ceil(umax)));
  const int r0 = std::max(0, static_cast<int>(std::floor(vmin)));
  const int r1 = std::min(spec.height - 1, static_cast<int>(std::ceil(vmax)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const double pu = c + 0.5;
      const double pv = r + 0.5;
      bool inside = false;
      for (const auto& ring : grid_rings) {
        for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
          const GridPoint& a = ring[i];
          const GridPoint& b = ring[j];
          if ((a.v > pv) != (b.v > pv) &&
              pu < (b.u - a.u) * (pv - a.v) / (b.v - a.v) + a.u) {
            inside = !inside;
          }
        }
      }
      if (inside) out.push_back({r, c});
    }
  }
}

void rasterize_geometry(const nlohmann::json& g, const GridSpec& spec,
                        std::vector<Cell>& out) {
  if (g.is_null()) return;
  const std::string type = g.at("type").get<std::string>();
  if (type == "GeometryCollection") {
    for (const auto& sub : g.at("geometries")) rasterize_geometry(sub, spec, out);
    return;
  }
  const auto& coords = g.at("coordinates");
  if (type == "Point") {
    rasterize_line({read_position(coords)}, spec, out);
  } else if (type == "MultiPoint") {
    for (const auto& p : coords) rasterize_line({read_position(p)}, spec, out);
  } else if (type == "LineString") {
    rasterize_line(read_line(coords), spec, out);
  } else if (type == "MultiLineString") {
    for (const auto& l : coords) rasterize_line(read_line(l), spec, out);
  } else if (type == "Polygon") {
    rasterize_polygon(coords, spec, out);
  } else if (type == "MultiPolygon") {
    for (const auto& poly : coords) rasterize_polygon(poly, spec, out);
  } else {
    throw ValidationError("unsupported GeoJSON geometry type '" + type + "'");
  }
}

}  // namespace

void GridSpec::validate() const {
  if (width <= 0 || height <= 0) {
    throw ValidationError("grid must have positive width and height");
  }
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw ValidationError("cell_size must be positive");
  }
  if (!std::isfinite(origin_x) || !std::isfinite(origin_y)) {
    throw ValidationError("grid origin must be finite");
  }
}

RasterMap::RasterMap(GridSpec spec)
    : spec_(std::move(spec)),
      multiplier_(static_cast<std::size_t>(spec_.width) * spec_.height, 1.0),
      blocked_(multiplier_.size(), 0) {
  spec_.validate();
}

RasterMap::RasterMap(GridSpec spec, std::vector<double> multipliers)
    : spec_(std::move(spec)), multiplier_(std::move(multipliers)) {
  spec_.validate();
  blocked_.assign(static_cast<std::size_t>(spec_.width) * spec_.height, 0);
  validate();
}

void RasterMap::set_multiplier(Cell c, double value) {
  check_multiplier(value, cell_name(c));
  multiplier_[index(c)] = value;
}

Point RasterMap::center(Cell c) const {
  const double top = spec_.origin_y + spec_.height * spec_.cell_size;
  return {spec_.origin_x + (c.col + 0.5) * spec_.cell_size,
          top - (c.row + 0.5) * spec_.cell_size};
}

Cell RasterMap::cell_at(Point p) const {
  const GridPoint g = to_grid(p, spec_);
  if (!(g.u >= 0.0 && g.u <= spec_.width && g.v >= 0.0 &&
        g.v <= spec_.height)) {
    throw ValidationError("point (" + format_double(p.x) + ", " +
                          format_double(p.y) + ") lies outside the grid");
  }
  return {std::min(static_cast<int>(std::floor(g.v)), spec_.height - 1),
          std::min(static_cast<int>(std::floor(g.u)), spec_.width - 1)};
}

void RasterMap::validate() const {
  const std::size_t n = static_cast<std::size_t>(spec_.width) * spec_.height;
  if (multiplier_.size() != n || blocked_.size() != n) {
    throw ValidationError("raster data does not match its grid size");
  }
  for (std::size_t i = 0; i < n; ++i) {
    check_multiplier(multiplier_[i], cell_name(cell(static_cast<int>(i))));
  }
}

std::string_view to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::kPopulationDensity:
      return "population_density_band";
    case LayerKind::kPreexistingPipeline:
      return "preexisting_pipeline";
    case LayerKind::kRailroad:
      return "railroad";
    case LayerKind::kMotorway:
      return "motorway";
    case LayerKind::kWater:
      return "water";
    case LayerKind::kCddaProtected:
      return "cdda_protected";
    case LayerKind::kNationalPark:
      return "national_park";
    case LayerKind::kSlope:
      return "slope";
  }
  return "unknown";
}

LayerKind layer_kind_from_string(std::string_view name) {
  for (LayerKind k :
       {LayerKind::kPopulationDensity, LayerKind::kPreexistingPipeline,
        LayerKind::kRailroad, LayerKind::kMotorway, LayerKind::kWater,
        LayerKind::kCddaProtected, LayerKind::kNationalPark,
        LayerKind::kSlope}) {
    if (to_string(k) == name) return k;
  }
  throw ValidationError("unknown layer kind '" + std::string(name) + "'");
}

double population_factor(double density) {
  if (!(density >= 0.0) || !std::isfinite(density)) {
    throw InvalidLayerError("population density must be finite and >= 0, got " +
                            format_double(density));
  }
  if (density < 250.0) return 1.0;
  if (density < 500.0) return 4.0;
  if (density < 2000.0) return 9.0;
  if (density < 4000.0) return 16.0;
  if (density <= 8000.0) return 25.0;
  return 36.0;
}

double slope_factor(double degrees) {
  if (!(degrees >= 0.0 && degrees <= 90.0)) {
    throw InvalidLayerError("slope must lie in [0, 90] degrees, got " +
                            format_double(degrees));
  }
  return 1.0 + 19.0 * degrees / 90.0;
}

bool is_value_layer(LayerKind kind) {
  return kind == LayerKind::kPopulationDensity || kind == LayerKind::kSlope;
}

double feature_factor(LayerKind kind) {
  switch (kind) {
    case LayerKind::kPreexistingPipeline:
      return 0.25;
    case LayerKind::kRailroad:
    case LayerKind::kMotorway:
      return 3.0;
    case LayerKind::kWater:
    case LayerKind::kCddaProtected:
      return 10.0;
    case LayerKind::kNationalPark:
      return 30.0;
    default:
      throw ParameterError("layer kind " + std::string(to_string(kind)) +
                           " has value-dependent factors");
  }
}

double GeoLayer::factor_for_value(double value) const {
  return kind == LayerKind::kSlope ? slope_factor(value)
                                   : population_factor(value);
}

double GeoLayer::feature_factor() const {
  if (factor_override > 0.0) {
    check_multiplier(factor_override, "layer '" + name + "'");
    return factor_override;
  }
  return pipeplan::feature_factor(kind);
}

RasterMap compose_raster(const LayerSet& layers, const GridSpec& spec) {
  spec.validate();
  std::vector<std::vector<double>> factors;
  factors.reserve(layers.layers.size());
  for (const GeoLayer& layer : layers.layers) {
    factors.push_back(layer_factors(layer, spec));
  }
  const int n = spec.width * spec.height;
  std::vector<double> mult(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double m = 1.0;
    for (const auto& f : factors) m *= f[i];
    mult[i] = m;
  }
  return finish(spec, std::move(mult), layers.blocked);
}

RasterMap compose_raster_serial(const LayerSet& layers, const GridSpec& spec) {
  spec.validate();
  const int n = spec.width * spec.height;
  std::vector<double> mult(n, 1.0);
  for (const GeoLayer& layer : layers.layers) {
    const std::vector<double> f = layer_factors(layer, spec);
    for (int i = 0; i < n; ++i) mult[i] *= f[i];
  }
  return finish(spec, std::move(mult), layers.blocked);
}

void write_raster(std::ostream& out, const RasterMap& raster) {
  const GridSpec& s = raster.spec();
  out << "pipeplan-raster 1\n"
      << "width " << s.width << "\n"
      << "height " << s.height << "\n"
      << "cell_size " << format_double(s.cell_size) << "\n"
      << "origin " << format_double(s.origin_x) << " "
      << format_double(s.origin_y) << "\n"
      << "projection " << s.projection << "\n"
      << "multipliers\n";
  for (int r = 0; r < s.height; ++r) {
    for (int c = 0; c < s.width; ++c) {
      if (c > 0) out << ' ';
      out << format_double(raster.multiplier(Cell{r, c}));
    }
    out << '\n';
  }
  std::vector<int> blocked;
  for (int i = 0; i < raster.num_cells(); ++i) {
    if (raster.blocked(i)) blocked.push_back(i);
  }
  out << "blocked " << blocked.size() << "\n";
  for (std::size_t i = 0; i < blocked.size(); ++i) {
    out << (i > 0 ? " " : "") << blocked[i];
  }
  out << "\n";
}

RasterMap read_raster(std::istream& in) {
  auto expect = [&in](const std::string& key) {
    std::string word;
    if (!(in >> word) || word != key) {
      throw IoError("raster file: expected '" + key + "'");
    }
  };
  expect("pipeplan-raster");
  int version = 0;
  in >> version;
  if (version != 1) throw IoError("raster file: unsupported version");
  GridSpec s;
  expect("width");
  in >> s.width;
  expect("height");
  in >> s.height;
  expect("cell_size");
  in >> s.cell_size;
  expect("origin");
  in >> s.origin_x >> s.origin_y;
  expect("projection");
  in >> s.projection;
  if (!in) throw IoError("raster file: malformed header");
  s.validate();
  expect("multipliers");
  std::vector<double> mult(static_cast<std::size_t>(s.width) * s.height);
  for (double& m : mult) {
    if (!(in >> m)) throw IoError("raster file: truncated multiplier grid");
  }
  expect("blocked");
  std::size_t count = 0;
  in >> count;
  RasterMap raster(s, std::move(mult));
  for (std::size_t i = 0; i < count; ++i) {
    int idx = -1;
    if (!(in >> idx) || idx < 0 || idx >= raster.num_cells()) {
      throw IoError("raster file: bad blocked cell index");
    }
    raster.set_blocked(raster.cell(idx), true);
  }
  return raster;
}

std::vector<double> read_ascii_grid(std::istream& in, const GridSpec& spec) {
  spec.validate();
  int ncols = -1;
  int nrows = -1;
  double xll = kNaN;
  double yll = kNaN;
  double cs = kNaN;
  double nodata = kNaN;
  bool centered = false;
  // Header lines are "key value"; the first numeric token starts the data.
  std::string token;
  double first_value = kNaN;
  while (in >> token) {
    std::string key = token;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    const bool numeric =
        !key.empty() && (std::isdigit(static_cast<unsigned char>(key[0])) ||
                         key[0] == '-' || key[0] == '+' || key[0] == '.');
    if (numeric) {
      first_value = std::stod(token);
      break;
    }
    double value = 0.0;
    if (!(in >> value)) throw IoError("ASCII grid: missing value for " + token);
    if (key == "ncols") {
      ncols = static_cast<int>(value);
    } else if (key == "nrows") {
      nrows = static_cast<int>(value);
    } else if (key == "xllcorner" || key == "xllcenter") {
      xll = value;
      centered = key == "xllcenter";
    } else if (key == "yllcorner" || key == "yllcenter") {
      yll = value;
    } else if (key == "cellsize") {
      cs = value;
    } else if (key == "nodata_value") {
      nodata = value;
    } else {
      throw IoError("ASCII grid: unknown header key " + token);
    }
  }
  if (ncols <= 0 || nrows <= 0 || !(cs > 0.0) || std::isnan(xll) ||
      std::isnan(yll) || std::isnan(first_value)) {
    throw IoError("ASCII grid: incomplete header or no data");
  }
  if (centered) {
    xll -= 0.5 * cs;
    yll -= 0.5 * cs;
  }
  std::vector<double> data(static_cast<std::size_t>(ncols) * nrows);
  data[0] = first_value;
  for (std::size_t i = 1; i < data.size(); ++i) {
    if (!(in >> data[i])) throw IoError("ASCII grid: truncated data");
  }
  RasterMap target(spec);
  std::vector<double> out(target.num_cells(), kNaN);
  for (int i = 0; i < target.num_cells(); ++i) {
    const Point p = target.center(target.cell(i));
    const double fc = std::floor((p.x - xll) / cs);
    const double fr = std::floor((p.y - yll) / cs);
    if (fc < 0 || fc >= ncols || fr < 0 || fr >= nrows) continue;
    const int src_row = nrows - 1 - static_cast<int>(fr);
    const double v = data[static_cast<std::size_t>(src_row) * ncols +
                          static_cast<int>(fc)];
    if (!std::isnan(nodata) && v == nodata) continue;
    out[i] = v;
  }
  return out;
}

std::vector<Cell> rasterize_geojson(const nlohmann::json& geojson,
                                    const GridSpec& spec) {
  spec.validate();
  std::vector<Cell> out;
  try {
    const std::string type = geojson.at("type").get<std::string>();
    if (type == "FeatureCollection") {
      for (const auto& f : geojson.at("features")) {
        rasterize_geometry(f.at("geometry"), spec, out);
      }
    } else if (type == "Feature") {
      rasterize_geometry(geojson.at("geometry"), spec, out);
    } else {
      rasterize_geometry(geojson, spec, out);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed GeoJSON: ") + e.what());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pipeplan
