// Penalty raster ("rasta-map"): a grid of square cells, each holding the
// product of the multipliers of every geodata layer that touches it.
//
// Coordinates are projected and in km. The origin is the lower-left corner of
// the grid; row 0 is the northernmost row (ESRI ASCII grid convention).

#ifndef PIPEPLAN_RASTER_H_
#define PIPEPLAN_RASTER_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace pipeplan {

struct Cell {
  int row = 0;
  int col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct GridSpec {
  int width = 0;
  int height = 0;
  double cell_size = 1.5;  // km
  double origin_x = 0.0;
  double origin_y = 0.0;
  std::string projection = "EPSG:3035";

  // Throws ValidationError on non-positive dimensions or cell size.
  void validate() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class RasterMap {
 public:
  RasterMap() = default;
  // All multipliers 1, nothing blocked.
  explicit RasterMap(GridSpec spec);
  // Takes ownership of a row-major multiplier grid; validates it.
  RasterMap(GridSpec spec, std::vector<double> multipliers);

  const GridSpec& spec() const { return spec_; }
  int width() const { return spec_.width; }
  int height() const { return spec_.height; }
  double cell_size() const { return spec_.cell_size; }
  int num_cells() const { return spec_.width * spec_.height; }

  bool contains(Cell c) const {
    return c.row >= 0 && c.row < spec_.height && c.col >= 0 &&
           c.col < spec_.width;
  }
  int index(Cell c) const { return c.row * spec_.width + c.col; }
  Cell cell(int index) const {
    return {index / spec_.width, index % spec_.width};
  }

  double multiplier(Cell c) const { return multiplier_[index(c)]; }
  double multiplier(int index) const { return multiplier_[index]; }
  // Throws InvalidLayerError unless value is finite and > 0.
  void set_multiplier(Cell c, double value);
  const std::vector<double>& multipliers() const { return multiplier_; }

  // Blocked cells are impassable for routing (exclusion zones).
  bool blocked(Cell c) const { return blocked_[index(c)] != 0; }
  bool blocked(int index) const { return blocked_[index] != 0; }
  void set_blocked(Cell c, bool value) { blocked_[index(c)] = value ? 1 : 0; }

  Point center(Cell c) const;
  // Cell containing the point; points on the outer boundary snap inward.
  // Throws ValidationError when the point lies outside the grid.
  Cell cell_at(Point p) const;

  // Every multiplier finite and > 0, blocked mask sized. Throws otherwise.
  void validate() const;

  friend bool operator==(const RasterMap&, const RasterMap&) = default;

 private:
  GridSpec spec_;
  std::vector<double> multiplier_;
  std::vector<std::uint8_t> blocked_;
};

enum class LayerKind {
  kPopulationDensity,  // per-cell inhabitants / km^2
  kPreexistingPipeline,
  kRailroad,
  kMotorway,
  kWater,
  kCddaProtected,
  kNationalPark,
  kSlope,  // per-cell degrees in [0, 90]
};

std::string_view to_string(LayerKind kind);
// Throws ValidationError for unknown names.
LayerKind layer_kind_from_string(std::string_view name);

// Factor tables.
double population_factor(double inhabitants_per_km2);
// 1 + 19 * slope / 90, monotone from 1 at 0 deg to 20 at 90 deg. Throws
// InvalidLayerError outside [0, 90].
double slope_factor(double degrees);
// Fixed factor of a feature layer (pipeline 0.25, railroad 3, ...). Throws
// ParameterError for the two value-driven kinds.
double feature_factor(LayerKind kind);
bool is_value_layer(LayerKind kind);

// One geodata layer resolved onto the grid. Value layers (population, slope)
// carry one value per cell (NaN = no data, factor 1). Feature layers carry
// the set of touched cells; a cell listed twice still counts once.
struct GeoLayer {
  LayerKind kind = LayerKind::kPopulationDensity;
  std::string name;
  std::vector<double> values;
  std::vector<Cell> cells;
  // Overrides the table factor for feature layers when > 0.
  double factor_override = 0.0;

  double factor_for_value(double value) const;
  double feature_factor() const;
};

struct LayerSet {
  std::vector<GeoLayer> layers;
  std::vector<Cell> blocked;
};

// Multiplier of each cell = product of the factors of every layer touching it
// (1 for untouched cells). Parallel over cells. Throws InvalidLayerError on a
// malformed layer or a non-finite/non-positive product.
RasterMap compose_raster(const LayerSet& layers, const GridSpec& spec);
// Single-threaded reference with identical results.
RasterMap compose_raster_serial(const LayerSet& layers, const GridSpec& spec);

// Plain-text persistence: a header (magic, width, height, cell_size, origin,
// projection), then `height` lines of `width` multipliers in round-trip
// precision, then the blocked cell indices.
void write_raster(std::ostream& out, const RasterMap& raster);
RasterMap read_raster(std::istream& in);

// ESRI ASCII grid sampled at every cell centre of `spec` (nearest source
// cell). Points outside the source grid or at NODATA give NaN.
std::vector<double> read_ascii_grid(std::istream& in, const GridSpec& spec);

// Cells touched by the features of a GeoJSON FeatureCollection / Feature /
// geometry, in grid coordinates: points give their cell, lines every cell
// they cross, polygons every cell whose centre is inside (holes respected)
// plus the cells crossed by their rings. Sorted, unique.
std::vector<Cell> rasterize_geojson(const nlohmann::json& geojson,
                                    const GridSpec& spec);

}  // namespace pipeplan

#endif  // PIPEPLAN_RASTER_H_
