// GeoJSON and delimiter-separated exports of solved plans and reports.

#ifndef PIPEPLAN_EXPORT_H_
#define PIPEPLAN_EXPORT_H_

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pipeplan/economics.h"
#include "pipeplan/planning.h"
#include "pipeplan/raster.h"

namespace pipeplan {

// "pressure_increase", "loop" (new line beside a built one), "new_line", or
// "none" (period 0 and untouched arcs).
std::string_view upgrade_op(const FirstStageDecision& first,
                            const SecondStageDecision& second, int arc);

// Period-0 arcs built by the plan, as LineStrings through the route cells.
// Properties: period, scenario, from, to, trend, flow, upgrade_op.
nlohmann::ordered_json period0_features(const PlanSolution& plan,
                                        const PlanningInput& in,
                                        const GridSpec& grid);

// Period-1 changes for one scenario of the plan: arcs with a pressure
// increase or a new line. An untouched second stage gives an empty
// collection.
nlohmann::ordered_json period1_features(const PlanSolution& plan,
                                        const ScenarioResult& scenario,
                                        const PlanningInput& in,
                                        const GridSpec& grid);

// Terminal and transport nodes as Points.
nlohmann::ordered_json node_features(const PlanningInput& in);

// Tables of model totals and of potential / regret / benefit, in Mio EUR
// rounded to 0.001, one row per scenario. The config hash is the last column.
void write_totals_csv(std::ostream& out, const RegretReport& report,
                      const std::string& config_hash);
void write_differences_csv(std::ostream& out, const RegretReport& report,
                           const std::string& config_hash);

}  // namespace pipeplan

#endif  // PIPEPLAN_EXPORT_H_
