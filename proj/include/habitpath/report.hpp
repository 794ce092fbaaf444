#pragma once

// Flat-file outputs: per-period CSV, JSON run records and a minimal SVG
// line chart. All writers are deterministic for a fixed input.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "habitpath/core.hpp"
#include "habitpath/oracle.hpp"
#include "habitpath/solver.hpp"

namespace habitpath {

// Shortest form is not required: always 17 significant digits, so the
// value round-trips exactly through strtod.
std::string format_double(double value);

struct RunRecord {
  ScenarioConfig scenario;
  SolveResult result;
  ShapeMetrics shape;
  double wall_seconds = 0.0;
};

RunRecord run_scenario(const ValidatedScenario& scenario);

// Columns: t, c_t, habit_t, C_t, felicity_t, discount_t. habit_t is empty
// for time-separable families; felicity_t is empty outside the domain.
void write_path_csv(std::ostream& out, const ValidatedScenario& scenario,
                    const ConsumptionPath& path);
ConsumptionPath read_path_csv(std::istream& in);

nlohmann::json to_json(const SolveResult& result);
nlohmann::json to_json(const ShapeMetrics& shape);
nlohmann::json to_json(const RunRecord& record);
SolveResult solve_result_from_json(const nlohmann::json& j);
ShapeMetrics shape_metrics_from_json(const nlohmann::json& j);
RunRecord run_record_from_json(const nlohmann::json& j);

struct PlotSeries {
  std::string label;
  std::vector<double> values;  // y at t = 1..n
};

std::string render_svg(const std::string& title,
                       const std::vector<PlotSeries>& series);

}  // namespace habitpath
