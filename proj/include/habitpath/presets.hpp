#pragma once

// Scenario presets for the seven published figures and the shape
// expectations each figure is checked against.

#include <string>
#include <vector>

#include "habitpath/core.hpp"
#include "habitpath/report.hpp"

namespace habitpath {

inline constexpr double kDefaultEta = 1e-5;

// Documented default parameters for each family: gamma = 0.5, eta = 1e-5,
// and mid-range values for the family-specific parameters.
UtilitySpec family_defaults(UtilityFamily family);

// N = 20, rho = 3%, W0 = $1,000,000, c0 = $100,000 with family_defaults.
ScenarioConfig paper_baseline(UtilityFamily family);

struct PresetCurve {
  std::string label;
  ScenarioConfig config;
  // Expected not to converge (unbounded or boundary optimum); reported, not
  // treated as a solver failure.
  bool pathological = false;
  std::string note;
};

struct FigurePreset {
  int id = 0;
  std::string description;
  std::vector<PresetCurve> curves;
};

// Throws PARAM_OUT_OF_RANGE unless 1 <= id <= 7.
FigurePreset figure_preset(int id);

struct ShapeCheck {
  std::string curve;
  std::string name;
  bool pass = false;
  std::string detail;
};

// records[i] must be the solved curves[i].
std::vector<ShapeCheck> check_figure(const FigurePreset& preset,
                                     const std::vector<RunRecord>& records);

}  // namespace habitpath
