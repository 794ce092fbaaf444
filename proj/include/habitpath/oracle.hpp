#pragma once

// Independent ground truth for the solver: closed-form optima of the
// solvable families, exhaustive grid search on tiny horizons, and shape
// metrics that turn qualitative descriptions of a path into numbers.

#include <optional>

#include "habitpath/core.hpp"

namespace habitpath {

// c_t = K r^t with r = e^{-rho/(1-gamma)}, normalized onto the budget.
ConsumptionPath separable_crra_closed_form(const ValidatedScenario& scenario);

// Arithmetic sequence W0/N + (rho/eta)((N+1)/2 - t). Empty when some entry is
// not positive (the interior solution does not exist).
std::optional<ConsumptionPath> separable_cara_closed_form(
    const ValidatedScenario& scenario);

// c_t = alpha C_t - (rho/eta) t + K. Empty on a boundary solution.
std::optional<ConsumptionPath> cuj_cara_closed_form(
    const ValidatedScenario& scenario);

struct GridOptimum {
  ConsumptionPath path;
  double objective = 0.0;
  long long evaluated = 0;  // grid points inside the domain
};

// Best path among compositions of W0 into N positive multiples of
// W0/grid_points. Requires N <= 4 and grid_points >= 50. Throws
// NO_FEASIBLE_GRID_POINT when every grid point violates the domain.
GridOptimum brute_force_small(const ValidatedScenario& scenario,
                              int grid_points);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |c_t - (intercept + slope t)|
};

struct ShapeMetrics {
  double first_jump = 0.0;  // |c_1 - c_2| / c_2
  double last_jump = 0.0;   // |c_N - c_{N-1}| / c_{N-1}
  int argmax_t = 1;
  bool unimodal = true;
  int trough_t = 1;  // argmin over t <= ceil(N/2)
  // Consecutive increases starting right after trough_t.
  int rise_after_trough = 0;
  double end_mass = 0.0;  // c_N / W0
  LinearFit slope_fit;
};

// Comparisons use a noise floor of 1e-6 W0.
ShapeMetrics shape_metrics(const ConsumptionPath& path, double W0);

}  // namespace habitpath
