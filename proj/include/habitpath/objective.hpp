#pragma once

// Lifetime discounted utility J(c) = sum_t e^{-rho t} u_t and its gradient
// with respect to the whole consumption path.

#include <vector>

#include "habitpath/core.hpp"
#include "habitpath/utility.hpp"

namespace habitpath {

struct ObjectiveEval {
  double value = 0.0;
  std::vector<double> gradient;    // dJ/dc_t, t = 1..N
  std::vector<double> per_period;  // undiscounted felicity u_t
  HabitTrace habit;
};

// Throws DOMAIN annotated with the earliest offending period.
ObjectiveEval lifetime_objective(const ConsumptionPath& path,
                                 const ValidatedScenario& scenario);

// Value only; skips the gradient pass.
double lifetime_value(const ConsumptionPath& path,
                      const ValidatedScenario& scenario);

// Central differences with per-coordinate step `step * c_t`.
std::vector<double> finite_diff_gradient(const ConsumptionPath& path,
                                         const ValidatedScenario& scenario,
                                         double step);

}  // namespace habitpath
