#pragma once

// Maximizes the lifetime objective over the budget simplex
// {c > 0, sum c = W0}.
//
// The path is parameterized as c = W0 * softmax(y) with y_1 pinned to zero,
// which enforces the budget and positivity by construction. The remaining
// N-1 coordinates are driven by BFGS with a backtracking Armijo line search;
// steps that leave the utility domain are rejected as if J were -inf.

#include <string_view>
#include <vector>

#include "habitpath/core.hpp"

namespace habitpath {

enum class SolveStatus {
  kConverged,
  kNotConverged,     // iteration cap or a stalled line search
  kInfeasibleStart,  // neither the given nor the uniform path is in domain
};

std::string_view to_string(SolveStatus status);

struct SolveResult {
  ConsumptionPath path;
  double objective = 0.0;
  double kkt_residual = 0.0;
  double multiplier = 0.0;
  double grad_norm = 0.0;  // reduced-gradient infinity norm at the result
  int iterations = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::kNotConverged;
  int domain_hits = 0;
  // Objective after every accepted step, starting with the initial point.
  std::vector<double> objective_trace;
};

SolveResult solve(const ValidatedScenario& scenario);

// max_t |g_t - mean(g)| / |mean(g)| with g = dJ/dc.
double kkt_residual(const ConsumptionPath& path,
                    const ValidatedScenario& scenario);

}  // namespace habitpath
