#pragma once

// Self-test battery behind `habitpath check`: gradient checks, oracle
// matches and invariants, each reduced to one pass/fail entry.

#include <random>
#include <string>
#include <vector>

#include "habitpath/core.hpp"

namespace habitpath {

struct CheckEntry {
  std::string name;
  bool pass = false;
  std::string detail;
};

// A positive path on the budget simplex inside the utility domain, with
// entries spread by up to a factor of three around W0/N. Retries until
// the objective evaluates; throws DOMAIN after 1000 failed draws.
ConsumptionPath random_interior_path(const ValidatedScenario& scenario,
                                     std::mt19937_64& rng);

// max_t |g_t - fd_t| / max_t |g_t| for the lifetime gradient at `path`.
double gradient_error(const ConsumptionPath& path,
                      const ValidatedScenario& scenario);

std::vector<CheckEntry> run_self_checks();

}  // namespace habitpath
