#pragma once

// Per-period felicity for every utility family, the habit state each family
// compares current consumption against, and analytic partial derivatives.

#include <span>
#include <vector>

#include "habitpath/core.hpp"

namespace habitpath {

// x^gamma/gamma, or ln x when gamma == 0. Throws DOMAIN for x <= 0.
double crra(double x, double gamma);
// First derivative of crra in x.
double crra_prime(double x, double gamma);
// -e^{-eta x}/eta, defined for every real x.
double cara(double x, double eta);
double cara_prime(double x, double eta);

enum class HabitKind {
  kNone,         // time-separable families
  kLagged,       // h_t = c_{t-1}
  kWindow,       // h_t = c_0 + (1/M) sum_{t-M}^{t-1} c
  kRunningMean,  // h_t = mean(c_1..c_{t-1}), h_1 = c_0
  kWeighted,     // h_t = z_t, exponentially weighted aggregate
};

HabitKind habit_kind(const UtilitySpec& spec);

struct HabitTrace {
  HabitKind kind = HabitKind::kNone;
  std::vector<double> values;  // h_1..h_N; all zero for kNone
};

// h_t for a single period from the prefix c_1..c_{t-1}.
double habit_state(const ValidatedScenario& scenario,
                   std::span<const double> prefix, int t);

// All h_t in one pass. Throws DOMAIN if an entry is non-positive.
HabitTrace habit_trace(const ValidatedScenario& scenario,
                       std::span<const double> path);

struct FelicityPoint {
  double c = 0.0;  // current consumption
  double h = 0.0;  // habit state
  double C = 0.0;  // per-capita consumption
};

struct FelicityValue {
  double value = 0.0;
  double d_dc = 0.0;
  double d_dh = 0.0;
  double d_dC = 0.0;
};

// Benchmarks the felicity needs besides its point: cbar0 for the
// multiplicative habit and C0 for the CuJ ratio family.
struct FelicityAnchors {
  double cbar0 = 0.0;
  double C0 = 0.0;
};

FelicityValue felicity(const UtilitySpec& spec, const FelicityPoint& point,
                       const FelicityAnchors& anchors);

inline FelicityAnchors anchors_of(const ValidatedScenario& scenario) {
  return {scenario.cbar0(), scenario.C0()};
}

// Max relative error of the analytic partials against fourth-order central
// differences with relative step `step`. Coordinates equal to zero are
// skipped. Test-suite helper.
double felicity_partials_check(const UtilitySpec& spec,
                               const FelicityPoint& point,
                               const FelicityAnchors& anchors, double step);

}  // namespace habitpath
