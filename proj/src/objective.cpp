#include "habitpath/objective.hpp"

#include <algorithm>
#include <cmath>

#include "habitpath/error.hpp"

namespace habitpath {

namespace {

// Evaluates felicity per period, re-raising DOMAIN with the period attached.
std::vector<FelicityValue> evaluate_periods(const ConsumptionPath& path,
                                            const ValidatedScenario& scenario,
                                            HabitTrace& habit) {
  const std::size_t n = path.size();
  if (n != static_cast<std::size_t>(scenario.N())) {
    throw Error(ErrorCode::kDomain, "path length must equal horizon_N");
  }
  habit = habit_trace(scenario, path.values);
  const auto percapita = scenario.percapita();
  const FelicityAnchors anchors = anchors_of(scenario);
  std::vector<FelicityValue> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    try {
      out[i] = felicity(scenario.utility(),
                        {path[i], habit.values[i], percapita[i]}, anchors);
    } catch (const Error& e) {
      throw Error(ErrorCode::kDomain, e.what(), {}, static_cast<int>(i) + 1);
    }
  }
  return out;
}

}  // namespace

double lifetime_value(const ConsumptionPath& path,
                      const ValidatedScenario& scenario) {
  HabitTrace habit;
  const auto periods = evaluate_periods(path, scenario, habit);
  const auto discount = scenario.discount();
  double value = 0.0;
  for (std::size_t i = 0; i < periods.size(); ++i) {
    value += discount[i] * periods[i].value;
  }
  return value;
}

ObjectiveEval lifetime_objective(const ConsumptionPath& path,
                                 const ValidatedScenario& scenario) {
  ObjectiveEval eval;
  const auto periods = evaluate_periods(path, scenario, eval.habit);
  const auto discount = scenario.discount();
  const std::size_t n = periods.size();

  eval.per_period.resize(n);
  eval.gradient.resize(n);
  // q[i] = e^{-rho t} du_t/dh_t: sensitivity of J to the habit state of t.
  std::vector<double> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    eval.per_period[i] = periods[i].value;
    eval.value += discount[i] * periods[i].value;
    eval.gradient[i] = discount[i] * periods[i].d_dc;
    q[i] = discount[i] * periods[i].d_dh;
  }

  // Add sum_{t>s} q_t dh_t/dc_s to each coordinate s.
  switch (eval.habit.kind) {
    case HabitKind::kNone:
      break;
    case HabitKind::kLagged:
      for (std::size_t s = 0; s + 1 < n; ++s) eval.gradient[s] += q[s + 1];
      break;
    case HabitKind::kWindow: {
      const std::size_t M = static_cast<std::size_t>(*scenario.utility().M);
      for (std::size_t s = 0; s < n; ++s) {
        double acc = 0.0;
        for (std::size_t t = s + 1; t < std::min(n, s + M + 1); ++t) acc += q[t];
        eval.gradient[s] += acc / static_cast<double>(M);
      }
      break;
    }
    case HabitKind::kRunningMean: {
      // h at zero-based t averages t entries, so dh_t/dc_s = 1/t for s < t.
      double suffix = 0.0;
      for (std::size_t s = n; s-- > 0;) {
        eval.gradient[s] += suffix;
        suffix += s == 0 ? 0.0 : q[s] / static_cast<double>(s);
      }
      break;
    }
    case HabitKind::kWeighted: {
      const double decay = std::exp(-*scenario.utility().a);
      double carry = 0.0;  // sum_{t>s} q_t e^{-a(t-s)}
      for (std::size_t s = n; s-- > 0;) {
        carry = s + 1 < n ? decay * (q[s + 1] + carry) : 0.0;
        eval.gradient[s] += carry;
      }
      break;
    }
  }
  return eval;
}

std::vector<double> finite_diff_gradient(const ConsumptionPath& path,
                                         const ValidatedScenario& scenario,
                                         double step) {
  std::vector<double> grad(path.size());
  ConsumptionPath probe = path;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double h = step * path[i];
    probe[i] = path[i] + h;
    const double up = lifetime_value(probe, scenario);
    probe[i] = path[i] - h;
    const double down = lifetime_value(probe, scenario);
    probe[i] = path[i];
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace habitpath
