#include "habitpath/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "habitpath/error.hpp"
#include "habitpath/objective.hpp"
#include "habitpath/parallel.hpp"

namespace habitpath {

namespace {

std::optional<ConsumptionPath> interior_or_empty(ConsumptionPath path) {
  for (double v : path.values) {
    if (!(v > 0.0)) return std::nullopt;
  }
  return path;
}

void require_family(const ValidatedScenario& scenario, UtilityFamily family) {
  if (scenario.utility().family != family) {
    throw Error(ErrorCode::kBadConfig,
                "closed form requires family " + std::string(to_string(family)),
                "utility.family");
  }
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<int> units;
  long long evaluated = 0;
};

// Higher objective wins; ties go to the lexicographically smallest path.
bool better(double value, const std::vector<int>& units, const Candidate& best) {
  if (best.units.empty()) return true;
  if (value != best.value) return value > best.value;
  return units < best.units;
}

}  // namespace

ConsumptionPath separable_crra_closed_form(const ValidatedScenario& scenario) {
  require_family(scenario, UtilityFamily::kSeparableCrra);
  const int N = scenario.N();
  const double log_ratio = -scenario.rho() / (1.0 - *scenario.utility().gamma);
  ConsumptionPath path;
  path.values.resize(N);
  double total = 0.0;
  for (int t = 1; t <= N; ++t) {
    path[t - 1] = std::exp(log_ratio * (t - 1));
    total += path[t - 1];
  }
  for (double& v : path.values) v *= scenario.W0() / total;
  return path;
}

std::optional<ConsumptionPath> separable_cara_closed_form(
    const ValidatedScenario& scenario) {
  require_family(scenario, UtilityFamily::kSeparableCara);
  const int N = scenario.N();
  const double drift = scenario.rho() / *scenario.utility().eta;
  ConsumptionPath path;
  path.values.resize(N);
  for (int t = 1; t <= N; ++t) {
    path[t - 1] = scenario.W0() / N + drift * ((N + 1) / 2.0 - t);
  }
  return interior_or_empty(std::move(path));
}

std::optional<ConsumptionPath> cuj_cara_closed_form(
    const ValidatedScenario& scenario) {
  require_family(scenario, UtilityFamily::kCujAddCara);
  const int N = scenario.N();
  const double drift = scenario.rho() / *scenario.utility().eta;
  const double alpha = *scenario.utility().alpha;
  const auto C = scenario.percapita();
  double C_total = 0.0;
  for (double v : C) C_total += v;
  const double K =
      scenario.W0() / N - alpha * C_total / N + drift * (N + 1) / 2.0;
  ConsumptionPath path;
  path.values.resize(N);
  for (int t = 1; t <= N; ++t) {
    path[t - 1] = alpha * C[t - 1] - drift * t + K;
  }
  return interior_or_empty(std::move(path));
}

GridOptimum brute_force_small(const ValidatedScenario& scenario,
                              int grid_points) {
  const int N = scenario.N();
  if (N > 4) {
    throw Error(ErrorCode::kParamOutOfRange, "brute force supports N <= 4",
                "horizon_N");
  }
  if (grid_points < 50) {
    throw Error(ErrorCode::kParamOutOfRange, "need at least 50 grid points",
                "grid_points");
  }
  if (N < 1 || grid_points < N) {
    throw Error(ErrorCode::kNoFeasibleGridPoint, "grid too coarse");
  }
  const double cell = scenario.W0() / grid_points;

  // Partition by the first coordinate; each worker walks the compositions of
  // the remainder into N-1 positive parts.
  auto search = [&](int first) {
    Candidate best;
    std::vector<int> units(N, 0);
    ConsumptionPath path;
    path.values.resize(N);
    units[0] = first;
    const int rest = grid_points - first;
    auto consider = [&]() {
      for (int i = 0; i < N; ++i) path[i] = units[i] * cell;
      double value;
      try {
        value = lifetime_value(path, scenario);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kDomain) throw;
        return;
      }
      if (!std::isfinite(value)) return;
      ++best.evaluated;
      if (better(value, units, best)) {
        best.value = value;
        best.units = units;
      }
    };
    if (N == 1) {
      if (rest == 0) consider();
      return best;
    }
    // Recursive enumeration of units[1..N-1] > 0 summing to rest.
    auto recurse = [&](auto& self, int index, int remaining) -> void {
      if (index == N - 1) {
        if (remaining >= 1) {
          units[index] = remaining;
          consider();
        }
        return;
      }
      for (int v = 1; v <= remaining - (N - 1 - index); ++v) {
        units[index] = v;
        self(self, index + 1, remaining - v);
      }
    };
    recurse(recurse, 1, rest);
    return best;
  };

  const int first_max = N == 1 ? grid_points : grid_points - (N - 1);
  const int first_min = N == 1 ? grid_points : 1;
  std::vector<int> firsts;
  for (int f = first_min; f <= first_max; ++f) firsts.push_back(f);
  const std::vector<Candidate> partial =
      parallel_map(firsts, [&](int f) { return search(f); }, worker_count());

  Candidate best;
  long long evaluated = 0;
  for (const Candidate& c : partial) {
    evaluated += c.evaluated;
    if (!c.units.empty() && better(c.value, c.units, best)) best = c;
  }
  if (best.units.empty()) {
    throw Error(ErrorCode::kNoFeasibleGridPoint,
                "every grid composition violates the utility domain");
  }
  GridOptimum out;
  out.path.values.resize(N);
  for (int i = 0; i < N; ++i) out.path[i] = best.units[i] * cell;
  out.objective = best.value;
  out.evaluated = evaluated;
  return out;
}

ShapeMetrics shape_metrics(const ConsumptionPath& path, double W0) {
  ShapeMetrics m;
  const std::size_t n = path.size();
  if (n == 0) return m;
  const double floor = 1e-6 * W0;
  if (n >= 2) {
    m.first_jump = std::abs(path[0] - path[1]) / path[1];
    m.last_jump = std::abs(path[n - 1] - path[n - 2]) / path[n - 2];
  }
  m.argmax_t = static_cast<int>(
      std::max_element(path.values.begin(), path.values.end()) -
      path.values.begin()) + 1;

  std::size_t i = 0;
  while (i + 1 < n && path[i + 1] >= path[i] - floor) ++i;
  while (i + 1 < n && path[i + 1] <= path[i] + floor) ++i;
  m.unimodal = i + 1 >= n;

  const std::size_t half = (n + 1) / 2;
  m.trough_t = static_cast<int>(
      std::min_element(path.values.begin(), path.values.begin() + half) -
      path.values.begin()) + 1;
  for (std::size_t t = m.trough_t; t < n && path[t] > path[t - 1] + floor; ++t) {
    ++m.rise_after_trough;
  }
  m.end_mass = path[n - 1] / W0;

  // Least squares of c_t on t = 1..n.
  double st = 0.0, sc = 0.0, stt = 0.0, stc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k + 1);
    st += t;
    sc += path[k];
    stt += t * t;
    stc += t * path[k];
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * stt - st * st;
  m.slope_fit.slope = denom == 0.0 ? 0.0 : (dn * stc - st * sc) / denom;
  m.slope_fit.intercept = (sc - m.slope_fit.slope * st) / dn;
  for (std::size_t k = 0; k < n; ++k) {
    const double fit =
        m.slope_fit.intercept + m.slope_fit.slope * static_cast<double>(k + 1);
    m.slope_fit.residual = std::max(m.slope_fit.residual, std::abs(path[k] - fit));
  }
  return m;
}

}  // namespace habitpath
