#include "habitpath/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "habitpath/error.hpp"
#include "habitpath/objective.hpp"

namespace habitpath {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMaxStep = 10.0;  // cap on any log-consumption change
constexpr int kMaxBacktracks = 60;
constexpr int kPolishSteps = 8;
constexpr double kRoundoff = 64 * std::numeric_limits<double>::epsilon();

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double inf_norm(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double kkt_from_gradient(const Vec& g) {
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) /
                      static_cast<double>(g.size());
  double worst = 0.0;
  for (double v : g) worst = std::max(worst, std::abs(v - mean));
  return mean == 0.0 ? (worst == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                     : worst / std::abs(mean);
}

// One evaluated iterate in reduced coordinates x = (y_2..y_N).
struct Iterate {
  Vec x;
  ConsumptionPath path;
  double value = 0.0;
  double magnitude = 0.0;  // sum_t e^{-rho t} |u_t|, the rounding scale of J
  Vec grad;     // dJ/dx
  Vec path_grad;  // dJ/dc
};

ConsumptionPath softmax_path(const Vec& x, double W0) {
  ConsumptionPath path;
  path.values.resize(x.size() + 1);
  double top = 0.0;
  for (double v : x) top = std::max(top, v);
  path[0] = std::exp(-top);
  for (std::size_t j = 0; j < x.size(); ++j) path[j + 1] = std::exp(x[j] - top);
  const double total = path.total();
  for (double& v : path.values) v = W0 * (v / total);
  return path;
}

std::optional<Iterate> evaluate(const Vec& x, const ValidatedScenario& scenario) {
  Iterate it;
  it.x = x;
  it.path = softmax_path(x, scenario.W0());
  for (double v : it.path.values) {
    if (!(v > 0.0) || !std::isfinite(v)) return std::nullopt;
  }
  ObjectiveEval eval;
  try {
    eval = lifetime_objective(it.path, scenario);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDomain) throw;
    return std::nullopt;
  }
  if (!std::isfinite(eval.value)) return std::nullopt;
  for (double g : eval.gradient) {
    if (!std::isfinite(g)) return std::nullopt;
  }
  it.value = eval.value;
  const auto discount = scenario.discount();
  for (std::size_t t = 0; t < eval.per_period.size(); ++t) {
    it.magnitude += discount[t] * std::abs(eval.per_period[t]);
  }
  it.path_grad = std::move(eval.gradient);
  // dJ/dy_j = c_j (g_j - sum_k c_k g_k / W0); y_1 is the pinned gauge.
  double weighted = 0.0;
  for (std::size_t k = 0; k < it.path.size(); ++k) {
    weighted += it.path[k] * it.path_grad[k];
  }
  weighted /= scenario.W0();
  it.grad.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    it.grad[j] = it.path[j + 1] * (it.path_grad[j + 1] - weighted);
  }
  return it;
}

// Inverse-Hessian approximation of -J, stored dense row-major.
class InverseHessian {
 public:
  explicit InverseHessian(std::size_t n) : n_(n), h_(n * n, 0.0) {}

  void reset(double scale) {
    std::fill(h_.begin(), h_.end(), 0.0);
    for (std::size_t i = 0; i < n_; ++i) h_[i * n_ + i] = scale;
    fresh_ = true;
  }

  bool fresh() const { return fresh_; }

  Vec apply(const Vec& v) const {
    Vec out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) acc += h_[i * n_ + j] * v[j];
      out[i] = acc;
    }
    return out;
  }

  // Standard BFGS inverse update with s = step, y = change in grad(-J).
  // The very first update rescales the identity by s'y / y'y.
  bool update(const Vec& s, const Vec& y) {
    const double sy = dot(s, y);
    if (!(sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y)))) return false;
    if (first_) {
      reset(sy / dot(y, y));
      first_ = false;
    }
    const Vec hy = apply(y);
    const double yhy = dot(y, hy);
    const double r = 1.0 / sy;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        h_[i * n_ + j] += (1.0 + r * yhy) * r * s[i] * s[j] -
                          r * (hy[i] * s[j] + s[i] * hy[j]);
      }
    }
    fresh_ = false;
    return true;
  }

 private:
  std::size_t n_;
  Vec h_;
  bool fresh_ = true;
  bool first_ = true;
};

void fill_diagnostics(SolveResult& result, const Iterate& it) {
  result.path = it.path;
  result.objective = it.value;
  result.kkt_residual = kkt_from_gradient(it.path_grad);
  result.multiplier = std::accumulate(it.path_grad.begin(), it.path_grad.end(),
                                      0.0) /
                      static_cast<double>(it.path_grad.size());
  result.grad_norm = inf_norm(it.grad);
}

bool is_stationary(const Iterate& it, const SolverOptions& options) {
  return inf_norm(it.grad) <= options.tol_grad * (1.0 + std::abs(it.value)) &&
         kkt_from_gradient(it.path_grad) <= options.tol_kkt;
}

// Strictly feasible start for ADD_HABIT_CRRA: c_t = b h_t + s with the common
// slack s chosen by bisection so the path spends exactly W0. Any feasible
// path costs at least the s -> 0 limit, so an empty result proves that no
// strictly feasible point exists.
std::optional<Vec> additive_habit_start(const ValidatedScenario& scenario) {
  const UtilitySpec& spec = scenario.utility();
  if (spec.family != UtilityFamily::kAddHabitCrra) return std::nullopt;
  const int N = scenario.N();
  const double b = *spec.b;
  const bool weighted = spec.a.has_value();
  const double decay = weighted ? std::exp(-*spec.a) : 0.0;
  auto build = [&](double slack) {
    Vec path(N);
    double sum = 0.0;
    double z = weighted ? scenario.c0() / std::expm1(*spec.a) : 0.0;
    for (int t = 0; t < N; ++t) {
      const double h = weighted ? z : (t == 0 ? scenario.c0() : sum / t);
      path[t] = b * h + slack;
      sum += path[t];
      if (weighted) z = decay * (z + path[t]);
    }
    return std::pair{path, sum};
  };
  if (build(0.0).second >= scenario.W0()) return std::nullopt;
  double lo = 0.0, hi = scenario.W0() / N;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (build(mid).second > scenario.W0() ? hi : lo) = mid;
  }
  Vec path = build(lo).first;
  Vec x(N - 1);
  for (int j = 1; j < N; ++j) x[j - 1] = std::log(path[j] / path[0]);
  return x;
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "CONVERGED";
    case SolveStatus::kNotConverged: return "NOT_CONVERGED";
    case SolveStatus::kInfeasibleStart: return "INFEASIBLE_START";
  }
  return "UNKNOWN";
}

double kkt_residual(const ConsumptionPath& path,
                    const ValidatedScenario& scenario) {
  return kkt_from_gradient(lifetime_objective(path, scenario).gradient);
}

SolveResult solve(const ValidatedScenario& scenario) {
  const SolverOptions& options = scenario.solver();
  const std::size_t N = static_cast<std::size_t>(scenario.N());
  SolveResult result;

  // Starting point: the given path if it is in domain, else uniform.
  std::vector<Vec> starts;
  if (!options.init.empty()) {
    Vec x(N - 1);
    for (std::size_t j = 1; j < N; ++j) {
      x[j - 1] = std::log(options.init[j] / options.init[0]);
    }
    starts.push_back(std::move(x));
  }
  starts.emplace_back(N - 1, 0.0);

  std::optional<Iterate> current;
  for (const Vec& x0 : starts) {
    current = evaluate(x0, scenario);
    if (current) break;
    ++result.domain_hits;
  }
  if (!current && N > 1) {
    if (auto x0 = additive_habit_start(scenario)) current = evaluate(*x0, scenario);
  }
  if (!current) {
    result.path = options.init.empty()
                      ? ConsumptionPath{Vec(N, scenario.W0() / N)}
                      : ConsumptionPath{options.init};
    result.objective = std::numeric_limits<double>::quiet_NaN();
    result.kkt_residual = std::numeric_limits<double>::quiet_NaN();
    result.multiplier = std::numeric_limits<double>::quiet_NaN();
    result.grad_norm = std::numeric_limits<double>::quiet_NaN();
    result.status = SolveStatus::kInfeasibleStart;
    return result;
  }
  result.objective_trace.push_back(current->value);

  if (N == 1) {
    fill_diagnostics(result, *current);
    result.converged = true;
    result.status = SolveStatus::kConverged;
    return result;
  }

  InverseHessian hess(N - 1);
  auto reset_scale = [&]() {
    const double g = inf_norm(current->grad);
    return g > 0.0 ? 1.0 / g : 1.0;
  };
  hess.reset(reset_scale());

  // Once stationary, a few polishing steps run the quasi-Newton iteration to
  // the floating-point floor. Near the optimum the Armijo test drowns in
  // rounding of J, so polishing also accepts steps that halve the reduced
  // gradient while keeping J within rounding of its current value.
  int iter = 0;
  int polish_left = kPolishSteps;
  double first_step = 1.0;
  bool stationary = is_stationary(*current, options);
  while (iter < options.max_iter) {
    if (stationary && polish_left-- == 0) break;
    Vec dir = hess.apply(current->grad);
    double slope = dot(current->grad, dir);
    if (!(slope > 0.0)) {
      hess.reset(reset_scale());
      dir = hess.apply(current->grad);
      slope = dot(current->grad, dir);
    }
    const double longest = inf_norm(dir);
    if (longest > kMaxStep) {
      for (double& v : dir) v *= kMaxStep / longest;
      slope *= kMaxStep / longest;
    }

    const double grad_now = inf_norm(current->grad);
    std::optional<Iterate> accepted;
    double step = first_step;
    Vec trial_x(N - 1);
    for (int k = 0; k < kMaxBacktracks; ++k, step *= 0.5) {
      for (std::size_t j = 0; j < N - 1; ++j) {
        trial_x[j] = current->x[j] + step * dir[j];
      }
      auto trial = evaluate(trial_x, scenario);
      if (!trial) {
        ++result.domain_hits;
        continue;
      }
      const bool armijo =
          trial->value >= current->value + kArmijo * step * slope;
      const bool polished =
          stationary && inf_norm(trial->grad) < 0.5 * grad_now &&
          trial->value >= current->value - kRoundoff * current->magnitude;
      if (armijo || polished) {
        accepted = std::move(trial);
        break;
      }
    }
    ++iter;
    // Next search starts near the last accepted length, never above 1.
    first_step = accepted ? std::min(1.0, 4.0 * step) : 1.0;

    if (!accepted) {
      if (stationary) break;
      // Retry once along the scaled gradient; give up if that fails too.
      if (hess.fresh()) break;
      hess.reset(reset_scale());
      continue;
    }

    Vec s(N - 1), y(N - 1);
    for (std::size_t j = 0; j < N - 1; ++j) {
      s[j] = accepted->x[j] - current->x[j];
      y[j] = current->grad[j] - accepted->grad[j];
    }
    hess.update(s, y);
    current = std::move(accepted);
    result.objective_trace.push_back(current->value);
    stationary = stationary || is_stationary(*current, options);
  }
  stationary = is_stationary(*current, options);

  fill_diagnostics(result, *current);
  result.iterations = iter;
  result.converged = stationary;
  result.status =
      stationary ? SolveStatus::kConverged : SolveStatus::kNotConverged;
  return result;
}

}  // namespace habitpath
