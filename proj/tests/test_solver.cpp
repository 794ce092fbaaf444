#include <doctest.h>

#include <cmath>

#include "habitpath/objective.hpp"
#include "habitpath/oracle.hpp"
#include "habitpath/presets.hpp"
#include "habitpath/solver.hpp"
#include "test_support.hpp"

using namespace habitpath;

namespace {

SolveResult solve_config(const ScenarioConfig& cfg) {
  return solve(validate_config(cfg));
}

void check_budget(const SolveResult& r, double W0) {
  CHECK(std::abs(r.path.total() - W0) <= 1e-12 * W0);
  for (double v : r.path.values) CHECK(v > 0.0);
}

}  // namespace

TEST_CASE("frozen optima from an independent direct-space optimizer") {
  // Reference values from SLSQP followed by trust-constr on the simplex,
  // solved in the original c coordinates.
  struct Frozen {
    UtilityFamily family;
    double c1, c10, c20, J;
  };
  const Frozen cases[] = {
      {UtilityFamily::kMultHabit, 11877.8565891235, 56891.2582522195,
       50935.7795362334, 17.23114706168669},
      {UtilityFamily::kMPeriod, 56932.6838997419, 49150.9297591626,
       59264.7789961216, 16.845842674600966},
  };
  for (const Frozen& f : cases) {
    CAPTURE(to_string(f.family));
    const SolveResult r = solve_config(paper_baseline(f.family));
    REQUIRE(r.converged);
    CHECK(r.path[0] == doctest::Approx(f.c1).epsilon(1e-6));
    CHECK(r.path[9] == doctest::Approx(f.c10).epsilon(1e-6));
    CHECK(r.path[19] == doctest::Approx(f.c20).epsilon(1e-6));
    CHECK(r.objective == doctest::Approx(f.J).epsilon(1e-12));
  }
  ScenarioConfig cuj = paper_baseline(UtilityFamily::kCujMult);
  cuj.utility.D = 1.0;
  const SolveResult r = solve_config(cuj);
  CHECK(r.path[0] == doctest::Approx(101563.6588618421).epsilon(1e-6));
  CHECK(r.path[9] == doctest::Approx(45869.1904721535).epsilon(1e-6));
  CHECK(r.path[19] == doctest::Approx(20138.8290164927).epsilon(1e-6));
}

TEST_CASE("converged results satisfy the stationarity contract") {
  for (UtilityFamily f : kAllFamilies) {
    CAPTURE(to_string(f));
    const auto sc = validate_config(paper_baseline(f));
    const SolveResult r = solve(sc);
    check_budget(r, sc.W0());
    CHECK(r.iterations <= sc.solver().max_iter);
    if (r.converged) {
      CHECK(r.status == SolveStatus::kConverged);
      CHECK(r.kkt_residual <= sc.solver().tol_kkt);
      CHECK(r.kkt_residual == doctest::Approx(kkt_residual(r.path, sc)));
      CHECK(r.objective == doctest::Approx(lifetime_value(r.path, sc)).epsilon(1e-15));
    } else {
      CHECK(r.status != SolveStatus::kConverged);
    }
  }
}

TEST_CASE("objective trace is nondecreasing") {
  for (UtilityFamily f : kAllFamilies) {
    CAPTURE(to_string(f));
    const SolveResult r = solve_config(paper_baseline(f));
    REQUIRE(!r.objective_trace.empty());
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      const double prev = r.objective_trace[i - 1];
      // Final polishing steps may trade rounding-level decreases for a
      // smaller gradient.
      CHECK(r.objective_trace[i] >= prev - 1e-12 * std::abs(prev));
    }
    CHECK(r.objective_trace.back() == r.objective);
  }
}

TEST_CASE("solving is deterministic") {
  const auto sc = validate_config(paper_baseline(UtilityFamily::kCombined));
  const SolveResult a = solve(sc);
  const SolveResult b = solve(sc);
  CHECK(a.path == b.path);
  CHECK(a.objective_trace == b.objective_trace);
  CHECK(a.iterations == b.iterations);
}

TEST_CASE("single-year horizon consumes everything") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.horizon_N = 1;
  const SolveResult r = solve_config(cfg);
  CHECK(r.converged);
  REQUIRE(r.path.size() == 1);
  CHECK(r.path[0] == 1e6);
  CHECK(r.kkt_residual == 0.0);
}

TEST_CASE("additive CRRA feasibility") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kAddHabitCrra);
  cfg.utility.b = 5.0;
  const SolveResult bad = solve_config(cfg);
  CHECK(bad.status == SolveStatus::kInfeasibleStart);
  CHECK_FALSE(bad.converged);
  CHECK(bad.domain_hits > 0);
  check_budget(bad, 1e6);

  // b = 0.5 makes the uniform path sit exactly on the boundary in year 1; the
  // solver moves to a strictly feasible start and converges.
  cfg.utility.b = 0.5;
  const SolveResult good = solve_config(cfg);
  CHECK(good.converged);
  const auto sc = validate_config(cfg);
  CHECK(std::isfinite(lifetime_value(good.path, sc)));
}

TEST_CASE("scale equivariance of the ratio families") {
  constexpr double k = 7.0;
  std::vector<ScenarioConfig> cases = {
      paper_baseline(UtilityFamily::kMultHabit),
      paper_baseline(UtilityFamily::kMPeriod),
      paper_baseline(UtilityFamily::kCujMult),
  };
  // With gamma > 0 the lag families are unbounded above for d > 0, so
  // there is no argmax to scale; gamma = -1 keeps them bounded.
  for (UtilityFamily f : {UtilityFamily::kRatioHabit, UtilityFamily::kShortMemory}) {
    ScenarioConfig cfg = paper_baseline(f);
    cfg.utility.gamma = -1.0;
    cases.push_back(cfg);
  }
  for (const auto& base : cases) {
    CAPTURE(to_string(base.utility.family));
    ScenarioConfig scaled = base;
    scaled.W0 *= k;
    scaled.c0 *= k;
    const SolveResult a = solve_config(base);
    const SolveResult b = solve_config(scaled);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    for (std::size_t i = 0; i < a.path.size(); ++i) {
      CHECK(std::abs(b.path[i] / (k * a.path[i]) - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("a given start converges to the same optimum") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  const SolveResult ref = solve_config(cfg);
  cfg.solver.init.clear();
  for (int t = 1; t <= 20; ++t) cfg.solver.init.push_back(1.0 + 0.1 * t);
  const SolveResult r = solve_config(cfg);
  REQUIRE(r.converged);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(r.path[i] == doctest::Approx(ref.path[i]).epsilon(1e-7));
  }
  cfg.solver.init = ref.path.values;
  const SolveResult warm = solve_config(cfg);
  CHECK(warm.converged);
  CHECK(warm.iterations < ref.iterations / 2);
}

TEST_CASE("iteration cap is honoured") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.solver.max_iter = 2;
  const SolveResult r = solve_config(cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.status == SolveStatus::kNotConverged);
  CHECK(r.iterations <= 2);
  check_budget(r, 1e6);
}

TEST_CASE("kkt residual examples") {
  ScenarioConfig flat = paper_baseline(UtilityFamily::kSeparableCrra);
  flat.rho = 0.0;
  const auto sc = validate_config(flat);
  ConsumptionPath uniform;
  uniform.values.assign(20, 5e4);
  CHECK(kkt_residual(uniform, sc) < 1e-12);

  const auto cara = validate_config(paper_baseline(UtilityFamily::kSeparableCara));
  const ConsumptionPath exact = *separable_cara_closed_form(cara);
  CHECK(kkt_residual(exact, cara) < 1e-8);

  ConsumptionPath perturbed = exact;
  perturbed[4] *= 1.01;
  CHECK(kkt_residual(perturbed, cara) > cara.solver().tol_grad);
}

TEST_CASE("multiplier is the common discounted marginal utility") {
  const auto sc = validate_config(paper_baseline(UtilityFamily::kSeparableCrra));
  const SolveResult r = solve(sc);
  const auto g = lifetime_objective(r.path, sc).gradient;
  for (double v : g) CHECK(v == doctest::Approx(r.multiplier).epsilon(1e-9));
}

TEST_CASE("status names") {
  CHECK(to_string(SolveStatus::kConverged) == "CONVERGED");
  CHECK(to_string(SolveStatus::kNotConverged) == "NOT_CONVERGED");
  CHECK(to_string(SolveStatus::kInfeasibleStart) == "INFEASIBLE_START");
}
