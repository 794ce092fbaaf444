#include "habitpath/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "habitpath/config_io.hpp"
#include "habitpath/error.hpp"
#include "habitpath/objective.hpp"
#include "habitpath/oracle.hpp"
#include "habitpath/presets.hpp"
#include "habitpath/report.hpp"
#include "habitpath/solver.hpp"
#include "habitpath/utility.hpp"

namespace habitpath {

namespace {

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double max_rel_dev(const ConsumptionPath& a, const ConsumptionPath& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::abs(b[i]));
  }
  return worst;
}

// Scenarios probed by the gradient check: the documented defaults of every
// family plus the optional branches (weighted habit, log utility,
// exponential per-capita growth).
std::vector<ScenarioConfig> gradient_cases() {
  std::vector<ScenarioConfig> cases;
  for (UtilityFamily f : kAllFamilies) cases.push_back(paper_baseline(f));
  for (UtilityFamily f : {UtilityFamily::kAddHabitCrra, UtilityFamily::kAddHabitCara}) {
    ScenarioConfig cfg = paper_baseline(f);
    cfg.utility.a = 1.0;
    cases.push_back(cfg);
  }
  for (UtilityFamily f : {UtilityFamily::kSeparableCrra, UtilityFamily::kShortMemory,
                          UtilityFamily::kMultHabit}) {
    ScenarioConfig cfg = paper_baseline(f);
    cfg.utility.gamma = 0.0;
    cases.push_back(cfg);
  }
  for (UtilityFamily f : {UtilityFamily::kCujMult, UtilityFamily::kCujRatio}) {
    ScenarioConfig cfg = paper_baseline(f);
    cfg.percapita.kind = PerCapitaKind::kExponential;
    cfg.percapita.lambda = 0.02;
    cases.push_back(cfg);
  }
  return cases;
}

std::string case_label(const ScenarioConfig& cfg) {
  return std::string(to_string(cfg.utility.family)) + " " +
         config_to_json(cfg).at("utility").dump();
}

CheckEntry felicity_check() {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  double worst = 0.0;
  std::string where = "none";
  for (const ScenarioConfig& cfg : gradient_cases()) {
    const ValidatedScenario sc = validate_config(cfg);
    const auto anchors = anchors_of(sc);
    for (int k = 0; k < 20; ++k) {
      FelicityPoint p{1e5 * unit(rng), 1e5 * unit(rng), 1e5 * unit(rng)};
      // Additive CRRA needs c above the habit threshold.
      if (sc.utility().b) p.c = std::max(p.c, 1.5 * *sc.utility().b * p.h);
      const double err = felicity_partials_check(sc.utility(), p, anchors, 1e-3);
      if (err > worst) {
        worst = err;
        where = case_label(cfg) + " at c=" + sci(p.c) + " h=" + sci(p.h) +
                " C=" + sci(p.C);
      }
    }
  }
  return {"felicity partials vs finite differences", worst < 1e-5,
          "max rel err " + sci(worst) + " (" + where + ")"};
}

CheckEntry lifetime_gradient_check() {
  std::mt19937_64 rng(23);
  double worst = 0.0;
  std::string where = "none";
  for (const ScenarioConfig& cfg : gradient_cases()) {
    const ValidatedScenario sc = validate_config(cfg);
    for (int k = 0; k < 10; ++k) {
      const ConsumptionPath path = random_interior_path(sc, rng);
      const double err = gradient_error(path, sc);
      if (err > worst) {
        worst = err;
        where = case_label(cfg) + " draw " + std::to_string(k);
      }
    }
  }
  return {"lifetime gradient vs finite differences", worst < 1e-5,
          "max rel err " + sci(worst) + " (" + where + ")"};
}

CheckEntry oracle_check() {
  double worst = 0.0;
  std::string where;
  auto track = [&](const char* name, const ConsumptionPath& solved,
                   const ConsumptionPath& exact) {
    const double dev = max_rel_dev(solved, exact);
    if (dev >= worst) {
      worst = dev;
      where = name;
    }
  };
  {
    const auto sc = validate_config(paper_baseline(UtilityFamily::kSeparableCrra));
    track("SEPARABLE_CRRA", solve(sc).path, separable_crra_closed_form(sc));
  }
  {
    const auto sc = validate_config(paper_baseline(UtilityFamily::kSeparableCara));
    track("SEPARABLE_CARA", solve(sc).path, *separable_cara_closed_form(sc));
  }
  {
    const auto sc = validate_config(paper_baseline(UtilityFamily::kCujAddCara));
    track("CUJ_ADD_CARA", solve(sc).path, *cuj_cara_closed_form(sc));
  }
  return {"solver vs closed forms", worst < 1e-6,
          "max entrywise rel dev " + sci(worst) + " (" + where + ")"};
}

CheckEntry brute_force_check() {
  double worst_gap = 0.0;
  std::string where = "none";
  for (UtilityFamily f : {UtilityFamily::kSeparableCrra, UtilityFamily::kMultHabit,
                          UtilityFamily::kCujRatio}) {
    ScenarioConfig cfg = paper_baseline(f);
    // Keep the baseline's per-year budget W0/N.
    cfg.W0 = cfg.W0 * 3.0 / cfg.horizon_N;
    cfg.horizon_N = 3;
    const auto sc = validate_config(cfg);
    const GridOptimum grid = brute_force_small(sc, 150);
    const SolveResult r = solve(sc);
    const double gap = (grid.objective - r.objective) / std::abs(grid.objective);
    if (gap > worst_gap) {
      worst_gap = gap;
      where = std::string(to_string(f));
    }
  }
  return {"solver objective >= grid optimum (N=3)", worst_gap <= 0.0,
          "worst relative shortfall " + sci(worst_gap) + " (" + where + ")"};
}

CheckEntry budget_check() {
  double worst = 0.0;
  for (UtilityFamily f : {UtilityFamily::kMultHabit, UtilityFamily::kCujMult,
                          UtilityFamily::kCombined}) {
    const auto sc = validate_config(paper_baseline(f));
    const SolveResult r = solve(sc);
    worst = std::max(worst, std::abs(r.path.total() - sc.W0()) / sc.W0());
    for (double v : r.path.values) {
      if (!(v > 0.0)) worst = 1.0;
    }
  }
  return {"solutions positive and on budget", worst < 1e-12,
          "max |sum c - W0| / W0 " + sci(worst)};
}

CheckEntry scale_check() {
  ScenarioConfig base = paper_baseline(UtilityFamily::kMultHabit);
  ScenarioConfig scaled = base;
  scaled.W0 *= 7.0;
  scaled.c0 *= 7.0;
  const SolveResult a = solve(validate_config(base));
  const SolveResult b = solve(validate_config(scaled));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.path.size(); ++i) {
    worst = std::max(worst, std::abs(b.path[i] / (7.0 * a.path[i]) - 1.0));
  }
  return {"scale equivariance (MULT_HABIT, k=7)", worst < 1e-8,
          "max rel err " + sci(worst)};
}

CheckEntry pde_check() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  const auto sc = validate_config(paper_baseline(UtilityFamily::kCujAddCara));
  const double alpha = *sc.utility().alpha;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const FelicityPoint p{1e5 * unit(rng), 0.0, 1e5 * unit(rng)};
    const FelicityValue v = felicity(sc.utility(), p, anchors_of(sc));
    worst = std::max(worst, std::abs(alpha * v.d_dc + v.d_dC) /
                                (alpha * std::abs(v.d_dc)));
  }
  return {"alpha u_c + u_C = 0 (CUJ_ADD_CARA)", worst < 1e-12,
          "max rel err " + sci(worst)};
}

CheckEntry io_check() {
  const auto sc = validate_config(paper_baseline(UtilityFamily::kMultHabit));
  const RunRecord rec = run_scenario(sc);
  std::ostringstream csv;
  write_path_csv(csv, sc, rec.result.path);
  std::istringstream back(csv.str());
  const bool csv_ok = read_path_csv(back) == rec.result.path;
  const RunRecord again = run_record_from_json(to_json(rec));
  const bool json_ok = to_json(again).dump() == to_json(rec).dump() &&
                       again.result.path == rec.result.path &&
                       again.scenario == rec.scenario;
  const ScenarioConfig reparsed = config_from_json(config_to_json(sc.config()));
  const bool config_ok = validate_config(reparsed) == sc;
  const std::vector<PlotSeries> series{{"c", rec.result.path.values}};
  const bool svg_ok = render_svg("t", series) == render_svg("t", series);
  std::string detail = std::string("csv ") + (csv_ok ? "ok" : "FAIL") +
                       ", json " + (json_ok ? "ok" : "FAIL") + ", config " +
                       (config_ok ? "ok" : "FAIL") + ", svg " +
                       (svg_ok ? "ok" : "FAIL");
  return {"output round trips", csv_ok && json_ok && config_ok && svg_ok, detail};
}

CheckEntry error_check() {
  ScenarioConfig bad = paper_baseline(UtilityFamily::kMultHabit);
  bad.horizon_N = 0;
  std::string detail;
  bool ok = false;
  try {
    validate_config(bad);
    detail = "N=0 accepted";
  } catch (const Error& e) {
    ok = e.code() == ErrorCode::kBadHorizon && e.field() == "horizon_N";
    detail = e.what();
  }
  ScenarioConfig addictive = paper_baseline(UtilityFamily::kAddHabitCrra);
  addictive.utility.b = 5.0;
  const SolveResult r = solve(validate_config(addictive));
  const bool infeasible = !r.converged && r.domain_hits > 0;
  ok = ok && infeasible;
  detail += "; ADD_HABIT_CRRA b=5: " + std::string(to_string(r.status)) +
            ", domain_hits=" + std::to_string(r.domain_hits);
  return {"error reporting", ok, detail};
}

}  // namespace

ConsumptionPath random_interior_path(const ValidatedScenario& scenario,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> spread(0.5, 1.5);
  const int N = scenario.N();
  for (int attempt = 0; attempt < 1000; ++attempt) {
    ConsumptionPath path;
    path.values.resize(N);
    double total = 0.0;
    for (double& v : path.values) {
      v = spread(rng);
      total += v;
    }
    for (double& v : path.values) v *= scenario.W0() / total;
    try {
      if (std::isfinite(lifetime_value(path, scenario))) return path;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomain) throw;
    }
  }
  throw Error(ErrorCode::kDomain, "no interior path found in 1000 draws");
}

double gradient_error(const ConsumptionPath& path,
                      const ValidatedScenario& scenario) {
  const ObjectiveEval eval = lifetime_objective(path, scenario);
  const std::vector<double> fd =
      finite_diff_gradient(path, scenario, scenario.solver().fd_step);
  double scale = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    scale = std::max(scale, std::abs(eval.gradient[i]));
    worst = std::max(worst, std::abs(eval.gradient[i] - fd[i]));
  }
  return scale == 0.0 ? worst : worst / scale;
}

std::vector<CheckEntry> run_self_checks() {
  using Check = CheckEntry (*)();
  static constexpr Check kChecks[] = {
      felicity_check, lifetime_gradient_check, oracle_check,
      brute_force_check, budget_check, scale_check,
      pde_check, io_check, error_check};
  std::vector<CheckEntry> out;
  for (Check check : kChecks) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({"(check aborted)", false, e.what()});
    }
  }
  return out;
}

}  // namespace habitpath
