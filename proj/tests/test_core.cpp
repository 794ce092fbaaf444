#include <doctest.h>

#include <random>
#include <string>

#include "habitpath/core.hpp"
#include "habitpath/presets.hpp"
#include "test_support.hpp"

using namespace habitpath;

TEST_CASE("paper baseline validates with defaults resolved") {
  const auto sc = validate_config(paper_baseline(UtilityFamily::kSeparableCrra));
  CHECK(sc.N() == 20);
  CHECK(sc.rho() == 0.03);
  CHECK(sc.W0() == 1e6);
  CHECK(sc.c0() == 1e5);
  CHECK(sc.cbar0() == 1e5);
  CHECK(sc.C0() == 1e5);
  CHECK(*sc.config().percapita.doubling_years == 30.0);
  REQUIRE(sc.discount().size() == 20);
  CHECK(sc.discount()[0] == doctest::Approx(std::exp(-0.03)).epsilon(1e-15));
  CHECK(sc.discount()[19] == doctest::Approx(std::exp(-0.6)).epsilon(1e-15));
}

TEST_CASE("every family's documented defaults validate") {
  for (UtilityFamily f : kAllFamilies) {
    CAPTURE(to_string(f));
    CHECK_NOTHROW(validate_config(paper_baseline(f)));
    CHECK(family_from_string(to_string(f)) == f);
  }
  CHECK_ERROR(family_from_string("NOPE"), ErrorCode::kBadConfig, "");
}

TEST_CASE("horizon and wealth errors") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.horizon_N = 0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kBadHorizon, "horizon_N");
  cfg.horizon_N = -3;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kBadHorizon, "horizon_N");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.W0 = 0.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kNonPositiveWealth, "W0");
  cfg.W0 = -1.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kNonPositiveWealth, "W0");
  cfg.W0 = std::nan("");
  CHECK_ERROR(validate_config(cfg), ErrorCode::kNonPositiveWealth, "W0");
}

TEST_CASE("scenario-level ranges") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.c0 = 0.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "c0");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.rho = -0.01;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "rho");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.cbar0 = -1.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "cbar0");
}

TEST_CASE("irrelevant and missing parameters are named") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.utility.eta = 1e-5;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kIrrelevantParam, "utility.eta");

  cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.utility.beta.reset();
  CHECK_ERROR(validate_config(cfg), ErrorCode::kMissingParam, "utility.beta");

  cfg = paper_baseline(UtilityFamily::kSeparableCara);
  cfg.utility.gamma = 0.5;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kIrrelevantParam, "utility.gamma");

  // `a` is optional for the additive habit families only.
  cfg = paper_baseline(UtilityFamily::kAddHabitCara);
  CHECK_NOTHROW(validate_config(cfg));
  cfg.utility.a = 0.5;
  CHECK_NOTHROW(validate_config(cfg));
  cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.utility.a = 0.5;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kIrrelevantParam, "utility.a");
}

TEST_CASE("utility parameter ranges") {
  struct Case {
    UtilityFamily family;
    void (*mutate)(UtilitySpec&);
    const char* field;
  };
  const Case cases[] = {
      {UtilityFamily::kSeparableCrra, [](UtilitySpec& u) { u.gamma = 1.0; }, "utility.gamma"},
      {UtilityFamily::kSeparableCrra, [](UtilitySpec& u) { u.gamma = 1.5; }, "utility.gamma"},
      {UtilityFamily::kSeparableCara, [](UtilitySpec& u) { u.eta = 0.0; }, "utility.eta"},
      {UtilityFamily::kShortMemory, [](UtilitySpec& u) { u.d = -0.1; }, "utility.d"},
      {UtilityFamily::kRatioHabit, [](UtilitySpec& u) { u.d = -1.0; }, "utility.d"},
      {UtilityFamily::kMPeriod, [](UtilitySpec& u) { u.M = 0; }, "utility.M"},
      {UtilityFamily::kMultHabit, [](UtilitySpec& u) { u.beta = -1.0; }, "utility.beta"},
      {UtilityFamily::kAddHabitCrra, [](UtilitySpec& u) { u.b = -0.5; }, "utility.b"},
      {UtilityFamily::kAddHabitCrra, [](UtilitySpec& u) { u.a = 0.0; }, "utility.a"},
      {UtilityFamily::kCujAddCara, [](UtilitySpec& u) { u.alpha = -1.0; }, "utility.alpha"},
      {UtilityFamily::kCombined, [](UtilitySpec& u) { u.A = 1.5; }, "utility.A"},
      {UtilityFamily::kCombined, [](UtilitySpec& u) { u.A = -0.1; }, "utility.A"},
  };
  for (const Case& c : cases) {
    CAPTURE(c.field);
    ScenarioConfig cfg = paper_baseline(c.family);
    c.mutate(cfg.utility);
    CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, c.field);
  }
}

TEST_CASE("multiplicative habit needs a positive denominator") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kMultHabit);
  cfg.cbar0 = 0.0;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.utility.beta = 0.0;
  CHECK_THROWS_AS(validate_config(cfg), Error);
}

TEST_CASE("per-capita spec rules") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kCujMult);
  cfg.percapita.kind = PerCapitaKind::kExponential;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kMissingParam, "percapita.lambda");
  cfg.percapita.lambda = -0.01;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "percapita.lambda");
  cfg.percapita.lambda = 0.02;
  CHECK_NOTHROW(validate_config(cfg));
  cfg.percapita.doubling_years = 30.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kIrrelevantParam,
              "percapita.doubling_years");

  cfg = paper_baseline(UtilityFamily::kCujMult);
  cfg.percapita.lambda = 0.02;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kIrrelevantParam, "percapita.lambda");
  cfg = paper_baseline(UtilityFamily::kCujMult);
  cfg.percapita.doubling_years = 0.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange,
              "percapita.doubling_years");
  cfg = paper_baseline(UtilityFamily::kCujMult);
  cfg.percapita.C0 = -5.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "percapita.C0");
}

TEST_CASE("solver options rules") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.solver.tol_grad = 0.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "solver.tol_grad");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.solver.max_iter = 0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "solver.max_iter");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.solver.fd_step = -1.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "solver.fd_step");
  cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.solver.init = {1.0, 2.0};
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "solver.init");
  cfg.solver.init.assign(20, 1.0);
  cfg.solver.init[3] = 0.0;
  CHECK_ERROR(validate_config(cfg), ErrorCode::kParamOutOfRange, "solver.init");
}

TEST_CASE("a given initial path is rescaled onto the budget") {
  ScenarioConfig cfg = paper_baseline(UtilityFamily::kSeparableCrra);
  cfg.solver.init.assign(20, 1.0);
  const auto sc = validate_config(cfg);
  double total = 0.0;
  for (double v : sc.solver().init) total += v;
  CHECK(total == doctest::Approx(1e6).epsilon(1e-14));
  CHECK(sc.solver().init[0] == doctest::Approx(5e4));
}

TEST_CASE("validation is idempotent") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (UtilityFamily f : kAllFamilies) {
    ScenarioConfig cfg = paper_baseline(f);
    cfg.W0 *= u(rng);
    cfg.solver.init.resize(20);
    for (double& v : cfg.solver.init) v = u(rng);
    const auto once = validate_config(cfg);
    const auto twice = validate_config(once.config());
    CHECK(once == twice);
    CHECK(once.config().solver.init == twice.config().solver.init);
  }
}

TEST_CASE("per-capita path values") {
  PerCapitaSpec linear{PerCapitaKind::kLinear, 1e5, 30.0, std::nullopt};
  CHECK(percapita_at(linear, 30) == doctest::Approx(2e5).epsilon(1e-15));
  CHECK(percapita_at(linear, 15) == doctest::Approx(1.5e5).epsilon(1e-15));
  PerCapitaSpec flat{PerCapitaKind::kExponential, 1e5, std::nullopt, 0.0};
  for (int t : {1, 7, 40}) CHECK(percapita_at(flat, t) == 1e5);
  PerCapitaSpec constant{PerCapitaKind::kConstant, 3.0, std::nullopt, std::nullopt};
  CHECK(percapita_path(constant, 4) == std::vector<double>{3.0, 3.0, 3.0, 3.0});
  PerCapitaSpec growth{PerCapitaKind::kExponential, 2.0, std::nullopt, 0.1};
  CHECK(percapita_at(growth, 2) == doctest::Approx(2.0 * std::exp(0.2)).epsilon(1e-15));
}

TEST_CASE("per-capita path is nondecreasing") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    PerCapitaSpec spec;
    spec.C0 = 1.0 + 1e5 * u(rng);
    switch (k % 3) {
      case 0: spec.kind = PerCapitaKind::kLinear; spec.doubling_years = 0.1 + 100 * u(rng); break;
      case 1: spec.kind = PerCapitaKind::kExponential; spec.lambda = 0.2 * u(rng); break;
      default: spec.kind = PerCapitaKind::kConstant; break;
    }
    const auto path = percapita_path(spec, 50);
    for (std::size_t i = 1; i < path.size(); ++i) CHECK(path[i] >= path[i - 1]);
  }
}

TEST_CASE("error message carries code, field and period") {
  const Error e(ErrorCode::kDomain, "bad", "utility.b", 4);
  const std::string what = e.what();
  CHECK(what.find("DOMAIN") != std::string::npos);
  CHECK(what.find("utility.b") != std::string::npos);
  CHECK(what.find('4') != std::string::npos);
  CHECK(e.period() == 4);
  CHECK(to_string(ErrorCode::kNoFeasibleGridPoint) == "NO_FEASIBLE_GRID_POINT");
}
