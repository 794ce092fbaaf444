#include "habitpath/core.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include "habitpath/error.hpp"

namespace habitpath {

namespace {

struct FamilyName {
  UtilityFamily family;
  std::string_view name;
};

constexpr std::array<FamilyName, 14> kFamilyNames{{
    {UtilityFamily::kSeparableCrra, "SEPARABLE_CRRA"},
    {UtilityFamily::kSeparableCara, "SEPARABLE_CARA"},
    {UtilityFamily::kShortMemory, "SHORT_MEMORY"},
    {UtilityFamily::kMPeriod, "M_PERIOD"},
    {UtilityFamily::kMultHabit, "MULT_HABIT"},
    {UtilityFamily::kRatioHabit, "RATIO_HABIT"},
    {UtilityFamily::kAddHabitCrra, "ADD_HABIT_CRRA"},
    {UtilityFamily::kAddHabitCara, "ADD_HABIT_CARA"},
    {UtilityFamily::kSeparableSumHabit, "SEPARABLE_SUM_HABIT"},
    {UtilityFamily::kCujMult, "CUJ_MULT"},
    {UtilityFamily::kCujAddCara, "CUJ_ADD_CARA"},
    {UtilityFamily::kCujRatio, "CUJ_RATIO"},
    {UtilityFamily::kSeparableSumCuj, "SEPARABLE_SUM_CUJ"},
    {UtilityFamily::kCombined, "COMBINED"},
}};

// Which parameters a family reads. `a` is always optional: supplying it
// switches the additive habit families to the weighted aggregate z_t.
struct Relevance {
  bool gamma = false, eta = false, d = false, M = false, beta = false,
       b = false, a = false, D = false, alpha = false, A = false;
};

Relevance relevance(UtilityFamily family) {
  Relevance r;
  switch (family) {
    case UtilityFamily::kSeparableCrra: r.gamma = true; break;
    case UtilityFamily::kSeparableCara: r.eta = true; break;
    case UtilityFamily::kShortMemory: r.gamma = r.d = true; break;
    case UtilityFamily::kMPeriod: r.gamma = r.M = true; break;
    case UtilityFamily::kMultHabit: r.gamma = r.beta = true; break;
    case UtilityFamily::kRatioHabit: r.gamma = r.d = true; break;
    case UtilityFamily::kAddHabitCrra: r.gamma = r.b = r.a = true; break;
    case UtilityFamily::kAddHabitCara: r.eta = r.b = r.a = true; break;
    case UtilityFamily::kSeparableSumHabit: r.gamma = r.beta = true; break;
    case UtilityFamily::kCujMult: r.gamma = r.D = true; break;
    case UtilityFamily::kCujAddCara: r.eta = r.alpha = true; break;
    case UtilityFamily::kCujRatio: r.gamma = r.alpha = true; break;
    case UtilityFamily::kSeparableSumCuj: r.gamma = r.alpha = true; break;
    case UtilityFamily::kCombined:
      r.gamma = r.eta = r.beta = r.alpha = r.A = true;
      break;
  }
  return r;
}

[[noreturn]] void out_of_range(const std::string& field,
                               const std::string& what) {
  throw Error(ErrorCode::kParamOutOfRange, what, field);
}

template <typename T>
void check_param(const std::optional<T>& value, bool relevant, bool optional,
                 const std::string& field, UtilityFamily family) {
  if (value && !relevant) {
    throw Error(ErrorCode::kIrrelevantParam,
                "parameter not used by family " +
                    std::string(to_string(family)),
                field);
  }
  if (!value && relevant && !optional) {
    throw Error(ErrorCode::kMissingParam,
                "family " + std::string(to_string(family)) +
                    " requires this parameter",
                field);
  }
  if (value && !std::isfinite(static_cast<double>(*value))) {
    out_of_range(field, "must be finite");
  }
}

void validate_utility(const UtilitySpec& u, double cbar0) {
  const Relevance r = relevance(u.family);
  check_param(u.gamma, r.gamma, false, "utility.gamma", u.family);
  check_param(u.eta, r.eta, false, "utility.eta", u.family);
  check_param(u.d, r.d, false, "utility.d", u.family);
  check_param(u.M, r.M, false, "utility.M", u.family);
  check_param(u.beta, r.beta, false, "utility.beta", u.family);
  check_param(u.b, r.b, false, "utility.b", u.family);
  check_param(u.a, r.a, true, "utility.a", u.family);
  check_param(u.D, r.D, false, "utility.D", u.family);
  check_param(u.alpha, r.alpha, false, "utility.alpha", u.family);
  check_param(u.A, r.A, false, "utility.A", u.family);

  if (u.gamma && !(*u.gamma < 1.0)) out_of_range("utility.gamma", "must be < 1");
  if (u.eta && !(*u.eta > 0.0)) out_of_range("utility.eta", "must be > 0");
  if (u.d && !(*u.d >= 0.0)) out_of_range("utility.d", "must be >= 0");
  if (u.M && *u.M < 1) out_of_range("utility.M", "must be >= 1");
  if (u.beta && !(*u.beta >= 0.0)) out_of_range("utility.beta", "must be >= 0");
  if (u.b && !(*u.b >= 0.0)) out_of_range("utility.b", "must be >= 0");
  if (u.a && !(*u.a > 0.0)) out_of_range("utility.a", "must be > 0");
  if (u.alpha && !(*u.alpha >= 0.0)) {
    out_of_range("utility.alpha", "must be >= 0");
  }
  if (u.A && !(*u.A >= 0.0 && *u.A <= 1.0)) {
    out_of_range("utility.A", "must lie in [0, 1]");
  }
  // The multiplicative benchmark cbar0 + beta*h must stay positive.
  if ((u.family == UtilityFamily::kMultHabit ||
       u.family == UtilityFamily::kCombined) &&
      cbar0 == 0.0 && *u.beta == 0.0) {
    out_of_range("cbar0", "cbar0 and beta cannot both be zero");
  }
}

void validate_percapita(const PerCapitaSpec& p) {
  if (!(*p.C0 > 0.0) || !std::isfinite(*p.C0)) {
    out_of_range("percapita.C0", "must be > 0");
  }
  const bool linear = p.kind == PerCapitaKind::kLinear;
  const bool exponential = p.kind == PerCapitaKind::kExponential;
  if (p.doubling_years && !linear) {
    throw Error(ErrorCode::kIrrelevantParam, "only used by LINEAR",
                "percapita.doubling_years");
  }
  if (p.lambda && !exponential) {
    throw Error(ErrorCode::kIrrelevantParam, "only used by EXPONENTIAL",
                "percapita.lambda");
  }
  if (linear && !(*p.doubling_years > 0.0 && std::isfinite(*p.doubling_years))) {
    out_of_range("percapita.doubling_years", "must be > 0");
  }
  if (exponential && !p.lambda) {
    throw Error(ErrorCode::kMissingParam, "EXPONENTIAL requires lambda",
                "percapita.lambda");
  }
  if (exponential && !(*p.lambda >= 0.0 && std::isfinite(*p.lambda))) {
    out_of_range("percapita.lambda", "must be >= 0");
  }
}

void validate_solver(SolverOptions& s, int N, double W0) {
  if (!(s.tol_grad > 0.0)) out_of_range("solver.tol_grad", "must be > 0");
  if (!(s.tol_kkt > 0.0)) out_of_range("solver.tol_kkt", "must be > 0");
  if (s.max_iter < 1) out_of_range("solver.max_iter", "must be >= 1");
  if (!(s.fd_step > 0.0)) out_of_range("solver.fd_step", "must be > 0");
  if (s.init.empty()) return;
  if (s.init.size() != static_cast<std::size_t>(N)) {
    out_of_range("solver.init", "initial path length must equal horizon_N");
  }
  double total = 0.0;
  for (double v : s.init) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out_of_range("solver.init", "initial path entries must be > 0");
    }
    total += v;
  }
  // Already-budgeted paths are left untouched so re-validation is a no-op.
  if (std::abs(total - W0) > 1e-12 * W0) {
    for (double& v : s.init) v *= W0 / total;
  }
}

}  // namespace

std::string_view to_string(UtilityFamily family) {
  for (const auto& entry : kFamilyNames) {
    if (entry.family == family) return entry.name;
  }
  return "UNKNOWN";
}

UtilityFamily family_from_string(std::string_view name) {
  for (const auto& entry : kFamilyNames) {
    if (entry.name == name) return entry.family;
  }
  throw Error(ErrorCode::kBadConfig,
              "unknown utility family '" + std::string(name) + "'",
              "utility.family");
}

std::string_view to_string(PerCapitaKind kind) {
  switch (kind) {
    case PerCapitaKind::kLinear: return "LINEAR";
    case PerCapitaKind::kExponential: return "EXPONENTIAL";
    case PerCapitaKind::kConstant: return "CONSTANT";
  }
  return "UNKNOWN";
}

PerCapitaKind percapita_kind_from_string(std::string_view name) {
  if (name == "LINEAR") return PerCapitaKind::kLinear;
  if (name == "EXPONENTIAL") return PerCapitaKind::kExponential;
  if (name == "CONSTANT") return PerCapitaKind::kConstant;
  throw Error(ErrorCode::kBadConfig,
              "unknown per-capita kind '" + std::string(name) + "'",
              "percapita.kind");
}

double ConsumptionPath::total() const {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double percapita_at(const PerCapitaSpec& spec, double t) {
  const double C0 = spec.C0.value();
  switch (spec.kind) {
    case PerCapitaKind::kLinear:
      return C0 * (1.0 + t / spec.doubling_years.value_or(30.0));
    case PerCapitaKind::kExponential:
      return C0 * std::exp(spec.lambda.value_or(0.0) * t);
    case PerCapitaKind::kConstant:
      return C0;
  }
  return C0;
}

std::vector<double> percapita_path(const PerCapitaSpec& spec, int N) {
  std::vector<double> path(static_cast<std::size_t>(std::max(N, 0)));
  for (int t = 1; t <= N; ++t) path[t - 1] = percapita_at(spec, t);
  return path;
}

ValidatedScenario::ValidatedScenario(ScenarioConfig config)
    : config_(std::move(config)),
      percapita_(percapita_path(config_.percapita, config_.horizon_N)),
      discount_(static_cast<std::size_t>(config_.horizon_N)) {
  for (int t = 1; t <= config_.horizon_N; ++t) {
    discount_[t - 1] = std::exp(-config_.rho * t);
  }
}

ValidatedScenario validate_config(const ScenarioConfig& raw) {
  ScenarioConfig cfg = raw;
  if (cfg.horizon_N < 1) {
    throw Error(ErrorCode::kBadHorizon, "horizon must be at least one year",
                "horizon_N");
  }
  if (!(cfg.W0 > 0.0) || !std::isfinite(cfg.W0)) {
    throw Error(ErrorCode::kNonPositiveWealth, "initial wealth must be > 0",
                "W0");
  }
  if (!(cfg.c0 > 0.0) || !std::isfinite(cfg.c0)) {
    out_of_range("c0", "inherited consumption must be > 0");
  }
  if (!(cfg.rho >= 0.0) || !std::isfinite(cfg.rho)) {
    out_of_range("rho", "discount rate must be >= 0");
  }
  if (!cfg.cbar0) cfg.cbar0 = cfg.c0;
  if (!(*cfg.cbar0 >= 0.0) || !std::isfinite(*cfg.cbar0)) {
    out_of_range("cbar0", "habit benchmark must be >= 0");
  }
  if (!cfg.percapita.C0) cfg.percapita.C0 = cfg.c0;
  if (cfg.percapita.kind == PerCapitaKind::kLinear &&
      !cfg.percapita.doubling_years) {
    cfg.percapita.doubling_years = 30.0;
  }
  validate_percapita(cfg.percapita);
  validate_utility(cfg.utility, *cfg.cbar0);
  validate_solver(cfg.solver, cfg.horizon_N, cfg.W0);
  return ValidatedScenario(std::move(cfg));
}

}  // namespace habitpath
