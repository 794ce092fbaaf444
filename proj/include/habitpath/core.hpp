#pragma once

// Scenario configuration, validation and the exogenous per-capita path.
//
// A ScenarioConfig is the raw, user-facing description of one lifetime
// consumption problem. validate_config() checks it, resolves defaults and
// returns an immutable ValidatedScenario that every downstream module takes.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace habitpath {

enum class UtilityFamily {
  kSeparableCrra,
  kSeparableCara,
  kShortMemory,
  kMPeriod,
  kMultHabit,
  kRatioHabit,
  kAddHabitCrra,
  kAddHabitCara,
  kSeparableSumHabit,
  kCujMult,
  kCujAddCara,
  kCujRatio,
  kSeparableSumCuj,
  kCombined,
};

inline constexpr UtilityFamily kAllFamilies[] = {
    UtilityFamily::kSeparableCrra,     UtilityFamily::kSeparableCara,
    UtilityFamily::kShortMemory,       UtilityFamily::kMPeriod,
    UtilityFamily::kMultHabit,         UtilityFamily::kRatioHabit,
    UtilityFamily::kAddHabitCrra,      UtilityFamily::kAddHabitCara,
    UtilityFamily::kSeparableSumHabit, UtilityFamily::kCujMult,
    UtilityFamily::kCujAddCara,        UtilityFamily::kCujRatio,
    UtilityFamily::kSeparableSumCuj,   UtilityFamily::kCombined,
};

std::string_view to_string(UtilityFamily family);
// Throws Error(kBadConfig) on an unknown name.
UtilityFamily family_from_string(std::string_view name);

// Parameters are optional so that validation can tell "not supplied" from
// "supplied but irrelevant". After validation every parameter the family
// needs is present and every other one is empty.
struct UtilitySpec {
  UtilityFamily family = UtilityFamily::kSeparableCrra;
  std::optional<double> gamma;  // CRRA exponent, < 1; 0 means log
  std::optional<double> eta;    // CARA coefficient, > 0
  std::optional<double> d;      // lag exponent
  std::optional<int> M;         // memory window length
  std::optional<double> beta;   // multiplicative habit strength
  std::optional<double> b;      // additive habit strength
  std::optional<double> a;      // decay rate; selects the weighted aggregate
  std::optional<double> D;      // CuJ exponent
  std::optional<double> alpha;  // CuJ benchmark weight
  std::optional<double> A;      // mixture weight

  bool operator==(const UtilitySpec&) const = default;
};

enum class PerCapitaKind { kLinear, kExponential, kConstant };

std::string_view to_string(PerCapitaKind kind);
PerCapitaKind percapita_kind_from_string(std::string_view name);

struct PerCapitaSpec {
  PerCapitaKind kind = PerCapitaKind::kLinear;
  std::optional<double> C0;              // defaults to the scenario's c0
  std::optional<double> doubling_years;  // LINEAR only, defaults to 30
  std::optional<double> lambda;          // EXPONENTIAL only

  bool operator==(const PerCapitaSpec&) const = default;
};

struct SolverOptions {
  double tol_grad = 1e-9;
  // Relative spread of discounted marginal utilities accepted as optimal.
  double tol_kkt = 1e-6;
  int max_iter = 10000;
  double fd_step = 1e-6;
  // Empty means UNIFORM; otherwise GIVEN(path), rescaled onto the budget.
  std::vector<double> init;

  bool operator==(const SolverOptions&) const = default;
};

struct ScenarioConfig {
  int horizon_N = 20;
  double rho = 0.03;
  double W0 = 1e6;
  double c0 = 1e5;
  std::optional<double> cbar0;
  PerCapitaSpec percapita;
  UtilitySpec utility;
  SolverOptions solver;

  bool operator==(const ScenarioConfig&) const = default;
};

// Decision variable: consumption c_1..c_N, stored zero-based.
struct ConsumptionPath {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double total() const;

  bool operator==(const ConsumptionPath&) const = default;
};

// C_t for t = 1..N (zero-based storage). Precondition: spec.C0 is set.
std::vector<double> percapita_path(const PerCapitaSpec& spec, int N);
double percapita_at(const PerCapitaSpec& spec, double t);

class ValidatedScenario {
 public:
  // The fully resolved configuration: cbar0 and percapita.C0 are set.
  const ScenarioConfig& config() const noexcept { return config_; }
  const UtilitySpec& utility() const noexcept { return config_.utility; }
  const SolverOptions& solver() const noexcept { return config_.solver; }

  int N() const noexcept { return config_.horizon_N; }
  double rho() const noexcept { return config_.rho; }
  double W0() const noexcept { return config_.W0; }
  double c0() const noexcept { return config_.c0; }
  double cbar0() const noexcept { return *config_.cbar0; }
  double C0() const noexcept { return *config_.percapita.C0; }
  std::span<const double> percapita() const noexcept { return percapita_; }
  // e^{-rho t} for t = 1..N.
  std::span<const double> discount() const noexcept { return discount_; }

  bool operator==(const ValidatedScenario& other) const {
    return config_ == other.config_;
  }

 private:
  friend ValidatedScenario validate_config(const ScenarioConfig& raw);
  explicit ValidatedScenario(ScenarioConfig config);

  ScenarioConfig config_;
  std::vector<double> percapita_;
  std::vector<double> discount_;
};

// Throws Error naming the offending field.
ValidatedScenario validate_config(const ScenarioConfig& raw);

}  // namespace habitpath
