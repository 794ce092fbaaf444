#include "habitpath/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "habitpath/error.hpp"

namespace habitpath {

namespace {

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorCode::kDomain, what);
}

void require_positive_prefix(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) {
      throw Error(ErrorCode::kDomain, "consumption must be positive", {},
                  static_cast<int>(i) + 1);
    }
  }
}

// u(x) with x = c / denom; returns value and du/dx.
struct Ratio {
  double value;
  double slope;
};

Ratio crra_of(double x, double gamma) {
  return {crra(x, gamma), crra_prime(x, gamma)};
}

}  // namespace

double crra(double x, double gamma) {
  if (!(x > 0.0)) domain_error("CRRA argument must be positive");
  if (gamma == 0.0) return std::log(x);
  return std::pow(x, gamma) / gamma;
}

double crra_prime(double x, double gamma) {
  if (!(x > 0.0)) domain_error("CRRA argument must be positive");
  if (gamma == 0.0) return 1.0 / x;
  return std::pow(x, gamma - 1.0);
}

double cara(double x, double eta) { return -std::exp(-eta * x) / eta; }

double cara_prime(double x, double eta) { return std::exp(-eta * x); }

HabitKind habit_kind(const UtilitySpec& spec) {
  switch (spec.family) {
    case UtilityFamily::kSeparableCrra:
    case UtilityFamily::kSeparableCara:
    case UtilityFamily::kCujMult:
    case UtilityFamily::kCujAddCara:
    case UtilityFamily::kCujRatio:
    case UtilityFamily::kSeparableSumCuj:
      return HabitKind::kNone;
    case UtilityFamily::kShortMemory:
      return HabitKind::kLagged;
    case UtilityFamily::kMPeriod:
      return HabitKind::kWindow;
    case UtilityFamily::kAddHabitCrra:
    case UtilityFamily::kAddHabitCara:
      return spec.a ? HabitKind::kWeighted : HabitKind::kRunningMean;
    case UtilityFamily::kMultHabit:
    case UtilityFamily::kRatioHabit:
    case UtilityFamily::kSeparableSumHabit:
    case UtilityFamily::kCombined:
      return HabitKind::kRunningMean;
  }
  return HabitKind::kNone;
}

double habit_state(const ValidatedScenario& scenario,
                   std::span<const double> prefix, int t) {
  if (t < 1 || static_cast<std::size_t>(t - 1) != prefix.size()) {
    throw Error(ErrorCode::kDomain, "prefix length must be t-1", {}, t);
  }
  require_positive_prefix(prefix);
  const double c0 = scenario.c0();
  const UtilitySpec& spec = scenario.utility();
  switch (habit_kind(spec)) {
    case HabitKind::kNone:
      return 0.0;
    case HabitKind::kLagged:
      return t == 1 ? c0 : prefix[t - 2];
    case HabitKind::kWindow: {
      const int M = *spec.M;
      double sum = 0.0;
      for (int s = t - M; s <= t - 1; ++s) sum += s <= 0 ? c0 : prefix[s - 1];
      return c0 + sum / M;
    }
    case HabitKind::kRunningMean: {
      if (t == 1) return c0;
      double sum = 0.0;
      for (double v : prefix) sum += v;
      return sum / (t - 1);
    }
    case HabitKind::kWeighted: {
      const double decay = std::exp(-*spec.a);
      double z = c0 / std::expm1(*spec.a);
      for (double v : prefix) z = decay * (z + v);
      return z;
    }
  }
  return 0.0;
}

HabitTrace habit_trace(const ValidatedScenario& scenario,
                       std::span<const double> path) {
  require_positive_prefix(path);
  const UtilitySpec& spec = scenario.utility();
  const double c0 = scenario.c0();
  const std::size_t n = path.size();
  HabitTrace trace{habit_kind(spec), std::vector<double>(n, 0.0)};
  switch (trace.kind) {
    case HabitKind::kNone:
      break;
    case HabitKind::kLagged:
      for (std::size_t i = 0; i < n; ++i) {
        trace.values[i] = i == 0 ? c0 : path[i - 1];
      }
      break;
    case HabitKind::kWindow: {
      const int M = *spec.M;
      // Running window sum with c_0 standing in for pre-period years.
      double sum = M * c0;
      for (std::size_t i = 0; i < n; ++i) {
        trace.values[i] = c0 + sum / M;
        const long leaving = static_cast<long>(i) + 1 - M;  // year t-M+1 drops
        sum += path[i] - (leaving <= 0 ? c0 : path[leaving - 1]);
      }
      break;
    }
    case HabitKind::kRunningMean: {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        trace.values[i] = i == 0 ? c0 : sum / static_cast<double>(i);
        sum += path[i];
      }
      break;
    }
    case HabitKind::kWeighted: {
      const double decay = std::exp(-*spec.a);
      double z = c0 / std::expm1(*spec.a);
      for (std::size_t i = 0; i < n; ++i) {
        trace.values[i] = z;
        z = decay * (z + path[i]);
      }
      break;
    }
  }
  return trace;
}

FelicityValue felicity(const UtilitySpec& spec, const FelicityPoint& p,
                       const FelicityAnchors& anchors) {
  if (!(p.c > 0.0)) domain_error("consumption must be positive");
  FelicityValue out;
  switch (spec.family) {
    case UtilityFamily::kSeparableCrra: {
      out.value = crra(p.c, *spec.gamma);
      out.d_dc = crra_prime(p.c, *spec.gamma);
      break;
    }
    case UtilityFamily::kSeparableCara: {
      out.value = cara(p.c, *spec.eta);
      out.d_dc = cara_prime(p.c, *spec.eta);
      break;
    }
    case UtilityFamily::kShortMemory:
    case UtilityFamily::kRatioHabit: {
      if (!(p.h > 0.0)) domain_error("habit state must be positive");
      const double d = *spec.d;
      const double denom = std::pow(p.h, d);
      const double x = p.c / denom;
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du / denom;
      out.d_dh = -du * d * x / p.h;
      break;
    }
    case UtilityFamily::kMPeriod: {
      if (!(p.h > 0.0)) domain_error("habit state must be positive");
      const double x = p.c / p.h;
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du / p.h;
      out.d_dh = -du * x / p.h;
      break;
    }
    case UtilityFamily::kMultHabit: {
      const double denom = anchors.cbar0 + *spec.beta * p.h;
      if (!(denom > 0.0)) domain_error("habit benchmark must be positive");
      const double x = p.c / denom;
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du / denom;
      out.d_dh = -du * x * *spec.beta / denom;
      break;
    }
    case UtilityFamily::kAddHabitCrra: {
      const double x = p.c - *spec.b * p.h;
      if (!(x > 0.0)) {
        domain_error("consumption fell to or below the additive habit level");
      }
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du;
      out.d_dh = -*spec.b * du;
      break;
    }
    case UtilityFamily::kAddHabitCara: {
      const double x = p.c - *spec.b * p.h;
      const double du = cara_prime(x, *spec.eta);
      out.value = cara(x, *spec.eta);
      out.d_dc = du;
      out.d_dh = -*spec.b * du;
      break;
    }
    case UtilityFamily::kSeparableSumHabit: {
      const double g = *spec.gamma;
      out.value = crra(p.c, g) + *spec.beta * crra(p.h, g);
      out.d_dc = crra_prime(p.c, g);
      out.d_dh = *spec.beta * crra_prime(p.h, g);
      break;
    }
    case UtilityFamily::kCujMult: {
      if (!(p.C > 0.0)) domain_error("per-capita consumption must be positive");
      const double denom = std::pow(p.C, *spec.D);
      const double x = p.c / denom;
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du / denom;
      out.d_dC = -du * *spec.D * x / p.C;
      break;
    }
    case UtilityFamily::kCujAddCara: {
      const double x = p.c - *spec.alpha * p.C;
      const double du = cara_prime(x, *spec.eta);
      out.value = cara(x, *spec.eta);
      out.d_dc = du;
      out.d_dC = -*spec.alpha * du;
      break;
    }
    case UtilityFamily::kCujRatio: {
      const double denom = anchors.C0 + *spec.alpha * p.C;
      if (!(denom > 0.0)) domain_error("CuJ benchmark must be positive");
      const double x = p.c / denom;
      const auto [u, du] = crra_of(x, *spec.gamma);
      out.value = u;
      out.d_dc = du / denom;
      out.d_dC = -du * x * *spec.alpha / denom;
      break;
    }
    case UtilityFamily::kSeparableSumCuj: {
      const double g = *spec.gamma;
      out.value = crra(p.c, g) + *spec.alpha * crra(p.C, g);
      out.d_dc = crra_prime(p.c, g);
      out.d_dC = *spec.alpha * crra_prime(p.C, g);
      break;
    }
    case UtilityFamily::kCombined: {
      const double weight = *spec.A;
      const double beta = *spec.beta;
      const double alpha = *spec.alpha;
      const double denom = anchors.cbar0 + beta * p.h;
      if (!(denom > 0.0)) domain_error("habit benchmark must be positive");
      const double x = p.c / denom;
      const auto [u, du] = crra_of(x, *spec.gamma);
      const double y = p.c - alpha * p.C;
      const double v = cara(y, *spec.eta);
      const double dv = cara_prime(y, *spec.eta);
      out.value = weight * u + (1.0 - weight) * v;
      out.d_dc = weight * du / denom + (1.0 - weight) * dv;
      out.d_dh = -weight * du * x * beta / denom;
      out.d_dC = -(1.0 - weight) * alpha * dv;
      break;
    }
  }
  return out;
}

double felicity_partials_check(const UtilitySpec& spec,
                               const FelicityPoint& point,
                               const FelicityAnchors& anchors, double step) {
  const FelicityValue exact = felicity(spec, point, anchors);
  auto rel = [](double analytic, double numeric) {
    const double scale = std::max(std::abs(analytic), std::abs(numeric));
    return scale == 0.0 ? 0.0 : std::abs(analytic - numeric) / scale;
  };
  // Fourth-order central stencil along one coordinate of the point.
  auto derivative = [&](double FelicityPoint::*coord) {
    const double x = point.*coord;
    if (x == 0.0) return 0.0;
    const double h = step * std::abs(x);
    auto at = [&](double offset) {
      FelicityPoint p = point;
      p.*coord = x + offset;
      return felicity(spec, p, anchors).value;
    };
    return (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
  };
  double worst = rel(exact.d_dc, derivative(&FelicityPoint::c));
  if (point.h != 0.0) worst = std::max(worst, rel(exact.d_dh, derivative(&FelicityPoint::h)));
  if (point.C != 0.0) worst = std::max(worst, rel(exact.d_dC, derivative(&FelicityPoint::C)));
  return worst;
}

}  // namespace habitpath
