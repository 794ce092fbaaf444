#include "habitpath/config_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "habitpath/error.hpp"

namespace habitpath {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kBadConfig, what, field);
}

void require_object(const json& j, const std::string& field) {
  if (!j.is_object()) bad(field, "expected a JSON object");
}

void reject_unknown(const json& j, const std::string& prefix,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    bool found = false;
    for (auto k : known) found = found || k == key;
    if (!found) bad(prefix + key, "unknown key");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& field) {
  const double v = number(j, field);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorCode::kParamOutOfRange, "expected an integer", field);
  }
  return static_cast<int>(v);
}

std::string text(const json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

template <typename T, typename Read>
void read_optional(const json& parent, const char* key,
                   const std::string& prefix, std::optional<T>& out,
                   Read read) {
  if (auto it = parent.find(key); it != parent.end()) {
    out = read(*it, prefix + key);
  }
}

UtilitySpec utility_from_json(const json& j) {
  require_object(j, "utility");
  reject_unknown(j, "utility.", {"family", "gamma", "eta", "d", "M", "beta",
                                 "b", "a", "D", "alpha", "A"});
  UtilitySpec u;
  auto family = j.find("family");
  if (family == j.end()) {
    throw Error(ErrorCode::kMissingParam, "utility family is required",
                "utility.family");
  }
  u.family = family_from_string(text(*family, "utility.family"));
  const std::string p = "utility.";
  read_optional(j, "gamma", p, u.gamma, number);
  read_optional(j, "eta", p, u.eta, number);
  read_optional(j, "d", p, u.d, number);
  read_optional(j, "M", p, u.M, integer);
  read_optional(j, "beta", p, u.beta, number);
  read_optional(j, "b", p, u.b, number);
  read_optional(j, "a", p, u.a, number);
  read_optional(j, "D", p, u.D, number);
  read_optional(j, "alpha", p, u.alpha, number);
  read_optional(j, "A", p, u.A, number);
  return u;
}

PerCapitaSpec percapita_from_json(const json& j) {
  require_object(j, "percapita");
  reject_unknown(j, "percapita.", {"kind", "C0", "doubling_years", "lambda"});
  PerCapitaSpec p;
  if (auto it = j.find("kind"); it != j.end()) {
    p.kind = percapita_kind_from_string(text(*it, "percapita.kind"));
  }
  const std::string prefix = "percapita.";
  read_optional(j, "C0", prefix, p.C0, number);
  read_optional(j, "doubling_years", prefix, p.doubling_years, number);
  read_optional(j, "lambda", prefix, p.lambda, number);
  return p;
}

SolverOptions solver_from_json(const json& j) {
  require_object(j, "solver");
  reject_unknown(j, "solver.", {"tol_grad", "tol_kkt", "max_iter", "fd_step",
                                "init"});
  SolverOptions s;
  if (auto it = j.find("tol_grad"); it != j.end()) {
    s.tol_grad = number(*it, "solver.tol_grad");
  }
  if (auto it = j.find("tol_kkt"); it != j.end()) {
    s.tol_kkt = number(*it, "solver.tol_kkt");
  }
  if (auto it = j.find("max_iter"); it != j.end()) {
    s.max_iter = integer(*it, "solver.max_iter");
  }
  if (auto it = j.find("fd_step"); it != j.end()) {
    s.fd_step = number(*it, "solver.fd_step");
  }
  if (auto it = j.find("init"); it != j.end()) {
    if (it->is_string()) {
      if (it->get<std::string>() != "UNIFORM") {
        bad("solver.init", "expected \"UNIFORM\" or an array of consumption");
      }
    } else if (it->is_array()) {
      for (const auto& v : *it) s.init.push_back(number(v, "solver.init"));
    } else {
      bad("solver.init", "expected \"UNIFORM\" or an array of consumption");
    }
  }
  return s;
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  require_object(doc, "");
  reject_unknown(doc, "", {"horizon_N", "rho", "W0", "c0", "cbar0",
                           "percapita", "utility", "solver"});
  ScenarioConfig cfg;
  if (auto it = doc.find("horizon_N"); it != doc.end()) {
    cfg.horizon_N = integer(*it, "horizon_N");
  }
  if (auto it = doc.find("rho"); it != doc.end()) cfg.rho = number(*it, "rho");
  if (auto it = doc.find("W0"); it != doc.end()) cfg.W0 = number(*it, "W0");
  if (auto it = doc.find("c0"); it != doc.end()) cfg.c0 = number(*it, "c0");
  read_optional(doc, "cbar0", "", cfg.cbar0, number);
  if (auto it = doc.find("percapita"); it != doc.end()) {
    cfg.percapita = percapita_from_json(*it);
  }
  auto utility = doc.find("utility");
  if (utility == doc.end()) {
    throw Error(ErrorCode::kMissingParam, "utility block is required",
                "utility");
  }
  cfg.utility = utility_from_json(*utility);
  if (auto it = doc.find("solver"); it != doc.end()) {
    cfg.solver = solver_from_json(*it);
  }
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["horizon_N"] = cfg.horizon_N;
  doc["rho"] = cfg.rho;
  doc["W0"] = cfg.W0;
  doc["c0"] = cfg.c0;
  if (cfg.cbar0) doc["cbar0"] = *cfg.cbar0;

  json& pc = doc["percapita"];
  pc["kind"] = std::string(to_string(cfg.percapita.kind));
  if (cfg.percapita.C0) pc["C0"] = *cfg.percapita.C0;
  if (cfg.percapita.doubling_years) {
    pc["doubling_years"] = *cfg.percapita.doubling_years;
  }
  if (cfg.percapita.lambda) pc["lambda"] = *cfg.percapita.lambda;

  const UtilitySpec& u = cfg.utility;
  json& uj = doc["utility"];
  uj["family"] = std::string(to_string(u.family));
  auto put = [&](const char* key, const auto& value) {
    if (value) uj[key] = *value;
  };
  put("gamma", u.gamma);
  put("eta", u.eta);
  put("d", u.d);
  put("M", u.M);
  put("beta", u.beta);
  put("b", u.b);
  put("a", u.a);
  put("D", u.D);
  put("alpha", u.alpha);
  put("A", u.A);

  json& sj = doc["solver"];
  sj["tol_grad"] = cfg.solver.tol_grad;
  sj["tol_kkt"] = cfg.solver.tol_kkt;
  sj["max_iter"] = cfg.solver.max_iter;
  sj["fd_step"] = cfg.solver.fd_step;
  if (cfg.solver.init.empty()) {
    sj["init"] = "UNIFORM";
  } else {
    sj["init"] = cfg.solver.init;
  }
  return doc;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) bad("", "cannot open config file " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad("", std::string("invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

}  // namespace habitpath
