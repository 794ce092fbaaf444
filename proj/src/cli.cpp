#include "habitpath/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "habitpath/config_io.hpp"
#include "habitpath/error.hpp"
#include "habitpath/parallel.hpp"
#include "habitpath/presets.hpp"
#include "habitpath/report.hpp"
#include "habitpath/selfcheck.hpp"

namespace habitpath {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kBadConfig, "cannot write " + file.string());
  }
  out << content;
}

// result.json omits the wall-clock time so reruns produce identical files.
json result_document(const RunRecord& record) {
  json doc = to_json(record);
  doc.erase("wall_seconds");
  return doc;
}

void write_run(const fs::path& dir, const ValidatedScenario& scenario,
               const RunRecord& record, bool svg) {
  fs::create_directories(dir);
  std::ostringstream csv;
  write_path_csv(csv, scenario, record.result.path);
  write_file(dir / "path.csv", csv.str());
  write_file(dir / "result.json", result_document(record).dump(2) + "\n");
  if (svg) {
    const std::string label(to_string(scenario.utility().family));
    write_file(dir / "plot.svg",
               render_svg("Optimal consumption, " + label,
                          {{label, record.result.path.values}}));
  }
}

void report_status(std::ostream& out, const std::string& label,
                   const RunRecord& record) {
  const SolveResult& r = record.result;
  out << label << to_string(r.status) << "  J=" << format_double(r.objective)
      << "  kkt=" << std::setprecision(3) << r.kkt_residual
      << "  iterations=" << r.iterations << "  domain_hits=" << r.domain_hits
      << "  (" << std::setprecision(3) << record.wall_seconds << " s)\n";
}

int exit_for(const SolveResult& r) {
  return r.converged ? kExitOk : kExitNotConverged;
}

std::string file_stem(const std::string& label) {
  std::string out;
  for (char ch : label) {
    const bool keep = std::isalnum(static_cast<unsigned char>(ch)) ||
                      ch == '.' || ch == '-';
    out += keep ? ch : '_';
  }
  return out;
}

bool is_integer_key(const std::string& key) {
  return key == "horizon_N" || key == "M" || key == "max_iter";
}

std::vector<std::string> resolve_param(const std::string& param) {
  std::vector<std::string> parts;
  std::stringstream ss(param);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty() || param.empty()) {
    throw Error(ErrorCode::kBadConfig, "empty sweep parameter", "param");
  }
  static const char* kTopLevel[] = {"horizon_N", "rho", "W0", "c0", "cbar0"};
  if (parts.size() == 1 &&
      std::find(std::begin(kTopLevel), std::end(kTopLevel), parts[0]) ==
          std::end(kTopLevel)) {
    parts.insert(parts.begin(), "utility");
  }
  return parts;
}

ScenarioConfig with_param(const ScenarioConfig& base,
                          const std::vector<std::string>& key, double value) {
  json doc = config_to_json(base);
  json* node = &doc;
  for (std::size_t i = 0; i + 1 < key.size(); ++i) {
    node = &(*node)[key[i]];
    if (!node->is_object()) {
      throw Error(ErrorCode::kBadConfig, "not a config section", key[i]);
    }
  }
  if (is_integer_key(key.back()) && value == std::floor(value)) {
    (*node)[key.back()] = static_cast<long long>(value);
  } else {
    (*node)[key.back()] = value;
  }
  return config_from_json(doc);
}

}  // namespace

int cmd_solve(const fs::path& config_path, const fs::path& out_dir,
              const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  std::optional<ValidatedScenario> scenario;
  try {
    scenario = validate_config(load_config(config_path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const RunRecord record = run_scenario(*scenario);
  try {
    write_run(out_dir, *scenario, record, flags.svg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  report_status(out, "", record);
  return exit_for(record.result);
}

int cmd_figure(int id, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  FigurePreset preset;
  std::vector<ValidatedScenario> scenarios;
  try {
    preset = figure_preset(id);
    for (const auto& curve : preset.curves) {
      scenarios.push_back(validate_config(curve.config));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::vector<RunRecord> records = parallel_map(
      scenarios, [](const ValidatedScenario& s) { return run_scenario(s); },
      worker_count());
  const std::vector<ShapeCheck> checks = check_figure(preset, records);

  json summary;
  summary["figure"] = id;
  summary["description"] = preset.description;
  summary["curves"] = json::array();
  std::vector<PlotSeries> series;
  try {
    fs::create_directories(out_dir);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& curve = preset.curves[i];
      const std::string csv_name = "curve_" + file_stem(curve.label) + ".csv";
      std::ostringstream csv;
      write_path_csv(csv, scenarios[i], records[i].result.path);
      write_file(out_dir / csv_name, csv.str());
      series.push_back({curve.label, records[i].result.path.values});

      json entry;
      entry["label"] = curve.label;
      entry["csv"] = csv_name;
      entry["pathological"] = curve.pathological;
      entry["note"] = curve.note;
      entry["record"] = result_document(records[i]);
      entry["checks"] = json::array();
      bool curve_pass = true;
      for (const auto& c : checks) {
        if (c.curve != curve.label) continue;
        entry["checks"].push_back(
            {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        curve_pass = curve_pass && c.pass;
      }
      entry["pass"] = curve_pass;
      summary["curves"].push_back(entry);
      report_status(out, curve.label + ": ", records[i]);
    }
    write_file(out_dir / "figure.svg",
               render_svg("Figure " + std::to_string(id) + ": " +
                              preset.description,
                          series));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  bool all_pass = true;
  for (const auto& c : checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << c.curve << ": " << c.name
        << "  [" << c.detail << "]\n";
    all_pass = all_pass && c.pass;
  }
  summary["pass"] = all_pass;
  try {
    write_file(out_dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return all_pass ? kExitOk : kExitNotConverged;
}

int cmd_sweep(const fs::path& config_path, const std::string& param,
              const std::vector<double>& values, const fs::path& out_dir,
              std::ostream& out, std::ostream& err) {
  std::vector<ValidatedScenario> scenarios;
  try {
    if (values.empty()) {
      throw Error(ErrorCode::kBadConfig, "no sweep values given", "values");
    }
    const ScenarioConfig base = load_config(config_path);
    const auto key = resolve_param(param);
    // Validate every point before any solve starts.
    for (double v : values) {
      scenarios.push_back(validate_config(with_param(base, key, v)));
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::vector<RunRecord> records = parallel_map(
      scenarios, [](const ValidatedScenario& s) { return run_scenario(s); },
      worker_count());

  std::ostringstream csv;
  csv << "value,status,converged,objective,kkt_residual,multiplier,iterations,"
         "domain_hits,first_jump,last_jump,argmax_t,unimodal,trough_t,"
         "rise_after_trough,end_mass,slope,slope_residual,wall_seconds\n";
  int code = kExitOk;
  try {
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i].result;
      const auto& s = records[i].shape;
      char dir[32];
      std::snprintf(dir, sizeof dir, "run_%03zu", i);
      write_run(out_dir / dir, scenarios[i], records[i], false);
      csv << format_double(values[i]) << ',' << to_string(r.status) << ','
          << (r.converged ? "true" : "false") << ','
          << format_double(r.objective) << ',' << format_double(r.kkt_residual)
          << ',' << format_double(r.multiplier) << ',' << r.iterations << ','
          << r.domain_hits << ',' << format_double(s.first_jump) << ','
          << format_double(s.last_jump) << ',' << s.argmax_t << ','
          << (s.unimodal ? "true" : "false") << ',' << s.trough_t << ','
          << s.rise_after_trough << ',' << format_double(s.end_mass) << ','
          << format_double(s.slope_fit.slope) << ','
          << format_double(s.slope_fit.residual) << ','
          << format_double(records[i].wall_seconds) << '\n';
      report_status(out, param + "=" + format_double(values[i]) + ": ",
                    records[i]);
      if (!r.converged) code = kExitNotConverged;
    }
    write_file(out_dir / "sweep.csv", csv.str());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return code;
}

int cmd_check(std::ostream& out, std::ostream& err) {
  const std::vector<CheckEntry> entries = run_self_checks();
  const CheckEntry* first_failure = nullptr;
  for (const auto& e : entries) {
    out << (e.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(42)
        << e.name << e.detail << '\n';
    if (!e.pass && !first_failure) first_failure = &e;
  }
  if (first_failure) {
    err << "first failing check: " << first_failure->name << '\n';
    return kExitNotConverged;
  }
  return kExitOk;
}

}  // namespace habitpath
