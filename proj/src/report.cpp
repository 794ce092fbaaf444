#include "habitpath/report.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "habitpath/config_io.hpp"
#include "habitpath/error.hpp"
#include "habitpath/objective.hpp"
#include "habitpath/utility.hpp"

namespace habitpath {

namespace {

using nlohmann::json;

json number_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN()
                     : j.get<double>();
}

SolveStatus status_from_string(const std::string& s) {
  for (auto status : {SolveStatus::kConverged, SolveStatus::kNotConverged,
                      SolveStatus::kInfeasibleStart}) {
    if (to_string(status) == s) return status;
  }
  throw Error(ErrorCode::kBadConfig, "unknown solve status '" + s + "'",
              "status");
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, end);
}

RunRecord run_scenario(const ValidatedScenario& scenario) {
  RunRecord record;
  record.scenario = scenario.config();
  const auto start = std::chrono::steady_clock::now();
  record.result = solve(scenario);
  record.wall_seconds = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  record.shape = shape_metrics(record.result.path, scenario.W0());
  return record;
}

void write_path_csv(std::ostream& out, const ValidatedScenario& scenario,
                    const ConsumptionPath& path) {
  HabitTrace habit;
  try {
    habit = habit_trace(scenario, path.values);
  } catch (const Error&) {
    habit.kind = HabitKind::kNone;
  }
  const auto percapita = scenario.percapita();
  const auto anchors = anchors_of(scenario);
  out << "t,c_t,habit_t,C_t,felicity_t,discount_t\n";
  for (std::size_t i = 0; i < path.size(); ++i) {
    out << i + 1 << ',' << format_double(path[i]) << ',';
    if (habit.kind != HabitKind::kNone) out << format_double(habit.values[i]);
    out << ',' << format_double(percapita[i]) << ',';
    if (habit.kind != HabitKind::kNone ||
        habit_kind(scenario.utility()) == HabitKind::kNone) {
      try {
        const double h = habit.values.empty() ? 0.0 : habit.values[i];
        out << format_double(
            felicity(scenario.utility(), {path[i], h, percapita[i]}, anchors)
                .value);
      } catch (const Error&) {
        // Outside the utility domain: leave the cell empty.
      }
    }
    out << ',' << format_double(scenario.discount()[i]) << '\n';
  }
}

ConsumptionPath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("t,c_t,", 0) != 0) {
    throw Error(ErrorCode::kBadConfig, "missing path.csv header");
  }
  ConsumptionPath path;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto first = line.find(',');
    const auto second = line.find(',', first + 1);
    if (first == std::string::npos || second == std::string::npos) {
      throw Error(ErrorCode::kBadConfig, "malformed path.csv row: " + line);
    }
    const std::string cell = line.substr(first + 1, second - first - 1);
    path.values.push_back(std::strtod(cell.c_str(), nullptr));
  }
  return path;
}

json to_json(const SolveResult& r) {
  json j;
  j["path"] = r.path.values;
  j["objective"] = number_or_null(r.objective);
  j["kkt_residual"] = number_or_null(r.kkt_residual);
  j["multiplier"] = number_or_null(r.multiplier);
  j["grad_norm"] = number_or_null(r.grad_norm);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = std::string(to_string(r.status));
  j["domain_hits"] = r.domain_hits;
  j["objective_trace"] = r.objective_trace;
  return j;
}

json to_json(const ShapeMetrics& m) {
  json j;
  j["first_jump"] = number_or_null(m.first_jump);
  j["last_jump"] = number_or_null(m.last_jump);
  j["argmax_t"] = m.argmax_t;
  j["unimodal"] = m.unimodal;
  j["trough_t"] = m.trough_t;
  j["rise_after_trough"] = m.rise_after_trough;
  j["end_mass"] = number_or_null(m.end_mass);
  j["slope_fit"] = {{"slope", number_or_null(m.slope_fit.slope)},
                    {"intercept", number_or_null(m.slope_fit.intercept)},
                    {"residual", number_or_null(m.slope_fit.residual)}};
  return j;
}

json to_json(const RunRecord& record) {
  json j;
  j["scenario"] = config_to_json(record.scenario);
  j["result"] = to_json(record.result);
  j["shape"] = to_json(record.shape);
  j["wall_seconds"] = record.wall_seconds;
  return j;
}

SolveResult solve_result_from_json(const json& j) {
  SolveResult r;
  r.path.values = j.at("path").get<std::vector<double>>();
  r.objective = number_from(j.at("objective"));
  r.kkt_residual = number_from(j.at("kkt_residual"));
  r.multiplier = number_from(j.at("multiplier"));
  r.grad_norm = number_from(j.at("grad_norm"));
  r.iterations = j.at("iterations").get<int>();
  r.converged = j.at("converged").get<bool>();
  r.status = status_from_string(j.at("status").get<std::string>());
  r.domain_hits = j.at("domain_hits").get<int>();
  r.objective_trace = j.at("objective_trace").get<std::vector<double>>();
  return r;
}

ShapeMetrics shape_metrics_from_json(const json& j) {
  ShapeMetrics m;
  m.first_jump = number_from(j.at("first_jump"));
  m.last_jump = number_from(j.at("last_jump"));
  m.argmax_t = j.at("argmax_t").get<int>();
  m.unimodal = j.at("unimodal").get<bool>();
  m.trough_t = j.at("trough_t").get<int>();
  m.rise_after_trough = j.at("rise_after_trough").get<int>();
  m.end_mass = number_from(j.at("end_mass"));
  const json& fit = j.at("slope_fit");
  m.slope_fit.slope = number_from(fit.at("slope"));
  m.slope_fit.intercept = number_from(fit.at("intercept"));
  m.slope_fit.residual = number_from(fit.at("residual"));
  return m;
}

RunRecord run_record_from_json(const json& j) {
  RunRecord record;
  record.scenario = config_from_json(j.at("scenario"));
  record.result = solve_result_from_json(j.at("result"));
  record.shape = shape_metrics_from_json(j.at("shape"));
  record.wall_seconds = j.value("wall_seconds", 0.0);
  return record;
}

std::string render_svg(const std::string& title,
                       const std::vector<PlotSeries>& series) {
  constexpr double kWidth = 720, kHeight = 440;
  constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 50;
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                            "#ff7f0e", "#9467bd", "#8c564b",
                                            "#e377c2", "#7f7f7f"};

  std::size_t n = 1;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
  }
  lo = std::min(lo, 0.0);
  if (!(hi > lo)) hi = lo + 1.0;
  hi += 0.05 * (hi - lo);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double t) {
    return kLeft + (n > 1 ? (t - 1.0) / static_cast<double>(n - 1) : 0.5) * plot_w;
  };
  auto py = [&](double v) { return kTop + (hi - v) / (hi - lo) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed2(kWidth / 2 - kRight / 2)
      << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">"
      << escape_xml(title) << "</text>\n";
  // Axes with five ticks on each.
  svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop + plot_h)
      << "\" x2=\"" << fixed2(kLeft + plot_w) << "\" y2=\""
      << fixed2(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << fixed2(kLeft) << "\" y1=\"" << fixed2(kTop)
      << "\" x2=\"" << fixed2(kLeft) << "\" y2=\"" << fixed2(kTop + plot_h)
      << "\"/>\n</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = 1.0 + (static_cast<double>(n) - 1.0) * k / 4.0;
    const double v = lo + (hi - lo) * k / 4.0;
    svg << "<text x=\"" << fixed2(px(t)) << "\" y=\""
        << fixed2(kTop + plot_h + 16) << "\" text-anchor=\"middle\">"
        << fixed2(t) << "</text>\n";
    svg << "<text x=\"" << fixed2(kLeft - 6) << "\" y=\"" << fixed2(py(v) + 4)
        << "\" text-anchor=\"end\">" << fixed2(v) << "</text>\n";
  }
  svg << "<text x=\"" << fixed2(kLeft + plot_w / 2) << "\" y=\""
      << fixed2(kHeight - 12) << "\" text-anchor=\"middle\">year t</text>\n";
  svg << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kColors[i % std::size(kColors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t k = 0; k < series[i].values.size(); ++k) {
      const double v = series[i].values[k];
      if (!std::isfinite(v)) continue;
      svg << (first ? "" : " ") << fixed2(px(static_cast<double>(k + 1))) << ','
          << fixed2(py(v));
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(i);
    svg << "<line x1=\"" << fixed2(kWidth - kRight + 16) << "\" y1=\""
        << fixed2(ly) << "\" x2=\"" << fixed2(kWidth - kRight + 36)
        << "\" y2=\"" << fixed2(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed2(kWidth - kRight + 42) << "\" y=\""
        << fixed2(ly + 4) << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape_xml(series[i].label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace habitpath
