// habitpath: optimal consumption paths under habit formation and
// catching-up-with-the-Joneses preferences.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "habitpath/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Optimal lifetime consumption under time-nonseparable utility"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  bool svg = false;
  auto* solve = app.add_subcommand("solve", "Solve one scenario file");
  solve->add_option("config", config, "Scenario JSON")->required();
  solve->add_option("-o,--output", out_dir, "Output directory");
  solve->add_flag("--svg", svg, "Also write plot.svg");

  int figure_id = 0;
  auto* figure = app.add_subcommand("figure", "Reproduce a figure preset");
  figure->add_option("id", figure_id, "Figure number 1..7")->required();
  figure->add_option("-o,--output", out_dir, "Output directory");

  std::string param;
  std::vector<double> values;
  auto* sweep = app.add_subcommand("sweep", "Solve a scenario over a parameter grid");
  sweep->add_option("config", config, "Scenario JSON")->required();
  sweep->add_option("--param", param, "Parameter key, e.g. utility.beta")
      ->required();
  sweep->add_option("--values", values, "Comma-separated values")
      ->required()
      ->delimiter(',');
  sweep->add_option("-o,--output", out_dir, "Output directory");

  auto* check = app.add_subcommand("check", "Run the self-test battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : habitpath::kExitConfig;
  }

  if (*solve) {
    return habitpath::cmd_solve(config, out_dir, {svg}, std::cout, std::cerr);
  }
  if (*figure) {
    return habitpath::cmd_figure(figure_id, out_dir, std::cout, std::cerr);
  }
  if (*sweep) {
    return habitpath::cmd_sweep(config, param, values, out_dir, std::cout,
                                std::cerr);
  }
  if (*check) return habitpath::cmd_check(std::cout, std::cerr);
  return habitpath::kExitConfig;
}
