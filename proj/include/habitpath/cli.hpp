#pragma once

// Subcommands of the habitpath executable. Each returns the process exit
// code: 0 success, 1 configuration error, 2 a run that did not converge or
// a failed expectation.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace habitpath {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNotConverged = 2;

struct SolveFlags {
  bool svg = false;
};

// path.csv, result.json and optionally plot.svg in out_dir.
int cmd_solve(const std::filesystem::path& config_path,
              const std::filesystem::path& out_dir, const SolveFlags& flags,
              std::ostream& out, std::ostream& err);

// One CSV per curve, figure.svg and summary.json in out_dir.
int cmd_figure(int id, const std::filesystem::path& out_dir, std::ostream& out,
               std::ostream& err);

// `param` is a dotted key such as "utility.beta" or "rho"; a bare utility
// parameter name ("beta") is also accepted. Writes sweep.csv and one
// run_NNN directory per value.
int cmd_sweep(const std::filesystem::path& config_path, const std::string& param,
              const std::vector<double>& values,
              const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);

int cmd_check(std::ostream& out, std::ostream& err);

}  // namespace habitpath
