#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hpe/adapt.hpp"

namespace hpe {

struct RunConfig {
  std::string problem = "ex1";
  std::optional<std::string> mesh_file;  ///< overrides the built-in initial mesh
  int initial_degree = 1;
  AdaptConfig adapt;
  std::optional<int> iterations;  ///< default: 15 (ex1), 18 (ex2), 16 (ex3)
  std::string out_dir = "out";
  std::optional<double> epsilon;  ///< ex1 diffusion coefficient
  bool wall_time = false;         ///< fill the seconds column
  bool svg = true;
};

/// Reads flat "key = value" lines ('#' comments) into `config`. Keys:
/// problem, mesh, degree, theta, nmax, seed, iters, out, threads,
/// max_dofs, epsilon, wall_time, svg.
void load_config(std::istream& in, RunConfig& config);
void load_config_file(const std::string& path, RunConfig& config);

/// Problem named in the config, with overrides applied.
ProblemDef make_problem(const RunConfig& config);

/// Least-squares line y = slope·x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log10(error) against the DoF axis (DoF in 1D, DoF^{1/3} in 2D)
/// over the last `last` records. Non-positive errors are skipped.
LineFit convergence_fit(const std::vector<ConvergenceRecord>& records, int dim, double ConvergenceRecord::*column,
                        int last = 8);

std::string csv_header();
std::string csv_row(const ConvergenceRecord& r, bool wall_time);

struct RunResult {
  std::vector<ConvergenceRecord> records;
  std::unique_ptr<AdaptState> state;
};

/// Runs the adaptive loop, writing convergence.csv, mesh_NNN.svg,
/// final_mesh.txt, final_solution.csv and summary.txt into out_dir.
/// Progress goes to `log`.
RunResult run(const RunConfig& config, std::ostream& log);

}  // namespace hpe
