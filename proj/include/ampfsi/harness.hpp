#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ampfsi/coupling.hpp"
#include "ampfsi/exact.hpp"
#include "ampfsi/params.hpp"

namespace ampfsi {

/// Max-norm errors at the final time over the non-ghost nodes.
struct ErrorNorms {
  double v = 0.0;     // max over both velocity components
  double p = 0.0;
  double ubar = 0.0;
  double vbar = 0.0;
};

struct RunResult {
  int N = 0;
  double h = 0.0;
  TimeStep ts;
  int steps_taken = 0;
  double t = 0.0;
  bool blowup = false;
  ErrorNorms err;
  double initial_norm = 0.0;  // max |field| at t = 0
  double peak_norm = 0.0;     // max |field| over the run
  double max_mismatch_after = 0.0;
  double max_mismatch_scale = 0.0;  // max(|v|, |vbar|) on the interface over the run
  std::vector<StepReport> reports;
};

/// Exact solution selected by the configuration (traveling wave or manufactured).
std::shared_ptr<ExactSolution> make_exact(const RunConfig& cfg);

/// Forcing that goes with `exact` (null for traveling waves).
const Forcing* forcing_of(const ExactSolution& exact);

/// Error norms of the stepper state against `exact` at the stepper time.
ErrorNorms measure_errors(const Stepper& s, const ExactSolution& exact);

struct RunOptions {
  bool write_outputs = false;  // steps.csv and field dumps under cfg.out_dir
  bool keep_reports = false;
};

/// Seeds from the exact solution and advances to t_final (or until blow-up).
RunResult run(const RunConfig& cfg, const RunOptions& opt = {});

struct RateFit {
  double zeta = 0.0;           // least-squares slope of log e against log h
  std::vector<double> ratios;  // e(h) / e(h/2)
};

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& e);

struct ConvergenceStudy {
  RunConfig base;
  std::vector<int> grids;
  std::vector<RunResult> runs;
  RateFit v, p, ubar, vbar;
  bool all_stable = true;
};

/// Runs the grids concurrently and fits rates.
ConvergenceStudy converge(const RunConfig& cfg, const std::vector<int>& grids);

/// report.csv and table.txt under `dir`.
void write_convergence(const ConvergenceStudy& study, const std::string& dir);
std::string format_table(const ConvergenceStudy& study);

struct SchemeComparison {
  RunResult amp;
  RunResult traditional;
};

SchemeComparison compare_schemes(const RunConfig& cfg);

}  // namespace ampfsi
