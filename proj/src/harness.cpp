#include "ampfsi/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

namespace ampfsi {

std::shared_ptr<ExactSolution> make_exact(const RunConfig& cfg) {
  if (cfg.use_mms) return std::make_shared<MmsSolution>(cfg.params, cfg.mms);
  const double k = 2.0 * M_PI * cfg.wave.mode / cfg.params.L;
  return std::make_shared<TravelingWave>(cfg.params, cfg.problem, k, cfg.wave.umax, cfg.wave.branch);
}

const Forcing* forcing_of(const ExactSolution& exact) { return dynamic_cast<const Forcing*>(&exact); }

ErrorNorms measure_errors(const Stepper& s, const ExactSolution& exact) {
  const Grid2D& g = s.grid();
  const FluidState& f = s.fluid();
  const ShellState& sh = s.shell();
  const double t = f.t;
  ErrorNorms e;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const FluidPoint q = exact.fluid(g.x(i), g.y(j), t);
      e.v = std::max({e.v, std::abs(f.v1(i, j) - q.v1), std::abs(f.v2(i, j) - q.v2)});
      e.p = std::max(e.p, std::abs(f.p(i, j) - q.p));
    }
  for (int i = 0; i < g.nx; ++i) {
    const ShellPoint q = exact.shell(g.x(i), t);
    e.ubar = std::max({e.ubar, std::abs(sh.u(0, i) - q.u1), std::abs(sh.u(1, i) - q.u2)});
    e.vbar = std::max({e.vbar, std::abs(sh.v(0, i) - q.w1), std::abs(sh.v(1, i) - q.w2)});
  }
  return e;
}

namespace {

double state_norm(const Stepper& s) {
  const FluidState& f = s.fluid();
  const ShellState& sh = s.shell();
  return std::max({f.v1.max_abs(), f.v2.max_abs(), f.p.max_abs(), sh.u.abs().maxCoeff(), sh.v.abs().maxCoeff()});
}

void dump_fields(const Stepper& s, const std::string& dir, int n) {
  const std::string base = dir + "/fields/";
  write_field(base + "v1_" + std::to_string(n) + ".csv", s.fluid().v1, s.grid(), s.fluid().t);
  write_field(base + "v2_" + std::to_string(n) + ".csv", s.fluid().v2, s.grid(), s.fluid().t);
  write_field(base + "p_" + std::to_string(n) + ".csv", s.fluid().p, s.grid(), s.fluid().t);
}

}  // namespace

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const Grid2D g = build_grid(cfg.params, cfg.N);
  const auto exact = make_exact(cfg);
  Stepper stepper(cfg, g, forcing_of(*exact));

  RunResult res;
  res.N = cfg.N;
  res.h = g.h();
  res.ts = choose_time_step(cfg, g);
  stepper.seed_from_exact(*exact, 0.0, res.ts.dt);
  res.initial_norm = state_norm(stepper);
  res.peak_norm = res.initial_norm;

  std::ofstream log;
  if (opt.write_outputs) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.log_steps) {
      log.open(cfg.out_dir + "/steps.csv");
      write_report_header(log);
    }
    if (cfg.dump_fields) dump_fields(stepper, cfg.out_dir, 0);
  }

  const int N = g.ny;
  for (int n = 1; n <= res.ts.steps; ++n) {
    const StepReport r = stepper.step(res.ts.dt);
    res.steps_taken = n;
    const ShellState& sh = stepper.shell();
    double scale = std::max(stepper.fluid().v2.row(N).abs().maxCoeff(), sh.v.abs().maxCoeff());
    if (sh.horizontal) scale = std::max(scale, stepper.fluid().v1.row(N).abs().maxCoeff());
    res.max_mismatch_after = std::max(res.max_mismatch_after, r.mismatch_after);
    res.max_mismatch_scale = std::max(res.max_mismatch_scale, scale);
    res.peak_norm = std::max(res.peak_norm, state_norm(stepper));
    if (opt.keep_reports) res.reports.push_back(r);
    if (log.is_open()) write_report_row(log, r);
    if (opt.write_outputs && cfg.dump_fields && cfg.dump_every > 0 && n % cfg.dump_every == 0 &&
        n != res.ts.steps)
      dump_fields(stepper, cfg.out_dir, n);
    if (r.blowup) {
      res.blowup = true;
      break;
    }
  }
  if (opt.write_outputs && cfg.dump_fields) dump_fields(stepper, cfg.out_dir, res.steps_taken);
  res.t = stepper.fluid().t;
  res.err = measure_errors(stepper, *exact);
  return res;
}

RateFit fit_rate(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw Error(ErrorKind::InvalidArgument, "rate fit needs >= 2 points");
  const int n = static_cast<int>(h.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log(h[i]);
    b(i) = std::log(e[i]);
  }
  RateFit r;
  r.zeta = A.colPivHouseholderQr().solve(b)(1);
  for (int i = 0; i + 1 < n; ++i) r.ratios.push_back(e[i] / e[i + 1]);
  return r;
}

ConvergenceStudy converge(const RunConfig& cfg, const std::vector<int>& grids) {
  ConvergenceStudy st;
  st.base = cfg;
  st.grids = grids;
  std::vector<std::future<RunResult>> jobs;
  for (int N : grids) {
    RunConfig c = cfg;
    c.N = N;
    jobs.push_back(std::async(std::launch::async, [c] { return run(c); }));
  }
  for (auto& j : jobs) st.runs.push_back(j.get());
  std::vector<double> h, ev, ep, eu, ew;
  for (const auto& r : st.runs) {
    st.all_stable = st.all_stable && !r.blowup;
    h.push_back(r.h);
    ev.push_back(r.err.v);
    ep.push_back(r.err.p);
    eu.push_back(r.err.ubar);
    ew.push_back(r.err.vbar);
  }
  if (grids.size() >= 2) {
    st.v = fit_rate(h, ev);
    st.p = fit_rate(h, ep);
    st.ubar = fit_rate(h, eu);
    st.vbar = fit_rate(h, ew);
  }
  return st;
}

std::string format_table(const ConvergenceStudy& st) {
  std::ostringstream o;
  o << "problem " << to_string(st.base.problem.kind) << "  delta " << st.base.params.delta() << "  scheme "
    << to_string(st.base.scheme) << (st.base.use_mms ? "  mms" : "  traveling-wave") << "\n";
  o << std::setw(6) << "N" << std::setw(12) << "h" << std::setw(12) << "dt" << std::setw(12) << "e_v"
    << std::setw(8) << "r" << std::setw(12) << "e_p" << std::setw(8) << "r" << std::setw(12) << "e_ubar"
    << std::setw(8) << "r" << std::setw(12) << "e_vbar" << std::setw(8) << "r" << "\n";
  for (size_t k = 0; k < st.runs.size(); ++k) {
    const RunResult& r = st.runs[k];
    auto ratio = [&](const RateFit& f, double ErrorNorms::*e) {
      std::ostringstream s;
      if (k > 0 && k - 1 < f.ratios.size()) {
        // The printed ratio must be the one implied by the printed errors.
        const double again = st.runs[k - 1].err.*e / (r.err.*e);
        if (!(std::abs(again - f.ratios[k - 1]) <= 1e-12 * std::abs(again)))
          throw Error(ErrorKind::InvalidArgument, "convergence ratio does not match the error column");
        s << std::fixed << std::setprecision(2) << f.ratios[k - 1];
      }
      return s.str();
    };
    o << std::setw(6) << r.N << std::setw(12) << std::setprecision(4) << r.h << std::setw(12) << r.ts.dt
      << std::setw(12) << std::scientific << std::setprecision(2) << r.err.v << std::defaultfloat << std::setw(8)
      << ratio(st.v, &ErrorNorms::v) << std::setw(12) << std::scientific << r.err.p << std::defaultfloat << std::setw(8)
      << ratio(st.p, &ErrorNorms::p) << std::setw(12) << std::scientific << r.err.ubar << std::defaultfloat << std::setw(8)
      << ratio(st.ubar, &ErrorNorms::ubar) << std::setw(12) << std::scientific << r.err.vbar << std::defaultfloat << std::setw(8)
      << ratio(st.vbar, &ErrorNorms::vbar) << (r.blowup ? "  BLOWUP" : "") << "\n";
  }
  o << std::fixed << std::setprecision(2) << "rate" << std::setw(38) << st.v.zeta << std::setw(20) << st.p.zeta
    << std::setw(20) << st.ubar.zeta << std::setw(20) << st.vbar.zeta << "\n";
  return o.str();
}

void write_convergence(const ConvergenceStudy& st, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir + "/report.csv");
  csv << "N,h,dt,steps,blowup,err_v,err_p,err_ubar,err_vbar\n" << std::setprecision(10);
  for (const auto& r : st.runs)
    csv << r.N << ',' << r.h << ',' << r.ts.dt << ',' << r.steps_taken << ',' << (r.blowup ? 1 : 0) << ','
        << r.err.v << ',' << r.err.p << ',' << r.err.ubar << ',' << r.err.vbar << '\n';
  csv << "rate,,,,," << st.v.zeta << ',' << st.p.zeta << ',' << st.ubar.zeta << ',' << st.vbar.zeta << '\n';
  std::ofstream tab(dir + "/table.txt");
  tab << format_table(st);
}

SchemeComparison compare_schemes(const RunConfig& cfg) {
  SchemeComparison c;
  RunConfig a = cfg;
  a.scheme = Scheme::AMP;
  RunConfig t = cfg;
  t.scheme = Scheme::Traditional;
  c.amp = run(a);
  c.traditional = run(t);
  return c;
}

}  // namespace ampfsi
