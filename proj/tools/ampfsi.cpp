#include <CLI11.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "ampfsi/coupling.hpp"
#include "ampfsi/exact.hpp"
#include "ampfsi/harness.hpp"
#include "ampfsi/modes.hpp"
#include "ampfsi/params.hpp"

using namespace ampfsi;

namespace {

constexpr int kBlowup = 2;
constexpr int kSolver = 3;
constexpr int kConfig = 4;

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidConfiguration:
    case ErrorKind::StartupRequired: return kConfig;
    default: return kSolver;
  }
}

struct Overrides {
  int N = 0;
  std::string scheme;
  std::string out;
  double t_final = 0;
};

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.N > 0) cfg.N = o.N;
  if (!o.scheme.empty()) {
    if (o.scheme == "amp" || o.scheme == "AMP") cfg.scheme = Scheme::AMP;
    else if (o.scheme == "traditional" || o.scheme == "TRADITIONAL") cfg.scheme = Scheme::Traditional;
    else throw Error(ErrorKind::InvalidConfiguration, "unknown scheme: " + o.scheme);
  }
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (o.t_final > 0) cfg.t_final = o.t_final;
  cfg.validate();
}

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--N", o.N, "grid cells per direction");
  app->add_option("--scheme", o.scheme, "amp or traditional");
  app->add_option("--out", o.out, "run directory");
  app->add_option("--t-final", o.t_final, "final time");
}

int do_solve(const std::string& path, const Overrides& o) {
  RunConfig cfg = load_config(path);
  apply(o, cfg);
  RunOptions opt;
  opt.write_outputs = true;
  const RunResult r = run(cfg, opt);
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream csv(cfg.out_dir + "/report.csv");
  csv << "N,h,dt,steps,t,blowup,err_v,err_p,err_ubar,err_vbar\n" << std::setprecision(10);
  csv << r.N << ',' << r.h << ',' << r.ts.dt << ',' << r.steps_taken << ',' << r.t << ',' << (r.blowup ? 1 : 0)
      << ',' << r.err.v << ',' << r.err.p << ',' << r.err.ubar << ',' << r.err.vbar << '\n';
  std::ostringstream tab;
  tab << to_string(cfg.problem.kind) << " delta=" << cfg.params.delta() << " scheme=" << to_string(cfg.scheme)
      << " N=" << r.N << " dt=" << r.ts.dt << " steps=" << r.steps_taken << " t=" << r.t << "\n"
      << std::scientific << std::setprecision(3) << "err_v=" << r.err.v << " err_p=" << r.err.p
      << " err_ubar=" << r.err.ubar << " err_vbar=" << r.err.vbar << (r.blowup ? "  BLOWUP" : "") << "\n";
  std::ofstream(cfg.out_dir + "/table.txt") << tab.str();
  std::cout << tab.str();
  return r.blowup ? kBlowup : 0;
}

std::vector<int> parse_grids(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  if (out.size() < 2) throw Error(ErrorKind::InvalidConfiguration, "need at least two grids");
  return out;
}

int do_converge(const std::string& path, const std::string& grids, const Overrides& o) {
  RunConfig cfg = load_config(path);
  apply(o, cfg);
  const ConvergenceStudy st = converge(cfg, parse_grids(grids));
  write_convergence(st, cfg.out_dir);
  std::cout << format_table(st);
  return st.all_stable ? 0 : kBlowup;
}

int do_mms_check(const std::string& path, const std::string& grids, const Overrides& o) {
  RunConfig cfg = load_config(path);
  cfg.use_mms = true;
  cfg.problem.kind = ProblemKind::MP_V2;
  apply(o, cfg);
  const ConvergenceStudy st = converge(cfg, parse_grids(grids));
  write_convergence(st, cfg.out_dir);
  std::cout << format_table(st);
  bool ok = st.all_stable;
  for (const RateFit* f : {&st.v, &st.p, &st.ubar}) {
    ok = ok && f->zeta >= 1.5 && f->zeta <= 2.5;
    for (double r : f->ratios) ok = ok && r >= 2.5 && r <= 6.0;
  }
  std::cout << (ok ? "mms-check: PASS\n" : "mms-check: FAIL\n");
  if (!st.all_stable) return kBlowup;
  return ok ? 0 : 1;
}

int do_modes(double delta, double kx, const std::string& scheme_name, double dt) {
  const PhysicalParams p = make_preset(delta, ModelProblem{ProblemKind::MP_I1});
  const Scheme scheme = scheme_name == "traditional" ? Scheme::Traditional : Scheme::AMP;
  auto m = modes::make_mode<double>(kx, p, 0.0);
  if (dt <= 0) {
    const double bound = scheme == Scheme::AMP ? modes::amp_dt_max(m.rhosh, m.Lc, m.Ma)
                                               : modes::traditional_stability(m.rhosh, m.Lc, m.Ma).dt_max.value_or(0);
    dt = bound > 0 && std::isfinite(bound) ? 0.9 * bound : 1e-2;
  }
  m.dt = dt;
  const auto r = modes::analyze(scheme, m, p.H, p.rho);
  std::cout << "delta,kx,dt,scheme,maxmod,verdict,dt_max\n" << std::setprecision(10) << delta << ',' << kx << ','
            << dt << ',' << to_string(scheme) << ',' << r.max_modulus << ',' << modes::to_string(r.verdict) << ',';
  if (r.dt_max) std::cout << *r.dt_max;
  std::cout << "\n";
  return 0;
}

int do_dispersion(const std::string& problem, double delta, double mu, double k) {
  const ModelProblem mp{parse_problem(problem)};
  PhysicalParams p = make_preset(delta, mp);
  if (mp.viscous() && mu > 0) p.mu = mu;
  cdouble w;
  if (!mp.viscous())
    w = mp_i1_dispersion(k, p).first;
  else
    w = find_omega(k, p, mp.theta());
  std::cout << "delta,problem,mu,k,omega_re,omega_im\n" << std::setprecision(10) << delta << ','
            << to_string(mp.kind) << ',' << p.mu << ',' << k << ',' << w.real() << ',' << w.imag() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Added-mass partitioned fluid-shell solver"};
  app.require_subcommand(1);

  std::string config;
  std::string grids = "20,40,80";
  Overrides ov;

  auto* solve = app.add_subcommand("solve", "run one configuration");
  solve->add_option("config", config, "configuration file")->required();
  add_overrides(solve, ov);

  auto* conv = app.add_subcommand("converge", "grid refinement study");
  conv->add_option("config", config, "configuration file")->required();
  conv->add_option("--grids", grids, "comma-separated N values");
  add_overrides(conv, ov);

  auto* mms = app.add_subcommand("mms-check", "manufactured-solution convergence check");
  mms->add_option("config", config, "configuration file")->required();
  mms->add_option("--grids", grids, "comma-separated N values");
  add_overrides(mms, ov);

  double delta = 1.0, kx = 2.0 * M_PI, dt = 0.0, mu = 0.0, k = 2.0 * M_PI;
  std::string scheme = "amp", problem = "MP-I1";
  auto* md = app.add_subcommand("modes", "mode-level stability of one wavenumber");
  md->add_option("--delta", delta);
  md->add_option("--kx", kx);
  md->add_option("--scheme", scheme)->check(CLI::IsMember({"amp", "traditional"}));
  md->add_option("--dt", dt);

  auto* disp = app.add_subcommand("dispersion", "traveling-wave frequency");
  disp->add_option("--problem", problem);
  disp->add_option("--delta", delta);
  disp->add_option("--mu", mu);
  disp->add_option("--k", k);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    if (*solve) return do_solve(config, ov);
    if (*conv) return do_converge(config, grids, ov);
    if (*mms) return do_mms_check(config, grids, ov);
    if (*md) return do_modes(delta, kx, scheme, dt);
    if (*disp) return do_dispersion(problem, delta, mu, k);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return 0;
}
