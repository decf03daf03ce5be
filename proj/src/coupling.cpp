#include "ampfsi/coupling.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

#include "ampfsi/modes.hpp"

namespace ampfsi {

void write_report_header(std::ostream& out) {
  out << "t,v1_max,v2_max,p_max,ubar_max,mismatch,mismatch_after,divergence,pressure_residual,blowup\n";
}

void write_report_row(std::ostream& out, const StepReport& r) {
  out << std::setprecision(12) << r.t << ',' << r.v1_max << ',' << r.v2_max << ',' << r.p_max << ','
      << r.ubar_max << ',' << r.mismatch << ',' << r.mismatch_after << ',' << r.divergence << ','
      << r.pressure_residual << ',' << (r.blowup ? 1 : 0) << '\n';
}

InterfaceArray compute_traction(const GridField& v1, const GridField& v2, const GridField& p, const Grid2D& g,
                                double mu) {
  const int N = g.ny;
  InterfaceArray s(2, g.nx);
  for (int i = 0; i < g.nx; ++i) {
    s(0, i) = mu * (ops::dy(v1, g, i, N) + ops::dx(v2, g, i, N));
    s(1, i) = -p(i, N) + 2.0 * mu * ops::dy(v2, g, i, N);
  }
  return s;
}

Eigen::ArrayXd amp_pressure_rhs(const InterfaceArray& u_pred, const GridField& v1, const GridField& v2,
                                const Grid2D& g, const PhysicalParams& params, double nu) {
  (void)v1;
  const int N = g.ny;
  const double beta = params.rhosh / params.rho;
  const Eigen::ArrayXd Lu = shell_operator(Eigen::ArrayXd(u_pred.row(1).transpose()), params, g.hx);
  Eigen::ArrayXd r(g.nx);
  for (int i = 0; i < g.nx; ++i)
    r(i) = 2.0 * params.mu * ops::dy(v2, g, i, N) + beta * nu * ops::lap(v2, g, i, N) - Lu(i);
  return r;
}

Eigen::ArrayXd amp_tangential_rhs(const InterfaceArray& u_pred, const GridField& p_guess, const Grid2D& g,
                                  const PhysicalParams& params) {
  const int N = g.ny;
  const double beta = params.rhosh / params.rho;
  const Eigen::ArrayXd Lu = shell_operator(Eigen::ArrayXd(u_pred.row(0).transpose()), params, g.hx);
  Eigen::ArrayXd H(g.nx);
  for (int i = 0; i < g.nx; ++i) H(i) = beta * ops::dx(p_guess, g, i, N) + Lu(i);
  return H;
}

double projection_weight(const PhysicalParams& params) {
  return 1.0 / (1.0 + params.rhosh / (params.rho * params.hf));
}

Eigen::ArrayXd project_interface_velocity(const Eigen::ArrayXd& v_fluid, const Eigen::ArrayXd& v_shell,
                                          const PhysicalParams& params) {
  if (v_fluid.size() != v_shell.size())
    throw Error(ErrorKind::InvalidArgument, "projection arrays differ in length");
  const double gamma = projection_weight(params);
  return gamma * v_fluid + (1.0 - gamma) * v_shell;
}

TimeStep choose_time_step(const RunConfig& cfg, const Grid2D& g) {
  double dt;
  if (cfg.dt_fixed) {
    dt = *cfg.dt_fixed;
  } else {
    const double h = g.h();
    dt = cfg.Ct * h;
    const auto& p = cfg.params;
    if (p.mu > 0) dt = std::min(dt, cfg.Cv * p.rho * h * h / p.mu);
    const double kx = M_PI / h;
    const double Lc = modes::shell_symbol(kx, p.Kbar, p.Tbar, p.Bbar);
    const double Ma = modes::added_mass(kx, p.H, p.rho);
    dt = std::min(dt, 0.9 * modes::amp_dt_max(p.rhosh, Lc, Ma));
  }
  TimeStep ts;
  ts.steps = std::max(1, static_cast<int>(std::ceil(cfg.t_final / dt - 1e-12)));
  ts.dt = cfg.t_final / ts.steps;
  return ts;
}

// ---------------------------------------------------------------------------

Stepper::Stepper(const RunConfig& cfg, const Grid2D& g, const Forcing* forcing)
    : cfg_(cfg),
      params_(cfg.params),
      g_(g),
      forcing_(forcing ? forcing : &zero_),
      fluid_(g),
      shell_(g.nx, cfg.problem.kind == ProblemKind::MP_V2) {}

double Stepper::effective_viscosity() const {
  const double h = g_.h();
  return params_.mu + params_.rho * cfg_.dissipation() * h * h;
}

VelocityBcSpec Stepper::velocity_spec() const {
  VelocityBcSpec s;
  s.mu = params_.mu;
  s.beta = params_.rhosh / params_.rho;
  s.wall = cfg_.problem.viscous() ? WallBc::NoSlip : WallBc::Slip;
  const ProblemKind k = cfg_.problem.kind;
  if (cfg_.scheme == Scheme::AMP) {
    s.normal_dirichlet = false;
    s.tangential = k == ProblemKind::MP_V2   ? TangentialBc::AmpRobin
                   : k == ProblemKind::MP_V1 ? TangentialBc::Dirichlet
                                             : TangentialBc::Extrapolate;
  } else {
    s.normal_dirichlet = true;
    s.tangential = k == ProblemKind::MP_I1 ? TangentialBc::Extrapolate : TangentialBc::Dirichlet;
  }
  return s;
}

PressureBcSpec Stepper::pressure_spec() const {
  PressureBcSpec s;
  s.beta = params_.rhosh / params_.rho;
  s.bottom = PressureBottom::Neumann;
  if (cfg_.scheme == Scheme::AMP) {
    s.top = PressureTop::Robin;
  } else {
    s.top = PressureTop::Neumann;
    s.mean_constraint = true;
  }
  return s;
}

const PressureSolver& Stepper::solver() const {
  if (!solver_) solver_.emplace(g_, pressure_spec());
  return *solver_;
}

InterfaceArray Stepper::shell_forcing(double t) const {
  InterfaceArray f(2, g_.nx);
  for (int i = 0; i < g_.nx; ++i) f.col(i) = forcing_->shell_force(g_.x(i), t).array();
  return f;
}

InterfaceArray Stepper::kinematic_offset(double t) const {
  InterfaceArray f(2, g_.nx);
  for (int i = 0; i < g_.nx; ++i) f.col(i) = forcing_->kinematic(g_.x(i), t).array();
  return f;
}

void Stepper::wall_data(double t, VelocityBcData& d) const {
  d.v1_wall.resize(g_.nx);
  d.v2_wall.resize(g_.nx);
  for (int i = 0; i < g_.nx; ++i) {
    const Eigen::Vector2d w = forcing_->wall_velocity(g_.x(i), t);
    d.v1_wall(i) = w(0);
    d.v2_wall(i) = w(1);
  }
}

Eigen::ArrayXd Stepper::wall_pressure_data(const GridField& v2, double t) const {
  const double nu = effective_viscosity();
  Eigen::ArrayXd q(g_.nx);
  for (int i = 0; i < g_.nx; ++i) q(i) = nu * ops::lap(v2, g_, i, 0) + forcing_->wall_pressure(g_.x(i), t);
  return q;
}

PressureData Stepper::pressure_data(const GridField& v1, const GridField& v2, double dt, double t) const {
  PressureData d;
  d.source.resize(g_.nx, g_.ny + 1);
  const double damp = cfg_.Cd * params_.rho / dt;
  for (int j = 0; j <= g_.ny; ++j)
    for (int i = 0; i < g_.nx; ++i)
      d.source(i, j) = forcing_->pressure_source(g_.x(i), g_.y(j), t) + damp * ops::div(v1, v2, g_, i, j);
  d.bottom = wall_pressure_data(v2, t);
  return d;
}

void Stepper::momentum(const GridField& v1, const GridField& v2, const GridField& p, double t, GridField& F1,
                       GridField& F2) const {
  MomentumTerms terms;
  terms.mu = params_.mu;
  terms.d2 = cfg_.dissipation();
  terms.forcing = forcing_;
  momentum_rhs(v1, v2, p, g_, params_, terms, t, 0, g_.ny, F1, F2);
}

void Stepper::seed_from_exact(const ExactSolution& exact, double t0, double dt) {
  auto fill = [&](double t, GridField& v1, GridField& v2, GridField& p) {
    for (int j = -Grid2D::ghost; j <= g_.ny + Grid2D::ghost; ++j) {
      const double y = j == g_.ny ? 0.0 : -g_.H + j * g_.hy;
      for (int i = 0; i < g_.nx; ++i) {
        const FluidPoint f = exact.fluid(g_.x(i), y, t);
        v1(i, j) = f.v1;
        v2(i, j) = f.v2;
        p(i, j) = f.p;
      }
    }
  };
  fill(t0, fluid_.v1, fluid_.v2, fluid_.p);
  GridField v1m(g_), v2m(g_), pm(g_), scratch1(g_), scratch2(g_);
  fill(t0 - dt, v1m, v2m, pm);
  fluid_.p_nm1 = pm;
  fill(t0 - 2.0 * dt, scratch1, scratch2, fluid_.p_nm2);
  momentum(v1m, v2m, pm, t0 - dt, fluid_.F1_prev, fluid_.F2_prev);
  fluid_.has_F_prev = true;
  fluid_.has_p_history = true;
  fluid_.t = t0;

  for (int i = 0; i < g_.nx; ++i) {
    const ShellPoint a = exact.shell(g_.x(i), t0);
    const ShellPoint b = exact.shell(g_.x(i), t0 - dt);
    shell_.u.col(i) << a.u1, a.u2;
    shell_.v.col(i) << a.w1, a.w2;
    shell_.u_prev.col(i) << b.u1, b.u2;
    shell_.v_prev.col(i) << b.w1, b.w2;
  }
  if (!shell_.horizontal) {
    shell_.u.row(0).setZero();
    shell_.v.row(0).setZero();
    shell_.u_prev.row(0).setZero();
    shell_.v_prev.row(0).setZero();
  }
  shell_.t = t0;
  shell_.has_history = true;
}

void Stepper::seed_from_current(double dt) {
  momentum(fluid_.v1, fluid_.v2, fluid_.p, fluid_.t, fluid_.F1_prev, fluid_.F2_prev);
  fluid_.p_nm1 = fluid_.p;
  fluid_.p_nm2 = fluid_.p;
  fluid_.has_F_prev = true;
  fluid_.has_p_history = true;
  shell_.u_prev = shell_.u - dt * shell_.v;
  shell_.v_prev = shell_.v;
  shell_.has_history = true;
}

StepReport Stepper::step(double dt) {
  return cfg_.scheme == Scheme::AMP ? amp_step(dt) : traditional_step(dt);
}

void Stepper::fill_report(StepReport& r) const {
  r.t = fluid_.t;
  r.v1_max = fluid_.v1.max_abs();
  r.v2_max = fluid_.v2.max_abs();
  r.p_max = fluid_.p.max_abs();
  r.ubar_max = shell_.u.abs().maxCoeff();
  r.divergence = ops::max_divergence(fluid_.v1, fluid_.v2, g_, 0, g_.ny);
  const double m = std::max({r.v1_max, r.v2_max, r.p_max, r.ubar_max, shell_.v.abs().maxCoeff()});
  r.blowup = !std::isfinite(m) || m > cfg_.blowup_bound;
}

StepReport Stepper::amp_step(double dt) {
  if (!fluid_.has_F_prev || !fluid_.has_p_history || !shell_.has_history)
    throw Error(ErrorKind::StartupRequired, "AMP step needs history levels; seed the stepper first");
  const int N = g_.ny;
  const int nx = g_.nx;
  const double tn = fluid_.t;
  const double tp = tn + dt;
  const double nu = effective_viscosity();
  const VelocityBcSpec vspec = velocity_spec();
  const PressureSolver& ps = solver();
  StepReport rep;

  auto offsets = [&](double t, Eigen::ArrayXd& H, Eigen::ArrayXd& r) {
    for (int i = 0; i < nx; ++i) {
      H(i) += forcing_->tangential(g_.x(i), t);
      r(i) += forcing_->robin(g_.x(i), t);
    }
  };
  auto velocity_bcs = [&](GridField& v1, GridField& v2, const InterfaceArray& ub, const InterfaceArray& vb,
                          const GridField& p_for_H, double t, Eigen::ArrayXd& H) {
    VelocityBcData d;
    wall_data(t, d);
    H = amp_tangential_rhs(ub, p_for_H, g_, params_);
    Eigen::ArrayXd dummy = Eigen::ArrayXd::Zero(nx);
    offsets(t, H, dummy);
    d.tangential_rhs = H;
    const InterfaceArray gk = kinematic_offset(t);
    d.v1_interface = (vb.row(0) + gk.row(0)).transpose();
    d.v2_interface = (vb.row(1) + gk.row(1)).transpose();
    apply_velocity_bcs(v1, v2, g_, vspec, d);
  };
  auto solve_pressure = [&](const GridField& v1, const GridField& v2, const InterfaceArray& ub, double t,
                            GridField& p) {
    PressureData d = pressure_data(v1, v2, dt, t);
    d.top = amp_pressure_rhs(ub, v1, v2, g_, params_, nu);
    Eigen::ArrayXd dummy = Eigen::ArrayXd::Zero(nx);
    offsets(t, dummy, d.top);
    rep.pressure_residual = std::max(rep.pressure_residual, ps.solve(d, p));
  };

  // Stage I: shell predictor.
  const InterfaceArray sigma_n = compute_traction(fluid_.v1, fluid_.v2, fluid_.p, g_, params_.mu);
  const InterfaceArray fbar_n = shell_forcing(tn);
  const InterfaceArray fbar_p = shell_forcing(tp);
  const ShellUpdate pred = shell_predict(shell_, sigma_n, fbar_n, dt, params_, g_.hx);

  // Stage II: fluid velocity predictor.
  GridField F1n(g_), F2n(g_);
  momentum(fluid_.v1, fluid_.v2, fluid_.p, tn, F1n, F2n);
  GridField v1p(g_), v2p(g_);
  velocity_predict(fluid_, F1n, F2n, dt, params_.rho, 0, N, v1p, v2p);
  GridField p_guess(g_);
  p_guess.data() = 3.0 * fluid_.p.data() - 3.0 * fluid_.p_nm1.data() + fluid_.p_nm2.data();
  Eigen::ArrayXd H(nx);
  velocity_bcs(v1p, v2p, pred.u, pred.v, p_guess, tp, H);

  // Stage III: pressure predictor.
  GridField pp(g_);
  solve_pressure(v1p, v2p, pred.u, tp, pp);

  GridField v1(g_), v2(g_), p(g_);
  ShellUpdate next = pred;
  if (cfg_.corrector) {
    // Stage IV: shell corrector.
    const InterfaceArray sigma_p = compute_traction(v1p, v2p, pp, g_, params_.mu);
    next = shell_correct(shell_, pred, sigma_p, sigma_n, fbar_p, fbar_n, dt, params_, g_.hx);
    // Stage V: fluid velocity corrector.
    GridField F1p(g_), F2p(g_);
    momentum(v1p, v2p, pp, tp, F1p, F2p);
    velocity_correct(fluid_, F1p, F2p, F1n, F2n, dt, params_.rho, 0, N, v1, v2);
    velocity_bcs(v1, v2, next.u, next.v, pp, tp, H);
    // Stage VI: pressure corrector.
    solve_pressure(v1, v2, next.u, tp, p);
  } else {
    v1 = v1p;
    v2 = v2p;
    p = pp;
  }

  // Stage VII: interface velocity projection.
  const InterfaceArray gk = kinematic_offset(tp);
  const bool horizontal = shell_.horizontal;
  rep.mismatch = 0.0;
  for (int c = 0; c < 2; ++c) {
    if (c == 0 && !horizontal) continue;
    GridField& vf = c == 0 ? v1 : v2;
    Eigen::ArrayXd fluid_row = vf.row(N);
    const Eigen::ArrayXd shell_row = (next.v.row(c) + gk.row(c)).transpose();
    rep.mismatch = std::max(rep.mismatch, (fluid_row - shell_row).abs().maxCoeff());
    const Eigen::ArrayXd vI = project_interface_velocity(fluid_row, shell_row, params_);
    vf.row(N) = vI;
    next.v.row(c) = (vI - gk.row(c).transpose()).transpose();
  }
  {
    VelocityBcData d;
    wall_data(tp, d);
    d.tangential_rhs = H;
    d.v1_interface = (next.v.row(0) + gk.row(0)).transpose();
    d.v2_interface = (next.v.row(1) + gk.row(1)).transpose();
    apply_velocity_bcs(v1, v2, g_, vspec, d);
  }
  {
    double m = 0.0;
    for (int c = 0; c < 2; ++c) {
      if (c == 0 && !horizontal) continue;
      const GridField& vf = c == 0 ? v1 : v2;
      m = std::max(m, (vf.row(N) - (next.v.row(c) + gk.row(c)).transpose()).abs().maxCoeff());
    }
    rep.mismatch_after = m;
  }

  // Shift levels.
  fluid_.F1_prev = F1n;
  fluid_.F2_prev = F2n;
  fluid_.p_nm2 = fluid_.p_nm1;
  fluid_.p_nm1 = fluid_.p;
  fluid_.v1 = v1;
  fluid_.v2 = v2;
  fluid_.p = p;
  fluid_.t = tp;
  shell_accept(shell_, next, dt);
  fill_report(rep);
  return rep;
}

StepReport Stepper::traditional_step(double dt) {
  if (!fluid_.has_F_prev || !shell_.has_history)
    throw Error(ErrorKind::StartupRequired, "traditional step needs history levels; seed the stepper first");
  const int N = g_.ny;
  const int nx = g_.nx;
  const double tn = fluid_.t;
  const double tp = tn + dt;
  const VelocityBcSpec vspec = velocity_spec();
  const PressureSolver& ps = solver();
  StepReport rep;

  // Shell first, driven by the current traction.
  const InterfaceArray sigma_n = compute_traction(fluid_.v1, fluid_.v2, fluid_.p, g_, params_.mu);
  ShellUpdate next = shell_leapfrog(shell_, sigma_n, shell_forcing(tn), dt, params_, g_.hx);
  // Vertical shell acceleration D+D- u^n.
  const Eigen::ArrayXd accel =
      ((next.u.row(1) - 2.0 * shell_.u.row(1) + shell_.u_prev.row(1)) / (dt * dt)).transpose();

  const InterfaceArray gk = kinematic_offset(tp);
  auto velocity_bcs = [&](GridField& v1, GridField& v2) {
    VelocityBcData d;
    wall_data(tp, d);
    d.v1_interface = (next.v.row(0) + gk.row(0)).transpose();
    d.v2_interface = (next.v.row(1) + gk.row(1)).transpose();
    apply_velocity_bcs(v1, v2, g_, vspec, d);
  };
  const double nu = effective_viscosity();
  auto solve_pressure = [&](const GridField& v1, const GridField& v2, GridField& p) {
    PressureData d = pressure_data(v1, v2, dt, tp);
    d.top.resize(nx);
    for (int i = 0; i < nx; ++i) d.top(i) = -params_.rho * accel(i) + nu * ops::lap(v2, g_, i, N);
    d.mean = 0.0;
    rep.pressure_residual = std::max(rep.pressure_residual, ps.solve(d, p));
  };

  GridField F1n(g_), F2n(g_);
  momentum(fluid_.v1, fluid_.v2, fluid_.p, tn, F1n, F2n);
  GridField v1p(g_), v2p(g_), pp(g_);
  velocity_predict(fluid_, F1n, F2n, dt, params_.rho, 0, N, v1p, v2p);
  velocity_bcs(v1p, v2p);
  solve_pressure(v1p, v2p, pp);

  GridField v1(g_), v2(g_), p(g_);
  if (cfg_.corrector) {
    GridField F1p(g_), F2p(g_);
    momentum(v1p, v2p, pp, tp, F1p, F2p);
    velocity_correct(fluid_, F1p, F2p, F1n, F2n, dt, params_.rho, 0, N, v1, v2);
    velocity_bcs(v1, v2);
    solve_pressure(v1, v2, p);
  } else {
    v1 = v1p;
    v2 = v2p;
    p = pp;
  }

  double m = (v2.row(N) - (next.v.row(1) + gk.row(1)).transpose()).abs().maxCoeff();
  if (shell_.horizontal) m = std::max(m, (v1.row(N) - (next.v.row(0) + gk.row(0)).transpose()).abs().maxCoeff());
  rep.mismatch = rep.mismatch_after = m;

  fluid_.F1_prev = F1n;
  fluid_.F2_prev = F2n;
  fluid_.p_nm2 = fluid_.p_nm1;
  fluid_.p_nm1 = fluid_.p;
  fluid_.v1 = v1;
  fluid_.v2 = v2;
  fluid_.p = p;
  fluid_.t = tp;
  fluid_.has_p_history = true;
  shell_accept(shell_, next, dt);
  fill_report(rep);
  return rep;
}

double trapezoid_interface_residual(const Grid2D& g, const PhysicalParams& params, const GridField& v1n,
                                    const GridField& v2n, const GridField& pn, const InterfaceArray& un,
                                    const GridField& v1np, const GridField& v2np, const InterfaceArray& unp,
                                    GridField& p_out) {
  const int N = g.ny;
  const int nx = g.nx;
  const double mu = params.mu;
  const double beta = params.rhosh / params.rho;
  const Eigen::ArrayXd Lun = shell_operator(Eigen::ArrayXd(un.row(1).transpose()), params, g.hx);
  const Eigen::ArrayXd Lunp = shell_operator(Eigen::ArrayXd(unp.row(1).transpose()), params, g.hx);
  const InterfaceArray sn = compute_traction(v1n, v2n, pn, g, mu);

  PressureBcSpec spec;
  spec.beta = beta;
  PressureData d;
  d.source = Eigen::ArrayXXd::Zero(nx, N + 1);
  d.top.resize(nx);
  d.bottom.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double F2n = -ops::dy(pn, g, i, N) + mu * ops::lap(v2n, g, i, N);
    d.top(i) = 2.0 * mu * ops::dy(v2np, g, i, N) + beta * mu * ops::lap(v2np, g, i, N) - Lunp(i) - Lun(i) +
               sn(1, i) + beta * F2n;
    d.bottom(i) = mu * ops::lap(v2np, g, i, 0);
  }
  pressure_solve(g, spec, d, p_out);

  const InterfaceArray snp = compute_traction(v1np, v2np, p_out, g, mu);
  double res = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double F2n = -ops::dy(pn, g, i, N) + mu * ops::lap(v2n, g, i, N);
    const double F2np = -ops::dy(p_out, g, i, N) + mu * ops::lap(v2np, g, i, N);
    const double r = 0.5 * beta * (F2np + F2n) - 0.5 * (Lunp(i) + Lun(i)) + 0.5 * (snp(1, i) + sn(1, i));
    res = std::max(res, std::abs(r));
  }
  return res;
}

}  // namespace ampfsi
