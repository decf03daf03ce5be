#pragma once

#include <optional>
#include <ostream>

#include "ampfsi/exact.hpp"
#include "ampfsi/fluid.hpp"
#include "ampfsi/params.hpp"
#include "ampfsi/shell.hpp"

namespace ampfsi {

/// Interface quantities used by one stage of a step.
struct InterfaceData {
  InterfaceArray traction;        // sigma n = (sigma_12, sigma_22)
  Eigen::ArrayXd tangential_rhs;  // H
  Eigen::ArrayXd robin_rhs;       // r in p + beta p_y = r
  InterfaceArray mismatch;        // v - vbar before projection
};

struct StepReport {
  double t = 0.0;
  double v1_max = 0.0;
  double v2_max = 0.0;
  double p_max = 0.0;
  double ubar_max = 0.0;
  double mismatch = 0.0;           // interface |v - vbar| before projection
  double mismatch_after = 0.0;     // after projection
  double divergence = 0.0;
  double pressure_residual = 0.0;
  bool blowup = false;
};

void write_report_header(std::ostream& out);
void write_report_row(std::ostream& out, const StepReport& r);

/// sigma n on the interface row: (mu (Dy v1 + Dx v2), -p + 2 mu Dy v2).
InterfaceArray compute_traction(const GridField& v1, const GridField& v2, const GridField& p, const Grid2D& g,
                                double mu);

/// Robin data r = 2 mu Dy v2 + beta nu lap_h v2 - Lbar_h(u)_2 (+ offset), where
/// nu is the effective viscosity of the momentum update.
Eigen::ArrayXd amp_pressure_rhs(const InterfaceArray& u_pred, const GridField& v1, const GridField& v2,
                                const Grid2D& g, const PhysicalParams& params, double nu);

/// H = beta Dx p_guess + Lbar_h(u)_1 (+ offset).
Eigen::ArrayXd amp_tangential_rhs(const InterfaceArray& u_pred, const GridField& p_guess, const Grid2D& g,
                                  const PhysicalParams& params);

/// gamma = 1 / (1 + rhosh / (rho hf)).
double projection_weight(const PhysicalParams& params);

/// gamma v_fluid + (1 - gamma) v_shell.
Eigen::ArrayXd project_interface_velocity(const Eigen::ArrayXd& v_fluid, const Eigen::ArrayXd& v_shell,
                                          const PhysicalParams& params);

struct TimeStep {
  double dt = 0.0;
  int steps = 0;
};

/// dt = min(Ct h, Cv rho h^2 / mu, 0.9 AMP mode bound at kx = pi / h), then
/// shrunk so that an integer number of steps reaches t_final.
TimeStep choose_time_step(const RunConfig& cfg, const Grid2D& g);

/// Owns the fluid and shell states of one run and advances them.
class Stepper {
 public:
  /// `forcing` may be null (unforced problem).
  Stepper(const RunConfig& cfg, const Grid2D& g, const Forcing* forcing = nullptr);

  /// Sets the state at t0 and the history levels t0 - dt, t0 - 2 dt from `exact`.
  void seed_from_exact(const ExactSolution& exact, double t0, double dt);
  /// Builds history from the current level alone (reduced accuracy on the first step).
  void seed_from_current(double dt);

  StepReport step(double dt);
  StepReport amp_step(double dt);
  StepReport traditional_step(double dt);

  FluidState& fluid() { return fluid_; }
  const FluidState& fluid() const { return fluid_; }
  ShellState& shell() { return shell_; }
  const ShellState& shell() const { return shell_; }
  const Grid2D& grid() const { return g_; }
  const RunConfig& config() const { return cfg_; }

  /// Effective viscosity of the momentum update (mu plus dissipation).
  double effective_viscosity() const;

  /// Boundary specifications used by the selected scheme.
  VelocityBcSpec velocity_spec() const;
  PressureBcSpec pressure_spec() const;

 private:
  InterfaceArray shell_forcing(double t) const;
  InterfaceArray kinematic_offset(double t) const;
  void wall_data(double t, VelocityBcData& d) const;
  Eigen::ArrayXd wall_pressure_data(const GridField& v2, double t) const;
  PressureData pressure_data(const GridField& v1, const GridField& v2, double dt, double t) const;
  void momentum(const GridField& v1, const GridField& v2, const GridField& p, double t, GridField& F1,
                GridField& F2) const;
  void fill_report(StepReport& r) const;
  const PressureSolver& solver() const;

  RunConfig cfg_;
  PhysicalParams params_;
  Grid2D g_;
  const Forcing* forcing_;
  Forcing zero_;
  FluidState fluid_;
  ShellState shell_;
  mutable std::optional<PressureSolver> solver_;
};

/// Interface residual of the trapezoidal fully discrete coupling:
///   beta (F2^{n+1} + F2^n)/2 - (Lbar u^{n+1} + Lbar u^n)_2 / 2 + (sigma22^{n+1} + sigma22^n)/2,
/// evaluated after solving the pressure at n+1 with the Robin data that this
/// coupling implies. Returns max |residual| over the interface nodes.
double trapezoid_interface_residual(const Grid2D& g, const PhysicalParams& params, const GridField& v1n,
                                    const GridField& v2n, const GridField& pn, const InterfaceArray& un,
                                    const GridField& v1np, const GridField& v2np, const InterfaceArray& unp,
                                    GridField& p_out);

}  // namespace ampfsi
