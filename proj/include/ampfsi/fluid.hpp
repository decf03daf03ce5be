#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>

#include "ampfsi/exact.hpp"
#include "ampfsi/field.hpp"
#include "ampfsi/params.hpp"

namespace ampfsi {

// ---------------------------------------------------------------------------
// Centred difference operators. x wraps periodically; y needs valid ghosts.

namespace ops {

inline double dx(const GridField& f, const Grid2D& g, int i, int j) {
  return (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.hx);
}
inline double dy(const GridField& f, const Grid2D& g, int i, int j) {
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.hy);
}
inline double dxx(const GridField& f, const Grid2D& g, int i, int j) {
  return (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (g.hx * g.hx);
}
inline double dyy(const GridField& f, const Grid2D& g, int i, int j) {
  return (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (g.hy * g.hy);
}
inline double lap(const GridField& f, const Grid2D& g, int i, int j) { return dxx(f, g, i, j) + dyy(f, g, i, j); }
inline double dxy(const GridField& f, const Grid2D& g, int i, int j) {
  return (f(i + 1, j + 1) - f(i - 1, j + 1) - f(i + 1, j - 1) + f(i - 1, j - 1)) / (4.0 * g.hx * g.hy);
}
inline double div(const GridField& v1, const GridField& v2, const Grid2D& g, int i, int j) {
  return dx(v1, g, i, j) + dy(v2, g, i, j);
}

/// Max |div v| over rows j0..j1.
double max_divergence(const GridField& v1, const GridField& v2, const Grid2D& g, int j0, int j1);

/// Third-order extrapolation of row `target` from the three rows toward the
/// interior (step = +1 extrapolates upward, -1 downward).
void extrapolate_row(GridField& f, int target, int step);

}  // namespace ops

// ---------------------------------------------------------------------------

/// Fluid unknowns with the history levels used by the multistep updates.
struct FluidState {
  GridField v1, v2, p;
  /// rho^{-1}-free momentum right side F = -grad p + mu lap v (+ forcing) at t - dt.
  GridField F1_prev, F2_prev;
  bool has_F_prev = false;
  /// Pressure at t - dt and t - 2 dt.
  GridField p_nm1, p_nm2;
  bool has_p_history = false;
  double t = 0.0;

  FluidState() = default;
  explicit FluidState(const Grid2D& g)
      : v1(g), v2(g), p(g), F1_prev(g), F2_prev(g), p_nm1(g), p_nm2(g) {}
};

struct MomentumTerms {
  double mu = 0.0;
  /// Artificial dissipation coefficient (1/time): adds rho d2 h^2 lap_h v.
  double d2 = 0.0;
  const Forcing* forcing = nullptr;
};

/// F = -grad_h p + mu lap_h v (+ dissipation, + forcing at time t) on rows j0..j1.
void momentum_rhs(const GridField& v1, const GridField& v2, const GridField& p, const Grid2D& g,
                  const PhysicalParams& params, const MomentumTerms& terms, double t, int j0, int j1,
                  GridField& F1, GridField& F2);

/// Adams-Bashforth predictor rho (v_p - v)/dt = 3/2 F^n - 1/2 F^{n-1} on rows j0..j1.
void velocity_predict(const FluidState& s, const GridField& F1n, const GridField& F2n, double dt, double rho,
                      int j0, int j1, GridField& v1p, GridField& v2p);

/// Trapezoidal corrector rho (v^{n+1} - v)/dt = (F_p + F^n)/2 on rows j0..j1.
void velocity_correct(const FluidState& s, const GridField& F1p, const GridField& F2p, const GridField& F1n,
                      const GridField& F2n, double dt, double rho, int j0, int j1, GridField& v1, GridField& v2);

// ---------------------------------------------------------------------------
// Velocity boundary conditions

enum class TangentialBc {
  AmpRobin,     // mu (v1_y + v2_x) + beta mu lap v1 = H  (solved for the ghost)
  Dirichlet,    // v1 prescribed on the interface
  Extrapolate,  // v1 from the momentum update, ghost extrapolated
};

enum class WallBc { NoSlip, Slip };

struct VelocityBcSpec {
  TangentialBc tangential = TangentialBc::AmpRobin;
  bool normal_dirichlet = false;  // v2 prescribed on the interface
  WallBc wall = WallBc::NoSlip;
  double mu = 0.0;
  double beta = 1.0;              // rhosh / rho
};

/// Per-node data for the interface (size nx) and wall.
struct VelocityBcData {
  Eigen::ArrayXd tangential_rhs;  // H for AmpRobin
  Eigen::ArrayXd v1_interface;    // Dirichlet values
  Eigen::ArrayXd v2_interface;
  Eigen::ArrayXd v1_wall;
  Eigen::ArrayXd v2_wall;
};

/// Fills Dirichlet values and both ghost layers of v1, v2 at the interface
/// and the bottom wall. The interface v2 ghost always enforces div_h v = 0.
void apply_velocity_bcs(GridField& v1, GridField& v2, const Grid2D& g, const VelocityBcSpec& spec,
                        const VelocityBcData& data);

// ---------------------------------------------------------------------------
// Pressure equation

enum class PressureTop { Robin, Neumann };
enum class PressureBottom { Neumann, Dirichlet };

struct PressureBcSpec {
  PressureTop top = PressureTop::Robin;
  double beta = 1.0;  // Robin: p + beta p_y = r
  PressureBottom bottom = PressureBottom::Neumann;
  /// Adds sum(p)/n = mean as a constraint; required for Neumann-Neumann.
  bool mean_constraint = false;
};

struct PressureData {
  Eigen::ArrayXXd source;       // nx x (ny+1), right side of lap_h p
  Eigen::ArrayXd top;           // r (Robin) or p_y (Neumann)
  Eigen::ArrayXd bottom;        // p_y (Neumann) or p (Dirichlet)
  double mean = 0.0;
};

/// Sparse five-point pressure system over rows 0..ny with ghosts eliminated
/// through the boundary relations. The factorization is built once.
class PressureSolver {
 public:
  PressureSolver(const Grid2D& g, const PressureBcSpec& spec);

  /// Solves and writes rows 0..ny and both ghost layers of `p`.
  /// Returns the residual ||A p - b||_inf.
  double solve(const PressureData& data, GridField& p) const;

  const PressureBcSpec& spec() const { return spec_; }
  const Eigen::SparseMatrix<double>& matrix() const { return A_; }
  double last_residual() const { return last_residual_; }

  /// Fills the pressure ghost rows from the boundary relations.
  void fill_ghosts(const PressureData& data, GridField& p) const;

 private:
  Eigen::VectorXd assemble_rhs(const PressureData& data) const;

  Grid2D g_;
  PressureBcSpec spec_;
  Eigen::SparseMatrix<double> A_;
  double norm_A_ = 0.0;
  std::shared_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  mutable double last_residual_ = 0.0;
};

/// Convenience: assemble, factor, and solve once.
double pressure_solve(const Grid2D& g, const PressureBcSpec& spec, const PressureData& data, GridField& p);

// ---------------------------------------------------------------------------
// Field dumps

/// Writes `nx ny hx hy t` and then one comma-separated line per grid row
/// (y = -H first), nx + 1 values including the periodic image.
void write_field(const std::string& path, const GridField& f, const Grid2D& g, double t);

}  // namespace ampfsi
