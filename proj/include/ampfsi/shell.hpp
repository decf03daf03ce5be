#pragma once

#include <Eigen/Core>

#include "ampfsi/field.hpp"
#include "ampfsi/params.hpp"

namespace ampfsi {

/// Discrete shell state on the periodic interface grid.
///
/// `u`, `v` are displacement and velocity at t; `u_prev`, `v_prev` hold the
/// level t - dt. Row 0 is the horizontal component, row 1 the vertical one.
struct ShellState {
  InterfaceArray u;
  InterfaceArray v;
  InterfaceArray u_prev;
  InterfaceArray v_prev;
  double t = 0.0;
  bool has_history = false;
  /// False for vertical-only shells; row 0 is then held at zero.
  bool horizontal = true;

  ShellState() = default;
  ShellState(int n, bool horizontal_motion)
      : u(InterfaceArray::Zero(2, n)),
        v(InterfaceArray::Zero(2, n)),
        u_prev(InterfaceArray::Zero(2, n)),
        v_prev(InterfaceArray::Zero(2, n)),
        horizontal(horizontal_motion) {}

  int size() const { return static_cast<int>(u.cols()); }
};

/// Applies -K u + d/ds(T du/ds) - d2/ds2(B d2u/ds2) with centred differences
/// on the periodic grid of spacing h. The beam term is the composition of two
/// second differences.
Eigen::ArrayXd shell_operator(const Eigen::ArrayXd& u, const PhysicalParams& params, double h);
InterfaceArray shell_operator(const InterfaceArray& u, const PhysicalParams& params, double h);

/// Discrete symbol of shell_operator for the Fourier mode exp(i kx s):
/// the operator multiplies the mode by -symbol.
double shell_symbol(double kx, const PhysicalParams& params, double h);

struct ShellUpdate {
  InterfaceArray u;
  InterfaceArray v;
};

/// Leap-frog predictor:
///   u_p = u_prev + 2 dt v,
///   rhosh (v_p - v_prev) / (2 dt) = L_h(u) - traction + forcing.
/// `traction` is sigma n on the interface; `forcing` may be empty.
ShellUpdate shell_predict(const ShellState& state, const InterfaceArray& traction,
                          const InterfaceArray& forcing, double dt, const PhysicalParams& params,
                          double h);

/// Trapezoidal (Adams-Moulton) corrector using averages of the predicted and
/// current levels. The traction enters with the same sign as in the predictor.
ShellUpdate shell_correct(const ShellState& state, const ShellUpdate& predicted,
                          const InterfaceArray& traction_pred, const InterfaceArray& traction_now,
                          const InterfaceArray& forcing_pred, const InterfaceArray& forcing_now,
                          double dt, const PhysicalParams& params, double h);

/// Second-order form of the leap-frog used by the traditional coupling:
///   rhosh (u^{n+1} - 2 u^n + u^{n-1}) / dt^2 = L_h(u^n) - traction + forcing,
/// with v^{n+1} from the one-sided second-order difference of u.
ShellUpdate shell_leapfrog(const ShellState& state, const InterfaceArray& traction,
                           const InterfaceArray& forcing, double dt, const PhysicalParams& params,
                           double h);

/// Shifts the state forward: (u, v) -> (u_prev, v_prev), next -> (u, v).
void shell_accept(ShellState& state, const ShellUpdate& next, double dt);

}  // namespace ampfsi
