#include "ampfsi/shell.hpp"

#include <cmath>

namespace ampfsi {

namespace {

// Centred second difference (T u_s)_s with T evaluated at half nodes.
Eigen::ArrayXd second_difference(const Eigen::ArrayXd& u, const Eigen::ArrayXd& coef_half, double h) {
  const Eigen::Index n = u.size();
  Eigen::ArrayXd out(n);
  const double ih2 = 1.0 / (h * h);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index ip = (i + 1) % n;
    const Eigen::Index im = (i + n - 1) % n;
    out(i) = ih2 * (coef_half(i) * (u(ip) - u(i)) - coef_half(im) * (u(i) - u(im)));
  }
  return out;
}

void check_shapes(const ShellState& s, const InterfaceArray& a, const char* what) {
  if (a.size() != 0 && a.cols() != s.size())
    throw Error(ErrorKind::InvalidArgument, std::string("shell: mismatched length for ") + what);
}

InterfaceArray or_zero(const InterfaceArray& a, int n) {
  return a.size() == 0 ? InterfaceArray::Zero(2, n) : a;
}

void mask(ShellUpdate& up, bool horizontal) {
  if (!horizontal) {
    up.u.row(0).setZero();
    up.v.row(0).setZero();
  }
}

}  // namespace

Eigen::ArrayXd shell_operator(const Eigen::ArrayXd& u, const PhysicalParams& params, double h) {
  const Eigen::Index n = u.size();
  Eigen::ArrayXd out = -params.Kbar * u;
  if (params.Tbar != 0.0) out += second_difference(u, Eigen::ArrayXd::Constant(n, params.Tbar), h);
  if (params.Bbar != 0.0) {
    const Eigen::ArrayXd ones = Eigen::ArrayXd::Ones(n);
    const Eigen::ArrayXd w = params.Bbar * second_difference(u, ones, h);
    out -= second_difference(w, ones, h);
  }
  return out;
}

InterfaceArray shell_operator(const InterfaceArray& u, const PhysicalParams& params, double h) {
  InterfaceArray out(2, u.cols());
  for (int c = 0; c < 2; ++c) out.row(c) = shell_operator(Eigen::ArrayXd(u.row(c).transpose()), params, h).transpose();
  return out;
}

double shell_symbol(double kx, const PhysicalParams& params, double h) {
  const double s = std::sin(0.5 * kx * h);
  const double d2 = 4.0 * s * s / (h * h);
  return params.Kbar + params.Tbar * d2 + params.Bbar * d2 * d2;
}

ShellUpdate shell_predict(const ShellState& state, const InterfaceArray& traction,
                          const InterfaceArray& forcing, double dt, const PhysicalParams& params,
                          double h) {
  if (!state.has_history)
    throw Error(ErrorKind::StartupRequired, "shell predictor needs the level t - dt");
  check_shapes(state, traction, "traction");
  check_shapes(state, forcing, "forcing");
  const int n = state.size();
  ShellUpdate up;
  up.u = state.u_prev + 2.0 * dt * state.v;
  up.v = state.v_prev + (2.0 * dt / params.rhosh) *
                            (shell_operator(state.u, params, h) - traction + or_zero(forcing, n));
  mask(up, state.horizontal);
  return up;
}

ShellUpdate shell_correct(const ShellState& state, const ShellUpdate& predicted,
                          const InterfaceArray& traction_pred, const InterfaceArray& traction_now,
                          const InterfaceArray& forcing_pred, const InterfaceArray& forcing_now,
                          double dt, const PhysicalParams& params, double h) {
  check_shapes(state, traction_pred, "predicted traction");
  check_shapes(state, traction_now, "traction");
  const int n = state.size();
  const InterfaceArray u_half = 0.5 * (predicted.u + state.u);
  const InterfaceArray v_half = 0.5 * (predicted.v + state.v);
  const InterfaceArray sigma_half = 0.5 * (traction_pred + traction_now);
  const InterfaceArray f_half = 0.5 * (or_zero(forcing_pred, n) + or_zero(forcing_now, n));
  ShellUpdate up;
  up.u = state.u + dt * v_half;
  up.v = state.v + (dt / params.rhosh) * (shell_operator(u_half, params, h) - sigma_half + f_half);
  mask(up, state.horizontal);
  return up;
}

ShellUpdate shell_leapfrog(const ShellState& state, const InterfaceArray& traction,
                           const InterfaceArray& forcing, double dt, const PhysicalParams& params,
                           double h) {
  if (!state.has_history)
    throw Error(ErrorKind::StartupRequired, "shell leap-frog needs the level t - dt");
  const int n = state.size();
  ShellUpdate up;
  up.u = 2.0 * state.u - state.u_prev +
         (dt * dt / params.rhosh) * (shell_operator(state.u, params, h) - traction + or_zero(forcing, n));
  up.v = (3.0 * up.u - 4.0 * state.u + state.u_prev) / (2.0 * dt);
  mask(up, state.horizontal);
  return up;
}

void shell_accept(ShellState& state, const ShellUpdate& next, double dt) {
  state.u_prev = state.u;
  state.v_prev = state.v;
  state.u = next.u;
  state.v = next.v;
  state.t += dt;
  state.has_history = true;
}

}  // namespace ampfsi
