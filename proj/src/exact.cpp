#include "ampfsi/exact.hpp"

#include <cmath>
#include <sstream>

namespace ampfsi {

namespace {

constexpr cdouble I{0.0, 1.0};

cdouble phase(double k, cdouble omega, double x, double t) { return std::exp(I * (k * x - omega * t)); }

struct Hyperbolics {
  cdouble alpha, Ck, Sk, Ca, Sa, G, xi;
};

Hyperbolics hyperbolics(cdouble omega, double k, const PhysicalParams& p) {
  Hyperbolics h;
  h.alpha = std::sqrt(cdouble(k * k) - I * p.rho * omega / p.mu);
  if (h.alpha.real() < 0) h.alpha = -h.alpha;
  h.Ck = std::cosh(k * p.H);
  h.Sk = std::sinh(k * p.H);
  h.Ca = std::cosh(h.alpha * p.H);
  h.Sa = std::sinh(h.alpha * p.H);
  h.G = p.Kbar + p.Tbar * k * k - p.rhosh * omega * omega;
  h.xi = p.rho * omega * omega + 2.0 * I * omega * p.mu * k * k;
  return h;
}

// det M / cosh(alpha H)^2: analytic in omega and O(1) near the physical roots.
cdouble scaled_det(cdouble omega, double k, const PhysicalParams& p, int theta) {
  const Matrix4c m = assemble_dispersion_matrix(omega, k, p, theta);
  const cdouble ca = std::cosh(hyperbolics(omega, k, p).alpha * p.H);
  return m.determinant() / (ca * ca);
}

bool acceptable_root(cdouble w, double k, const PhysicalParams& p, int theta, double* rel) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return false;
  if (w.real() <= 0.0 || w.imag() > 1e-12 * std::abs(w)) return false;
  const Hyperbolics h = hyperbolics(w, k, p);
  if (std::abs(h.alpha) * p.H < 1e-4) return false;
  // alpha = k (omega = 0) makes the fluid basis degenerate.
  if (std::abs(h.alpha - k) * p.H < 1e-4) return false;
  if (std::abs(h.G) < 1e-12 * (p.Kbar + p.Tbar * k * k + p.rhosh * std::norm(w))) return false;
  const double r = relative_determinant(assemble_dispersion_matrix(w, k, p, theta));
  if (rel) *rel = r;
  return r <= 1e-10;
}

}  // namespace

// ---------------------------------------------------------------------------

double inviscid_added_mass(double k, double H, double rho) {
  if (k == 0.0) throw Error(ErrorKind::DivergentMode, "added mass is unbounded for k = 0");
  return rho / (k * std::tanh(k * H));
}

std::pair<double, double> mp_i1_dispersion(double k, const PhysicalParams& params) {
  if (k == 0.0) throw Error(ErrorKind::InvalidArgument, "dispersion relation needs k != 0");
  const double Ma = inviscid_added_mass(std::abs(k), params.H, params.rho);
  const double w = std::sqrt((params.Kbar + k * k * params.Tbar) / (params.rhosh + Ma));
  return {w, -w};
}

InviscidFields mp_i1_fields(double k, double omega, double umax, const PhysicalParams& params,
                            double x, double y, double t) {
  const cdouble e = phase(k, omega, x, t);
  const double Sk = std::sinh(k * params.H);
  const double ch = std::cosh(k * (y + params.H));
  const double sh = std::sinh(k * (y + params.H));
  InviscidFields f;
  f.eta = std::real(umax * e);
  f.v1 = std::real(umax * omega * ch / Sk * e);
  f.v2 = std::real(-I * umax * omega * sh / Sk * e);
  f.p = std::real(umax * params.rho * omega * omega * ch / (k * Sk) * e);
  return f;
}

// ---------------------------------------------------------------------------

Matrix4c assemble_dispersion_matrix(cdouble omega, double k, const PhysicalParams& p, int theta) {
  if (!(p.mu > 0)) throw Error(ErrorKind::InvalidArgument, "viscous dispersion matrix needs mu > 0");
  const Hyperbolics h = hyperbolics(omega, k, p);
  const double scale = p.Kbar + p.Tbar * k * k + p.rhosh * std::norm(omega);
  if (std::abs(h.G) <= 1e-14 * scale)
    throw Error(ErrorKind::Pole, "shell resonance: G = 0 at this frequency");
  const cdouble a = h.alpha;
  const cdouble mu = p.mu;
  const double th = theta;
  Matrix4c m;
  m << -h.Sk, 0.0, -h.Sa, 0.0,
       k * h.Ck, k, a * h.Ca, a,
       h.xi, -h.Sk * h.G * k + h.xi * h.Ck, 2.0 * I * omega * mu * k * a,
       -h.Sa * h.G * k + 2.0 * I * omega * mu * k * a * h.Ca,
       k, k * h.Ck - 2.0 * I * omega * mu * th * k * k * h.Sk / h.G, a,
       a * h.Ca - I * omega * mu * th * (a * a + k * k) * h.Sa / h.G;
  return m;
}

double relative_determinant(const Matrix4c& m) {
  double scale = 1.0;
  for (int r = 0; r < 4; ++r) scale *= m.row(r).norm();
  return std::abs(m.determinant()) / scale;
}

cdouble find_omega(double k, const PhysicalParams& params, int theta, cdouble guess, RootTrace* trace) {
  auto f = [&](cdouble w) { return scaled_det(w, k, params, theta); };
  RootTrace local;
  double rel = 0.0;

  // Secant.
  {
    cdouble w0 = guess;
    cdouble w1 = guess + cdouble(1e-3, -1e-3) * (1.0 + std::abs(guess));
    cdouble f0 = f(w0), f1 = f(w1);
    for (int it = 0; it < 60; ++it) {
      ++local.iterations;
      const cdouble df = f1 - f0;
      if (df == 0.0) break;
      const cdouble w2 = w1 - f1 * (w1 - w0) / df;
      if (!std::isfinite(w2.real()) || !std::isfinite(w2.imag())) break;
      w0 = w1;
      f0 = f1;
      w1 = w2;
      f1 = f(w1);
      if (std::abs(w1 - w0) <= 1e-14 * std::abs(w1)) break;
    }
    if (acceptable_root(w1, k, params, theta, &rel)) {
      local.residual = rel;
      if (trace) *trace = local;
      return w1;
    }
  }

  // Muller.
  local.used_muller = true;
  const double s = 1e-2 * (1.0 + std::abs(guess));
  cdouble x0 = guess, x1 = guess + cdouble(0.0, -s), x2 = guess + cdouble(s, -s);
  cdouble f0 = f(x0), f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100; ++it) {
    ++local.iterations;
    const cdouble h1 = x1 - x0, h2 = x2 - x1;
    const cdouble d1 = (f1 - f0) / h1, d2 = (f2 - f1) / h2;
    const cdouble a = (d2 - d1) / (h2 + h1);
    const cdouble b = a * h2 + d2;
    const cdouble disc = std::sqrt(b * b - 4.0 * f2 * a);
    const cdouble den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
    if (den == 0.0) break;
    const cdouble x3 = x2 - 2.0 * f2 / den;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f2;
    x2 = x3;
    f2 = f(x2);
    if (std::abs(x2 - x1) <= 1e-14 * std::abs(x2)) break;
  }
  if (acceptable_root(x2, k, params, theta, &rel)) {
    local.residual = rel;
    if (trace) *trace = local;
    return x2;
  }
  if (trace) *trace = local;
  std::ostringstream msg;
  msg << "dispersion root not found from guess " << guess << " after " << local.iterations
      << " iterations (last iterate " << x2 << ", relative det " << rel << ")";
  throw Error(ErrorKind::RootFailure, msg.str());
}

cdouble find_omega(double k, const PhysicalParams& params, int theta, RootTrace* trace) {
  const double w0 = mp_i1_dispersion(k, params).first;
  return find_omega(k, params, theta, cdouble(w0, -0.01), trace);
}

WaveCoefficients tw_coefficients(cdouble omega, double k, const PhysicalParams& p, int theta, double umax) {
  const Matrix4c m = assemble_dispersion_matrix(omega, k, p, theta);
  const Eigen::Matrix<cdouble, 3, 3> a = m.topLeftCorner<3, 3>();
  Eigen::FullPivLU<Eigen::Matrix<cdouble, 3, 3>> lu(a);
  if (lu.rank() < 3 || std::abs(lu.determinant()) <= 1e-14 * a.norm() * a.norm() * a.norm())
    throw Error(ErrorKind::DegenerateRoot, "leading 3x3 block of the dispersion matrix is singular");
  WaveCoefficients wc;
  wc.c.head<3>() = lu.solve(-m.col(3).head<3>());
  wc.c(3) = 1.0;

  const Hyperbolics h = hyperbolics(omega, k, p);
  const cdouble A = wc.c(0), B = wc.c(1), C = wc.c(2), D = wc.c(3);
  const cdouble a2 = h.alpha * h.alpha;
  wc.u1_hat = -(p.mu * theta / h.G) *
              ((I / k) * (B * k * k * h.Sk + D * a2 * h.Sa) + I * k * (B * h.Sk + D * h.Sa));
  wc.u2_hat = (1.0 / h.G) * ((I * p.rho * omega / k) * (A + B * h.Ck) -
                             2.0 * p.mu * (A * k + B * k * h.Ck + C * h.alpha + D * h.alpha * h.Ca));
  const double mag = std::sqrt(std::norm(wc.u1_hat) + std::norm(wc.u2_hat));
  if (!(mag > 0)) throw Error(ErrorKind::DegenerateRoot, "traveling wave has zero shell displacement");
  const double s = umax / mag;
  wc.c *= s;
  wc.u1_hat *= s;
  wc.u2_hat *= s;
  return wc;
}

// ---------------------------------------------------------------------------

TravelingWave::TravelingWave(const PhysicalParams& params, const ModelProblem& problem, double k,
                             double umax, int branch)
    : params_(params), k_(k), umax_(umax), viscous_(problem.viscous()), theta_(problem.theta()) {
  if (k == 0.0) throw Error(ErrorKind::InvalidArgument, "traveling wave needs k != 0");
  if (!viscous_) {
    const auto w = mp_i1_dispersion(k, params).first;
    omega_ = branch > 0 ? w : -w;
    coef_.u1_hat = 0.0;
    coef_.u2_hat = umax;
    alpha_ = 0.0;
    return;
  }
  cdouble w = find_omega(k, params, theta_);
  if (branch < 0) w = -std::conj(w);
  omega_ = w;
  alpha_ = hyperbolics(w, k, params).alpha;
  coef_ = tw_coefficients(w, k, params, theta_, umax);
}

void TravelingWave::fluid_profile(double y, cdouble& v1, cdouble& v2, cdouble& p) const {
  const double H = params_.H;
  const double k = k_;
  if (!viscous_) {
    const double Sk = std::sinh(k * H);
    v1 = umax_ * omega_ * std::cosh(k * (y + H)) / Sk;
    v2 = -I * umax_ * omega_ * std::sinh(k * (y + H)) / Sk;
    p = umax_ * params_.rho * omega_ * omega_ * std::cosh(k * (y + H)) / (k * Sk);
    return;
  }
  const cdouble A = coef_.c(0), B = coef_.c(1), C = coef_.c(2), D = coef_.c(3);
  const cdouble a = alpha_;
  v1 = (I / k) * (A * k * std::cosh(k * y) + B * k * std::cosh(k * (y + H)) + C * a * std::cosh(a * y) +
                  D * a * std::cosh(a * (y + H)));
  v2 = A * std::sinh(k * y) + B * std::sinh(k * (y + H)) + C * std::sinh(a * y) + D * std::sinh(a * (y + H));
  p = (I * params_.rho * omega_ / k) * (A * std::cosh(k * y) + B * std::cosh(k * (y + H)));
}

FluidPoint TravelingWave::fluid(double x, double y, double t) const {
  cdouble v1, v2, p;
  fluid_profile(y, v1, v2, p);
  const cdouble e = phase(k_, omega_, x, t);
  return {std::real(v1 * e), std::real(v2 * e), std::real(p * e)};
}

ShellPoint TravelingWave::shell(double x, double t) const {
  const cdouble e = phase(k_, omega_, x, t);
  ShellPoint s;
  s.u1 = std::real(coef_.u1_hat * e);
  s.u2 = std::real(coef_.u2_hat * e);
  s.w1 = std::real(-I * omega_ * coef_.u1_hat * e);
  s.w2 = std::real(-I * omega_ * coef_.u2_hat * e);
  return s;
}

// ---------------------------------------------------------------------------

MmsSolution::MmsSolution(const PhysicalParams& params, const MmsSource& src)
    : params_(params), src_(src), a_(src.fx * M_PI), b_(src.ft * M_PI), c_(std::sqrt(params.Tbar / params.rhosh)) {}

MmsSolution::Derivatives MmsSolution::derivatives(double x, double y, double t) const {
  const double a = a_;
  const double cx = std::cos(a * x), sx = std::sin(a * x);
  const double cy = std::cos(a * y), sy = std::sin(a * y);
  const double ct = std::cos(b_ * t), st = std::sin(b_ * t);
  Derivatives d;
  d.v1 = 0.5 * cx * cy * ct;
  d.v2 = 0.5 * sx * sy * ct;
  d.p = cx * cy * ct;
  d.v1_t = -0.5 * b_ * cx * cy * st;
  d.v2_t = -0.5 * b_ * sx * sy * st;
  d.v1_x = -0.5 * a * sx * cy * ct;
  d.v1_y = -0.5 * a * cx * sy * ct;
  d.v2_x = 0.5 * a * cx * sy * ct;
  d.v2_y = 0.5 * a * sx * cy * ct;
  d.p_x = -a * sx * cy * ct;
  d.p_y = -a * cx * sy * ct;
  d.lap_v1 = -2.0 * a * a * d.v1;
  d.lap_v2 = -2.0 * a * a * d.v2;
  d.lap_p = -2.0 * a * a * d.p;
  return d;
}

FluidPoint MmsSolution::fluid(double x, double y, double t) const {
  const Derivatives d = derivatives(x, y, t);
  return {d.v1, d.v2, d.p};
}

ShellPoint MmsSolution::shell(double x, double t) const {
  const double s = std::sin(a_ * x);
  const double w = a_ * c_;
  ShellPoint p;
  p.u1 = src_.abar * s * std::cos(w * t);
  p.u2 = src_.bbar * s * std::cos(w * t);
  p.w1 = -src_.abar * w * s * std::sin(w * t);
  p.w2 = -src_.bbar * w * s * std::sin(w * t);
  return p;
}

Eigen::Vector2d MmsSolution::shell_acceleration(double x, double t) const {
  const ShellPoint s = shell(x, t);
  const double w = a_ * c_;
  return {-w * w * s.u1, -w * w * s.u2};
}

Eigen::Vector2d MmsSolution::shell_operator_exact(double x, double t) const {
  const ShellPoint s = shell(x, t);
  const double a2 = a_ * a_;
  const double sym = params_.Kbar + params_.Tbar * a2 + params_.Bbar * a2 * a2;
  return {-sym * s.u1, -sym * s.u2};
}

Eigen::Vector2d MmsSolution::traction(double x, double t) const {
  const Derivatives d = derivatives(x, 0.0, t);
  return {params_.mu * (d.v1_y + d.v2_x), -d.p + 2.0 * params_.mu * d.v2_y};
}

Eigen::Vector2d MmsSolution::momentum(double x, double y, double t) const {
  const Derivatives d = derivatives(x, y, t);
  const double rho = params_.rho, mu = params_.mu;
  return {rho * d.v1_t + d.p_x - mu * d.lap_v1, rho * d.v2_t + d.p_y - mu * d.lap_v2};
}

double MmsSolution::pressure_source(double x, double y, double t) const { return derivatives(x, y, t).lap_p; }

Eigen::Vector2d MmsSolution::shell_force(double x, double t) const {
  return params_.rhosh * shell_acceleration(x, t) - shell_operator_exact(x, t) + traction(x, t);
}

double MmsSolution::robin(double x, double t) const {
  const Derivatives d = derivatives(x, 0.0, t);
  const double beta = params_.rhosh / params_.rho;
  const double mu = params_.mu;
  return d.p + beta * d.p_y - (2.0 * mu * d.v2_y + beta * mu * d.lap_v2 - shell_operator_exact(x, t)(1));
}

double MmsSolution::tangential(double x, double t) const {
  const Derivatives d = derivatives(x, 0.0, t);
  const double beta = params_.rhosh / params_.rho;
  const double mu = params_.mu;
  return mu * (d.v1_y + d.v2_x) + beta * mu * d.lap_v1 - (beta * d.p_x + shell_operator_exact(x, t)(0));
}

double MmsSolution::wall_pressure(double x, double t) const {
  const Derivatives d = derivatives(x, -params_.H, t);
  return d.p_y - params_.mu * d.lap_v2;
}

Eigen::Vector2d MmsSolution::wall_velocity(double x, double t) const {
  const Derivatives d = derivatives(x, -params_.H, t);
  return {d.v1, d.v2};
}

Eigen::Vector2d MmsSolution::kinematic(double x, double t) const {
  const Derivatives d = derivatives(x, 0.0, t);
  const ShellPoint s = shell(x, t);
  return {d.v1 - s.w1, d.v2 - s.w2};
}

}  // namespace ampfsi
