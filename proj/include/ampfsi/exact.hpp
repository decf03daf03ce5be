#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>

#include "ampfsi/params.hpp"

namespace ampfsi {

using cdouble = std::complex<double>;

struct FluidPoint {
  double v1 = 0.0;
  double v2 = 0.0;
  double p = 0.0;
};

/// Shell displacement (u1, u2) and velocity (w1, w2) at one point.
struct ShellPoint {
  double u1 = 0.0;
  double u2 = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
};

/// A closed-form solution of the (possibly forced) coupled problem.
class ExactSolution {
 public:
  virtual ~ExactSolution() = default;
  virtual FluidPoint fluid(double x, double y, double t) const = 0;
  virtual ShellPoint shell(double x, double t) const = 0;
};

/// Forcing terms and boundary-relation offsets added so that an exact
/// solution satisfies every discrete relation up to truncation error.
/// All methods default to zero (unforced problem).
class Forcing {
 public:
  virtual ~Forcing() = default;
  /// f in rho v_t = -grad p + mu lap v + f.
  virtual Eigen::Vector2d momentum(double, double, double) const { return Eigen::Vector2d::Zero(); }
  /// Right side of lap p = source (before divergence damping).
  virtual double pressure_source(double, double, double) const { return 0.0; }
  /// fbar in rhosh vbar_t = Lbar(ubar) - sigma n + fbar.
  virtual Eigen::Vector2d shell_force(double, double) const { return Eigen::Vector2d::Zero(); }
  /// Offset of the pressure Robin relation at the interface.
  virtual double robin(double, double) const { return 0.0; }
  /// Offset of the tangential velocity relation at the interface.
  virtual double tangential(double, double) const { return 0.0; }
  /// Offset of p_y = mu lap v2 at the bottom wall.
  virtual double wall_pressure(double, double) const { return 0.0; }
  /// Velocity prescribed at the bottom wall.
  virtual Eigen::Vector2d wall_velocity(double, double) const { return Eigen::Vector2d::Zero(); }
  /// Offset g in v_fluid - v_shell = g on the interface.
  virtual Eigen::Vector2d kinematic(double, double) const { return Eigen::Vector2d::Zero(); }
};

// ---------------------------------------------------------------------------
// Inviscid traveling wave (MP-I1)

/// Added-mass coefficient rho / (k tanh(k H)).
double inviscid_added_mass(double k, double H, double rho);

/// Both real frequencies +-sqrt((Kbar + k^2 Tbar) / (rhosh + Ma)).
std::pair<double, double> mp_i1_dispersion(double k, const PhysicalParams& params);

struct InviscidFields {
  double eta = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double p = 0.0;
};

InviscidFields mp_i1_fields(double k, double omega, double umax, const PhysicalParams& params,
                            double x, double y, double t);

// ---------------------------------------------------------------------------
// Viscous traveling waves (MP-V1: theta = 0, MP-V2: theta = 1)

using Matrix4c = Eigen::Matrix<cdouble, 4, 4>;
using Vector4c = Eigen::Matrix<cdouble, 4, 1>;

/// Coefficient matrix whose null vector gives (A_f, B_f, C_f, D_f).
Matrix4c assemble_dispersion_matrix(cdouble omega, double k, const PhysicalParams& params, int theta);

/// |det M| divided by the product of the row norms.
double relative_determinant(const Matrix4c& m);

struct RootTrace {
  int iterations = 0;
  double residual = 0.0;
  bool used_muller = false;
};

/// Root of det M(omega) = 0 near `guess`, using a complex secant iteration
/// with a Muller fallback. The returned root has Re > 0 and Im <= 0.
cdouble find_omega(double k, const PhysicalParams& params, int theta, cdouble guess,
                   RootTrace* trace = nullptr);
/// Same, starting from the inviscid frequency shifted slightly downward.
cdouble find_omega(double k, const PhysicalParams& params, int theta, RootTrace* trace = nullptr);

struct WaveCoefficients {
  Vector4c c;        // A_f, B_f, C_f, D_f
  cdouble u1_hat;
  cdouble u2_hat;
};

/// Null vector of M scaled so that sqrt(|u1_hat|^2 + |u2_hat|^2) = umax.
WaveCoefficients tw_coefficients(cdouble omega, double k, const PhysicalParams& params, int theta,
                                 double umax);

/// Traveling wave exact solution for any of the three model problems.
class TravelingWave final : public ExactSolution {
 public:
  TravelingWave(const PhysicalParams& params, const ModelProblem& problem, double k, double umax,
                int branch = 1);

  FluidPoint fluid(double x, double y, double t) const override;
  ShellPoint shell(double x, double t) const override;

  double k() const { return k_; }
  cdouble omega() const { return omega_; }
  cdouble alpha() const { return alpha_; }
  const WaveCoefficients& coefficients() const { return coef_; }
  int theta() const { return theta_; }
  bool viscous() const { return viscous_; }

  /// Complex amplitudes of the fluid fields at height y (before exp(i(kx - wt))).
  void fluid_profile(double y, cdouble& v1, cdouble& v2, cdouble& p) const;

 private:
  PhysicalParams params_;
  double k_;
  double umax_;
  bool viscous_;
  int theta_;
  cdouble omega_;
  cdouble alpha_;
  WaveCoefficients coef_;
};

// ---------------------------------------------------------------------------
// Manufactured solution (MP-V2)

/// Trigonometric manufactured solution with all forcing functions.
class MmsSolution final : public ExactSolution, public Forcing {
 public:
  MmsSolution(const PhysicalParams& params, const MmsSource& src);

  FluidPoint fluid(double x, double y, double t) const override;
  ShellPoint shell(double x, double t) const override;

  Eigen::Vector2d momentum(double x, double y, double t) const override;
  double pressure_source(double x, double y, double t) const override;
  Eigen::Vector2d shell_force(double x, double t) const override;
  double robin(double x, double t) const override;
  double tangential(double x, double t) const override;
  double wall_pressure(double x, double t) const override;
  Eigen::Vector2d wall_velocity(double x, double t) const override;
  Eigen::Vector2d kinematic(double x, double t) const override;

  /// Shell speed sqrt(Tbar / rhosh).
  double speed() const { return c_; }

  struct Derivatives {
    double v1, v2, p;
    double v1_t, v2_t;
    double v1_x, v1_y, v2_x, v2_y;
    double p_x, p_y;
    double lap_v1, lap_v2, lap_p;
  };
  Derivatives derivatives(double x, double y, double t) const;

  /// Exact traction sigma n on y = 0.
  Eigen::Vector2d traction(double x, double t) const;
  /// Lbar applied to the exact shell displacement.
  Eigen::Vector2d shell_operator_exact(double x, double t) const;
  /// Shell acceleration.
  Eigen::Vector2d shell_acceleration(double x, double t) const;

 private:
  PhysicalParams params_;
  MmsSource src_;
  double a_;   // fx pi
  double b_;   // ft pi
  double c_;
};

}  // namespace ampfsi
