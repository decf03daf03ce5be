#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ampfsi {

/// Error kinds reported by the solver. The CLI maps these onto exit codes.
enum class ErrorKind {
  InvalidArgument,
  InvalidConfiguration,
  StartupRequired,
  SolverSingular,
  SolverFailure,
  RootFailure,
  DegenerateRoot,
  Pole,
  DivergentMode,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Constant fluid and shell coefficients.
///
/// The shell density and thickness only appear as the product rho_bar*h_bar,
/// so `rhosh` stores that product directly.
struct PhysicalParams {
  double rho = 1.0;
  double mu = 0.0;
  double L = 1.0;
  double H = 1.0;
  double rhosh = 1.0;
  double Kbar = 0.0;
  double Tbar = 1.0;
  double Bbar = 0.0;
  double hf = 10.0;

  /// Density ratio rhosh / (rho H).
  double delta() const { return rhosh / (rho * H); }

  /// Throws InvalidArgument if any invariant is violated.
  void validate() const;
};

enum class ProblemKind { MP_I1, MP_V1, MP_V2 };

struct ModelProblem {
  ProblemKind kind = ProblemKind::MP_V2;

  /// 1 when the shell moves horizontally as well as vertically.
  int theta() const { return kind == ProblemKind::MP_V2 ? 1 : 0; }
  bool viscous() const { return kind != ProblemKind::MP_I1; }
};

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem(std::string_view name);

/// Standard parameter set: rho = H = 1, rhosh = Tbar = delta*rho*H,
/// Kbar = Bbar = 0, hf = 10, L = 1. The viscosity is left at zero.
PhysicalParams make_preset(double delta, const ModelProblem& problem = {});

/// Uniform Cartesian grid on (0,L) x (-H,0), periodic in x.
///
/// Nodes i1 = 0..nx (node nx aliases node 0) and i2 = 0..ny, with row 0 the
/// bottom wall and row ny the interface. Two ghost rows sit beyond each wall.
struct Grid2D {
  static constexpr int ghost = 2;

  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double L = 1.0;
  double H = 1.0;

  double x(int i) const { return i * hx; }
  /// y of row j; row ny is exactly 0 and row 0 exactly -H.
  double y(int j) const { return j == ny ? 0.0 : -H + j * hy; }
  int interface_row() const { return ny; }
  int bottom_row() const { return 0; }
  double h() const { return std::max(hx, hy); }
};

Grid2D build_grid(const PhysicalParams& params, int N);
Grid2D build_grid(const PhysicalParams& params, int nx, int ny);

enum class Scheme { AMP, Traditional };

std::string_view to_string(Scheme s);

/// Exact-solution source used for initial data, forcing, and errors.
struct TravelingWaveSource {
  int mode = 1;          // wavenumber k = 2 pi mode / L
  int branch = 1;        // +1 travels left to right
  double umax = 0.1;
};

struct MmsSource {
  double fx = 2.0;
  double ft = 2.0;
  double abar = 0.1;
  double bbar = 0.1;
};

struct RunConfig {
  PhysicalParams params;
  ModelProblem problem;
  int N = 20;

  std::optional<double> dt_fixed;
  double Ct = 0.25;      // dt <= Ct * h
  double Cv = 0.125;     // dt <= Cv * rho h^2 / mu
  double t_final = 0.5;

  Scheme scheme = Scheme::AMP;
  bool corrector = true;
  /// Artificial dissipation coefficient; negative selects the problem default.
  double d2 = -1.0;
  double Cd = 1.0;
  double blowup_bound = 1e6;

  bool use_mms = false;
  TravelingWaveSource wave;
  MmsSource mms;

  std::string out_dir = "run";
  bool dump_fields = false;
  int dump_every = 0;    // 0: final state only
  bool log_steps = true;

  double dissipation() const;
  void validate() const;
};

/// Parses the sectioned key = value configuration format.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace ampfsi
