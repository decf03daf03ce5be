#include "ampfsi/fluid.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <vector>

namespace ampfsi {

namespace ops {

double max_divergence(const GridField& v1, const GridField& v2, const Grid2D& g, int j0, int j1) {
  double m = 0.0;
  for (int j = j0; j <= j1; ++j)
    for (int i = 0; i < g.nx; ++i) m = std::max(m, std::abs(div(v1, v2, g, i, j)));
  return m;
}

void extrapolate_row(GridField& f, int target, int step) {
  const int a = target - step;
  f.row(target) = 3.0 * f.row(a) - 3.0 * f.row(a - step) + f.row(a - 2 * step);
}

}  // namespace ops

void momentum_rhs(const GridField& v1, const GridField& v2, const GridField& p, const Grid2D& g,
                  const PhysicalParams& params, const MomentumTerms& terms, double t, int j0, int j1,
                  GridField& F1, GridField& F2) {
  const double h = g.h();
  const double visc = terms.mu + params.rho * terms.d2 * h * h;
  for (int j = j0; j <= j1; ++j) {
    const double y = g.y(j);
    for (int i = 0; i < g.nx; ++i) {
      double f1 = -ops::dx(p, g, i, j);
      double f2 = -ops::dy(p, g, i, j);
      if (visc != 0.0) {
        f1 += visc * ops::lap(v1, g, i, j);
        f2 += visc * ops::lap(v2, g, i, j);
      }
      if (terms.forcing) {
        const Eigen::Vector2d f = terms.forcing->momentum(g.x(i), y, t);
        f1 += f(0);
        f2 += f(1);
      }
      F1(i, j) = f1;
      F2(i, j) = f2;
    }
  }
}

void velocity_predict(const FluidState& s, const GridField& F1n, const GridField& F2n, double dt, double rho,
                      int j0, int j1, GridField& v1p, GridField& v2p) {
  if (!s.has_F_prev) throw Error(ErrorKind::StartupRequired, "velocity predictor needs F at t - dt");
  v1p = s.v1;
  v2p = s.v2;
  const double c = dt / rho;
  for (int j = j0; j <= j1; ++j) {
    v1p.row(j) += c * (1.5 * F1n.row(j) - 0.5 * s.F1_prev.row(j));
    v2p.row(j) += c * (1.5 * F2n.row(j) - 0.5 * s.F2_prev.row(j));
  }
}

void velocity_correct(const FluidState& s, const GridField& F1p, const GridField& F2p, const GridField& F1n,
                      const GridField& F2n, double dt, double rho, int j0, int j1, GridField& v1, GridField& v2) {
  v1 = s.v1;
  v2 = s.v2;
  const double c = 0.5 * dt / rho;
  for (int j = j0; j <= j1; ++j) {
    v1.row(j) += c * (F1p.row(j) + F1n.row(j));
    v2.row(j) += c * (F2p.row(j) + F2n.row(j));
  }
}

namespace {

void check_size(const Eigen::ArrayXd& a, int n, const char* what) {
  if (a.size() != n) throw Error(ErrorKind::InvalidArgument, std::string("boundary data has wrong length: ") + what);
}

}  // namespace

void apply_velocity_bcs(GridField& v1, GridField& v2, const Grid2D& g, const VelocityBcSpec& spec,
                        const VelocityBcData& data) {
  const int N = g.ny;
  const int nx = g.nx;
  const double hy = g.hy;

  // Bottom wall.
  if (spec.wall == WallBc::NoSlip) {
    check_size(data.v1_wall, nx, "v1_wall");
    check_size(data.v2_wall, nx, "v2_wall");
    v1.row(0) = data.v1_wall;
    v2.row(0) = data.v2_wall;
    for (int i = 0; i < nx; ++i) v2(i, -1) = v2(i, 1) + 2.0 * hy * ops::dx(v1, g, i, 0);
    ops::extrapolate_row(v1, -1, -1);
    ops::extrapolate_row(v1, -2, -1);
    ops::extrapolate_row(v2, -2, -1);
  } else {
    if (data.v2_wall.size() == nx)
      v2.row(0) = data.v2_wall;
    else
      v2.row(0).setZero();
    for (int k = 1; k <= 2; ++k) {
      v1.row(-k) = v1.row(k);
      v2.row(-k) = 2.0 * v2.row(0) - v2.row(k);
    }
  }

  // Interface values.
  if (spec.tangential == TangentialBc::Dirichlet) {
    check_size(data.v1_interface, nx, "v1_interface");
    v1.row(N) = data.v1_interface;
  }
  if (spec.normal_dirichlet) {
    check_size(data.v2_interface, nx, "v2_interface");
    v2.row(N) = data.v2_interface;
  }

  // Tangential ghost.
  if (spec.tangential == TangentialBc::AmpRobin) {
    check_size(data.tangential_rhs, nx, "tangential_rhs");
    const double coef = spec.mu / (2.0 * hy) + spec.mu * spec.beta / (hy * hy);
    if (coef == 0.0 || !std::isfinite(coef))
      throw Error(ErrorKind::InvalidConfiguration, "tangential ghost equation has a zero diagonal (mu = 0?)");
    for (int i = 0; i < nx; ++i) {
      // mu (v1(N+1) - v1(N-1))/(2hy) + mu Dx v2 + mu beta (Dxx v1 + (v1(N+1) - 2 v1(N) + v1(N-1))/hy^2) = H
      const double known = -spec.mu * v1(i, N - 1) / (2.0 * hy) + spec.mu * ops::dx(v2, g, i, N) +
                           spec.mu * spec.beta *
                               (ops::dxx(v1, g, i, N) + (-2.0 * v1(i, N) + v1(i, N - 1)) / (hy * hy));
      v1(i, N + 1) = (data.tangential_rhs(i) - known) / coef;
    }
  } else {
    ops::extrapolate_row(v1, N + 1, 1);
  }
  ops::extrapolate_row(v1, N + 2, 1);

  // Normal ghost from the discrete divergence at the interface.
  for (int i = 0; i < nx; ++i) v2(i, N + 1) = v2(i, N - 1) - 2.0 * hy * ops::dx(v1, g, i, N);
  ops::extrapolate_row(v2, N + 2, 1);
}

// ---------------------------------------------------------------------------

PressureSolver::PressureSolver(const Grid2D& g, const PressureBcSpec& spec) : g_(g), spec_(spec) {
  const bool neumann_top = spec.top == PressureTop::Neumann;
  const bool neumann_bottom = spec.bottom == PressureBottom::Neumann;
  if (neumann_top && neumann_bottom && !spec.mean_constraint)
    throw Error(ErrorKind::SolverSingular, "pure Neumann pressure problem needs a mean constraint");
  if (spec.top == PressureTop::Robin && !(spec.beta > 0.0))
    throw Error(ErrorKind::InvalidArgument, "Robin coefficient must be positive");

  const int nx = g.nx;
  const int ny = g.ny;
  const int n = nx * (ny + 1);
  const int size = n + (spec.mean_constraint ? 1 : 0);
  const double cx = 1.0 / (g.hx * g.hx);
  const double cy = 1.0 / (g.hy * g.hy);
  auto idx = [nx](int i, int j) { return j * nx + ((i % nx) + nx) % nx; };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(6 * n);
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int r = idx(i, j);
      if (j == 0 && !neumann_bottom) {
        trip.emplace_back(r, r, 1.0);
        continue;
      }
      trip.emplace_back(r, idx(i - 1, j), cx);
      trip.emplace_back(r, idx(i + 1, j), cx);
      trip.emplace_back(r, r, -2.0 * cx - 2.0 * cy);
      if (j > 0 && j < ny) {
        trip.emplace_back(r, idx(i, j - 1), cy);
        trip.emplace_back(r, idx(i, j + 1), cy);
      } else if (j == 0) {
        trip.emplace_back(r, idx(i, 1), 2.0 * cy);
      } else {
        trip.emplace_back(r, idx(i, ny - 1), 2.0 * cy);
        if (!neumann_top) trip.emplace_back(r, r, -2.0 / (spec.beta * g.hy));
      }
      if (spec.mean_constraint) trip.emplace_back(r, n, 1.0);
    }
  }
  if (spec.mean_constraint)
    for (int r = 0; r < n; ++r) trip.emplace_back(n, r, 1.0 / n);

  A_.resize(size, size);
  A_.setFromTriplets(trip.begin(), trip.end());
  A_.makeCompressed();
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(size);
    for (int k = 0; k < A_.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A_, k); it; ++it) rows(it.row()) += std::abs(it.value());
    norm_A_ = rows.maxCoeff();
  }

  lu_ = std::make_shared<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->analyzePattern(A_);
  lu_->factorize(A_);
  if (lu_->info() != Eigen::Success)
    throw Error(ErrorKind::SolverSingular, "pressure matrix factorization failed: " + lu_->lastErrorMessage());
}

Eigen::VectorXd PressureSolver::assemble_rhs(const PressureData& d) const {
  const int nx = g_.nx;
  const int ny = g_.ny;
  const int n = nx * (ny + 1);
  if (d.source.rows() != nx || d.source.cols() != ny + 1)
    throw Error(ErrorKind::InvalidArgument, "pressure source has wrong shape");
  if (d.top.size() != nx || d.bottom.size() != nx)
    throw Error(ErrorKind::InvalidArgument, "pressure boundary data has wrong length");
  Eigen::VectorXd b(A_.rows());
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i < nx; ++i) b(j * nx + i) = d.source(i, j);
  const double hy = g_.hy;
  for (int i = 0; i < nx; ++i) {
    // Bottom: p(-1) = p(1) - 2 hy q, or p = q.
    if (spec_.bottom == PressureBottom::Neumann)
      b(i) += 2.0 * d.bottom(i) / hy;
    else
      b(i) = d.bottom(i);
    const int r = ny * nx + i;
    if (spec_.top == PressureTop::Robin)
      b(r) -= 2.0 * d.top(i) / (spec_.beta * hy);
    else
      b(r) -= 2.0 * d.top(i) / hy;
  }
  if (spec_.mean_constraint) b(n) = d.mean;
  return b;
}

double PressureSolver::solve(const PressureData& data, GridField& p) const {
  const Eigen::VectorXd b = assemble_rhs(data);
  const Eigen::VectorXd x = lu_->solve(b);
  if (lu_->info() != Eigen::Success || !x.allFinite())
    throw Error(ErrorKind::SolverFailure, "pressure solve failed");
  const double res = (A_ * x - b).lpNorm<Eigen::Infinity>();
  const double scale = norm_A_ * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  last_residual_ = res;
  if (res > 1e-10 * scale)
    throw Error(ErrorKind::SolverFailure, "pressure residual " + std::to_string(res) + " exceeds tolerance");
  const int nx = g_.nx;
  for (int j = 0; j <= g_.ny; ++j)
    for (int i = 0; i < nx; ++i) p(i, j) = x(j * nx + i);
  fill_ghosts(data, p);
  return res;
}

void PressureSolver::fill_ghosts(const PressureData& d, GridField& p) const {
  const int N = g_.ny;
  const double hy = g_.hy;
  for (int i = 0; i < g_.nx; ++i) {
    if (spec_.top == PressureTop::Robin)
      p(i, N + 1) = p(i, N - 1) + (2.0 * hy / spec_.beta) * (d.top(i) - p(i, N));
    else
      p(i, N + 1) = p(i, N - 1) + 2.0 * hy * d.top(i);
    if (spec_.bottom == PressureBottom::Neumann) p(i, -1) = p(i, 1) - 2.0 * hy * d.bottom(i);
  }
  if (spec_.bottom == PressureBottom::Dirichlet) ops::extrapolate_row(p, -1, -1);
  ops::extrapolate_row(p, N + 2, 1);
  ops::extrapolate_row(p, -2, -1);
}

double pressure_solve(const Grid2D& g, const PressureBcSpec& spec, const PressureData& data, GridField& p) {
  return PressureSolver(g, spec).solve(data, p);
}

void write_field(const std::string& path, const GridField& f, const Grid2D& g, double t) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << std::setprecision(17);
  out << g.nx << ' ' << g.ny << ' ' << g.hx << ' ' << g.hy << ' ' << t << '\n';
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) out << (i ? "," : "") << f(i, j);
    out << '\n';
  }
}

}  // namespace ampfsi
