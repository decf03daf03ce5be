#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "ampfsi/params.hpp"

namespace ampfsi::modes {

/// Fourier-mode parameters for the inviscid model problem.
template <typename Real>
struct ModeParams {
  Real kx = 0;     // 2 pi k / L
  Real Lc = 0;     // Kbar + Tbar kx^2 + Bbar kx^4
  Real Ma = 0;     // added mass
  Real rhosh = 0;
  Real dt = 0;
};

enum class Verdict { WeaklyStable, Unstable, UnconditionallyUnstable, OutsideHypotheses };

std::string_view to_string(Verdict v);

template <typename Real>
struct ModeStabilityResult {
  std::vector<std::complex<Real>> roots;
  Real max_modulus = 0;
  Verdict verdict = Verdict::Unstable;
  /// Largest stable step; empty when no step is stable, +inf when unbounded.
  std::optional<Real> dt_max;
};

/// rho cosh(kx H) / (kx sinh(kx H)).
template <typename Real>
Real added_mass(Real kx, Real H, Real rho) {
  if (kx == Real(0)) throw Error(ErrorKind::DivergentMode, "added mass diverges for kx = 0");
  if (!(H > 0)) throw Error(ErrorKind::InvalidArgument, "added mass needs H > 0");
  using std::abs;
  using std::tanh;
  return rho / (abs(kx) * tanh(abs(kx) * H));
}

template <typename Real>
Real shell_symbol(Real kx, Real Kbar, Real Tbar, Real Bbar) {
  const Real k2 = kx * kx;
  return Kbar + Tbar * k2 + Bbar * k2 * k2;
}

/// Mode parameters for wavenumber kx under the given physical constants.
template <typename Real = double>
ModeParams<Real> make_mode(Real kx, const PhysicalParams& p, Real dt) {
  ModeParams<Real> m;
  m.kx = kx;
  m.Lc = shell_symbol<Real>(kx, p.Kbar, p.Tbar, p.Bbar);
  m.Ma = added_mass<Real>(kx, p.H, p.rho);
  m.rhosh = p.rhosh;
  m.dt = dt;
  return m;
}

/// Roots of a real polynomial with coefficients c[0] z^n + ... + c[n],
/// computed as eigenvalues of the companion matrix.
template <typename Real>
std::vector<std::complex<Real>> polynomial_roots(const std::vector<Real>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n < 1 || c.front() == Real(0)) throw Error(ErrorKind::InvalidArgument, "degenerate leading coefficient");
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  Mat comp = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) comp(0, j) = -c[j + 1] / c[0];
  for (int i = 1; i < n; ++i) comp(i, i - 1) = Real(1);
  Eigen::EigenSolver<Mat> es(comp, false);
  std::vector<std::complex<Real>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

/// Evaluates the polynomial c[0] z^n + ... + c[n].
template <typename Real>
std::complex<Real> polynomial_value(const std::vector<Real>& c, std::complex<Real> z) {
  std::complex<Real> acc = 0;
  for (const Real& ci : c) acc = acc * z + ci;
  return acc;
}

/// Coefficients of (rhosh/dt^2)(A-1)^2 A + Lc A^2 + (Ma/dt^2)(A-1)^2 in
/// descending powers of A.
template <typename Real>
std::vector<Real> traditional_polynomial(const ModeParams<Real>& m) {
  const Real a = m.rhosh / (m.dt * m.dt);
  const Real b = m.Ma / (m.dt * m.dt);
  // a (A^3 - 2A^2 + A) + Lc A^2 + b (A^2 - 2A + 1)
  return {a, -2 * a + m.Lc + b, a - 2 * b, b};
}

template <typename Real>
std::vector<std::complex<Real>> traditional_roots(const ModeParams<Real>& m) {
  if (!(m.dt > 0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  if (!(m.rhosh > 0)) throw Error(ErrorKind::InvalidArgument, "degenerate cubic: rhosh = 0");
  return polynomial_roots(traditional_polynomial(m));
}

/// B = rhosh kx sinh(kx H) / (rho cosh(kx H) + rhosh kx sinh(kx H)), which
/// equals rhosh / (rhosh + Ma).
template <typename Real>
Real amp_factor(Real kx, Real rhosh, Real H, Real rho) {
  using std::abs;
  using std::cosh;
  using std::sinh;
  const Real k = abs(kx);
  // Divide through by cosh to stay finite for large k H.
  const Real t = std::tanh(k * H);
  return rhosh * k * t / (rho + rhosh * k * t);
}

/// Roots of A^2 - 2(1 - b dt^2) A + 1 = 0, b = Lc B / (2 rhosh).
template <typename Real>
std::vector<std::complex<Real>> amp_roots(const ModeParams<Real>& m, Real H, Real rho) {
  if (!(m.dt > 0)) throw Error(ErrorKind::InvalidArgument, "time step must be positive");
  const Real B = amp_factor(m.kx, m.rhosh, H, rho);
  const Real b = m.Lc * B / (2 * m.rhosh);
  const Real c = 1 - b * m.dt * m.dt;
  const Real disc = c * c - 1;
  using C = std::complex<Real>;
  if (disc >= 0) {
    using std::sqrt;
    const Real s = sqrt(disc);
    // Stable evaluation: larger-magnitude root first, the other from the product.
    const Real r1 = c >= 0 ? c + s : c - s;
    return {C(r1), C(Real(1) / r1)};
  }
  using std::sqrt;
  const Real s = sqrt(-disc);
  return {C(c, s), C(c, -s)};
}

/// Weak-stability test: every root inside the closed unit disk, and roots on
/// the circle simple.
template <typename Real>
bool von_neumann_check(const std::vector<std::complex<Real>>& roots) {
  const Real tol_mod = Real(1e-12);
  const Real tol_circle = Real(1e-10);
  const Real tol_sep = Real(1e-8);
  for (const auto& r : roots)
    if (std::abs(r) > 1 + tol_mod) return false;
  for (size_t i = 0; i < roots.size(); ++i) {
    if (std::abs(std::abs(roots[i]) - 1) > tol_circle) continue;
    for (size_t j = 0; j < roots.size(); ++j)
      if (j != i && std::abs(roots[i] - roots[j]) <= tol_sep) return false;
  }
  return true;
}

template <typename Real>
Real max_modulus(const std::vector<std::complex<Real>>& roots) {
  Real m = 0;
  for (const auto& r : roots) m = std::max<Real>(m, std::abs(r));
  return m;
}

/// Closed-form stability of the traditional scheme: weakly stable iff
/// Ma < rhosh and dt^2 < 4 (rhosh - Ma) / Lc.
template <typename Real>
ModeStabilityResult<Real> traditional_stability(Real rhosh, Real Lc, Real Ma) {
  ModeStabilityResult<Real> r;
  if (!(Lc > 0) || !(rhosh > 0) || !(Ma > 0)) {
    r.verdict = Verdict::OutsideHypotheses;
    return r;
  }
  if (Ma >= rhosh) {
    r.verdict = Verdict::UnconditionallyUnstable;
    return r;
  }
  using std::sqrt;
  r.dt_max = 2 * sqrt((rhosh - Ma) / Lc);
  r.verdict = Verdict::WeaklyStable;
  return r;
}

/// Predicate form of the traditional-scheme theorem at a given dt.
template <typename Real>
bool traditional_stable(Real rhosh, Real Lc, Real Ma, Real dt) {
  const auto r = traditional_stability(rhosh, Lc, Ma);
  return r.verdict == Verdict::WeaklyStable && dt < *r.dt_max;
}

/// dt_max = 2 sqrt((rhosh + Ma) / Lc); unbounded when Lc = 0.
template <typename Real>
Real amp_dt_max(Real rhosh, Real Lc, Real Ma) {
  if (Lc <= 0) return std::numeric_limits<Real>::infinity();
  using std::sqrt;
  return 2 * sqrt((rhosh + Ma) / Lc);
}

/// Full root report for one mode and scheme.
template <typename Real>
ModeStabilityResult<Real> analyze(Scheme scheme, const ModeParams<Real>& m, Real H, Real rho) {
  ModeStabilityResult<Real> r;
  r.roots = scheme == Scheme::AMP ? amp_roots(m, H, rho) : traditional_roots(m);
  r.max_modulus = max_modulus(r.roots);
  const bool ok = von_neumann_check(r.roots);
  if (scheme == Scheme::AMP) {
    r.dt_max = amp_dt_max(m.rhosh, m.Lc, m.Ma);
    r.verdict = ok ? Verdict::WeaklyStable : Verdict::Unstable;
  } else {
    const auto th = traditional_stability(m.rhosh, m.Lc, m.Ma);
    r.dt_max = th.dt_max;
    r.verdict = ok ? Verdict::WeaklyStable
                   : (th.verdict == Verdict::UnconditionallyUnstable ? Verdict::UnconditionallyUnstable
                                                                     : Verdict::Unstable);
  }
  return r;
}

/// Evolves the scalar mode recursion for `steps` steps.
///
/// Traditional: rhosh D+D- eta^n = -Lc eta^n - Ma D+D- eta^{n-1}, needing
/// seeds (eta^0, eta^1, eta^2). AMP: rhosh D+D- eta^n = -Lc B eta^n, needing
/// (eta^0, eta^1). The returned series starts with the seeds.
template <typename Real>
std::vector<Real> mode_evolve(Scheme scheme, const ModeParams<Real>& m, Real H, Real rho, int steps,
                              const std::vector<Real>& seeds) {
  const size_t need = scheme == Scheme::AMP ? 2 : 3;
  if (seeds.size() != need) throw Error(ErrorKind::InvalidArgument, "wrong number of seed values");
  std::vector<Real> eta(seeds);
  eta.reserve(seeds.size() + steps);
  const Real dt2 = m.dt * m.dt;
  if (scheme == Scheme::AMP) {
    const Real B = amp_factor(m.kx, m.rhosh, H, rho);
    const Real c = 2 - dt2 * m.Lc * B / m.rhosh;
    for (int s = 0; s < steps; ++s) {
      const size_t n = eta.size() - 1;
      eta.push_back(c * eta[n] - eta[n - 1]);
    }
  } else {
    for (int s = 0; s < steps; ++s) {
      const size_t n = eta.size() - 1;
      const Real lag = eta[n] - 2 * eta[n - 1] + eta[n - 2];
      eta.push_back(2 * eta[n] - eta[n - 1] - (dt2 * m.Lc * eta[n] + m.Ma * lag) / m.rhosh);
    }
  }
  return eta;
}

}  // namespace ampfsi::modes
