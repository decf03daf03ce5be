#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "ampfsi/shell.hpp"

using namespace ampfsi;

namespace {

constexpr double kPi = 3.14159265358979323846;

PhysicalParams shell_params(double K, double T, double B) {
  PhysicalParams p;
  p.rhosh = 2.0;
  p.Kbar = K;
  p.Tbar = T;
  p.Bbar = B;
  return p;
}

Eigen::ArrayXd mode(int n, double k, double phase = 0.0) {
  Eigen::ArrayXd u(n);
  for (int i = 0; i < n; ++i) u(i) = std::cos(k * i / double(n) + phase);
  return u;
}

ShellState vertical_mode(int n, double k, double u0, double v0, double um, double vm) {
  ShellState s(n, false);
  const Eigen::ArrayXd c = mode(n, k);
  s.u.row(1) = u0 * c.transpose();
  s.v.row(1) = v0 * c.transpose();
  s.u_prev.row(1) = um * c.transpose();
  s.v_prev.row(1) = vm * c.transpose();
  s.has_history = true;
  return s;
}

}  // namespace

TEST_CASE("operator annihilates constants without a spring") {
  const PhysicalParams p = shell_params(0.0, 1.3, 0.4);
  const Eigen::ArrayXd u = Eigen::ArrayXd::Constant(16, 2.5);
  CHECK(shell_operator(u, p, 1.0 / 16).abs().maxCoeff() <= 1e-12);
  const PhysicalParams q = shell_params(0.7, 1.3, 0.0);
  CHECK((shell_operator(u, q, 1.0 / 16) + 0.7 * 2.5).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("operator reproduces its discrete symbol on Fourier modes") {
  const PhysicalParams p = shell_params(0.3, 1.1, 0.02);
  for (int n : {8, 20, 40})
    for (int m : {1, 2, 3}) {
      const double h = 1.0 / n, k = 2 * kPi * m;
      const Eigen::ArrayXd u = mode(n, k, 0.3);
      const Eigen::ArrayXd Lu = shell_operator(u, p, h);
      CHECK((Lu + shell_symbol(k, p, h) * u).abs().maxCoeff() <= 1e-10 * shell_symbol(k, p, h));
    }
}

TEST_CASE("discrete symbol approaches the continuous one at second order") {
  const PhysicalParams p = shell_params(0.0, 1.0, 0.0);
  const double k = 2 * kPi;
  double prev = 0;
  for (int n : {20, 40, 80}) {
    const double err = std::abs(shell_symbol(k, p, 1.0 / n) - k * k);
    if (n == 40) CHECK(err / (k * k) < 0.01);
    if (prev > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.01));
    prev = err;
  }
}

TEST_CASE("operator is linear and translation equivariant (property)") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const PhysicalParams p = shell_params(0.5, 1.2, 0.1);
  const int n = 24;
  const double h = 1.0 / n;
  for (int s = 0; s < 50; ++s) {
    Eigen::ArrayXd a(n), b(n);
    for (int i = 0; i < n; ++i) a(i) = U(rng), b(i) = U(rng);
    const double x = U(rng), y = U(rng);
    const Eigen::ArrayXd lhs = shell_operator(Eigen::ArrayXd(x * a + y * b), p, h);
    const Eigen::ArrayXd rhs = x * shell_operator(a, p, h) + y * shell_operator(b, p, h);
    CHECK((lhs - rhs).abs().maxCoeff() <= 1e-9);
    const int shift = s % n;
    Eigen::ArrayXd as(n);
    for (int i = 0; i < n; ++i) as(i) = a((i + shift) % n);
    const Eigen::ArrayXd La = shell_operator(a, p, h), Las = shell_operator(as, p, h);
    for (int i = 0; i < n; ++i) CHECK(Las(i) == doctest::Approx(La((i + shift) % n)).epsilon(1e-12));
  }
}

TEST_CASE("predictor and corrector on a resting shell") {
  const PhysicalParams p = shell_params(1.0, 1.0, 0.0);
  ShellState s(10, true);
  s.has_history = true;
  const InterfaceArray zero = InterfaceArray::Zero(2, 10);
  const ShellUpdate up = shell_predict(s, zero, {}, 0.1, p, 0.1);
  CHECK(up.u.abs().maxCoeff() == 0.0);
  CHECK(up.v.abs().maxCoeff() == 0.0);
  const ShellUpdate c = shell_correct(s, up, zero, zero, {}, {}, 0.1, p, 0.1);
  CHECK(c.u.abs().maxCoeff() == 0.0);

  // Uniform traction with no stiffness: v changes by -2 dt sigma / rhosh.
  const PhysicalParams q = shell_params(0.0, 0.0, 0.0);
  const InterfaceArray sig = InterfaceArray::Constant(2, 10, 0.5);
  const ShellUpdate f = shell_predict(s, sig, {}, 0.1, q, 0.1);
  CHECK((f.v + 2 * 0.1 * 0.5 / q.rhosh).abs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(shell_predict(s, InterfaceArray::Zero(2, 9), {}, 0.1, q, 0.1), Error);
}

TEST_CASE("predictor needs history") {
  ShellState s(8, true);
  const InterfaceArray zero = InterfaceArray::Zero(2, 8);
  try {
    shell_predict(s, zero, {}, 0.1, shell_params(1, 1, 0), 0.125);
    FAIL("expected StartupRequired");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StartupRequired);
  }
  CHECK_THROWS_AS(shell_leapfrog(s, zero, {}, 0.1, shell_params(1, 1, 0), 0.125), Error);
}

TEST_CASE("vertical-only shells keep the horizontal row at zero") {
  ShellState s(8, false);
  s.has_history = true;
  const InterfaceArray sig = InterfaceArray::Constant(2, 8, 1.0);
  const ShellUpdate up = shell_predict(s, sig, {}, 0.1, shell_params(1, 1, 0), 0.125);
  CHECK(up.u.row(0).abs().maxCoeff() == 0.0);
  CHECK(up.v.row(0).abs().maxCoeff() == 0.0);
  CHECK(up.v.row(1).abs().maxCoeff() > 0.0);
}

TEST_CASE("single-mode predictor-corrector matches a scalar recursion") {
  const PhysicalParams p = shell_params(0.4, 1.0, 0.0);
  const int n = 16;
  const double h = 1.0 / n, k = 2 * kPi * 2, dt = 0.01;
  const double lam = shell_symbol(k, p, h), r = p.rhosh;
  // Independent amplitude recursion.
  double u = 1.0, v = 0.2, um = 0.97, vm = 0.25;
  ShellState s = vertical_mode(n, k, u, v, um, vm);
  const InterfaceArray zero = InterfaceArray::Zero(2, n);
  for (int step = 0; step < 50; ++step) {
    const double up = um + 2 * dt * v;
    const double vp = vm - 2 * dt * lam * u / r;
    const double un = u + dt * 0.5 * (vp + v);
    const double vn = v - dt * lam * 0.5 * (up + u) / r;
    const ShellUpdate pred = shell_predict(s, zero, {}, dt, p, h);
    const ShellUpdate corr = shell_correct(s, pred, zero, zero, {}, {}, dt, p, h);
    shell_accept(s, corr, dt);
    um = u, vm = v, u = un, v = vn;
    CHECK((s.u.row(1).transpose() - u * mode(n, k)).abs().maxCoeff() <= 1e-12);
    CHECK((s.v.row(1).transpose() - v * mode(n, k)).abs().maxCoeff() <= 1e-12);
  }
  CHECK(s.t == doctest::Approx(50 * dt));
}

TEST_CASE("trapezoid solution is a fixed point of the corrector") {
  const PhysicalParams p = shell_params(0.4, 1.0, 0.0);
  const int n = 12;
  const double h = 1.0 / n, k = 2 * kPi, dt = 0.05;
  const double lam = shell_symbol(k, p, h), r = p.rhosh;
  Eigen::Matrix2d J;
  J << 0, 1, -lam / r, 0;
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Vector2d x0(0.8, -0.3);
  const Eigen::Vector2d x1 = (I - 0.5 * dt * J).lu().solve((I + 0.5 * dt * J) * x0);
  const ShellState s = vertical_mode(n, k, x0(0), x0(1), 0, 0);
  ShellUpdate pred;
  pred.u = InterfaceArray::Zero(2, n);
  pred.v = InterfaceArray::Zero(2, n);
  pred.u.row(1) = x1(0) * mode(n, k).transpose();
  pred.v.row(1) = x1(1) * mode(n, k).transpose();
  const InterfaceArray zero = InterfaceArray::Zero(2, n);
  const ShellUpdate c = shell_correct(s, pred, zero, zero, {}, {}, dt, p, h);
  CHECK((c.u - pred.u).abs().maxCoeff() <= 1e-14);
  CHECK((c.v - pred.v).abs().maxCoeff() <= 1e-14);
}

TEST_CASE("leap-frog is neutrally stable below its bound") {
  const PhysicalParams p = shell_params(0.0, 1.0, 0.0);
  const int n = 10;
  const double h = 1.0 / n, k = 2 * kPi * 5;
  const double lam = shell_symbol(k, p, h);
  const double bound = 2 * std::sqrt(p.rhosh / lam);
  const InterfaceArray zero = InterfaceArray::Zero(2, n);
  for (double f : {0.99, 1.01}) {
    const double dt = f * bound;
    ShellState s = vertical_mode(n, k, 1.0, 0.0, 1.0, 0.0);
    double peak = 0;
    for (int step = 0; step < 2000; ++step) {
      shell_accept(s, shell_leapfrog(s, zero, {}, dt, p, h), dt);
      peak = std::max(peak, s.u.abs().maxCoeff());
    }
    if (f < 1)
      CHECK(peak < 100.0);
    else
      CHECK(peak > 1e6);
  }
}

TEST_CASE("accept shifts the levels") {
  ShellState s(4, true);
  ShellUpdate up;
  up.u = InterfaceArray::Constant(2, 4, 1.0);
  up.v = InterfaceArray::Constant(2, 4, 2.0);
  shell_accept(s, up, 0.5);
  CHECK(s.has_history);
  CHECK(s.u_prev.abs().maxCoeff() == 0.0);
  CHECK(s.v(1, 3) == 2.0);
  CHECK(s.t == 0.5);
}
