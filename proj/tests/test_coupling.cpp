#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ampfsi/coupling.hpp"

using namespace ampfsi;

namespace {

constexpr double kPi = 3.14159265358979323846;

RunConfig config(ProblemKind kind, double delta, Scheme scheme, int N = 10) {
  RunConfig c;
  c.problem = {kind};
  c.params = make_preset(delta, c.problem);
  c.N = N;
  c.scheme = scheme;
  return c;
}

template <typename F>
void fill(GridField& f, const Grid2D& g, F fn) {
  for (int j = -Grid2D::ghost; j <= g.ny + Grid2D::ghost; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = fn(g.x(i), j == g.ny ? 0.0 : -g.H + j * g.hy);
}

double state_max(const Stepper& s) {
  return std::max({s.fluid().v1.max_abs(), s.fluid().v2.max_abs(), s.fluid().p.max_abs(),
                   s.shell().u.abs().maxCoeff(), s.shell().v.abs().maxCoeff()});
}

}  // namespace

TEST_CASE("traction of a shear flow") {
  const PhysicalParams prm = make_preset(1.0, {ProblemKind::MP_V2});
  const Grid2D g = build_grid(prm, 8);
  GridField v1(g), v2(g), p(g);
  fill(v1, g, [](double, double y) { return y; });
  p.data().setConstant(3.0);
  const InterfaceArray s = compute_traction(v1, v2, p, g, 0.5);
  CHECK((s.row(0) - 0.5).abs().maxCoeff() <= 1e-13);
  CHECK((s.row(1) + 3.0).abs().maxCoeff() <= 1e-13);
  fill(v2, g, [](double, double y) { return 2 * y; });
  CHECK((compute_traction(v1, v2, p, g, 0.5).row(1) + 1.0).abs().maxCoeff() <= 1e-13);
}

TEST_CASE("interface right sides") {
  PhysicalParams prm = make_preset(1.0, {ProblemKind::MP_V2});
  prm.Kbar = 0.5;
  const Grid2D g = build_grid(prm, 8);
  GridField v1(g), v2(g), p(g);
  InterfaceArray u = InterfaceArray::Zero(2, g.nx);
  CHECK(amp_pressure_rhs(u, v1, v2, g, prm, prm.mu).abs().maxCoeff() == 0.0);
  CHECK(amp_tangential_rhs(u, p, g, prm).abs().maxCoeff() == 0.0);

  const double k = 2 * kPi;
  for (int i = 0; i < g.nx; ++i) u(1, i) = u(0, i) = std::cos(k * g.x(i));
  const double lam = shell_symbol(k, prm, g.hx);
  const Eigen::ArrayXd r = amp_pressure_rhs(u, v1, v2, g, prm, prm.mu);
  for (int i = 0; i < g.nx; ++i) CHECK(r(i) == doctest::Approx(lam * u(1, i)).epsilon(1e-12));

  // Quadratic v2 in y: r picks up 2 mu v2_y + beta nu v2_yy.
  fill(v2, g, [](double, double y) { return y * y + y; });
  u.setZero();
  prm.rhosh = 4.0;
  const Eigen::ArrayXd r2 = amp_pressure_rhs(u, v1, v2, g, prm, 0.2);
  CHECK(r2(3) == doctest::Approx(2 * prm.mu * 1.0 + 4.0 * 0.2 * 2.0).epsilon(1e-10));

  fill(p, g, [&](double x, double) { return std::sin(k * x); });
  const Eigen::ArrayXd H = amp_tangential_rhs(u, p, g, prm);
  const double s = std::sin(k * g.hx) / g.hx;
  for (int i = 0; i < g.nx; ++i) CHECK(H(i) == doctest::Approx(4.0 * s * std::cos(k * g.x(i))).epsilon(1e-12));
}

TEST_CASE("projection weights") {
  PhysicalParams prm = make_preset(1.0, {ProblemKind::MP_V2});
  CHECK(projection_weight(prm) == doctest::Approx(10.0 / 11.0));
  prm.rhosh = prm.rho * prm.hf;
  CHECK(projection_weight(prm) == doctest::Approx(0.5));
  const Eigen::ArrayXd a = Eigen::ArrayXd::Constant(4, 2.0), b = Eigen::ArrayXd::Constant(4, 4.0);
  CHECK((project_interface_velocity(a, b, prm) - 3.0).abs().maxCoeff() <= 1e-15);
  CHECK((project_interface_velocity(a, a, prm) - a).abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(project_interface_velocity(a, Eigen::ArrayXd(3), prm), Error);
}

TEST_CASE("time step selection") {
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 20);
  const Grid2D g = build_grid(c.params, c.N);
  const TimeStep ts = choose_time_step(c, g);
  CHECK(ts.steps * ts.dt == doctest::Approx(c.t_final).epsilon(1e-14));
  CHECK(ts.dt <= c.Ct * g.h() + 1e-15);
  CHECK(ts.dt <= c.Cv * c.params.rho * g.h() * g.h() / c.params.mu + 1e-15);
  c.dt_fixed = 0.05;
  const TimeStep f = choose_time_step(c, g);
  CHECK(f.dt == doctest::Approx(0.05));
  CHECK(f.steps == 10);
}

TEST_CASE("steppers need history") {
  for (Scheme s : {Scheme::AMP, Scheme::Traditional}) {
    const RunConfig c = config(ProblemKind::MP_V2, 1.0, s);
    Stepper st(c, build_grid(c.params, c.N));
    try {
      st.step(0.01);
      FAIL("expected StartupRequired");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::StartupRequired);
    }
  }
}

TEST_CASE("rest state stays at rest") {
  for (ProblemKind kind : {ProblemKind::MP_I1, ProblemKind::MP_V1, ProblemKind::MP_V2})
    for (Scheme s : {Scheme::AMP, Scheme::Traditional}) {
      const RunConfig c = config(kind, 1.0, s);
      Stepper st(c, build_grid(c.params, c.N));
      st.seed_from_current(0.01);
      for (int n = 0; n < 100; ++n) {
        const StepReport r = st.step(0.01);
        CHECK_FALSE(r.blowup);
      }
      CHECK(state_max(st) <= 1e-13);
      CHECK(st.fluid().t == doctest::Approx(1.0));
    }
}

TEST_CASE("projection leaves no interface mismatch") {
  for (ProblemKind kind : {ProblemKind::MP_I1, ProblemKind::MP_V1, ProblemKind::MP_V2}) {
    RunConfig c = config(kind, 1.0, Scheme::AMP, 16);
    const Grid2D g = build_grid(c.params, c.N);
    const TravelingWave w(c.params, c.problem, 2 * kPi, 0.1);
    Stepper st(c, g);
    const double dt = choose_time_step(c, g).dt;
    st.seed_from_exact(w, 0.0, dt);
    for (int n = 0; n < 10; ++n) {
      const StepReport r = st.step(dt);
      CHECK(r.mismatch_after <= 1e-14 * std::max(1.0, state_max(st)));
      CHECK(r.mismatch < 0.1 * std::max(r.v1_max, r.v2_max));
      CHECK(r.pressure_residual <= 1e-9 * std::max(1.0, r.p_max));
    }
    const int N = g.ny;
    for (int i = 0; i < g.nx; ++i) CHECK(std::abs(st.fluid().v2(i, N) - st.shell().v(1, i)) <= 1e-14);
  }
}

TEST_CASE("interface divergence vanishes after every step") {
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 16);
  const Grid2D g = build_grid(c.params, c.N);
  const TravelingWave w(c.params, c.problem, 2 * kPi, 0.1);
  Stepper st(c, g);
  const double dt = choose_time_step(c, g).dt;
  st.seed_from_exact(w, 0.0, dt);
  for (int n = 0; n < 5; ++n) {
    st.step(dt);
    CHECK(ops::max_divergence(st.fluid().v1, st.fluid().v2, g, g.ny, g.ny) <= 1e-12);
  }
}

TEST_CASE("manufactured data satisfies the discrete interface relations to truncation error") {
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP);
  c.use_mms = true;
  double prev = 0;
  for (int N : {20, 40}) {
    c.N = N;
    const Grid2D g = build_grid(c.params, N);
    const MmsSolution m(c.params, c.mms);
    Stepper st(c, g, &m);
    const double dt = choose_time_step(c, g).dt;
    st.seed_from_exact(m, 0.0, dt);
    st.step(dt);
    double e = 0;
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const FluidPoint f = m.fluid(g.x(i), g.y(j), dt);
        e = std::max({e, std::abs(st.fluid().v1(i, j) - f.v1), std::abs(st.fluid().v2(i, j) - f.v2)});
      }
    if (prev > 0) CHECK(prev / e > 3.0);
    prev = e;
  }
}

TEST_CASE("trapezoid coupling residual vanishes") {
  const PhysicalParams prm = make_preset(1.0, {ProblemKind::MP_V2});
  const Grid2D g = build_grid(prm, 12);
  GridField v1n(g), v2n(g), pn(g), v1p(g), v2p(g), out(g);
  const double k = 2 * kPi;
  fill(v1n, g, [&](double x, double y) { return std::cos(k * x) * std::exp(y); });
  fill(v2n, g, [&](double x, double y) { return std::sin(k * x) * y * y; });
  fill(pn, g, [&](double x, double y) { return std::cos(k * x) * (1 + y); });
  fill(v1p, g, [&](double x, double y) { return std::sin(k * x) * std::exp(2 * y); });
  fill(v2p, g, [&](double x, double y) { return std::cos(k * x) * y; });
  InterfaceArray un = InterfaceArray::Zero(2, g.nx), up = un;
  for (int i = 0; i < g.nx; ++i) un(1, i) = 0.1 * std::cos(k * g.x(i)), up(1, i) = 0.2 * std::sin(k * g.x(i));
  const double r = trapezoid_interface_residual(g, prm, v1n, v2n, pn, un, v1p, v2p, up, out);
  CHECK(r <= 1e-10 * std::max(1.0, out.max_abs()));
}

TEST_CASE("predictor-only AMP stays bounded for a viscous wave") {
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 16);
  c.corrector = false;
  const Grid2D g = build_grid(c.params, c.N);
  const TravelingWave w(c.params, c.problem, 2 * kPi, 0.1);
  Stepper st(c, g);
  const double dt = choose_time_step(c, g).dt;
  st.seed_from_exact(w, 0.0, dt);
  const double m0 = state_max(st);
  for (int n = 0; n < 400; ++n) CHECK_FALSE(st.step(dt).blowup);
  CHECK(state_max(st) <= 10 * m0);
}

TEST_CASE("heavy shell: both couplings track the same wave") {
  RunConfig a = config(ProblemKind::MP_V2, 1e3, Scheme::AMP, 16);
  RunConfig t = a;
  t.scheme = Scheme::Traditional;
  const Grid2D g = build_grid(a.params, a.N);
  const TravelingWave w(a.params, a.problem, 2 * kPi, 0.1);
  const double dt = choose_time_step(a, g).dt;
  Stepper sa(a, g), st(t, g);
  sa.seed_from_exact(w, 0.0, dt);
  st.seed_from_exact(w, 0.0, dt);
  for (int n = 0; n < 20; ++n) sa.step(dt), st.step(dt);
  const double diff = (sa.shell().u - st.shell().u).abs().maxCoeff();
  CHECK(diff <= 1e-2 * sa.shell().u.abs().maxCoeff());
}

TEST_CASE("report rows are comma separated") {
  std::ostringstream out;
  write_report_header(out);
  StepReport r;
  r.t = 0.5;
  r.blowup = true;
  write_report_row(out, r);
  const std::string s = out.str();
  CHECK(s.rfind("t,v1_max", 0) == 0);
  CHECK(s.find("0.5,0,0,0,0,0,0,0,0,1\n") != std::string::npos);
}
