#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ampfsi/harness.hpp"
#include "ampfsi/modes.hpp"

using namespace ampfsi;

namespace {

RunConfig config(ProblemKind kind, double delta, Scheme scheme, int N) {
  RunConfig c;
  c.problem = {kind};
  c.params = make_preset(delta, c.problem);
  c.N = N;
  c.scheme = scheme;
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("rate fit on synthetic data") {
  const std::vector<double> h{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> e;
  for (double x : h) e.push_back(3.7 * x * x);
  const RateFit f = fit_rate(h, e);
  CHECK(std::abs(f.zeta - 2.0) <= 1e-10);
  const RateFit g = fit_rate({0.1, 0.05, 0.025}, {4e-2, 1e-2, 2.5e-3});
  REQUIRE(g.ratios.size() == 2);
  CHECK(g.ratios[0] == doctest::Approx(4.0));
  CHECK(g.ratios[1] == doctest::Approx(4.0));
  CHECK(g.zeta == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_rate({0.1}, {1.0}), Error);
}

TEST_CASE("exact solution selection") {
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 10);
  auto w = make_exact(c);
  CHECK(dynamic_cast<TravelingWave*>(w.get()) != nullptr);
  CHECK(forcing_of(*w) == nullptr);
  c.use_mms = true;
  auto m = make_exact(c);
  CHECK(dynamic_cast<MmsSolution*>(m.get()) != nullptr);
  CHECK(forcing_of(*m) != nullptr);
}

TEST_CASE("errors vanish at the seeded state") {
  const RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 10);
  const Grid2D g = build_grid(c.params, c.N);
  auto w = make_exact(c);
  Stepper s(c, g);
  s.seed_from_exact(*w, 0.0, 0.01);
  const ErrorNorms e = measure_errors(s, *w);
  CHECK(e.v <= 1e-15);
  CHECK(e.p <= 1e-15);
  CHECK(e.ubar <= 1e-15);
  CHECK(e.vbar <= 1e-15);
}

TEST_CASE("small run writes its outputs and is deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "ampfsi_harness_test";
  std::filesystem::remove_all(dir);
  RunConfig c = config(ProblemKind::MP_V2, 1.0, Scheme::AMP, 10);
  c.t_final = 0.1;
  c.dump_fields = true;
  std::string first;
  for (int k = 0; k < 2; ++k) {
    c.out_dir = (dir / std::to_string(k)).string();
    const RunResult r = run(c, {true, true});
    CHECK_FALSE(r.blowup);
    CHECK(r.steps_taken == r.ts.steps);
    CHECK(r.t == doctest::Approx(0.1));
    CHECK(int(r.reports.size()) == r.steps_taken);
    CHECK(r.err.v < 0.1 * r.initial_norm);
    for (const char* f : {"steps.csv", "fields/v1_0.csv", "fields/p_0.csv"})
      CHECK(std::filesystem::exists(std::filesystem::path(c.out_dir) / f));
    const std::string s = slurp(c.out_dir + "/steps.csv");
    if (k == 0)
      first = s;
    else
      CHECK(s == first);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("convergence table and report") {
  RunConfig c = config(ProblemKind::MP_I1, 1.0, Scheme::AMP, 10);
  c.t_final = 0.1;
  const ConvergenceStudy st = converge(c, {10, 20});
  CHECK(st.all_stable);
  REQUIRE(st.v.ratios.size() == 1);
  CHECK(st.v.ratios[0] == doctest::Approx(st.runs[0].err.v / st.runs[1].err.v));
  const std::string t = format_table(st);
  std::ostringstream want;
  want << std::fixed << std::setprecision(2) << st.v.ratios[0];
  CHECK(t.find(want.str()) != std::string::npos);
  CHECK(t.find("rate") != std::string::npos);

  ConvergenceStudy bad = st;
  bad.v.ratios[0] *= 2;
  CHECK_THROWS_AS(format_table(bad), Error);

  const auto dir = (std::filesystem::temp_directory_path() / "ampfsi_conv_test").string();
  write_convergence(st, dir);
  const std::string csv = slurp(dir + "/report.csv");
  CHECK(csv.rfind("N,h,dt,steps,blowup,err_v", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("AMP becomes unstable well above its time-step bound") {
  RunConfig c = config(ProblemKind::MP_I1, 1.0, Scheme::AMP, 20);
  const Grid2D g = build_grid(c.params, c.N);
  const double kx = M_PI / g.h();
  const double bound = modes::amp_dt_max(c.params.rhosh, modes::shell_symbol(kx, 0.0, c.params.Tbar, 0.0),
                                         modes::added_mass(kx, c.params.H, c.params.rho));
  c.dt_fixed = 3.0 * bound;
  c.t_final = 2000 * *c.dt_fixed;
  c.blowup_bound = 1e3;
  CHECK(run(c).blowup);
  c.dt_fixed = 0.9 * bound;
  c.t_final = 200 * *c.dt_fixed;
  CHECK_FALSE(run(c).blowup);
}

TEST_CASE("scheme comparison runs both couplings") {
  RunConfig c = config(ProblemKind::MP_V2, 1e3, Scheme::AMP, 10);
  c.t_final = 0.05;
  const SchemeComparison s = compare_schemes(c);
  CHECK_FALSE(s.amp.blowup);
  CHECK_FALSE(s.traditional.blowup);
  CHECK(s.amp.err.v < 0.1 * s.amp.initial_norm);
}
