#include "ampfsi/params.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace ampfsi {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, msg);
}

bool parse_bool(const std::string& s) {
  if (s == "on" || s == "true" || s == "1" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "0" || s == "no") return false;
  throw Error(ErrorKind::InvalidConfiguration, "not a boolean: " + s);
}

}  // namespace

void PhysicalParams::validate() const {
  require(rho > 0, "rho must be positive");
  require(mu >= 0, "mu must be non-negative");
  require(L > 0 && H > 0, "domain lengths must be positive");
  require(rhosh > 0, "shell mass per unit area must be positive");
  require(Kbar >= 0 && Tbar >= 0 && Bbar >= 0, "shell coefficients must be non-negative");
  require(hf > 0, "projection length hf must be positive");
}

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::MP_I1: return "MP-I1";
    case ProblemKind::MP_V1: return "MP-V1";
    case ProblemKind::MP_V2: return "MP-V2";
  }
  return "?";
}

ProblemKind parse_problem(std::string_view name) {
  std::string s;
  for (char c : name)
    if (c != '-' && c != '_') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (s == "MPI1") return ProblemKind::MP_I1;
  if (s == "MPV1") return ProblemKind::MP_V1;
  if (s == "MPV2") return ProblemKind::MP_V2;
  throw Error(ErrorKind::InvalidConfiguration, "unknown model problem: " + std::string(name));
}

std::string_view to_string(Scheme s) { return s == Scheme::AMP ? "AMP" : "TRADITIONAL"; }

PhysicalParams make_preset(double delta, const ModelProblem& problem) {
  require(delta > 0, "density ratio must be positive");
  PhysicalParams p;
  p.rho = 1.0;
  p.H = 1.0;
  p.L = 1.0;
  p.rhosh = delta * p.rho * p.H;
  p.Tbar = p.rhosh;
  p.Kbar = 0.0;
  p.Bbar = 0.0;
  p.hf = 10.0;
  p.mu = problem.viscous() ? 0.05 : 0.0;
  return p;
}

Grid2D build_grid(const PhysicalParams& params, int N) { return build_grid(params, N, N); }

Grid2D build_grid(const PhysicalParams& params, int nx, int ny) {
  require(nx >= 4 && ny >= 4, "grid needs at least 4 cells per direction");
  require(params.L > 0 && params.H > 0, "domain lengths must be positive");
  Grid2D g;
  g.nx = nx;
  g.ny = ny;
  g.L = params.L;
  g.H = params.H;
  g.hx = params.L / nx;
  g.hy = params.H / ny;
  return g;
}

double RunConfig::dissipation() const {
  if (d2 >= 0) return d2;
  return problem.kind == ProblemKind::MP_I1 ? 0.25 : 0.0;
}

void RunConfig::validate() const {
  params.validate();
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidConfiguration, m); };
  if (N < 4) bad("N must be at least 4");
  if (!(t_final > 0)) bad("t_final must be positive");
  if (dt_fixed && !(*dt_fixed > 0)) bad("dt must be positive");
  if (!(Ct > 0) || !(Cv > 0)) bad("time-step constants must be positive");
  if (Cd < 0) bad("divergence damping must be non-negative");
  if (problem.kind == ProblemKind::MP_I1 && params.mu != 0.0) bad("MP-I1 is inviscid: mu must be 0");
  if (problem.kind != ProblemKind::MP_I1 && params.mu <= 0.0)
    bad("viscous model problems need mu > 0");
  if (use_mms && problem.kind != ProblemKind::MP_V2) bad("manufactured solutions are provided for MP-V2 only");
  if (use_mms && scheme != Scheme::AMP) bad("manufactured solutions are provided for the AMP scheme only");
  if (wave.mode == 0) bad("traveling wave mode must be nonzero");
  if (wave.branch != 1 && wave.branch != -1) bad("branch must be +1 or -1");
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::InvalidConfiguration, e.what());
  }

  RunConfig c;
  try {
    if (auto s = tree.get_optional<std::string>("physics.problem")) c.problem.kind = parse_problem(*s);
    if (auto d = tree.get_optional<double>("physics.delta")) c.params = make_preset(*d, c.problem);
    c.params.rho = tree.get("physics.rho", c.params.rho);
    c.params.mu = tree.get("physics.mu", c.params.mu);
    c.params.L = tree.get("physics.L", c.params.L);
    c.params.H = tree.get("physics.H", c.params.H);
    c.params.rhosh = tree.get("physics.rhosh", c.params.rhosh);
    c.params.Kbar = tree.get("physics.Kbar", c.params.Kbar);
    c.params.Tbar = tree.get("physics.Tbar", c.params.Tbar);
    c.params.Bbar = tree.get("physics.Bbar", c.params.Bbar);
    c.params.hf = tree.get("physics.hf", c.params.hf);

    c.N = tree.get("grid.N", c.N);

    if (auto dt = tree.get_optional<double>("time.dt")) c.dt_fixed = *dt;
    c.Ct = tree.get("time.Ct", c.Ct);
    c.Cv = tree.get("time.Cv", c.Cv);
    c.t_final = tree.get("time.t_final", c.t_final);

    if (auto s = tree.get_optional<std::string>("scheme.scheme")) {
      if (*s == "AMP" || *s == "amp") c.scheme = Scheme::AMP;
      else if (*s == "TRADITIONAL" || *s == "traditional") c.scheme = Scheme::Traditional;
      else throw Error(ErrorKind::InvalidConfiguration, "unknown scheme: " + *s);
    }
    if (auto s = tree.get_optional<std::string>("scheme.corrector")) c.corrector = parse_bool(*s);
    c.d2 = tree.get("scheme.d2", c.d2);
    c.Cd = tree.get("scheme.Cd", c.Cd);
    c.blowup_bound = tree.get("scheme.blowup_bound", c.blowup_bound);

    auto source = tree.get("solution.source", std::string("tw"));
    if (source == "mms" || source == "MMS") c.use_mms = true;
    else if (source != "tw" && source != "TW") throw Error(ErrorKind::InvalidConfiguration, "unknown solution source: " + source);
    c.wave.mode = tree.get("solution.mode", c.wave.mode);
    c.wave.branch = tree.get("solution.branch", c.wave.branch);
    c.wave.umax = tree.get("solution.umax", c.wave.umax);
    c.mms.fx = tree.get("solution.fx", c.mms.fx);
    c.mms.ft = tree.get("solution.ft", c.mms.ft);
    c.mms.abar = tree.get("solution.abar", c.mms.abar);
    c.mms.bbar = tree.get("solution.bbar", c.mms.bbar);

    c.out_dir = tree.get("output.dir", c.out_dir);
    if (auto s = tree.get_optional<std::string>("output.dump_fields")) c.dump_fields = parse_bool(*s);
    c.dump_every = tree.get("output.dump_every", c.dump_every);
    if (auto s = tree.get_optional<std::string>("output.log_steps")) c.log_steps = parse_bool(*s);
  } catch (const pt::ptree_bad_data& e) {
    throw Error(ErrorKind::InvalidConfiguration, e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::InvalidConfiguration, "cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ampfsi
