#include "scalarfield/cli_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>

#include "scalarfield/errors.hpp"
#include "scalarfield/functional.hpp"
#include "scalarfield/minimax.hpp"
#include "scalarfield/profile.hpp"
#include "scalarfield/radial_oracle.hpp"
#include "scalarfield/testmaps.hpp"

namespace scalarfield {

namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorKind::ConfigError, what); }

double parse_number(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    config_error(key + ": not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) config_error(key + ": not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)));
  return out;
}

}  // namespace

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.values = {
      {"problem.N", "3"},
      {"problem.M", "0"},
      {"problem.class", "radial"},
      {"problem.nonlinearity", "cubic"},
      {"grid.extent", "20"},
      {"grid.h", "0.05"},
      {"solver.stages", "8"},
      {"solver.tol", "1e-3"},
      {"solver.tol_first", "1e-2"},
      {"solver.max_iter", "5000"},
      {"solver.nodes", "21"},
      {"solver.seed", "42"},
      {"solver.n_rho", "20"},
      {"solver.n_half", "8"},
      {"task.command", ""},
      {"task.k", "1"},
      {"task.R", "0"},
      {"task.input", ""},
      {"task.directions", "64"},
      {"output.dir", "out"},
  };
  return c;
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig c = defaults();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') config_error("line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    c.set(key, trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) config_error("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void RunConfig::set(const std::string& key, const std::string& value) {
  auto it = values.find(key);
  if (it == values.end()) config_error("unknown key '" + key + "'");
  it->second = value;
}

void RunConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("expected key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& RunConfig::str(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end()) config_error("unknown key '" + key + "'");
  return it->second;
}

double RunConfig::num(const std::string& key) const { return parse_number(key, str(key)); }

int RunConfig::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) config_error(key + ": expected an integer");
  return static_cast<int>(v);
}

SymmetryClass RunConfig::symmetry_class() const {
  const std::string& c = str("problem.class");
  const int N = integer("problem.N");
  const int M = integer("problem.M");
  if (c == "radial") return SymmetryClass::radial(N);
  if (c == "o1tau") return SymmetryClass::o1tau(N, M);
  if (c == "o2tau") return SymmetryClass::o2tau(N, M);
  if (c == "line") return SymmetryClass::line();
  config_error("problem.class: expected radial, o1tau, o2tau or line");
}

NonlinearityModel RunConfig::model() const {
  const std::string& desc = str("problem.nonlinearity");
  const int N = str("problem.class") == "line" ? 1 : integer("problem.N");
  if (desc == "cubic") return NonlinearityModel::cubic(N);
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  const std::vector<double> p =
      colon == std::string::npos ? std::vector<double>{} : parse_list("problem.nonlinearity", desc.substr(colon + 1));
  if (name == "power" && p.size() == 3) return NonlinearityModel::power(p[0], p[1], p[2], N);
  if (name == "cubic_quintic" && p.size() == 3) return NonlinearityModel::cubic_quintic(p[0], p[1], p[2], N);
  config_error("problem.nonlinearity: expected cubic, power:a,b,p or cubic_quintic:a,b,c");
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"check-nonlinearity", "solve-radial", "solve-radial-excited",
                                               "solve-nonradial",    "testmaps",     "decompose",
                                               "oracle",             "compare",      "verify"};
  return names;
}

void RunConfig::validate() const {
  const std::string& cmd = str("task.command");
  if (std::find(command_names().begin(), command_names().end(), cmd) == command_names().end())
    config_error("unknown command '" + cmd + "'");
  const SymmetryClass cls = symmetry_class();
  (void)model();
  if (cls.kind != ClassKind::Line && cls.N < 1) config_error("problem.N must be >= 1");
  if (cls.antisymmetric()) {
    if (cls.M < 1 || cls.N - 2 * cls.M < 0) config_error("tau classes need M >= 1 and N - 2M >= 0");
    if (cls.kind == ClassKind::O2Tau && cls.N - 2 * cls.M == 1) config_error("o2tau needs N - 2M != 1; use o1tau");
    if (cls.kind == ClassKind::O1Tau && cls.N - 2 * cls.M != 1) config_error("o1tau needs N - 2M == 1");
  }
  const double extent = num("grid.extent");
  const double h = num("grid.h");
  if (!(h > 0.0) || !(extent > 0.0)) config_error("grid.extent and grid.h must be positive");
  const double cells = extent / h;
  if (std::abs(cells - std::round(cells)) > 1e-9 * cells) config_error("grid.extent must be a multiple of grid.h");
  if (integer("solver.stages") < 1) config_error("solver.stages must be >= 1");
  if (!(num("solver.tol") > 0.0) || !(num("solver.tol_first") >= num("solver.tol")))
    config_error("need 0 < solver.tol <= solver.tol_first");
  if (integer("solver.max_iter") < 1) config_error("solver.max_iter must be >= 1");
  if (integer("solver.nodes") < 3) config_error("solver.nodes must be >= 3");
  if (integer("solver.n_rho") < 2) config_error("solver.n_rho must be >= 2");
  if (integer("solver.n_half") < 1) config_error("solver.n_half must be >= 1");
  if (num("solver.seed") < 0) config_error("solver.seed must be >= 0");
  const int k = integer("task.k");
  if (cmd == "solve-radial-excited") {
    if (k < 1 || k > 2) config_error("solve-radial-excited supports task.k = 1 or 2");
    if (cls.kind != ClassKind::Radial) config_error("solve-radial-excited needs problem.class = radial");
  }
  if ((cmd == "solve-radial" || cmd == "compare") && cls.kind != ClassKind::Radial)
    config_error(cmd + " needs problem.class = radial");
  if (cmd == "solve-nonradial" && !cls.antisymmetric()) config_error("solve-nonradial needs o1tau or o2tau");
  if (cmd == "oracle" && (k < 0 || cls.kind != ClassKind::Radial)) config_error("oracle needs radial class, task.k >= 0");
  if (cmd == "testmaps") {
    if (k < 1) config_error("testmaps needs task.k >= 1");
    const double R = num("task.R");
    if (R < 0.0) config_error("task.R must be >= 0 (0 selects R(k))");
    if (cls.antisymmetric() && R > 0.0 && extent < R * R + R + 1.0)
      config_error("pi_k needs grid.extent >= R^2 + R + 1");
    if (integer("task.directions") < 1) config_error("task.directions must be >= 1");
  }
  if ((cmd == "decompose" || cmd == "verify") && str("task.input").empty())
    config_error(cmd + " needs task.input");
}

void write_curves(const std::vector<Curve>& curves, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
  out << "x,y,series\n" << std::setprecision(17);
  for (const Curve& c : curves)
    for (const auto& [x, y] : c.points) out << x << ',' << y << ',' << c.series << '\n';
}

namespace {

struct Outcome {
  json report;
  std::vector<Curve> curves;
  int code = 0;
};

SplitScheme scheme_of(const RunConfig& c) { return make_scheme(std::make_shared<NonlinearityModel>(c.model())); }

GridPtr grid_of(const RunConfig& c) { return build_grid(c.symmetry_class(), c.num("grid.extent"), c.num("grid.h")); }

DescentOptions descent_of(const RunConfig& c) {
  DescentOptions d;
  d.max_iter = c.integer("solver.max_iter");
  d.tol = c.num("solver.tol");
  return d;
}

ContinuationOptions continuation_of(const RunConfig& c) {
  ContinuationOptions o;
  o.descent = descent_of(c);
  o.n_nodes = c.integer("solver.nodes");
  o.throw_on_violation = false;
  return o;
}

ContinuationSchedule schedule_of(const RunConfig& c, const SplitScheme& s) {
  return ContinuationSchedule::geometric(s, c.integer("solver.stages"), c.num("solver.tol_first"), c.num("solver.tol"));
}

json to_json(const ClassifyResult& r) {
  return {{"kind", to_string(r.kind)},
          {"J", r.J},
          {"norm_h1", r.norm_h1},
          {"gradient_residual", r.gradient_residual},
          {"weighted_residual", r.weighted_residual},
          {"pohozaev_residual", r.pohozaev_residual}};
}

json to_json(const StageRecord& s) {
  return {{"lambda", s.lambda},
          {"level", s.level},
          {"gradient_residual", s.gradient_residual},
          {"pohozaev_residual", s.pohozaev_residual},
          {"iterations", s.iterations},
          {"status", to_string(s.status)},
          {"refined", s.refined}};
}

json to_json(const SolveReport& r) {
  json stages = json::array();
  for (const auto& s : r.stages) stages.push_back(to_json(s));
  return {{"stages", stages},
          {"final_classification", to_json(r.final_classification)},
          {"monotone", r.monotone},
          {"monotone_tol", r.monotone_tol},
          {"wall_time", r.wall_time}};
}

Curve level_curve(const SolveReport& r, const std::string& series) {
  Curve c{series, {}};
  for (const auto& s : r.stages) c.points.emplace_back(s.lambda, s.level);
  return c;
}

Curve path_curve(const StageRecord& s, const std::string& series) {
  Curve c{series, {}};
  for (std::size_t j = 0; j < s.path_energies.size(); ++j) c.points.emplace_back(s.path.t[j], s.path_energies[j]);
  return c;
}

Curve dilation_of(const Field& u, const SplitScheme& scheme, const std::string& series) {
  std::vector<double> ts;
  for (int j = 1; j <= 120; ++j) ts.push_back(0.025 * j);
  return {series, dilation_curve(u, scheme, 1.0, ts)};
}

bool critical(const SolveReport& r) { return r.final_classification.kind == Classification::CriticalCandidate; }

Outcome check_nonlinearity(const RunConfig& c) {
  Outcome o;
  const NonlinearityModel model = c.model();
  const BLReport bl = validate_BL(model);
  json conds = json::array();
  for (const auto& r : bl.conditions) conds.push_back({{"name", r.name}, {"passed", r.passed}, {"evidence", r.evidence}});
  o.report["conditions"] = conds;
  o.report["all_passed"] = bl.all_passed();
  Curve f{"f", {}}, F{"F", {}};
  for (int j = 0; j <= 400; ++j) {
    const double t = 0.01 * j;
    f.points.emplace_back(t, model.f(t));
    F.points.emplace_back(t, model.F(t));
  }
  o.curves = {f, F};
  if (bl.all_passed()) {
    const SplitScheme s = scheme_of(c);
    o.report["split"] = {{"mu", s.mu()}, {"zeta", s.zeta()}, {"lambda0", s.lambda0()}};
    Curve f1{"f1", {}}, f2{"f2", {}};
    for (int j = 0; j <= 400; ++j) {
      const double t = 0.01 * j;
      f1.points.emplace_back(t, s.f1(t));
      f2.points.emplace_back(t, s.f2(t));
    }
    o.curves.push_back(f1);
    o.curves.push_back(f2);
  }
  o.code = bl.all_passed() ? 0 : 1;
  return o;
}

Outcome solve_radial(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const GridPtr g = grid_of(c);
  const ContinuationSchedule sched = schedule_of(c, s);
  const Path seed = pohozaev_scaling_path(default_seed(g, s), s, sched.lambdas.front(), c.integer("solver.nodes"));
  const SolveReport rep = continuation_solve(s, sched, seed, continuation_of(c));
  o.report = to_json(rep);
  o.report["c_mp"] = rep.final_stage().level;
  o.curves = {level_curve(rep, "level"), path_curve(rep.final_stage(), "path_energy")};
  if (rep.final_stage().candidate) {
    write_field_csv(*rep.final_stage().candidate, dir / "candidate.csv");
    o.curves.push_back(dilation_of(*rep.final_stage().candidate, s, "dilation"));
  }
  o.code = critical(rep) ? 0 : 1;
  return o;
}

Outcome solve_radial_excited(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const GridPtr g = grid_of(c);
  const int k = c.integer("task.k");
  SymmetricOptions so;
  so.descent = descent_of(c);
  so.n_rho = c.integer("solver.n_rho");
  so.n_half = c.integer("solver.n_half");
  const DiskBoundary b = build_gamma0k_radial(k, s, g, disk_directions(k, so.n_half));
  const SymmetricResult res = symmetric_minimax_solve(s, 1.0, b, so);
  o.report["k"] = k;
  o.report["boundary"] = {{"R", b.R}, {"t", b.t}, {"energies", b.energies}};
  o.report["stage"] = to_json(res.stage);
  o.report["level"] = res.stage.level;
  Curve top{"max_energy_by_rho", {}};
  for (std::size_t i = 0; i < res.map.energies.size(); ++i)
    top.points.emplace_back(res.map.rho[i], *std::max_element(res.map.energies[i].begin(), res.map.energies[i].end()));
  o.curves = {top};
  bool ok = false;
  if (res.stage.candidate) {
    const ClassifyResult cr = classify(*res.stage.candidate, s, 1.0);
    o.report["classification"] = to_json(cr);
    write_field_csv(*res.stage.candidate, dir / "candidate.csv");
    ok = cr.kind == Classification::CriticalCandidate;
  }
  o.code = ok ? 0 : 1;
  return o;
}

Outcome solve_nonradial(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const SymmetryClass cls = c.symmetry_class();
  NonradialOptions no;
  no.extent = c.num("grid.extent");
  no.h = c.num("grid.h");
  no.continuation = continuation_of(c);
  no.schedule_stages = c.integer("solver.stages");
  const NonradialReport r = nonradial_solve(s, cls.N, cls.M, no);
  o.report["nonradial"] = to_json(r.nonradial);
  o.report["radial"] = to_json(r.radial);
  o.report["c_mp"] = r.c_mp;
  o.report["J_v"] = r.J_v;
  o.report["margin"] = r.margin;
  o.report["antisymmetric"] = r.antisymmetric;
  o.report["sign_change"] = {
      {"sign_changing", r.sign_changing}, {"sup_positive", r.sup_positive}, {"sup_negative", r.sup_negative}};
  o.report["half_J_ratio"] = r.half_J_ratio;
  o.report["half_pohozaev_rel"] = r.half_pohozaev_rel;
  std::ostringstream line;
  line << "J(v) = " << r.J_v << (r.margin > 0.0 ? " > " : " <= ") << "2 c_mp = " << 2.0 * r.c_mp
       << " (margin " << r.margin << ")";
  o.report["comparison"] = line.str();
  std::cout << line.str() << '\n';
  if (r.nonradial.final_stage().candidate) write_field_csv(*r.nonradial.final_stage().candidate, dir / "candidate.csv");
  if (r.radial.final_stage().candidate)
    write_field_csv(*r.radial.final_stage().candidate, dir / "radial_candidate.csv");
  o.curves = {level_curve(r.nonradial, "nonradial_level"), level_curve(r.radial, "radial_level")};
  o.code = critical(r.nonradial) && r.antisymmetric && r.sign_changing && r.margin > 0.0 ? 0 : 1;
  return o;
}

}  // namespace

namespace {

Outcome testmaps(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const SymmetryClass cls = c.symmetry_class();
  const int k = c.integer("task.k");
  const auto seed = static_cast<std::uint64_t>(c.num("solver.seed"));
  const auto dirs = sample_directions(k, c.integer("task.directions"), seed);
  double R = c.num("task.R");
  if (R <= 0.0) {
    if (cls.antisymmetric()) {
      ChooseROptions co;
      co.seed = seed;
      R = choose_R_k(k, s, cls, co).R;
    } else {
      R = 4.0 * k;
    }
  }
  o.report["k"] = k;
  o.report["R"] = R;
  int members = 0;
  double odd_err = 0.0;
  json rejects = json::array();
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    const PiecewiseAffineProfile u = build_U_k_unchecked(k, R, dirs[d]);
    const MembershipReport m = check_membership(u);
    if (m.member) {
      ++members;
    } else {
      rejects.push_back({{"direction", d}, {"reason", m.reason}});
    }
    std::vector<double> neg(dirs[d].size());
    std::transform(dirs[d].begin(), dirs[d].end(), neg.begin(), [](double x) { return -x; });
    const PiecewiseAffineProfile v = build_U_k_unchecked(k, R, neg);
    for (int j = 0; j <= 400; ++j) {
      const double r = R * j / 400.0;
      odd_err = std::max(odd_err, std::abs(u(r) + v(r)));
    }
    if (d < 4) {
      Curve curve{"U_dir" + std::to_string(d), {}};
      for (int j = 0; j <= 200; ++j) curve.points.emplace_back(R * j / 200.0, u(R * j / 200.0));
      o.curves.push_back(curve);
    }
  }
  o.report["directions"] = dirs.size();
  o.report["members"] = members;
  o.report["membership_failures"] = rejects;
  o.report["oddness_error"] = odd_err;
  bool ok = members == static_cast<int>(dirs.size()) && odd_err == 0.0;
  if (cls.antisymmetric()) {
    double min_at_R = std::numeric_limits<double>::infinity();
    double min_at_quarter = std::numeric_limits<double>::infinity();
    Curve at_R{"integral_at_R", {}}, at_quarter{"integral_at_R_over_4", {}};
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const double a = lower_bound_integral(k, R, dirs[d], s, cls, {}, true);
      const double b = lower_bound_integral(k, R / 4.0, dirs[d], s, cls, {}, true);
      min_at_R = std::min(min_at_R, a);
      min_at_quarter = std::min(min_at_quarter, b);
      at_R.points.emplace_back(static_cast<double>(d), a);
      at_quarter.points.emplace_back(static_cast<double>(d), b);
    }
    o.curves.push_back(at_R);
    o.curves.push_back(at_quarter);
    o.report["integral_min_at_R"] = min_at_R;
    o.report["integral_min_at_R_over_4"] = min_at_quarter;
    ok = ok && min_at_R >= 1.0 && min_at_quarter < 1.0;
    const GridPtr g = grid_of(c);
    if (c.num("grid.extent") >= R * R + R + 1.0) {
      const Field pi = build_pi_k(k, R, dirs.front(), s.zeta(), g, true);
      const double anti = (project_tau(pi).values() - pi.values()).cwiseAbs().maxCoeff();
      o.report["pi_k"] = {{"antisymmetry_error", anti}, {"J_lambda0", J(pi, s, s.lambda0())}};
      write_field_csv(pi, dir / "pi_k.csv");
      ok = ok && anti == 0.0;
    } else {
      o.report["pi_k"] = "skipped: grid.extent < R^2 + R + 1";
    }
  }
  o.code = ok ? 0 : 1;
  return o;
}

Outcome decompose_cmd(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const GridPtr g = grid_of(c);
  const FieldSequence seq = read_sequence(g, c.str("task.input"));
  const ProfileDecomposition dec = decompose(seq, s);
  const VerifyReport v = verify_decomposition(seq, dec, s);
  const int ax = translation_axis(*g);
  const double h = ax < 0 ? 0.0 : g->axis(static_cast<std::size_t>(ax)).h;
  json centers = json::array();
  for (const auto& y : dec.centers) centers.push_back(h * static_cast<double>(y.back()));
  o.report["l"] = dec.l;
  o.report["members"] = seq.size();
  o.report["energies"] = dec.energies;
  o.report["centers_last"] = centers;
  o.report["reached_vanishing"] = dec.reached_vanishing;
  o.report["vanish_threshold"] = dec.vanish_threshold;
  o.report["rho_floor"] = dec.rho_floor;
  o.report["l_cap"] = dec.l_cap;
  o.report["verify"] = {{"passed", v.passed},
                        {"centers_ok", v.centers_ok},
                        {"profiles_ok", v.profiles_ok},
                        {"energy_ok", v.energy_ok},
                        {"residual_ok", v.residual_ok},
                        {"energy_residual", v.energy_residual},
                        {"tail_residual", v.tail_residual},
                        {"min_separation", v.min_separation},
                        {"profile_gradients", v.profile_gradients},
                        {"norm_budget_excess", v.norm_budget_excess},
                        {"failures", v.failures}};
  for (std::size_t k = 0; k < dec.profiles.size(); ++k)
    write_field_csv(dec.profiles[k], dir / ("profile_" + std::to_string(k + 1) + ".csv"));
  Curve norms{"residual_norm", {}};
  for (std::size_t n = 0; n < dec.residual_norms.size(); ++n)
    norms.points.emplace_back(static_cast<double>(n + 1), dec.residual_norms[n]);
  o.curves = {norms};
  o.code = v.passed ? 0 : 1;
  return o;
}

Outcome oracle_cmd(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const NonlinearityModel model = c.model();
  const int N = c.integer("problem.N");
  const int nodes = std::max(0, c.integer("task.k") - 1);
  const ShootingResult r = bound_state(model, N, nodes);
  o.report = {{"alpha", r.alpha},   {"nodes", r.nodes}, {"decay_verified", r.decay_verified},
              {"r_last", r.r_last}, {"J", r.J},         {"P", r.P},
              {"grad2", r.grad2}};
  Curve profile{"profile", {}};
  for (std::size_t i = 0; i < r.profile.r.size(); i += 10) profile.points.emplace_back(r.profile.r[i], r.profile.u[i]);
  o.curves = {profile};
  write_field_csv(oracle_field(r, grid_of(c)), dir / "oracle.csv");
  o.code = r.decay_verified ? 0 : 1;
  return o;
}

Outcome compare_cmd(const RunConfig& c, const std::filesystem::path& dir) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const GridPtr g = grid_of(c);
  const Path seed = pohozaev_scaling_path(default_seed(g, s), s, 1.0, c.integer("solver.nodes"));
  const StageRecord mp = mountain_pass_solve(s, 1.0, seed, descent_of(c));
  const PohozaevResult pm = pohozaev_minimize(s, 1.0, generic_radial_seeds(g));
  const ShootingResult orc = ground_state(c.model(), c.integer("problem.N"));
  const double levels[3] = {mp.level, pm.level, orc.J};
  const char* names[3] = {"minimax", "pohozaev", "oracle"};
  json gaps;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double gap = std::abs(levels[i] - levels[j]) / std::min(std::abs(levels[i]), std::abs(levels[j]));
      gaps[std::string(names[i]) + "_vs_" + names[j]] = gap;
      worst = std::max(worst, gap);
    }
  o.report = {{"minimax", mp.level},
              {"pohozaev", pm.level},
              {"oracle", orc.J},
              {"relative_gaps", gaps},
              {"max_gap", worst},
              {"minimax_status", to_string(mp.status)}};
  std::ofstream table(dir / "table.csv");
  table << std::setprecision(12) << "minimax,pohozaev,oracle\n" << mp.level << ',' << pm.level << ',' << orc.J << '\n';
  o.curves = {path_curve(mp, "minimax_path")};
  o.code = worst <= 1e-2 && mp.status == StageStatus::Converged ? 0 : 1;
  return o;
}

Outcome verify_cmd(const RunConfig& c) {
  Outcome o;
  const SplitScheme s = scheme_of(c);
  const Field u = read_field_csv(grid_of(c), c.str("task.input"));
  const ClassifyResult r = classify(u, s, 1.0);
  const EnergyBreakdown e = energy(u, s, 1.0);
  o.report = to_json(r);
  o.report["P"] = e.P_lambda;
  o.report["kinetic"] = e.kinetic;
  o.code = r.kind == Classification::CriticalCandidate ? 0 : 1;
  return o;
}

json provenance(const RunConfig& c) {
  const char* threads = std::getenv("SCALARFIELD_THREADS");
  return {{"tool", "scalarfield"},
          {"version", "0.1.0"},
          {"command", c.str("task.command")},
          {"config", c.values},
          {"seed", c.str("solver.seed")},
          {"threads", threads ? json(threads) : json(nullptr)},
          {"compiler", __VERSION__},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}};
}

void write_json(const json& j, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + file.string());
  out << j.dump(2) << '\n';
}

}  // namespace

int run(const RunConfig& config) {
  try {
    config.validate();
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  const std::filesystem::path dir = config.output_dir();
  try {
    std::filesystem::create_directories(dir);
    write_json(provenance(config), dir / "provenance.json");
    const std::string& cmd = config.str("task.command");
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    if (cmd == "check-nonlinearity") o = check_nonlinearity(config);
    else if (cmd == "solve-radial") o = solve_radial(config, dir);
    else if (cmd == "solve-radial-excited") o = solve_radial_excited(config, dir);
    else if (cmd == "solve-nonradial") o = solve_nonradial(config, dir);
    else if (cmd == "testmaps") o = testmaps(config, dir);
    else if (cmd == "decompose") o = decompose_cmd(config, dir);
    else if (cmd == "oracle") o = oracle_cmd(config, dir);
    else if (cmd == "compare") o = compare_cmd(config, dir);
    else o = verify_cmd(config);
    o.report["command"] = cmd;
    o.report["exit_code"] = o.code;
    o.report["elapsed_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(o.report, dir / "report.json");
    write_curves(o.curves, dir / "curves.csv");
    return o.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const int code = e.kind() == ErrorKind::ConfigError ? 2 : 1;
    write_json({{"command", config.str("task.command")}, {"error", std::string(to_string(e.kind()))},
                {"message", e.what()}, {"exit_code", code}},
               dir / "report.json");
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    write_json({{"command", config.str("task.command")}, {"error", "exception"}, {"message", e.what()}, {"exit_code", 1}},
               dir / "report.json");
    return 1;
  }
}

}  // namespace scalarfield
