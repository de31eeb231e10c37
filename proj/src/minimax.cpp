#include "scalarfield/minimax.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

std::string to_string(StageStatus s) {
  switch (s) {
    case StageStatus::Converged: return "converged";
    case StageStatus::IterationCap: return "iteration_cap";
    case StageStatus::NoDescent: return "no_descent";
  }
  return "unknown";
}

bool is_unimodal(const std::vector<double>& energies, double tol) {
  if (energies.size() < 3) return true;
  const auto top = std::max_element(energies.begin(), energies.end());
  const double slack = tol * std::max(1.0, std::abs(*top));
  const auto m = static_cast<std::size_t>(top - energies.begin());
  for (std::size_t i = 1; i <= m; ++i)
    if (energies[i] < energies[i - 1] - slack) return false;
  for (std::size_t i = m + 1; i < energies.size(); ++i)
    if (energies[i] > energies[i - 1] + slack) return false;
  return true;
}

Field DiskMap::at(int i, int j) const {
  const int period = 2 * n_half;
  int jj = ((j % period) + period) % period;
  if (jj < n_half) return samples[i][jj];
  return -1.0 * samples[i][jj - n_half];
}

namespace {

double pohozaev_rel(const Field& u, const SplitScheme& scheme, double lambda) {
  const double g2 = dirichlet_energy(u);
  return g2 > 0.0 ? std::abs(pohozaev(u, scheme, lambda)) / g2 : 0.0;
}

Path path_through(const Field& w, const SplitScheme& scheme, double lambda, int n_nodes) {
  for (double L = 2.0; L <= 64.0; L *= 2.0) {
    if (J(dilate(w, L), scheme, lambda) < 0.0) return scaling_path(w, L, n_nodes, scheme, lambda);
  }
  throw Error(ErrorKind::BadEndpoint, "no dilation up to 64 gives a negative endpoint");
}

class Engine {
 public:
  Engine(const SplitScheme& scheme, double lambda, DiskMap& map, const DescentOptions& opts)
      : scheme_(scheme), lambda_(lambda), map_(map), opts_(opts),
        solver_(map.samples.front().front().grid()),
        antisym_(map.samples.front().front().g().symmetry().antisymmetric()) {}

  StageRecord run() {
    StageRecord rec;
    rec.lambda = lambda_;
    int stall = 0;
    int bi = 1, bj = 0;
    double resid = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opts_.max_iter; ++it) {
      locate_max(bi, bj);
      if (it > 0 && opts_.reparam_every > 0 && it % opts_.reparam_every == 0) reparametrize(bi, bj);
      remaximize(bi, bj);
      bool moved = false;
      resid = descend(bi, bj, &moved);
      rec.level_history.push_back(map_.energies[bi][bj]);
      if (resid < opts_.tol) {
        rec.status = StageStatus::Converged;
        break;
      }
      stall = moved ? 0 : stall + 1;
      if (stall >= opts_.stall_limit) {
        rec.status = StageStatus::NoDescent;
        break;
      }
    }
    rec.iterations = it;
    // report the top node of the final map
    locate_max(bi, bj);
    remaximize(bi, bj);
    const Field u = map_.at(bi, bj);
    rec.level = map_.energies[bi][bj];
    rec.gradient_residual = dual_residual(u, scheme_, lambda_, &solver_);
    rec.pohozaev_residual = pohozaev_rel(u, scheme_, lambda_);
    if (rec.status == StageStatus::Converged && rec.gradient_residual >= opts_.tol) {
      rec.status = StageStatus::IterationCap;
    }
    rec.candidate = u;
    // the dilation path through the candidate peaks at it
    try {
      rec.path = path_through(u, scheme_, lambda_, map_.n_rho + 1);
    } catch (const Error&) {
      for (int i = 0; i <= map_.n_rho; ++i) {
        rec.path.t.push_back(map_.rho[i]);
        rec.path.nodes.push_back(map_.samples[i][0]);
      }
    }
    for (const Field& f : rec.path.nodes) rec.path_energies.push_back(energy(f));
    return rec;
  }

 private:
  std::vector<std::pair<int, int>> neighbours() const {
    std::vector<std::pair<int, int>> n{{-1, 0}, {1, 0}};
    if (map_.n_half > 1) {
      n.emplace_back(0, -1);
      n.emplace_back(0, 1);
    }
    return n;
  }

  void store(int i, int j, const Field& f, double e) {
    const int period = 2 * map_.n_half;
    const int jj = ((j % period) + period) % period;
    if (jj < map_.n_half) {
      map_.samples[i][jj] = f;
      map_.energies[i][jj] = e;
    } else {
      map_.samples[i][jj - map_.n_half] = -1.0 * f;
      map_.energies[i][jj - map_.n_half] = e;
    }
  }

  double energy_at(int i, int j) const {
    const int period = 2 * map_.n_half;
    return map_.energies[i][(((j % period) + period) % period) % map_.n_half];
  }

  void locate_max(int& bi, int& bj) const {
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < map_.n_rho; ++i)
      for (int j = 0; j < map_.n_half; ++j)
        if (map_.energies[i][j] > best) {
          best = map_.energies[i][j];
          bi = i;
          bj = j;
        }
  }

  double energy(const Field& u) const { return J(u, scheme_, lambda_); }

  // Golden-section maximum of J on the line u + s (next - prev) / 2, s in [-a, a].
  void line_max(int i, int j, const Field& prev, const Field& next) {
    const Field u = map_.at(i, j);
    const Field d = 0.5 * (next - prev);
    auto point = [&](double s) { return u + s * d; };
    constexpr double a = 0.9;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = -a, hi = a;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = energy(point(x1)), f2 = energy(point(x2));
    for (int k = 0; k < opts_.golden_iters; ++k) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = energy(point(x2));
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = energy(point(x1));
      }
    }
    const double s = f1 > f2 ? x1 : x2;
    const double fs = std::max(f1, f2);
    if (fs > energy_at(i, j)) {
      Field p = point(s);
      if (antisym_) p = project_tau(p);
      store(i, j, p, energy(p));
    }
  }

  void remaximize(int i, int j) {
    line_max(i, j, map_.at(i - 1, j), map_.at(i + 1, j));
    if (map_.n_half > 1) line_max(i, j, map_.at(i, j - 1), map_.at(i, j + 1));
  }

  // Perpendicular H^1 gradient step with Armijo backtracking. Returns the
  // dual residual at the starting point.
  double descend(int i, int j, bool* moved) {
    const Field u = map_.at(i, j);
    Field s = solver_.riesz(gradient(u, scheme_, lambda_));
    if (antisym_) s = project_tau(s);
    const double nu = norm_h1(u);
    const double resid = nu > 0.0 ? norm_h1(s) / nu : 0.0;

    std::vector<Field> tangents;
    std::vector<double> dists;
    for (auto [di, dj] : neighbours()) {
      dists.push_back(norm_h1(map_.at(i + di, j + dj) - u));
    }
    std::vector<Field> raw{map_.at(i + 1, j) - map_.at(i - 1, j)};
    if (map_.n_half > 1) raw.push_back(map_.at(i, j + 1) - map_.at(i, j - 1));
    for (Field t : raw) {
      for (const Field& q : tangents) t -= inner_h1(t, q) * q;
      const double n = norm_h1(t);
      if (n > 1e-14) tangents.push_back((1.0 / n) * t);
    }
    Field sp = s;
    for (const Field& q : tangents) sp -= inner_h1(s, q) * q;
    if (antisym_) sp = project_tau(sp);
    const double n2 = inner_h1(sp, sp);
    if (moved) *moved = false;
    if (!(n2 > 0.0)) return resid;

    const double dmin = *std::min_element(dists.begin(), dists.end());
    double alpha = std::min(1.0, opts_.step_fraction * dmin / std::sqrt(n2));
    const double e0 = energy_at(i, j);
    for (int k = 0; k < 30; ++k) {
      Field trial = u - alpha * sp;
      const double et = energy(trial);
      if (et <= e0 - opts_.armijo_c * alpha * n2) {
        store(i, j, trial, et);
        if (moved) *moved = true;
        break;
      }
      alpha *= 0.5;
    }
    return resid;
  }

  // Equal H^1 arc length between nodes a and b of stored line j.
  void reparam_range(int j, int a, int b) {
    if (b - a < 2) return;
    std::vector<Field> line;
    std::vector<double> s{0.0};
    for (int i = a; i <= b; ++i) line.push_back(map_.samples[i][j]);
    for (std::size_t i = 1; i < line.size(); ++i) s.push_back(s.back() + norm_h1(line[i] - line[i - 1]));
    const double total = s.back();
    if (!(total > 0.0)) return;
    const int n = b - a;
    int seg = 0;
    for (int i = 1; i < n; ++i) {
      const double target = total * i / n;
      while (seg < n - 1 && s[seg + 1] < target) ++seg;
      const double len = s[seg + 1] - s[seg];
      const double w = len > 0.0 ? (target - s[seg]) / len : 0.0;
      Field p = (1.0 - w) * line[seg] + w * line[seg + 1];
      if (antisym_) p = project_tau(p);
      map_.energies[a + i][j] = energy(p);
      map_.samples[a + i][j] = std::move(p);
    }
  }

  // Every stored radial line is respaced; the top node stays put and splits its line.
  void reparametrize(int keep_i, int keep_j) {
    for (int j = 0; j < map_.n_half; ++j) {
      if (j == keep_j) {
        reparam_range(j, 0, keep_i);
        reparam_range(j, keep_i, map_.n_rho);
      } else {
        reparam_range(j, 0, map_.n_rho);
      }
    }
  }

  const SplitScheme& scheme_;
  double lambda_;
  DiskMap& map_;
  const DescentOptions& opts_;
  H1Solver solver_;
  bool antisym_;
};

DiskMap map_from_path(const Path& path) {
  DiskMap m;
  m.k = 1;
  m.n_rho = static_cast<int>(path.size()) - 1;
  m.n_half = 1;
  m.rho = path.t;
  for (const Field& f : path.nodes) m.samples.push_back({f});
  return m;
}

void fill_energies(DiskMap& m, const SplitScheme& scheme, double lambda) {
  m.energies.assign(m.samples.size(), {});
  for (std::size_t i = 0; i < m.samples.size(); ++i)
    for (const Field& f : m.samples[i]) m.energies[i].push_back(J(f, scheme, lambda));
}

}  // namespace

StageRecord mountain_pass_solve(const SplitScheme& scheme, double lambda, const Path& initial,
                                const DescentOptions& opts) {
  scheme.check_lambda(lambda);
  if (initial.size() < 3) throw Error(ErrorKind::BrokenPath, "a path needs at least three nodes");
  DiskMap map = map_from_path(initial);
  fill_energies(map, scheme, lambda);
  if (std::abs(map.energies.front()[0]) > 1e-12) {
    throw Error(ErrorKind::BrokenPath, "path must start at an energy-zero state");
  }
  if (!(map.energies.back()[0] < 0.0)) {
    std::ostringstream os;
    os << "path endpoint has J = " << map.energies.back()[0] << ", must be negative";
    throw Error(ErrorKind::BrokenPath, os.str());
  }
  Engine engine(scheme, lambda, map, opts);
  return engine.run();
}

Path pohozaev_scaling_path(const Field& u, const SplitScheme& scheme, double lambda, int n_nodes) {
  return path_through(dilate(u, dilation_peak(u, scheme, lambda)), scheme, lambda, n_nodes);
}

Field default_seed(const GridPtr& grid, const SplitScheme& scheme) {
  switch (grid->symmetry().kind) {
    case ClassKind::Radial:
      // smallest amplitude whose Pohozaev dilation at lambda0 does not widen it much
      for (double a : {3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0}) {
        Field u = sample(grid, [a](double r, double, double) { return a * std::exp(-r * r); });
        Eigen::VectorXd Fv(u.values().size());
        for (Eigen::Index n = 0; n < Fv.size(); ++n) Fv[n] = scheme.F_lambda(scheme.lambda0(), u.values()[n]);
        if (integrate(*grid, Fv) > 0.0 && dilation_peak(u, scheme, scheme.lambda0()) <= 1.25) return u;
      }
      throw Error(ErrorKind::NoAdmissibleSeed, "no Gaussian seed with positive primitive integral");
    case ClassKind::Line:
      return sample(grid, [](double x, double, double) { return 3.0 * std::tanh(x) / std::cosh(x); });
    case ClassKind::O1Tau:
    case ClassKind::O2Tau: {
      const ChooseRResult r = choose_R_k(1, scheme, grid->symmetry());
      return build_pi_k(1, r.R, {1.0}, scheme.zeta(), grid);
    }
  }
  throw Error(ErrorKind::WrongSymmetryClass, "unknown class");
}

ContinuationSchedule ContinuationSchedule::geometric(const SplitScheme& scheme, int m, double tol_first,
                                                     double tol_last) {
  if (m < 1) throw Error(ErrorKind::ConfigError, "schedule needs at least one stage");
  ContinuationSchedule s;
  const double l0 = scheme.lambda0();
  for (int i = 0; i < m; ++i) {
    s.lambdas.push_back(i + 1 == m ? 1.0 : 1.0 - (1.0 - l0) * std::ldexp(1.0, -i));
    const double frac = m == 1 ? 1.0 : static_cast<double>(i) / (m - 1);
    s.tolerances.push_back(tol_first * std::pow(tol_last / tol_first, frac));
  }
  return s;
}

ContinuationSchedule ContinuationSchedule::single(double lambda, double tol) {
  ContinuationSchedule s;
  s.lambdas = {lambda};
  s.tolerances = {tol};
  return s;
}

void ContinuationSchedule::validate(const SplitScheme& scheme) const {
  if (lambdas.empty() || lambdas.size() != tolerances.size()) {
    throw Error(ErrorKind::ConfigError, "schedule lambdas and tolerances must be nonempty and match");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    scheme.check_lambda(lambdas[i]);
    if (i > 0 && !(lambdas[i] > lambdas[i - 1])) {
      throw Error(ErrorKind::ConfigError, "schedule must be strictly increasing");
    }
    if (!(tolerances[i] > 0.0)) throw Error(ErrorKind::ConfigError, "tolerances must be positive");
  }
  if (lambdas.back() != 1.0) throw Error(ErrorKind::ConfigError, "schedule must end at lambda = 1");
}

SolveReport continuation_solve(const SplitScheme& scheme, const ContinuationSchedule& schedule,
                               const Path& seed_path, const ContinuationOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  schedule.validate(scheme);
  SolveReport rep;

  auto run_stage = [&](double lambda, double tol, const std::optional<Field>& warm) {
    DescentOptions d = opts.descent;
    d.tol = tol;
    const Path p = warm && schedule.warm_start ? pohozaev_scaling_path(*warm, scheme, lambda, opts.n_nodes) : seed_path;
    return mountain_pass_solve(scheme, lambda, p, d);
  };

  std::optional<Field> warm;
  for (std::size_t i = 0; i < schedule.lambdas.size(); ++i) {
    const double lambda = schedule.lambdas[i];
    StageRecord r = run_stage(lambda, schedule.tolerances[i], warm);
    if (r.status != StageStatus::Converged && opts.refine_failures && i > 0) {
      // isolated bad lambda are expected; step in through the midpoint once
      const double mid = 0.5 * (schedule.lambdas[i - 1] + lambda);
      StageRecord m = run_stage(mid, schedule.tolerances[i], warm);
      m.refined = true;
      const std::optional<Field> mid_warm = m.candidate;
      rep.stages.push_back(std::move(m));
      r = run_stage(lambda, schedule.tolerances[i], mid_warm);
    }
    warm = r.candidate;
    rep.stages.push_back(std::move(r));
  }

  rep.monotone_tol = opts.monotone_rel_tol * std::abs(rep.stages.front().level);
  for (std::size_t i = 0; i + 1 < rep.stages.size(); ++i) {
    if (rep.stages[i].level < rep.stages[i + 1].level - rep.monotone_tol) rep.monotone = false;
  }
  rep.final_classification = classify(*rep.stages.back().candidate, scheme, 1.0);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!rep.monotone && opts.throw_on_violation) {
    std::ostringstream os;
    os << "minimax level increased along the schedule by more than " << rep.monotone_tol;
    throw Error(ErrorKind::MonotonicityViolation, os.str());
  }
  return rep;
}

std::vector<std::vector<double>> disk_directions(int k, int n_half) {
  if (k == 1) return {{1.0}, {-1.0}};
  if (k != 2) throw Error(ErrorKind::ConfigError, "disk maps are limited to k <= 2");
  if (n_half < 2) throw Error(ErrorKind::ConfigError, "k = 2 needs at least two stored angles");
  std::vector<std::vector<double>> out;
  for (int j = 0; j < n_half; ++j) {
    const double th = std::numbers::pi * j / n_half;
    out.push_back({std::cos(th), std::sin(th)});
  }
  for (int j = 0; j < n_half; ++j) out.push_back({-out[j][0], -out[j][1]});
  return out;
}

SymmetricResult symmetric_minimax_solve(const SplitScheme& scheme, double lambda, const DiskBoundary& boundary,
                                        const SymmetricOptions& opts) {
  scheme.check_lambda(lambda);
  const int k = boundary.k;
  if (k != 1 && k != 2) throw Error(ErrorKind::ConfigError, "disk maps are limited to k <= 2");
  const int n_half = k == 1 ? 1 : opts.n_half;
  if (static_cast<int>(boundary.images.size()) != 2 * n_half) {
    throw Error(ErrorKind::ShapeMismatch, "boundary must hold 2 * n_half images from disk_directions");
  }
  if (opts.n_rho < 2) throw Error(ErrorKind::ConfigError, "n_rho must be at least 2");
  for (const Field& b : boundary.images) {
    if (!(J(b, scheme, lambda) < 0.0)) throw Error(ErrorKind::BrokenPath, "boundary image with J >= 0");
  }

  SymmetricResult res;
  DiskMap& m = res.map;
  m.k = k;
  m.n_rho = opts.n_rho;
  m.n_half = n_half;
  for (int i = 0; i <= m.n_rho; ++i) {
    const double rho = static_cast<double>(i) / m.n_rho;
    m.rho.push_back(rho);
    std::vector<Field> row;
    for (int j = 0; j < n_half; ++j) {
      const Field& b = boundary.images[j];
      if (i == 0) {
        row.emplace_back(b.grid());
      } else if (i == m.n_rho) {
        row.push_back(b);
      } else {
        Field f = dilate(b, rho);
        if (f.g().symmetry().antisymmetric()) f = project_tau(f);
        row.push_back(std::move(f));
      }
    }
    m.samples.push_back(std::move(row));
  }
  fill_energies(m, scheme, lambda);
  Engine engine(scheme, lambda, m, opts.descent);
  res.stage = engine.run();
  return res;
}

namespace {

struct PhiValue {
  double phi = std::numeric_limits<double>::infinity();
  double a = 0.0;
  double b = 0.0;
};

PhiValue pohozaev_phi(const Field& u, const SplitScheme& scheme, double lambda) {
  const double N = u.g().symmetry().N;
  Eigen::VectorXd Fv(u.values().size());
  for (Eigen::Index n = 0; n < Fv.size(); ++n) Fv[n] = scheme.F_lambda(lambda, u.values()[n]);
  PhiValue v;
  v.a = 0.5 * dirichlet_energy(u);
  v.b = integrate(u.g(), Fv);
  if (v.b > 0.0) v.phi = 2.0 / N * v.a * std::pow((N - 2.0) * v.a / (N * v.b), 0.5 * (N - 2.0));
  return v;
}

}  // namespace

PohozaevResult pohozaev_minimize(const SplitScheme& scheme, double lambda, const std::vector<Field>& seeds,
                                 const PohozaevOptions& opts) {
  PohozaevResult res;
  res.level = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const PhiValue v = pohozaev_phi(seeds[i], scheme, lambda);
    if (!std::isfinite(v.phi)) {
      res.levels.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    res.levels.push_back(v.phi);
    if (v.phi < res.level) {
      res.level = v.phi;
      res.best_index = i;
      any = true;
    }
  }
  if (!any) throw Error(ErrorKind::NoAdmissibleSeed, "no seed has a positive primitive integral");
  res.seed_level = res.level;

  Field u = seeds[res.best_index];
  const bool antisym = u.g().symmetry().antisymmetric();
  const double N = u.g().symmetry().N;
  if (opts.descent_iters > 0) {
    const H1Solver solver(u.grid());
    PhiValue cur = pohozaev_phi(u, scheme, lambda);
    for (int it = 0; it < opts.descent_iters; ++it) {
      res.iterations = it + 1;
      const Field fl = apply_f_lambda(u, scheme, lambda);
      const Field ku = gradient(u, scheme, lambda) + fl;  // K u / w on interior nodes
      Field g = (cur.phi * 0.5 * N / cur.a) * ku - (cur.phi * 0.5 * (N - 2.0) / cur.b) * fl;
      Field s = solver.riesz(g);
      if (antisym) s = project_tau(s);
      const double n2 = inner_h1(s, s);
      const double nu = norm_h1(u);
      if (!(n2 > 0.0) || std::sqrt(n2) * nu / cur.phi < opts.tol) break;
      double alpha = std::min(1.0, 0.2 * nu / std::sqrt(n2));
      bool moved = false;
      for (int k = 0; k < 40; ++k) {
        Field trial = u - alpha * s;
        const PhiValue tv = pohozaev_phi(trial, scheme, lambda);
        if (tv.phi <= cur.phi - 1e-4 * alpha * n2) {
          u = std::move(trial);
          cur = tv;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    res.level = cur.phi;
  }
  res.t = dilation_peak(u, scheme, lambda);
  res.best = dilate(u, res.t);
  return res;
}

std::vector<Field> generic_radial_seeds(const GridPtr& grid) {
  std::vector<Field> out;
  for (double a : {2.0, 3.0, 4.0, 5.0, 6.0}) {
    out.push_back(sample(grid, [a](double r, double, double) { return a * std::exp(-r * r); }));
    out.push_back(sample(grid, [a](double r, double, double) { return a / std::cosh(r); }));
  }
  return out;
}

NonradialReport nonradial_solve(const SplitScheme& scheme, int N, int M, const NonradialOptions& opts) {
  if (scheme.dimension() != N) throw Error(ErrorKind::ConfigError, "scheme dimension differs from N");
  const SymmetryClass cls = N - 2 * M == 1 ? SymmetryClass::o1tau(N, M) : SymmetryClass::o2tau(N, M);
  const ContinuationSchedule schedule = ContinuationSchedule::geometric(scheme, opts.schedule_stages);
  NonradialReport rep;

  const GridPtr radial = build_grid(SymmetryClass::radial(N), opts.radial_extent, opts.radial_h);
  const Path radial_seed = pohozaev_scaling_path(default_seed(radial, scheme), scheme, schedule.lambdas.front(),
                                                 opts.continuation.n_nodes);
  rep.radial = continuation_solve(scheme, schedule, radial_seed, opts.continuation);
  rep.c_mp = rep.radial.final_stage().level;

  const GridPtr grid = build_grid(cls, opts.extent, opts.h);
  const Path seed = pohozaev_scaling_path(default_seed(grid, scheme), scheme, schedule.lambdas.front(),
                                          opts.continuation.n_nodes);
  rep.nonradial = continuation_solve(scheme, schedule, seed, opts.continuation);

  const Field& v = *rep.nonradial.final_stage().candidate;
  rep.J_v = J(v, scheme, 1.0);
  rep.margin = rep.J_v - 2.0 * rep.c_mp;
  rep.antisymmetric = (project_tau(v).values() - v.values()).cwiseAbs().maxCoeff() == 0.0;
  rep.sup_positive = std::max(0.0, v.values().maxCoeff());
  rep.sup_negative = std::max(0.0, -v.values().minCoeff());
  const double sup = std::max(rep.sup_positive, rep.sup_negative);
  rep.sign_changing = sup > 0.0 && rep.sup_positive > opts.sign_threshold * sup &&
                      rep.sup_negative > opts.sign_threshold * sup;
  const Field v1 = half_restriction(v, Half::First);
  rep.half_J_ratio = J(v1, scheme, 1.0) / rep.J_v;
  rep.half_pohozaev_rel = std::abs(pohozaev(v1, scheme, 1.0)) / dirichlet_energy(v);
  return rep;
}

}  // namespace scalarfield
