#include "scalarfield/testmaps.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

double PiecewiseAffineProfile::operator()(double x) const {
  const double a = std::abs(x);
  if (a >= R || r.empty()) return 0.0;
  auto it = std::upper_bound(r.begin(), r.end(), a);
  if (it == r.end()) return u.back();
  const auto i = static_cast<std::size_t>(it - r.begin());
  if (i == 0) return u.front();
  const double w = (a - r[i - 1]) / (r[i] - r[i - 1]);
  return (1.0 - w) * u[i - 1] + w * u[i];
}

PiecewiseAffineProfile build_U_k_unchecked(int k, double R, const std::vector<double>& l) {
  if (k < 1 || static_cast<int>(l.size()) != k) {
    throw Error(ErrorKind::ShapeMismatch, "direction must have k components");
  }
  if (!(R > 0.0)) throw Error(ErrorKind::BadRadius, "R must be positive");
  double norm = 0.0;
  for (double x : l) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw Error(ErrorKind::ShapeMismatch, "direction must be nonzero");

  const double delta = 0.5 / std::sqrt(static_cast<double>(k));
  std::vector<double> v(k), w(k), q(k);
  double W = 0.0;
  for (int j = 0; j < k; ++j) {
    const double lj = l[j] / norm;
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    v[j] = sign * std::clamp(lj / delta, -1.0, 1.0);
    w[j] = std::max(std::abs(lj) - delta, 0.0);
    W += w[j];
  }
  double Q = 0.0;
  for (int j = 0; j < k; ++j) {
    const double next = j + 1 < k ? v[j + 1] : 0.0;
    q[j] = 0.5 * std::abs(next - v[j]);
    Q += q[j];
  }
  const double plateau_total = std::max(R - Q, 0.0);

  PiecewiseAffineProfile p;
  p.k = k;
  p.R = R;
  double x = 0.0;
  p.r.push_back(0.0);
  p.u.push_back(v[0]);
  for (int j = 0; j < k; ++j) {
    const double pj = plateau_total * w[j] / W;
    if (pj > 0.0) {
      x += pj;
      p.r.push_back(x);
      p.u.push_back(v[j]);
    }
    if (q[j] > 0.0) {
      x += q[j];
      p.r.push_back(x);
      p.u.push_back(j + 1 < k ? v[j + 1] : 0.0);
    }
  }
  if (x >= R) {
    // cut at R; for R >= Q this only absorbs rounding in the last knot
    while (p.r.size() > 1 && p.r[p.r.size() - 2] >= R) {
      p.r.pop_back();
      p.u.pop_back();
    }
    const std::size_t n = p.r.size();
    if (n >= 2 && p.r[n - 1] > R) {
      const double s = (R - p.r[n - 2]) / (p.r[n - 1] - p.r[n - 2]);
      p.u[n - 1] = (1.0 - s) * p.u[n - 2] + s * p.u[n - 1];
    }
    p.r.back() = R;
  } else {
    p.r.back() = R;
  }
  return p;
}

PiecewiseAffineProfile build_U_k(int k, double R, const std::vector<double>& l) {
  if (!(R > 2.0 * k)) {
    std::ostringstream os;
    os << "R = " << R << " must exceed 2k = " << 2 * k;
    throw Error(ErrorKind::BadRadius, os.str());
  }
  return build_U_k_unchecked(k, R, l);
}

MembershipReport check_membership(const PiecewiseAffineProfile& p) {
  constexpr double tol = 1e-12;
  MembershipReport rep;
  auto fail = [&rep](const std::string& why) {
    rep.member = false;
    rep.reason = why;
    return rep;
  };
  if (p.r.size() < 2 || p.r.front() != 0.0) return fail("knots must start at r = 0");
  if (std::abs(p.r.back() - p.R) > tol || std::abs(p.u.back()) > tol) return fail("profile must reach 0 at R");
  for (double u : p.u)
    if (std::abs(u) > 1.0 + tol) return fail("value outside [-1, 1]");

  int sign_prev = 0;
  double run = 0.0;
  for (std::size_t i = 0; i + 1 < p.r.size(); ++i) {
    const double dr = p.r[i + 1] - p.r[i];
    const double du = p.u[i + 1] - p.u[i];
    if (!(dr > 0.0)) return fail("knots not increasing");
    if (std::abs(du) <= tol) {
      if (std::abs(std::abs(p.u[i]) - 1.0) > tol) return fail("plateau away from +-1");
      sign_prev = 0;
      continue;
    }
    if (std::abs(std::abs(du / dr) - 2.0) > 1e-9) return fail("transition slope is not +-2");
    const int s = du > 0.0 ? 1 : -1;
    if (s == sign_prev) {
      run += dr;
    } else {
      ++rep.transitions;
      run = dr;
    }
    if (run > 1.0 + tol) return fail("transition longer than 1");
    sign_prev = s;
  }
  if (rep.transitions > p.k) return fail("more than k transitions");
  rep.member = true;
  return rep;
}

double base_bump(double s) {
  // smooth step between |s| = 1 and |s| = 2 built from exp(-1/x)
  const double a = std::abs(s);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  auto g = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  const double up = g(2.0 - a);
  return up / (up + g(a - 1.0));
}

double cutoff_chi(double R, double r) {
  const double a = R * R + R;
  if (r <= a) return 1.0;
  if (r >= a + 1.0) return 0.0;
  return base_bump(r - a + 1.0);
}

Field build_pi_k(int k, double R, const std::vector<double>& l, double zeta, const GridPtr& grid,
                 bool unchecked) {
  if (!grid->symmetry().antisymmetric()) {
    throw Error(ErrorKind::WrongSymmetryClass, "pi_k lives on O1/O2 tau grids");
  }
  const double need = R * R + R + 1.0;
  if (grid->axis(0).extent < need - 1e-12) {
    std::ostringstream os;
    os << "grid extent " << grid->axis(0).extent << " below R^2 + R + 1 = " << need;
    throw Error(ErrorKind::GridTooSmall, os.str());
  }
  if (grid->dims() == 3 && grid->axis(2).extent < R - 1e-12) {
    throw Error(ErrorKind::GridTooSmall, "third axis shorter than R");
  }
  const PiecewiseAffineProfile U = unchecked ? build_U_k_unchecked(k, R, l) : build_U_k(k, R, l);
  const bool with_r3 = grid->dims() == 3;
  return sample(grid, [&](double r1, double r2, double r3) {
    const double psi = (U(r1) - U(r2)) * (cutoff_chi(R, r1) * cutoff_chi(R, r2));
    const double third = with_r3 ? std::abs(U(r3)) : 1.0;
    return zeta * psi * third;
  });
}

std::vector<std::vector<double>> sample_directions(int k, int count, std::uint64_t seed) {
  std::vector<std::vector<double>> out;
  for (int j = 0; j < k && static_cast<int>(out.size()) < count; ++j) {
    for (double s : {1.0, -1.0}) {
      if (static_cast<int>(out.size()) >= count) break;
      std::vector<double> e(k, 0.0);
      e[j] = s;
      out.push_back(e);
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  while (static_cast<int>(out.size()) < count) {
    std::vector<double> v(k);
    double n = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      n += x * x;
    }
    n = std::sqrt(n);
    if (n < 1e-12) continue;
    for (double& x : v) x /= n;
    out.push_back(v);
  }
  return out;
}

double lower_bound_integral(int k, double R, const std::vector<double>& l, const SplitScheme& scheme,
                      const SymmetryClass& cls, const LowerBoundOptions& opts, bool unchecked) {
  const double need = R * R + R + 1.0;
  const double extent = std::ceil(need / opts.h - 1e-9) * opts.h;
  const GridPtr grid = build_grid(cls, extent, opts.h);
  const Field pi = build_pi_k(k, R, l, scheme.zeta(), grid, unchecked);
  const double lam = scheme.lambda0();
  Eigen::VectorXd Fv(pi.values().size());
  for (Eigen::Index i = 0; i < Fv.size(); ++i) Fv[i] = scheme.F_lambda(lam, pi.values()[i]);
  return integrate(*grid, Fv);
}

ChooseRResult choose_R_k(int k, const SplitScheme& scheme, const SymmetryClass& cls,
                         const ChooseROptions& opts) {
  ChooseRResult res;
  res.directions = sample_directions(k, opts.samples, opts.seed);
  LowerBoundOptions lo{opts.h};
  auto evaluate = [&](double R, std::vector<double>& vals) {
    vals.clear();
    bool ok = true;
    for (const auto& l : res.directions) {
      vals.push_back(lower_bound_integral(k, R, l, scheme, cls, lo));
      ok = ok && vals.back() >= 1.0;
    }
    return ok;
  };
  std::vector<double> vals;
  double lo_R = 2.0 * k;
  double hi_R = 0.0;
  for (int i = 0;; ++i) {
    const double R = 2.0 * k + 0.25 * std::ldexp(1.0, i);
    if (R > opts.R_cap) {
      std::ostringstream os;
      os << "no R <= " << opts.R_cap << " passes the lower bound for k = " << k;
      throw Error(ErrorKind::NotFound, os.str());
    }
    if (evaluate(R, vals)) {
      hi_R = R;
      res.integrals = vals;
      break;
    }
    lo_R = R;
  }
  while (hi_R - lo_R > opts.bisection_tol) {
    const double mid = 0.5 * (lo_R + hi_R);
    if (evaluate(mid, vals)) {
      hi_R = mid;
      res.integrals = vals;
    } else {
      lo_R = mid;
    }
  }
  res.R = hi_R;
  return res;
}

// ---------------------------------------------------------------------------

namespace {

double primitive_integral(const Field& u, const SplitScheme& scheme, double lambda) {
  Eigen::VectorXd Fv(u.values().size());
  for (Eigen::Index i = 0; i < Fv.size(); ++i) Fv[i] = scheme.F_lambda(lambda, u.values()[i]);
  return integrate(u.g(), Fv);
}

}  // namespace

Path scaling_path(const Field& w, double L, int n_nodes, const SplitScheme& scheme, double lambda) {
  if (n_nodes < 2) throw Error(ErrorKind::BadResolution, "a path needs at least two nodes");
  if (!(primitive_integral(w, scheme, lambda) > 0.0)) {
    throw Error(ErrorKind::BadBase, "int F^lambda(w) must be positive");
  }
  Path p;
  for (int j = 0; j < n_nodes; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n_nodes - 1);
    p.t.push_back(t);
    p.nodes.push_back(j == 0 ? Field(w.grid()) : dilate(w, L * t));
  }
  const double end = J(p.nodes.back(), scheme, lambda);
  if (!(end < 0.0)) {
    std::ostringstream os;
    os << "J at the path end is " << end << ", not negative";
    throw Error(ErrorKind::BadEndpoint, os.str());
  }
  return p;
}

std::vector<std::pair<double, double>> dilation_curve(const Field& u, const SplitScheme& scheme,
                                                      double lambda, const std::vector<double>& ts) {
  const double N = static_cast<double>(u.g().symmetry().N);
  const double kin = 0.5 * dirichlet_energy(u);
  const double FL = primitive_integral(u, scheme, lambda);
  std::vector<std::pair<double, double>> out;
  for (double t : ts) {
    if (t == 1.0) {
      out.emplace_back(t, kin - FL);
    } else {
      out.emplace_back(t, std::pow(t, N - 2.0) * kin - std::pow(t, N) * FL);
    }
  }
  return out;
}

double dilation_peak(const Field& u, const SplitScheme& scheme, double lambda) {
  const double N = static_cast<double>(u.g().symmetry().N);
  const double FL = primitive_integral(u, scheme, lambda);
  if (!(FL > 0.0)) throw Error(ErrorKind::BadBase, "int F^lambda(u) must be positive");
  return std::sqrt((N - 2.0) * dirichlet_energy(u) / (2.0 * N * FL));
}

DiskBoundary build_gamma0k_radial(int k, const SplitScheme& scheme, const GridPtr& grid,
                                  const std::vector<std::vector<double>>& directions, double R) {
  if (grid->symmetry().kind != ClassKind::Radial) {
    throw Error(ErrorKind::WrongSymmetryClass, "radial seed maps need a radial grid");
  }
  DiskBoundary b;
  b.k = k;
  b.R = R > 0.0 ? R : 4.0 * k;
  b.directions = directions;
  std::vector<PiecewiseAffineProfile> profiles;
  for (const auto& l : directions) profiles.push_back(build_U_k(k, b.R, l));
  const double zeta = scheme.zeta();
  const double lam0 = scheme.lambda0();
  for (double t = 1.0;; t *= 2.0) {
    if (b.R * t > grid->extent()) {
      std::ostringstream os;
      os << "dilation " << t << " pushes the support past the grid extent " << grid->extent();
      throw Error(ErrorKind::DilationCapExceeded, os.str());
    }
    b.images.clear();
    b.energies.clear();
    bool all_negative = true;
    for (const auto& U : profiles) {
      b.images.push_back(sample(grid, [&](double r, double, double) { return zeta * U(r / t); }));
      b.energies.push_back(J(b.images.back(), scheme, lam0));
      all_negative = all_negative && b.energies.back() < 0.0;
    }
    if (all_negative) {
      b.t = t;
      return b;
    }
  }
}

// ---------------------------------------------------------------------------

void write_path(const Path& path, const std::filesystem::path& dir, const std::vector<double>& energies) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["count"] = path.size();
  manifest["t"] = path.t;
  if (!energies.empty()) manifest["energies"] = energies;
  std::vector<std::string> files;
  for (std::size_t j = 0; j < path.size(); ++j) {
    std::ostringstream name;
    name << "node_" << std::setw(3) << std::setfill('0') << j << ".csv";
    write_field_csv(path.nodes[j], dir / name.str());
    files.push_back(name.str());
  }
  manifest["files"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorKind::IoError, "cannot write manifest in " + dir.string());
  out << std::setprecision(17) << manifest.dump(2) << '\n';
}

Path read_path(const GridPtr& grid, const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorKind::IoError, "missing manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad manifest: ") + e.what());
  }
  Path p;
  const auto files = manifest.at("files").get<std::vector<std::string>>();
  p.t = manifest.at("t").get<std::vector<double>>();
  for (const auto& f : files) p.nodes.push_back(read_field_csv(grid, dir / f));
  if (p.t.size() != p.nodes.size()) throw Error(ErrorKind::ShapeMismatch, "manifest t and files differ in length");
  return p;
}

}  // namespace scalarfield
