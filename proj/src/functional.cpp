#include "scalarfield/functional.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "scalarfield/errors.hpp"

namespace scalarfield {

namespace {

Eigen::VectorXd map_values(const Field& u, auto&& fn) {
  Eigen::VectorXd out(u.values().size());
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = fn(u.values()[i]);
  return out;
}

}  // namespace

EnergyBreakdown energy(const Field& u, const SplitScheme& scheme, double lambda) {
  scheme.check_lambda(lambda);
  const ReducedGrid& grid = u.g();
  EnergyBreakdown e;
  e.lambda = lambda;
  const double grad2 = dirichlet_energy(u);
  e.kinetic = 0.5 * grad2;
  e.potential_F1 = integrate(grid, map_values(u, [&](double t) { return scheme.F1(t); }));
  e.potential_F2 = integrate(grid, map_values(u, [&](double t) { return scheme.F2(t); }));
  e.A = e.kinetic + e.potential_F2;
  e.B = e.potential_F1;
  e.J_lambda = e.A - lambda * e.B;
  const double Flam = integrate(grid, map_values(u, [&](double t) { return scheme.F_lambda(lambda, t); }));
  const double N = static_cast<double>(grid.symmetry().N);
  e.P_lambda = 0.5 * (N - 2.0) * grad2 - N * Flam;
  return e;
}

double J(const Field& u, const SplitScheme& scheme, double lambda) {
  return energy(u, scheme, lambda).J_lambda;
}

Field apply_f_lambda(const Field& u, const SplitScheme& scheme, double lambda) {
  return Field(u.grid(), map_values(u, [&](double t) { return scheme.f_lambda(lambda, t); }));
}

Field gradient(const Field& u, const SplitScheme& scheme, double lambda) {
  scheme.check_lambda(lambda);
  const Eigen::VectorXd Ku = stiffness_apply(u);
  const auto& w = u.g().weights();
  Field g(u.grid());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.g().is_boundary(n)) continue;
    const auto i = static_cast<Eigen::Index>(n);
    g[n] = Ku[i] / w[i] - scheme.f_lambda(lambda, u[n]);
  }
  if (u.g().symmetry().antisymmetric()) g = project_tau(g);
  return g;
}

double pohozaev(const Field& u, const SplitScheme& scheme, double lambda) {
  return energy(u, scheme, lambda).P_lambda;
}

double weighted_residual(const Field& u, const SplitScheme& scheme, double lambda) {
  return norm_w(gradient(u, scheme, lambda)) / norm_w(u);
}

double dual_residual(const Field& u, const SplitScheme& scheme, double lambda, const H1Solver* solver) {
  const Field g = gradient(u, scheme, lambda);
  if (solver) return norm_h1(solver->riesz(g)) / norm_h1(u);
  return norm_h1(H1Solver(u.grid()).riesz(g)) / norm_h1(u);
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Trivial: return "trivial";
    case Classification::CriticalCandidate: return "critical_candidate";
    case Classification::Noncritical: return "noncritical";
  }
  return "unknown";
}

ClassifyResult classify(const Field& u, const SplitScheme& scheme, double lambda,
                        const ClassifyThresholds& thresholds) {
  ClassifyResult r;
  r.norm_h1 = norm_h1(u);
  if (!(r.norm_h1 >= thresholds.trivial)) return r;
  const EnergyBreakdown e = energy(u, scheme, lambda);
  r.J = e.J_lambda;
  const Field g = gradient(u, scheme, lambda);
  r.weighted_residual = norm_w(g) / norm_w(u);
  r.gradient_residual = norm_h1(H1Solver(u.grid()).riesz(g)) / r.norm_h1;
  r.pohozaev_residual = std::abs(e.P_lambda) / (2.0 * e.kinetic);
  r.kind = (r.gradient_residual <= thresholds.gradient && r.pohozaev_residual <= thresholds.pohozaev)
               ? Classification::CriticalCandidate
               : Classification::Noncritical;
  return r;
}

Field random_smooth_field(const GridPtr& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double R = grid->extent();
  std::uniform_real_distribution<double> centre(0.0, 0.4 * R);
  std::uniform_real_distribution<double> width(0.5, 2.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  const int blobs = count(rng);
  struct Blob {
    std::array<double, 3> c;
    double w, a;
  };
  std::vector<Blob> list;
  for (int b = 0; b < blobs; ++b) {
    Blob bl{{0.0, 0.0, 0.0}, width(rng), amp(rng)};
    for (std::size_t a = 0; a < grid->dims(); ++a) {
      const bool line = grid->axis(a).kind == AxisKind::Line;
      bl.c[a] = line ? 2.0 * centre(rng) - 0.4 * R : centre(rng);
    }
    list.push_back(bl);
  }
  Field u = sample(grid, [&](double x, double y, double z) {
    double v = 0.0;
    for (const Blob& bl : list) {
      const double d2 = (x - bl.c[0]) * (x - bl.c[0]) + (y - bl.c[1]) * (y - bl.c[1]) + (z - bl.c[2]) * (z - bl.c[2]);
      v += bl.a * std::exp(-d2 / (bl.w * bl.w));
    }
    return v;
  });
  if (grid->symmetry().antisymmetric()) u = project_tau(u);
  return u;
}

double sampled_sphere_min(const GridPtr& grid, const SplitScheme& scheme, double r, int samples,
                          std::uint64_t seed) {
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    Field v = random_smooth_field(grid, seed + static_cast<std::uint64_t>(s));
    const double n = norm_h1(v);
    if (!(n > 0.0)) continue;
    v *= r / n;
    best = std::min(best, J(v, scheme, 1.0));
  }
  return best;
}

MountainFloor sample_mountain_floor(const GridPtr& grid, const SplitScheme& scheme, int samples,
                                    std::uint64_t seed) {
  MountainFloor mf;
  double best = -std::numeric_limits<double>::infinity();
  double best_r = 0.0;
  for (double r = 1.0 / 64.0; r <= 64.0; r *= std::sqrt(2.0)) {
    const double m = sampled_sphere_min(grid, scheme, r, samples, seed);
    mf.radii.push_back(r);
    mf.min_energy.push_back(m);
    if (m > best) {
      best = m;
      best_r = r;
    }
  }
  if (!(best > 0.0)) throw Error(ErrorKind::BelowThreshold, "no radius with positive sampled energy");
  mf.r0 = 0.5 * best_r;
  // half the sampled minimum leaves room for fields outside the sample
  mf.rho0 = 0.5 * sampled_sphere_min(grid, scheme, mf.r0, samples, seed);
  return mf;
}

}  // namespace scalarfield
