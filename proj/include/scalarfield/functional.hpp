#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"

namespace scalarfield {

struct EnergyBreakdown {
  double kinetic = 0.0;       // 1/2 int |grad u|^2
  double potential_F1 = 0.0;  // int F1(u)
  double potential_F2 = 0.0;  // int F2(u)
  double J_lambda = 0.0;
  double A = 0.0;
  double B = 0.0;
  double P_lambda = 0.0;
  double lambda = 1.0;
};

/// J_lambda(u) = A(u) - lambda B(u) with A = kinetic + int F2, B = int F1.
EnergyBreakdown energy(const Field& u, const SplitScheme& scheme, double lambda);

/// Just the scalar J_lambda(u).
double J(const Field& u, const SplitScheme& scheme, double lambda);

/// L^2_w gradient of J_lambda: K u / w - f^lambda(u) on interior nodes,
/// tau-projected on antisymmetric grids, zero on Dirichlet nodes.
Field gradient(const Field& u, const SplitScheme& scheme, double lambda);

/// P_lambda(u) = (N-2)/2 int |grad u|^2 - N int F^lambda(u).
double pohozaev(const Field& u, const SplitScheme& scheme, double lambda);

/// Pointwise f^lambda(u).
Field apply_f_lambda(const Field& u, const SplitScheme& scheme, double lambda);

/// ||gradient||_w / ||u||_w.
double weighted_residual(const Field& u, const SplitScheme& scheme, double lambda);

/// Dual-norm residual ||R g||_{H^1} / ||u||_{H^1}, R the H^1 Riesz map. This
/// is the norm of J_lambda'(u) in H^{-1} and is insensitive to the
/// unresolved high-frequency part of the pointwise residual.
double dual_residual(const Field& u, const SplitScheme& scheme, double lambda,
                     const H1Solver* solver = nullptr);

struct ClassifyThresholds {
  double gradient = 5e-3;  // dual_residual
  double pohozaev = 1e-2;  // |P| / int |grad u|^2
  double trivial = 1e-8;   // ||u||_{H^1} floor
};

enum class Classification { Trivial, CriticalCandidate, Noncritical };

std::string to_string(Classification c);

struct ClassifyResult {
  Classification kind = Classification::Trivial;
  double norm_h1 = 0.0;
  double gradient_residual = 0.0;  // dual norm, the classification metric
  double weighted_residual = 0.0;  // pointwise L^2_w norm, reported only
  double pohozaev_residual = 0.0;
  double J = 0.0;
};

ClassifyResult classify(const Field& u, const SplitScheme& scheme, double lambda = 1.0,
                        const ClassifyThresholds& thresholds = {});

/// Random smooth field: a few Gaussian blobs with random centres, widths and
/// signs, tau-projected on antisymmetric grids.
Field random_smooth_field(const GridPtr& grid, std::uint64_t seed);

struct MountainFloor {
  double r0 = 0.0;
  double rho0 = 0.0;
  std::vector<double> radii;
  std::vector<double> min_energy;  // sampled min J over the sphere of each radius
};

/// Sweep of sampled min J over H^1 spheres. r0 is half the radius with the
/// largest sampled minimum; rho0 half the sampled minimum at r0. Heuristic only.
MountainFloor sample_mountain_floor(const GridPtr& grid, const SplitScheme& scheme, int samples = 64,
                                    std::uint64_t seed = 1);

/// Sampled min of J over the H^1 sphere of radius r.
double sampled_sphere_min(const GridPtr& grid, const SplitScheme& scheme, double r, int samples,
                          std::uint64_t seed);

}  // namespace scalarfield
