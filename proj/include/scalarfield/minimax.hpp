#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scalarfield/functional.hpp"
#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"
#include "scalarfield/testmaps.hpp"

namespace scalarfield {

struct DescentOptions {
  int max_iter = 5000;
  double tol = 1e-3;          // dual residual at the max node
  int reparam_every = 10;
  double armijo_c = 1e-4;
  double step_fraction = 0.5; // max move as a fraction of the nearest neighbour distance
  int golden_iters = 48;
  int stall_limit = 25;       // consecutive failed line searches before giving up
};

enum class StageStatus { Converged, IterationCap, NoDescent };

std::string to_string(StageStatus s);

struct StageRecord {
  double lambda = 1.0;
  double level = 0.0;
  std::optional<Field> candidate;
  double gradient_residual = 0.0;  // dual norm
  double pohozaev_residual = 0.0;  // |P| / int |grad u|^2
  int iterations = 0;
  StageStatus status = StageStatus::IterationCap;
  bool refined = false;               // inserted after a failed stage
  std::vector<double> level_history;  // max node energy per iteration
  Path path;                          // dilation path through the candidate
  std::vector<double> path_energies;
};

/// True when node energies rise then fall, ignoring wiggles below tol * |max|.
bool is_unimodal(const std::vector<double>& energies, double tol = 1e-6);

/// Mountain-pass descent on a discrete path from 0 to an endpoint with
/// J_lambda < 0. Each iteration moves the top node to the energy maximum on
/// the line through it along the secant of its neighbours (golden section),
/// then takes one H^1 gradient step perpendicular to that secant with Armijo
/// backtracking. Every reparam_every iterations the nodes on either side of
/// the top node are respaced by H^1 arc length. The returned path is the
/// dilation path through the candidate.
StageRecord mountain_pass_solve(const SplitScheme& scheme, double lambda, const Path& initial,
                                const DescentOptions& opts = {});

/// Path 0 -> w(x / L) through the dilation of u onto P_lambda = 0, with L the
/// smallest power of two (>= 2) that makes the endpoint energy negative.
Path pohozaev_scaling_path(const Field& u, const SplitScheme& scheme, double lambda, int n_nodes = 21);

/// Default seed: radial Gaussian a exp(-|x|^2) with the smallest a on a
/// fixed ladder from 3 whose dilation peak at lambda0 is <= 1.25; pi_1[R(1)]
/// on tau grids, an odd sech bump on line grids.
Field default_seed(const GridPtr& grid, const SplitScheme& scheme);

struct ContinuationSchedule {
  std::vector<double> lambdas;
  std::vector<double> tolerances;
  bool warm_start = true;

  /// lambda_i = 1 - (1 - lambda0) 2^{-i}, last stage exactly 1; tolerances
  /// interpolate geometrically from tol_first to tol_last.
  static ContinuationSchedule geometric(const SplitScheme& scheme, int m = 8, double tol_first = 1e-2,
                                        double tol_last = 1e-3);
  static ContinuationSchedule single(double lambda = 1.0, double tol = 1e-3);

  void validate(const SplitScheme& scheme) const;
};

struct SolveReport {
  std::vector<StageRecord> stages;
  ClassifyResult final_classification;
  bool monotone = true;
  double monotone_tol = 0.0;
  double wall_time = 0.0;

  const StageRecord& final_stage() const { return stages.back(); }
};

struct ContinuationOptions {
  DescentOptions descent;
  int n_nodes = 21;
  double monotone_rel_tol = 1e-3;  // relative to the first level
  bool throw_on_violation = true;
  bool refine_failures = true;
};

/// Runs mountain_pass_solve over the schedule, warm-starting each stage
/// from the previous candidate's Pohozaev scaling path.
SolveReport continuation_solve(const SplitScheme& scheme, const ContinuationSchedule& schedule,
                               const Path& seed_path, const ContinuationOptions& opts = {});

/// Symmetric minimax over odd maps D_k -> X with prescribed boundary
/// (k = 1, 2). Only the half theta in [0, pi) of the disk is stored; the
/// other half is its negation, so oddness is exact by construction.
struct DiskMap {
  int k = 1;
  int n_rho = 0;
  int n_half = 1;  // stored angles
  std::vector<double> rho;
  std::vector<std::vector<Field>> samples;  // [i_rho][j_theta]
  std::vector<std::vector<double>> energies;

  /// Sample at (i, j) with j taken modulo 2 n_half; negated on the far half.
  Field at(int i, int j) const;
};

/// Boundary directions: {+1, -1} for k = 1; 2 n_half equally spaced
/// unit vectors for k = 2, with entry j + n_half = -entry j.
std::vector<std::vector<double>> disk_directions(int k, int n_half);

struct SymmetricOptions {
  DescentOptions descent;
  int n_rho = 20;
  int n_half = 8;
};

struct SymmetricResult {
  StageRecord stage;
  DiskMap map;
};

SymmetricResult symmetric_minimax_solve(const SplitScheme& scheme, double lambda, const DiskBoundary& boundary,
                                        const SymmetricOptions& opts = {});

struct PohozaevResult {
  double level = 0.0;
  std::optional<Field> best;
  std::size_t best_index = 0;
  double t = 1.0;
  std::vector<double> levels;  // per seed, NaN when rejected
  double seed_level = 0.0;     // best level before descent
  int iterations = 0;
};

struct PohozaevOptions {
  int descent_iters = 2000;  // 0: seeds only
  double tol = 1e-7;
};

/// Min over seeds of J_lambda at the dilation onto P_lambda = 0, in closed
/// form Phi(u) = (2/N) a ((N-2) a / (N b))^{(N-2)/2} with a = 1/2 int |grad u|^2,
/// b = int F^lambda(u). The best seed is then improved by H^1 gradient
/// descent on Phi, which is invariant under dilation, so every iterate stays
/// an upper bound for the least energy on P_lambda.
PohozaevResult pohozaev_minimize(const SplitScheme& scheme, double lambda, const std::vector<Field>& seeds,
                                 const PohozaevOptions& opts = {});

/// Radial Gaussian and sech families used as generic seeds for pohozaev_minimize.
std::vector<Field> generic_radial_seeds(const GridPtr& grid);

struct NonradialOptions {
  double extent = 28.0;  // the dilated pi_1 seed path needs room
  double h = 0.2;
  double radial_extent = 20.0;
  double radial_h = 0.05;
  ContinuationOptions continuation;
  int schedule_stages = 8;
  double sign_threshold = 1e-3;  // relative to sup |v|
};

struct NonradialReport {
  SolveReport nonradial;
  SolveReport radial;
  double c_mp = 0.0;       // radial level from the same pipeline
  double J_v = 0.0;
  double margin = 0.0;     // J(v) - 2 c_mp
  bool antisymmetric = false;
  bool sign_changing = false;
  double sup_positive = 0.0;
  double sup_negative = 0.0;
  double half_J_ratio = 0.0;     // J(chi_1 v) / J(v)
  double half_pohozaev_rel = 0.0; // |P(chi_1 v)| / int |grad v|^2
};

/// Continuation in the tau-antisymmetric class for (N, M) plus the radial
/// pipeline for c_mp; O2 tau when N - 2M != 1 and N - 2M >= 0, O1 tau otherwise.
NonradialReport nonradial_solve(const SplitScheme& scheme, int N, int M, const NonradialOptions& opts = {});

}  // namespace scalarfield
