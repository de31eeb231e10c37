#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scalarfield/functional.hpp"
#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"

namespace scalarfield {

using FieldSequence = std::vector<Field>;

/// Index of the translation axis (the line axis), or -1 when the grid
/// admits no translations.
int translation_axis(const ReducedGrid& grid);

/// int_{B(y,1)} |v|^2 for every window centre y on the translation lattice
/// (nodes of the line axis; the origin only when there is none).
std::vector<double> window_masses(const Field& v, double radius = 1.0);

/// Max window mass over the last tail_fraction of the sequence.
double vanishing_sigma(const FieldSequence& seq, double radius = 1.0, double tail_fraction = 0.25);

/// Pointwise value of least magnitude over the fields (ties to the earlier
/// field). Stands in for the weak limit of a recentred tail: a bump that
/// moves through the tail is seen by at most a few members at any node.
Field weak_limit_proxy(const FieldSequence& tail);

struct Extraction {
  std::vector<long> centers;  // node offsets along the translation axis
  Field profile;
  FieldSequence residual;     // v_n - w(. - y_n)
};

struct ExtractOptions {
  double radius = 1.0;
  double tail_fraction = 0.25;
  double threshold = 0.0;      // BelowThreshold when sigma <= threshold
  bool force_zero_center = false;
};

Extraction extract_profile(const FieldSequence& seq, const ExtractOptions& opts = {});

struct DecomposeOptions {
  double radius = 1.0;
  double tail_fraction = 0.25;
  double vanish_rel = 1e-6;     // relative to the max window mass of u_1
  double rho_floor = 0.0;       // H^1 floor for the l cap; <= 0 samples it
};

struct ProfileDecomposition {
  int l = 0;
  FieldSequence profiles;
  std::vector<std::vector<long>> centers;
  std::vector<double> energies;
  std::vector<double> residual_norms;  // ||v^l_n||_{H^1} per n
  FieldSequence residual;              // v^l_n
  bool reached_vanishing = false;
  double vanish_threshold = 0.0;
  double rho_floor = 0.0;
  int l_cap = 0;
};

/// Iterated extraction with y^1_n = 0. Stops at vanishing or at the cap
/// floor(sup ||u_n||^2 / rho_floor^2) + 1 (reached_vanishing = false).
ProfileDecomposition decompose(const FieldSequence& seq, const SplitScheme& scheme, const DecomposeOptions& opts = {});

struct VerifyOptions {
  double energy_tol = 1e-6;
  double residual_tol = 1e-6;
  double gradient_tol = 5e-3;       // dual residual of each nonzero profile
  double separation_windows = 5.0;  // in window diameters
  double zero_norm = 1e-8;
  double tail_fraction = 0.25;
  double radius = 1.0;
};

struct VerifyReport {
  bool centers_ok = false;      // (i)
  bool profiles_ok = false;     // (ii)
  bool energy_ok = false;       // (iii)
  bool residual_ok = false;     // (iv)
  bool passed = false;
  double energy_residual = 0.0;  // |I(u_last) - sum I(w^k)|
  double tail_residual = 0.0;    // max over the tail of ||v^l_n||_{H^1}
  double min_separation = 0.0;   // physical units, last index
  std::vector<double> profile_gradients;
  double norm_budget_excess = 0.0;  // sum ||w^k||^2 - max ||u_n||^2
  std::vector<std::string> failures;
};

VerifyReport verify_decomposition(const FieldSequence& seq, const ProfileDecomposition& dec,
                                  const SplitScheme& scheme, const VerifyOptions& opts = {});

/// Directory of Field CSVs plus manifest.json listing them in order.
FieldSequence read_sequence(const GridPtr& grid, const std::filesystem::path& dir);
void write_sequence(const FieldSequence& seq, const std::filesystem::path& dir);

}  // namespace scalarfield
