#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "scalarfield/functional.hpp"
#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"

namespace scalarfield {

/// Piecewise-affine profile on [0, R] given by knots; zero on [R, inf),
/// evaluated at |r|.
struct PiecewiseAffineProfile {
  int k = 1;
  double R = 0.0;
  std::vector<double> r;
  std::vector<double> u;

  double operator()(double x) const;
};

/// Odd continuous map l -> U_k[R; l] into the class N_{k,R}.
///
/// Level v_j = (-1)^(j-1) clamp(l_j / delta, -1, 1) with delta = 1 / (2 sqrt k). Blocks
/// j = 1..k are laid out left to right: a plateau at v_j whose length is
/// proportional to max(|l_j| - delta, 0), then a slope-2 ramp to v_{j+1}
/// (to 0 after the last block, ending at R). A block with |l_j| <= delta
/// has no plateau, so its level is passed through at a single point.
PiecewiseAffineProfile build_U_k(int k, double R, const std::vector<double>& l);

/// Same construction for any R > 0: when the ramps alone exceed R the
/// profile is cut at R. Used only for diagnostic integrals at small R.
PiecewiseAffineProfile build_U_k_unchecked(int k, double R, const std::vector<double>& l);

struct MembershipReport {
  bool member = false;
  int transitions = 0;
  std::string reason;
};

/// Exact checks on the knot representation (tolerance 1e-12 for the
/// floating-point knots): values in [-1, 1], u(R) = 0, every segment either
/// a +-1 plateau or affine with slope +-2, at most k non-plateau segments,
/// each of length <= 1.
MembershipReport check_membership(const PiecewiseAffineProfile& p);

/// Even C^inf bump: 1 for |s| <= 1, 0 for |s| >= 2, and the smooth step
/// g(2-|s|) / (g(2-|s|) + g(|s|-1)) with g(x) = exp(-1/x) in between.
double base_bump(double s);

/// chi(R; r): 1 on [0, R^2+R], base_bump(r - R^2 - R + 1) on [R^2+R, R^2+R+1], 0 beyond.
double cutoff_chi(double R, double r);

/// zeta psi_k[R;l](r1, r2) |U_k[R;l](r3)| on an O1/O2 tau grid (the r3
/// factor is dropped when the grid has two axes).
Field build_pi_k(int k, double R, const std::vector<double>& l, double zeta, const GridPtr& grid,
                 bool unchecked = false);

/// Sample directions on S^{k-1}: +-e_j first, then uniform random points.
std::vector<std::vector<double>> sample_directions(int k, int count, std::uint64_t seed);

struct LowerBoundOptions {
  double h = 0.25;
};

/// int F^{lambda0}(pi_k[R; l]) on a dedicated grid of extent >= R^2 + R + 1.
double lower_bound_integral(int k, double R, const std::vector<double>& l, const SplitScheme& scheme,
                      const SymmetryClass& cls, const LowerBoundOptions& opts = {},
                      bool unchecked = false);

struct ChooseROptions {
  int samples = 16;
  std::uint64_t seed = 42;
  double h = 0.25;
  double R_cap = 64.0;
  double bisection_tol = 1e-2;
};

struct ChooseRResult {
  double R = 0.0;
  std::vector<std::vector<double>> directions;
  std::vector<double> integrals;  // at R, per direction
};

/// Smallest R on the schedule 2k + 0.25 * 2^i, refined by bisection, with
/// lower_bound_integral >= 1 for every sampled direction. NotFound past R_cap.
ChooseRResult choose_R_k(int k, const SplitScheme& scheme, const SymmetryClass& cls,
                         const ChooseROptions& opts = {});

/// Ordered sequence of Fields with parameters t_j.
struct Path {
  std::vector<double> t;
  std::vector<Field> nodes;
  std::size_t size() const { return nodes.size(); }
};

/// gamma(t) = w(x / (L t)) at t_j = j / (n - 1); node 0 is the zero field.
Path scaling_path(const Field& w, double L, int n_nodes, const SplitScheme& scheme, double lambda);

/// Closed-form J_lambda(u(. / t)) = 1/2 t^{N-2} int |grad u|^2 - t^N int F^lambda(u).
std::vector<std::pair<double, double>> dilation_curve(const Field& u, const SplitScheme& scheme,
                                                      double lambda, const std::vector<double>& ts);

/// Maximizer t* of the dilation curve when int F^lambda(u) > 0.
double dilation_peak(const Field& u, const SplitScheme& scheme, double lambda);

struct DiskBoundary {
  int k = 1;
  double R = 0.0;
  double t = 1.0;  // dilation applied to the U_k profiles
  std::vector<std::vector<double>> directions;
  std::vector<Field> images;
  std::vector<double> energies;  // J_{lambda0} of each image
};

/// Radial images zeta U_k[R; l](r / t) with t doubled until J_{lambda0} < 0
/// at every direction. R defaults to 4k.
DiskBoundary build_gamma0k_radial(int k, const SplitScheme& scheme, const GridPtr& grid,
                                  const std::vector<std::vector<double>>& directions, double R = 0.0);

/// Directory of node_XXX.csv files plus manifest.json (t_j, energies).
void write_path(const Path& path, const std::filesystem::path& dir, const std::vector<double>& energies = {});
Path read_path(const GridPtr& grid, const std::filesystem::path& dir);

}  // namespace scalarfield
