#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace scalarfield {

enum class ClassKind { Radial, O1Tau, O2Tau, Line };

/// Symmetry class of the admissible functions. Line is the plain real line
/// (N = 1, no symmetry); it is used for one-dimensional fixtures.
struct SymmetryClass {
  ClassKind kind = ClassKind::Radial;
  int N = 3;
  int M = 0;

  static SymmetryClass radial(int N) { return {ClassKind::Radial, N, 0}; }
  static SymmetryClass o1tau(int N, int M) { return {ClassKind::O1Tau, N, M}; }
  static SymmetryClass o2tau(int N, int M) { return {ClassKind::O2Tau, N, M}; }
  static SymmetryClass line() { return {ClassKind::Line, 1, 0}; }

  bool antisymmetric() const { return kind == ClassKind::O1Tau || kind == ClassKind::O2Tau; }
  std::string name() const;
};

/// Surface area of the unit sphere S^{n} in R^{n+1}.
double sphere_area(int n);

enum class AxisKind { Radial, Line };

/// One reduced coordinate. A radial axis covers [0, R] with a regular
/// centre at 0; a line axis covers [-R, R]. Outer ends are Dirichlet.
///
/// Cells are the dual intervals around nodes; `volume[i]` is the measure
/// int r^{m-1} dr over cell i and `edge[i]` couples nodes i and i+1 with
/// weight r_{i+1/2}^{m-1} / h, so that sum edge*(du)^2 is int |u'|^2 r^{m-1}.
struct Axis {
  AxisKind kind = AxisKind::Radial;
  int m = 1;
  double h = 0.0;
  double extent = 0.0;
  std::vector<double> nodes;
  std::vector<double> volume;
  std::vector<double> edge;

  std::size_t size() const { return nodes.size(); }
  bool is_boundary(std::size_t i) const {
    return i + 1 == nodes.size() || (kind == AxisKind::Line && i == 0);
  }
  double lower() const { return nodes.front(); }
};

Axis make_axis(AxisKind kind, int m, double extent, double h);

/// Tensor grid in reduced coordinates, row-major with the last axis fastest.
class ReducedGrid {
 public:
  ReducedGrid(SymmetryClass cls, std::vector<Axis> axes, double omega);

  const SymmetryClass& symmetry() const { return cls_; }
  std::size_t dims() const { return axes_.size(); }
  const Axis& axis(std::size_t a) const { return axes_[a]; }
  const std::vector<Axis>& axes() const { return axes_; }
  double omega() const { return omega_; }
  double h() const { return axes_.front().h; }
  double extent() const { return axes_.front().extent; }
  std::size_t size() const { return size_; }
  std::array<std::size_t, 3> shape() const { return shape_; }

  std::size_t index(std::size_t i, std::size_t j = 0, std::size_t k = 0) const {
    return (i * shape_[1] + j) * shape_[2] + k;
  }
  std::array<std::size_t, 3> multi_index(std::size_t flat) const;
  std::array<double, 3> coords(std::size_t flat) const;
  bool is_boundary(std::size_t flat) const { return boundary_[flat] != 0; }

  /// Quadrature weights: omega * prod volume.
  const Eigen::VectorXd& weights() const { return weights_; }

 private:
  SymmetryClass cls_;
  std::vector<Axis> axes_;
  double omega_;
  std::array<std::size_t, 3> shape_{1, 1, 1};
  std::size_t size_ = 0;
  Eigen::VectorXd weights_;
  std::vector<char> boundary_;
};

using GridPtr = std::shared_ptr<const ReducedGrid>;

/// Axes on [0, R_inf] per reduced coordinate (line axes on [-R_inf, R_inf]).
GridPtr build_grid(const SymmetryClass& cls, double R_inf, double h);

/// Node values on a grid. Boundary values are kept at zero by every
/// operation in the library.
class Field {
 public:
  Field() = default;
  explicit Field(GridPtr grid);
  Field(GridPtr grid, Eigen::VectorXd values);

  const GridPtr& grid() const { return grid_; }
  const ReducedGrid& g() const { return *grid_; }
  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double s);

  void zero_boundary();

 private:
  GridPtr grid_;
  Eigen::VectorXd values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double s, Field a);

/// Field from a function of the reduced coordinates; boundary set to zero.
template <class Fn>
Field sample(const GridPtr& grid, Fn&& fn) {
  Field u(grid);
  for (std::size_t n = 0; n < grid->size(); ++n) {
    if (grid->is_boundary(n)) continue;
    const auto x = grid->coords(n);
    u[n] = fn(x[0], x[1], x[2]);
  }
  return u;
}

void check_same_grid(const Field& a, const Field& b);

/// sum_n w_n g_n with pairwise summation.
double integrate(const ReducedGrid& grid, const Eigen::VectorXd& g);
double integrate(const Field& g);

/// Weighted inner product and norm, <u, v>_w = sum w u v.
double inner_w(const Field& u, const Field& v);
double norm_w(const Field& u);

/// K u, the stiffness matrix applied to u; u^T K u = int |grad u|^2.
Eigen::VectorXd stiffness_apply(const Field& u);
/// int |grad u|^2.
double dirichlet_energy(const Field& u);
/// H^1 inner product and norm: int grad u . grad v + u v.
double inner_h1(const Field& u, const Field& v);
double norm_h1(const Field& u);

/// Delta_h u = -(K u) / w on interior nodes, zero on Dirichlet nodes.
Field laplacian_apply(const Field& u);

/// (u - u o swap(r1, r2)) / 2.
Field project_tau(const Field& u);

enum class Half { First, Second };
/// Zeroes nodes with r1 <= r2 (First) or r1 >= r2 (Second).
Field half_restriction(const Field& u, Half half);

/// Multilinear interpolation of u at reduced coordinates x, zero outside
/// the grid box.
double interpolate(const Field& u, const std::array<double, 3>& x);

/// u(x / t) resampled on the same grid.
Field dilate(const Field& u, double t);

/// Integer-node shift along axis `a` (used on line axes); values moved
/// past the ends are dropped.
Field shift(const Field& u, std::size_t a, long nodes);

/// Resample u onto another grid of the same class by interpolation.
Field regrid(const Field& u, const GridPtr& target);

/// Solves (K + W) x = b for the H^1 Riesz representative, by per-axis
/// generalized eigendecomposition on interior nodes (a tridiagonal solve on
/// one-axis grids).
class H1Solver {
 public:
  explicit H1Solver(GridPtr grid);
  /// Riesz representative of the functional v -> <g, v>_w.
  Field riesz(const Field& g) const;
  const GridPtr& grid() const { return grid_; }

 private:
  Eigen::VectorXd apply_modes(const Eigen::VectorXd& x, bool transpose) const;

  GridPtr grid_;
  std::vector<Eigen::MatrixXd> phi_;     // full-size, zero rows/cols on boundary
  Eigen::VectorXd inv_diag_;             // 1 / (omega (sum lambda + 1)) per mode
  std::vector<double> diag_, off_;       // one-axis grids only
};

std::shared_ptr<const H1Solver> h1_solver(const GridPtr& grid);

void write_field_csv(const Field& u, const std::filesystem::path& path);
/// Reads a Field written for `grid`; ShapeMismatch if the node set differs.
Field read_field_csv(const GridPtr& grid, const std::filesystem::path& path);

}  // namespace scalarfield
