#include "scalarfield/grid.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

std::string SymmetryClass::name() const {
  switch (kind) {
    case ClassKind::Radial: return "radial";
    case ClassKind::O1Tau: return "o1tau";
    case ClassKind::O2Tau: return "o2tau";
    case ClassKind::Line: return "line";
  }
  return "unknown";
}

double sphere_area(int n) {
  const double k = 0.5 * static_cast<double>(n + 1);
  return 2.0 * std::pow(std::numbers::pi, k) / std::tgamma(k);
}

Axis make_axis(AxisKind kind, int m, double extent, double h) {
  if (!(extent > 0.0) || !(h > 0.0)) {
    throw Error(ErrorKind::BadResolution, "extent and spacing must be positive");
  }
  const double ratio = extent / h;
  const long n = std::lround(ratio);
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "extent " << extent << " is not an integer multiple of h = " << h;
    throw Error(ErrorKind::BadResolution, os.str());
  }
  Axis ax;
  ax.kind = kind;
  ax.m = m;
  ax.extent = extent;
  ax.h = extent / static_cast<double>(n);
  const double hh = ax.h;
  if (kind == AxisKind::Radial) {
    if (n + 1 < 8) throw Error(ErrorKind::BadResolution, "fewer than 8 nodes on a radial axis");
    const double md = static_cast<double>(m);
    auto cell = [md](double a, double b) { return (std::pow(b, md) - std::pow(a, md)) / md; };
    for (long i = 0; i <= n; ++i) {
      const double r = static_cast<double>(i) * hh;
      const double lo = i == 0 ? 0.0 : r - 0.5 * hh;
      const double hi = i == n ? extent : r + 0.5 * hh;
      ax.nodes.push_back(r);
      ax.volume.push_back(cell(lo, hi));
      if (i < n) ax.edge.push_back(std::pow(r + 0.5 * hh, md - 1.0) / hh);
    }
  } else {
    if (2 * n + 1 < 8) throw Error(ErrorKind::BadResolution, "fewer than 8 nodes on a line axis");
    for (long i = -n; i <= n; ++i) {
      ax.nodes.push_back(static_cast<double>(i) * hh);
      ax.volume.push_back((i == -n || i == n) ? 0.5 * hh : hh);
      if (i < n) ax.edge.push_back(1.0 / hh);
    }
  }
  return ax;
}

ReducedGrid::ReducedGrid(SymmetryClass cls, std::vector<Axis> axes, double omega)
    : cls_(cls), axes_(std::move(axes)), omega_(omega) {
  for (std::size_t a = 0; a < axes_.size(); ++a) shape_[a] = axes_[a].size();
  size_ = shape_[0] * shape_[1] * shape_[2];
  weights_.resize(static_cast<Eigen::Index>(size_));
  boundary_.assign(size_, 0);
  for (std::size_t n = 0; n < size_; ++n) {
    const auto idx = multi_index(n);
    double w = omega_;
    bool bnd = false;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      w *= axes_[a].volume[idx[a]];
      bnd = bnd || axes_[a].is_boundary(idx[a]);
    }
    weights_[static_cast<Eigen::Index>(n)] = w;
    boundary_[n] = bnd ? 1 : 0;
  }
}

std::array<std::size_t, 3> ReducedGrid::multi_index(std::size_t flat) const {
  const std::size_t k = flat % shape_[2];
  const std::size_t rest = flat / shape_[2];
  return {rest / shape_[1], rest % shape_[1], k};
}

std::array<double, 3> ReducedGrid::coords(std::size_t flat) const {
  const auto idx = multi_index(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < axes_.size(); ++a) x[a] = axes_[a].nodes[idx[a]];
  return x;
}

GridPtr build_grid(const SymmetryClass& cls, double R_inf, double h) {
  std::vector<Axis> axes;
  double omega = 1.0;
  const int N = cls.N;
  const int M = cls.M;
  switch (cls.kind) {
    case ClassKind::Radial:
      if (N < 1) throw Error(ErrorKind::WrongSymmetryClass, "radial class needs N >= 1");
      axes.push_back(make_axis(AxisKind::Radial, N, R_inf, h));
      omega = sphere_area(N - 1);
      break;
    case ClassKind::Line:
      axes.push_back(make_axis(AxisKind::Line, 1, R_inf, h));
      break;
    case ClassKind::O1Tau:
    case ClassKind::O2Tau: {
      if (M < 2 || 2 * M > N) {
        throw Error(ErrorKind::WrongSymmetryClass, "tau classes need 2 <= M <= N/2");
      }
      const int rest = N - 2 * M;
      if (cls.kind == ClassKind::O2Tau && rest == 1) {
        throw Error(ErrorKind::WrongSymmetryClass, "O2 class needs N - 2M != 1");
      }
      if (cls.kind == ClassKind::O1Tau && rest == 0) {
        throw Error(ErrorKind::WrongSymmetryClass, "O1 class needs N - 2M != 0");
      }
      axes.push_back(make_axis(AxisKind::Radial, M, R_inf, h));
      axes.push_back(make_axis(AxisKind::Radial, M, R_inf, h));
      omega = sphere_area(M - 1) * sphere_area(M - 1);
      if (rest == 1) {
        axes.push_back(make_axis(AxisKind::Line, 1, R_inf, h));
      } else if (rest >= 2) {
        axes.push_back(make_axis(AxisKind::Radial, rest, R_inf, h));
        omega *= sphere_area(rest - 1);
      }
      break;
    }
  }
  return std::make_shared<const ReducedGrid>(cls, std::move(axes), omega);
}

// ---------------------------------------------------------------------------

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
  values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_->size()));
}

Field::Field(GridPtr grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != grid_->size()) {
    throw Error(ErrorKind::ShapeMismatch, "value count does not match grid");
  }
}

void check_same_grid(const Field& a, const Field& b) {
  if (a.grid() != b.grid() && (a.size() != b.size() || a.g().h() != b.g().h())) {
    throw Error(ErrorKind::ShapeMismatch, "fields live on different grids");
  }
}

Field& Field::operator+=(const Field& o) {
  check_same_grid(*this, o);
  values_ += o.values_;
  return *this;
}

Field& Field::operator-=(const Field& o) {
  check_same_grid(*this, o);
  values_ -= o.values_;
  return *this;
}

Field& Field::operator*=(double s) {
  values_ *= s;
  return *this;
}

void Field::zero_boundary() {
  for (std::size_t n = 0; n < size(); ++n)
    if (grid_->is_boundary(n)) (*this)[n] = 0.0;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double s, Field a) { return a *= s; }

// ---------------------------------------------------------------------------

namespace {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 128) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

std::size_t stride(const ReducedGrid& grid, std::size_t a) {
  const auto s = grid.shape();
  if (a == 0) return s[1] * s[2];
  if (a == 1) return s[2];
  return 1;
}

}  // namespace

double integrate(const ReducedGrid& grid, const Eigen::VectorXd& g) {
  if (static_cast<std::size_t>(g.size()) != grid.size()) {
    throw Error(ErrorKind::ShapeMismatch, "integrand does not match grid");
  }
  const Eigen::VectorXd wg = grid.weights().cwiseProduct(g);
  return pairwise_sum(wg.data(), grid.size());
}

double integrate(const Field& g) { return integrate(g.g(), g.values()); }

double inner_w(const Field& u, const Field& v) {
  check_same_grid(u, v);
  return integrate(u.g(), u.values().cwiseProduct(v.values()));
}

double norm_w(const Field& u) { return std::sqrt(std::max(inner_w(u, u), 0.0)); }

Eigen::VectorXd stiffness_apply(const Field& u) {
  const ReducedGrid& grid = u.g();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  const double omega = grid.omega();
  for (std::size_t a = 0; a < grid.dims(); ++a) {
    const std::size_t st = stride(grid, a);
    const Axis& ax = grid.axis(a);
    for (std::size_t n = 0; n < grid.size(); ++n) {
      const auto idx = grid.multi_index(n);
      if (idx[a] + 1 >= ax.size()) continue;
      double coef = omega * ax.edge[idx[a]];
      for (std::size_t b = 0; b < grid.dims(); ++b)
        if (b != a) coef *= grid.axis(b).volume[idx[b]];
      const auto i0 = static_cast<Eigen::Index>(n);
      const auto i1 = static_cast<Eigen::Index>(n + st);
      const double flux = coef * (u.values()[i1] - u.values()[i0]);
      out[i0] -= flux;
      out[i1] += flux;
    }
  }
  return out;
}

double dirichlet_energy(const Field& u) { return u.values().dot(stiffness_apply(u)); }

double inner_h1(const Field& u, const Field& v) {
  check_same_grid(u, v);
  return u.values().dot(stiffness_apply(v)) + inner_w(u, v);
}

double norm_h1(const Field& u) { return std::sqrt(std::max(inner_h1(u, u), 0.0)); }

Field laplacian_apply(const Field& u) {
  const Eigen::VectorXd Ku = stiffness_apply(u);
  Field out(u.grid());
  const auto& w = u.g().weights();
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.g().is_boundary(n)) continue;
    const auto i = static_cast<Eigen::Index>(n);
    out[n] = -Ku[i] / w[i];
  }
  return out;
}

Field project_tau(const Field& u) {
  const ReducedGrid& grid = u.g();
  if (!grid.symmetry().antisymmetric()) {
    throw Error(ErrorKind::WrongSymmetryClass, "tau projection needs an O1/O2 tau grid");
  }
  const auto s = grid.shape();
  Field out(u.grid());
  for (std::size_t i = 0; i < s[0]; ++i)
    for (std::size_t j = 0; j < s[1]; ++j)
      for (std::size_t k = 0; k < s[2]; ++k)
        out[grid.index(i, j, k)] = 0.5 * (u[grid.index(i, j, k)] - u[grid.index(j, i, k)]);
  return out;
}

Field half_restriction(const Field& u, Half half) {
  const ReducedGrid& grid = u.g();
  if (!grid.symmetry().antisymmetric()) {
    throw Error(ErrorKind::WrongSymmetryClass, "half restriction needs an O1/O2 tau grid");
  }
  Field out = u;
  for (std::size_t n = 0; n < u.size(); ++n) {
    const auto idx = grid.multi_index(n);
    const bool keep = half == Half::First ? idx[0] > idx[1] : idx[0] < idx[1];
    if (!keep) out[n] = 0.0;
  }
  return out;
}

double interpolate(const Field& u, const std::array<double, 3>& x) {
  const ReducedGrid& grid = u.g();
  std::array<std::size_t, 3> lo{0, 0, 0};
  std::array<double, 3> frac{0.0, 0.0, 0.0};
  for (std::size_t a = 0; a < grid.dims(); ++a) {
    const Axis& ax = grid.axis(a);
    double xa = x[a];
    if (ax.kind == AxisKind::Radial) xa = std::abs(xa);
    const double s = (xa - ax.lower()) / ax.h;
    if (s < 0.0 || s > static_cast<double>(ax.size() - 1)) return 0.0;
    auto i = static_cast<std::size_t>(s);
    if (i + 1 >= ax.size()) i = ax.size() - 2;
    lo[a] = i;
    frac[a] = s - static_cast<double>(i);
  }
  double acc = 0.0;
  const std::size_t corners = std::size_t{1} << grid.dims();
  for (std::size_t c = 0; c < corners; ++c) {
    std::array<std::size_t, 3> idx{0, 0, 0};
    double wgt = 1.0;
    for (std::size_t a = 0; a < grid.dims(); ++a) {
      const bool up = (c >> a) & 1U;
      idx[a] = lo[a] + (up ? 1 : 0);
      wgt *= up ? frac[a] : 1.0 - frac[a];
    }
    if (wgt != 0.0) acc += wgt * u[grid.index(idx[0], idx[1], idx[2])];
  }
  return acc;
}

Field dilate(const Field& u, double t) {
  Field out(u.grid());
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (u.g().is_boundary(n)) continue;
    auto x = u.g().coords(n);
    for (double& xa : x) xa /= t;
    out[n] = interpolate(u, x);
  }
  return out;
}

Field shift(const Field& u, std::size_t a, long nodes) {
  const ReducedGrid& grid = u.g();
  Field out(u.grid());
  const auto len = static_cast<long>(grid.axis(a).size());
  for (std::size_t n = 0; n < u.size(); ++n) {
    auto idx = grid.multi_index(n);
    const long src = static_cast<long>(idx[a]) - nodes;
    if (src < 0 || src >= len) continue;
    idx[a] = static_cast<std::size_t>(src);
    out[n] = u[grid.index(idx[0], idx[1], idx[2])];
  }
  out.zero_boundary();
  return out;
}

Field regrid(const Field& u, const GridPtr& target) {
  if (target->dims() != u.g().dims()) {
    throw Error(ErrorKind::ShapeMismatch, "regrid needs grids of equal dimension");
  }
  Field out(target);
  for (std::size_t n = 0; n < target->size(); ++n) {
    if (target->is_boundary(n)) continue;
    out[n] = interpolate(u, target->coords(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Y = A x_a X: contracts axis a of the tensor X (shape s) with the columns of A.
std::vector<double> mode_product(const std::vector<double>& X, std::array<std::size_t, 3>& s,
                                 std::size_t a, const Eigen::MatrixXd& A) {
  std::size_t pre = 1;
  std::size_t post = 1;
  for (std::size_t b = 0; b < a; ++b) pre *= s[b];
  for (std::size_t b = a + 1; b < 3; ++b) post *= s[b];
  const auto rows = static_cast<std::size_t>(A.rows());
  const std::size_t cols = s[a];
  std::vector<double> Y(pre * rows * post, 0.0);
  for (std::size_t p = 0; p < pre; ++p)
    for (std::size_t r = 0; r < rows; ++r) {
      double* y = &Y[(p * rows + r) * post];
      for (std::size_t c = 0; c < cols; ++c) {
        const double coef = A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (coef == 0.0) continue;
        const double* x = &X[(p * cols + c) * post];
        for (std::size_t q = 0; q < post; ++q) y[q] += coef * x[q];
      }
    }
  s[a] = rows;
  return Y;
}

}  // namespace

H1Solver::H1Solver(GridPtr grid) : grid_(std::move(grid)) {
  if (grid_->dims() == 1) {
    // tridiagonal K + V, solved directly in riesz
    const Axis& ax = grid_->axis(0);
    const std::size_t n = ax.size();
    diag_.assign(n, 0.0);
    off_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (ax.is_boundary(i)) continue;
      diag_[i] = ax.volume[i];
      if (i > 0) diag_[i] += ax.edge[i - 1];
      if (i + 1 < n) diag_[i] += ax.edge[i];
      if (i + 1 < n && !ax.is_boundary(i + 1)) off_[i] = -ax.edge[i];
    }
    return;
  }
  std::vector<Eigen::VectorXd> lambdas;
  for (std::size_t a = 0; a < grid_->dims(); ++a) {
    const Axis& ax = grid_->axis(a);
    std::vector<std::size_t> interior;
    for (std::size_t i = 0; i < ax.size(); ++i)
      if (!ax.is_boundary(i)) interior.push_back(i);
    const auto n_int = static_cast<Eigen::Index>(interior.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n_int, n_int);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(n_int, n_int);
    // interior position of every node, -1 for boundary nodes
    std::vector<Eigen::Index> pos(ax.size(), -1);
    for (Eigen::Index p = 0; p < n_int; ++p) pos[interior[static_cast<std::size_t>(p)]] = p;
    for (std::size_t i = 0; i + 1 < ax.size(); ++i) {
      const double c = ax.edge[i];
      const Eigen::Index p = pos[i];
      const Eigen::Index q = pos[i + 1];
      if (p >= 0) K(p, p) += c;
      if (q >= 0) K(q, q) += c;
      if (p >= 0 && q >= 0) {
        K(p, q) -= c;
        K(q, p) -= c;
      }
    }
    for (Eigen::Index p = 0; p < n_int; ++p) V(p, p) = ax.volume[interior[static_cast<std::size_t>(p)]];
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, V);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::StiffnessFailure, "axis eigendecomposition failed");
    }
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(ax.size()), n_int);
    for (Eigen::Index p = 0; p < n_int; ++p) phi.row(static_cast<Eigen::Index>(interior[static_cast<std::size_t>(p)])) = es.eigenvectors().row(p);
    phi_.push_back(std::move(phi));
    lambdas.push_back(es.eigenvalues());
  }
  std::array<std::size_t, 3> ms{1, 1, 1};
  for (std::size_t a = 0; a < grid_->dims(); ++a) ms[a] = static_cast<std::size_t>(lambdas[a].size());
  inv_diag_.resize(static_cast<Eigen::Index>(ms[0] * ms[1] * ms[2]));
  for (std::size_t i = 0; i < ms[0]; ++i)
    for (std::size_t j = 0; j < ms[1]; ++j)
      for (std::size_t k = 0; k < ms[2]; ++k) {
        double lam = 1.0;
        const std::array<std::size_t, 3> id{i, j, k};
        for (std::size_t a = 0; a < grid_->dims(); ++a) lam += lambdas[a][static_cast<Eigen::Index>(id[a])];
        inv_diag_[static_cast<Eigen::Index>((i * ms[1] + j) * ms[2] + k)] = 1.0 / (grid_->omega() * lam);
      }
}

Eigen::VectorXd H1Solver::apply_modes(const Eigen::VectorXd& x, bool transpose) const {
  std::vector<double> X(x.data(), x.data() + x.size());
  std::array<std::size_t, 3> s{1, 1, 1};
  for (std::size_t a = 0; a < grid_->dims(); ++a)
    s[a] = static_cast<std::size_t>(transpose ? phi_[a].rows() : phi_[a].cols());
  for (std::size_t a = 0; a < grid_->dims(); ++a) {
    if (transpose) {
      X = mode_product(X, s, a, phi_[a].transpose());
    } else {
      X = mode_product(X, s, a, phi_[a]);
    }
  }
  return Eigen::Map<Eigen::VectorXd>(X.data(), static_cast<Eigen::Index>(X.size()));
}

Field H1Solver::riesz(const Field& g) const {
  if (g.size() != grid_->size()) throw Error(ErrorKind::ShapeMismatch, "field does not match solver grid");
  const Eigen::VectorXd b = grid_->weights().cwiseProduct(g.values());
  if (!diag_.empty()) {
    const Axis& ax = grid_->axis(0);
    const std::size_t n = ax.size();
    std::vector<double> c(n, 0.0), d(n, 0.0);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    double prev_c = 0.0, prev_d = 0.0;
    bool open = false;  // previous node was interior
    for (std::size_t i = 0; i < n; ++i) {
      if (ax.is_boundary(i)) {
        open = false;
        continue;
      }
      const double rhs = b[static_cast<Eigen::Index>(i)] / grid_->omega();
      const double lower = open ? off_[i - 1] : 0.0;
      const double den = diag_[i] - lower * (open ? prev_c : 0.0);
      c[i] = off_[i] / den;
      d[i] = (rhs - lower * (open ? prev_d : 0.0)) / den;
      prev_c = c[i];
      prev_d = d[i];
      open = true;
    }
    for (std::size_t i = n; i-- > 0;) {
      if (ax.is_boundary(i)) continue;
      const double next = (i + 1 < n && !ax.is_boundary(i + 1)) ? x[static_cast<Eigen::Index>(i + 1)] : 0.0;
      x[static_cast<Eigen::Index>(i)] = d[i] - c[i] * next;
    }
    return Field(grid_, std::move(x));
  }
  Eigen::VectorXd c = apply_modes(b, true);
  c = c.cwiseProduct(inv_diag_);
  return Field(grid_, apply_modes(c, false));
}

std::shared_ptr<const H1Solver> h1_solver(const GridPtr& grid) {
  return std::make_shared<const H1Solver>(grid);
}

// ---------------------------------------------------------------------------

void write_field_csv(const Field& u, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  const ReducedGrid& grid = u.g();
  for (std::size_t a = 0; a < grid.dims(); ++a) out << 'r' << (a + 1) << ',';
  out << "u\n" << std::setprecision(17);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const auto x = grid.coords(n);
    for (std::size_t a = 0; a < grid.dims(); ++a) out << x[a] << ',';
    out << u[n] << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

Field read_field_csv(const GridPtr& grid, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns != grid->dims() + 1) {
    throw Error(ErrorKind::ShapeMismatch, path.string() + ": column count does not match grid");
  }
  Field u(grid);
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (n >= grid->size()) throw Error(ErrorKind::ShapeMismatch, path.string() + ": too many rows");
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    const auto x = grid->coords(n);
    for (std::size_t a = 0; a < grid->dims(); ++a) {
      double xa = 0.0;
      row >> xa;
      if (!row || std::abs(xa - x[a]) > 1e-9 * (1.0 + std::abs(x[a]))) {
        throw Error(ErrorKind::ShapeMismatch, path.string() + ": node coordinates do not match grid");
      }
    }
    double v = 0.0;
    row >> v;
    if (!row) throw Error(ErrorKind::IoError, path.string() + ": malformed row");
    u[n++] = v;
  }
  if (n != grid->size()) throw Error(ErrorKind::ShapeMismatch, path.string() + ": too few rows");
  return u;
}

}  // namespace scalarfield
