#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "scalarfield/errors.hpp"
#include "scalarfield/grid.hpp"

using namespace scalarfield;

namespace {

double bump(double r, double R) {
  // smooth cutoff equal to 1 well inside, vanishing with all derivatives at R
  const double s = r / R;
  if (s >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s * s * s));
}

}  // namespace

TEST_CASE("grid shapes") {
  const auto g3 = build_grid(SymmetryClass::radial(3), 20.0, 0.05);
  CHECK(g3->size() == 401);
  CHECK(g3->dims() == 1);
  CHECK(g3->axis(0).m == 3);
  CHECK(g3->omega() == doctest::Approx(4.0 * std::numbers::pi));

  const auto g4 = build_grid(SymmetryClass::o2tau(4, 2), 15.0, 0.25);
  CHECK(g4->dims() == 2);
  CHECK(g4->axis(0).m - 1 == 1);
  CHECK(g4->axis(1).m - 1 == 1);
  CHECK(g4->omega() == doctest::Approx(4.0 * std::numbers::pi * std::numbers::pi));

  const auto g6 = build_grid(SymmetryClass::o2tau(6, 2), 4.0, 0.25);
  CHECK(g6->dims() == 3);
  for (std::size_t a = 0; a < 3; ++a) CHECK(g6->axis(a).m == 2);

  const auto o1 = build_grid(SymmetryClass::o1tau(5, 2), 4.0, 0.25);
  CHECK(o1->dims() == 3);
  CHECK(o1->axis(2).kind == AxisKind::Line);

  CHECK_THROWS_AS(build_grid(SymmetryClass::radial(3), 1.0, 0.25), Error);
  CHECK_THROWS_AS(build_grid(SymmetryClass::o2tau(5, 2), 4.0, 0.25), Error);
  for (const auto& g : {g3, g4, g6, o1}) CHECK(g->weights().minCoeff() > 0.0);
}

TEST_CASE("integration") {
  const auto g = build_grid(SymmetryClass::radial(3), 2.0, 1e-3);
  CHECK(integrate(Field(g)) == 0.0);
  // the node on the jump carries the midpoint value
  const Field ind = sample(g, [](double r, double, double) {
    return r < 1.0 - 1e-12 ? 1.0 : (r < 1.0 + 1e-12 ? 0.5 : 0.0);
  });
  CHECK(std::abs(integrate(ind) - 4.0 * std::numbers::pi / 3.0) <= 1e-3);

  auto gauss = [](double h) {
    const auto gr = build_grid(SymmetryClass::radial(3), 10.0, h);
    return integrate(sample(gr, [](double r, double, double) { return std::exp(-r * r); }));
  };
  const double coarse = gauss(0.02);
  const double fine = gauss(0.01);
  const double extrapolated = (4.0 * fine - coarse) / 3.0;
  CHECK(std::abs(extrapolated - std::pow(std::numbers::pi, 1.5)) <= 1e-6);
}

TEST_CASE("laplacian of a quadratic is exact") {
  for (int N : {1, 2, 3, 5}) {
    const double R = 3.0;
    const auto g = build_grid(SymmetryClass::radial(N), R, 0.1);
    const Field u = sample(g, [R](double r, double, double) { return R * R - r * r; });
    const Field L = laplacian_apply(u);
    for (std::size_t n = 0; n + 1 < g->size(); ++n) CHECK(L[n] == doctest::Approx(-2.0 * N).epsilon(1e-9));
  }
  const auto g2 = build_grid(SymmetryClass::o2tau(6, 2), 3.0, 0.1);
  const Field u2 = sample(g2, [](double a, double b, double c) { return a * a + 2 * b * b - c * c; });
  const Field L2 = laplacian_apply(u2);
  // interior nodes away from the outer faces
  const std::size_t n = g2->index(5, 7, 3);
  CHECK(L2[n] == doctest::Approx(2.0 * 2 * (1 + 2 - 1)).epsilon(1e-9));
}

TEST_CASE("laplacian refinement order") {
  auto err = [](double h) {
    const auto g = build_grid(SymmetryClass::radial(3), 12.0, h);
    const Field u = sample(g, [](double r, double, double) { return std::exp(-0.5 * r * r) * bump(r, 12.0); });
    const Field L = laplacian_apply(u);
    double e = 0.0;
    for (std::size_t n = 0; n < g->size(); ++n) {
      const double r = g->coords(n)[0];
      if (r > 6.0) break;
      e = std::max(e, std::abs(L[n] - (r * r - 3.0) * std::exp(-0.5 * r * r)));
    }
    return e;
  };
  const double e1 = err(0.1);
  const double e2 = err(0.05);
  const double e3 = err(0.025);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("laplacian is symmetric in the weighted product") {
  const auto g = build_grid(SymmetryClass::o2tau(4, 2), 6.0, 0.2);
  const Field u = sample(g, [](double a, double b, double) { return std::exp(-a * a - 0.5 * b * b) * bump(std::hypot(a, b), 6.0); });
  const Field v = sample(g, [](double a, double b, double) { return a * b * std::exp(-(a * a + b * b) / 3.0) * bump(std::hypot(a, b), 6.0); });
  const double lhs = inner_w(laplacian_apply(u), v);
  const double rhs = inner_w(u, laplacian_apply(v));
  CHECK(std::abs(lhs - rhs) <= 1e-10 * norm_w(u) * norm_w(v));
  CHECK(integrate(u.g(), u.values().cwiseProduct(u.values())) >= 0.0);
  CHECK(dirichlet_energy(u) == doctest::Approx(-inner_w(laplacian_apply(u), u)).epsilon(1e-12));
}

TEST_CASE("tau projection and half restriction") {
  const auto g = build_grid(SymmetryClass::o2tau(4, 2), 6.0, 0.2);
  const Field sym = sample(g, [](double a, double b, double) { return std::exp(-a * a - b * b); });
  CHECK(project_tau(sym).values().cwiseAbs().maxCoeff() == 0.0);

  const Field anti = sample(g, [](double a, double b, double) { return (a - b) * std::exp(-a * a - b * b); });
  const Field p = project_tau(anti);
  CHECK((p.values() - anti.values()).cwiseAbs().maxCoeff() == 0.0);

  const Field mixed = sample(g, [](double a, double b, double) { return (a + 2 * b * b) * std::exp(-a * a - b * b); });
  const Field p1 = project_tau(mixed);
  CHECK((project_tau(p1).values() - p1.values()).cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < g->shape()[0]; ++i)
    for (std::size_t j = 0; j < g->shape()[1]; ++j) CHECK(p1[g->index(i, j)] == -p1[g->index(j, i)]);
  const Field c1 = project_tau(laplacian_apply(mixed));
  const Field c2 = laplacian_apply(p1);
  CHECK((c1.values() - c2.values()).cwiseAbs().maxCoeff() <= 1e-10);

  const Field h1 = half_restriction(p1, Half::First);
  const Field h2 = half_restriction(p1, Half::Second);
  CHECK(norm_w(h1) * norm_w(h1) == doctest::Approx(0.5 * norm_w(p1) * norm_w(p1)).epsilon(1e-12));
  CHECK(dirichlet_energy(h1) == doctest::Approx(0.5 * dirichlet_energy(p1)).epsilon(1e-12));
  CHECK(((h1 + h2).values() - p1.values()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(project_tau(Field(build_grid(SymmetryClass::radial(3), 4.0, 0.25))), Error);
}

TEST_CASE("h1 riesz map solves the shifted stiffness system") {
  for (const auto& g : {build_grid(SymmetryClass::radial(3), 8.0, 0.1), build_grid(SymmetryClass::o2tau(6, 2), 3.0, 0.25),
                        build_grid(SymmetryClass::o1tau(5, 2), 3.0, 0.25),
                        build_grid(SymmetryClass::line(), 20.0, 0.1)}) {
    const H1Solver solver(g);
    const Field rhs = sample(g, [](double a, double b, double c) { return std::cos(a) * std::exp(-b - c * c); });
    const Field x = solver.riesz(rhs);
    const Eigen::VectorXd lhs = stiffness_apply(x) + g->weights().cwiseProduct(x.values());
    const Eigen::VectorXd target = g->weights().cwiseProduct(rhs.values());
    double worst = 0.0;
    for (std::size_t n = 0; n < g->size(); ++n) {
      if (g->is_boundary(n)) {
        CHECK(x[n] == 0.0);
        continue;
      }
      const auto i = static_cast<Eigen::Index>(n);
      worst = std::max(worst, std::abs(lhs[i] - target[i]));
    }
    CHECK(worst <= 1e-10 * target.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("interpolation, dilation and shifts") {
  const auto g = build_grid(SymmetryClass::o1tau(5, 2), 4.0, 0.25);
  const Field u = sample(g, [](double a, double b, double c) { return 1.0 + a - 2.0 * b + 0.5 * c; });
  CHECK(interpolate(u, {1.1, 0.3, -0.7}) == doctest::Approx(1.0 + 1.1 - 0.6 - 0.35));
  CHECK((dilate(u, 1.0).values() - u.values()).cwiseAbs().maxCoeff() <= 1e-14);

  const Field blob = sample(g, [](double a, double b, double c) { return (a - b) * std::exp(-a * a - b * b - 4 * c * c); });
  const Field moved = shift(blob, 2, 3);
  CHECK(dirichlet_energy(moved) == doctest::Approx(dirichlet_energy(blob)).epsilon(1e-6));
  CHECK(moved[g->index(4, 2, 16 + 3)] == blob[g->index(4, 2, 16)]);
}

TEST_CASE("field csv round trip") {
  const auto g = build_grid(SymmetryClass::o2tau(4, 2), 3.0, 0.25);
  const Field u = sample(g, [](double a, double b, double) { return std::sin(a) * std::cos(b) / 3.0; });
  const auto path = std::filesystem::temp_directory_path() / "scalarfield_grid_roundtrip.csv";
  write_field_csv(u, path);
  const Field v = read_field_csv(g, path);
  CHECK((u.values() - v.values()).cwiseAbs().maxCoeff() == 0.0);
  const auto other = build_grid(SymmetryClass::o2tau(4, 2), 3.0, 0.125);
  CHECK_THROWS_AS(read_field_csv(other, path), Error);
  std::filesystem::remove(path);
}
