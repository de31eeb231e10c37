#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "scalarfield/functional.hpp"
#include "scalarfield/radial_oracle.hpp"

using namespace scalarfield;

namespace {

SplitScheme cubic_scheme(int N) {
  return make_scheme(std::make_shared<NonlinearityModel>(NonlinearityModel::cubic(N)));
}

const ShootingResult& cubic_oracle() {
  static const ShootingResult res = ground_state(NonlinearityModel::cubic(3), 3);
  return res;
}

}  // namespace

TEST_CASE("zero field") {
  const SplitScheme s = cubic_scheme(3);
  const auto g = build_grid(SymmetryClass::radial(3), 10.0, 0.1);
  const EnergyBreakdown e = energy(Field(g), s, 0.9);
  CHECK(e.kinetic == 0.0);
  CHECK(e.A == 0.0);
  CHECK(e.B == 0.0);
  CHECK(e.J_lambda == 0.0);
  CHECK(e.P_lambda == 0.0);
  CHECK(gradient(Field(g), s, 1.0).values().cwiseAbs().maxCoeff() == 0.0);
  CHECK(classify(Field(g), s).kind == Classification::Trivial);
}

TEST_CASE("energy of a gaussian against direct quadrature") {
  const SplitScheme s = cubic_scheme(3);
  const auto g = build_grid(SymmetryClass::radial(3), 10.0, 0.01);
  const Field u = sample(g, [](double r, double, double) { return 3.0 * std::exp(-r * r); });
  const double reference = 4.0 * std::numbers::pi * adaptive_simpson(
      [](double r) {
        const double u = 3.0 * std::exp(-r * r);
        const double du = -2.0 * r * u;
        return (0.5 * du * du + 0.5 * u * u - 0.25 * u * u * u * u) * r * r;
      },
      0.0, 10.0, 1e-12);
  const EnergyBreakdown e = energy(u, s, 1.0);
  CHECK(std::abs(e.J_lambda - reference) <= 1e-4 * std::abs(reference));
  CHECK(e.J_lambda == doctest::Approx(e.A - e.B));
  CHECK(e.B >= 0.0);
}

TEST_CASE("energy ordering in lambda, evenness") {
  const SplitScheme s = cubic_scheme(3);
  const auto g = build_grid(SymmetryClass::radial(3), 10.0, 0.1);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Field u = random_smooth_field(g, seed);
    u *= 4.0;
    double prev = J(u, s, s.lambda0());
    for (double lam : {0.8, 0.85, 0.9, 0.95, 0.99, 1.0}) {
      const double cur = J(u, s, lam);
      CHECK(cur <= prev);
      prev = cur;
    }
    CHECK(J(-1.0 * u, s, 0.9) == J(u, s, 0.9));
  }
}

TEST_CASE("gradient matches finite differences") {
  const SplitScheme s = cubic_scheme(3);
  for (const auto& g : {build_grid(SymmetryClass::radial(3), 10.0, 0.1), build_grid(SymmetryClass::o2tau(4, 2), 6.0, 0.25)}) {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
      Field u = random_smooth_field(g, seed);
      u *= 2.0;
      const Field v = random_smooth_field(g, seed + 100);
      const double eps = 1e-4;
      for (double lam : {s.lambda0(), 1.0}) {
        const double fd = (J(u + eps * v, s, lam) - J(u - eps * v, s, lam)) / (2.0 * eps);
        const double an = inner_w(gradient(u, s, lam), v);
        CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("dilation identity for the pohozaev functional") {
  const SplitScheme s = cubic_scheme(3);
  const double N = 3.0;
  const auto g = build_grid(SymmetryClass::radial(3), 10.0, 0.1);
  const Field u = sample(g, [](double r, double, double) { return 2.5 * std::exp(-r * r / 2.0); });
  const double grad2 = dirichlet_energy(u);
  const double lam = 0.9;
  Eigen::VectorXd Fu(u.values().size());
  for (Eigen::Index i = 0; i < Fu.size(); ++i) Fu[i] = s.F_lambda(lam, u.values()[i]);
  const double Flam = integrate(*g, Fu);
  for (double t : {0.5, 1.5, 2.0}) {
    const auto gt = build_grid(SymmetryClass::radial(3), 10.0 * t, 0.1 * t);
    const Field ut(gt, u.values());
    const double expected = 0.5 * (N - 2.0) * std::pow(t, N - 2.0) * grad2 - N * std::pow(t, N) * Flam;
    CHECK(pohozaev(ut, s, lam) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("oracle ground state is a critical point on the grid") {
  const SplitScheme s = cubic_scheme(3);
  const auto g = build_grid(SymmetryClass::radial(3), 20.0, 0.05);
  const Field w = oracle_field(cubic_oracle(), g);
  const ClassifyResult c = classify(w, s);
  CHECK(c.gradient_residual <= 5e-3);
  // the pointwise residual is O(h^2) with a large constant near the centre
  CHECK(c.weighted_residual <= 5e-2);
  CHECK(c.pohozaev_residual <= 1e-2);
  CHECK(c.kind == Classification::CriticalCandidate);
  CHECK(classify(0.5 * w, s).kind == Classification::Noncritical);
}

TEST_CASE("pointwise residual of the oracle converges at second order") {
  const SplitScheme s = cubic_scheme(3);
  const auto g1 = build_grid(SymmetryClass::radial(3), 20.0, 0.05);
  const auto g2 = build_grid(SymmetryClass::radial(3), 20.0, 0.025);
  const double r1 = weighted_residual(oracle_field(cubic_oracle(), g1), s, 1.0);
  const double r2 = weighted_residual(oracle_field(cubic_oracle(), g2), s, 1.0);
  CHECK(std::log2(r1 / r2) >= 1.9);
}

TEST_CASE("half restriction additivity") {
  const SplitScheme s = cubic_scheme(4);
  const auto g = build_grid(SymmetryClass::o2tau(4, 2), 8.0, 0.25);
  const Field u = project_tau(sample(g, [](double a, double b, double) {
    return 3.0 * (std::exp(-(a - 2) * (a - 2) - b * b) - std::exp(-a * a - (b - 2) * (b - 2)));
  }));
  const Field u1 = half_restriction(u, Half::First);
  const Field u2 = half_restriction(u, Half::Second);
  CHECK(J(u, s, 1.0) == doctest::Approx(J(u1, s, 1.0) + J(u2, s, 1.0)).epsilon(1e-12));
  CHECK(J(u1, s, 1.0) == doctest::Approx(0.5 * J(u, s, 1.0)).epsilon(1e-12));
  CHECK(pohozaev(u, s, 1.0) == doctest::Approx(2.0 * pohozaev(u1, s, 1.0)).epsilon(1e-12));
}

TEST_CASE("translation along a line axis") {
  const SplitScheme s = cubic_scheme(5);
  const auto g = build_grid(SymmetryClass::o1tau(5, 2), 4.0, 0.25);
  const Field u = project_tau(sample(g, [](double a, double b, double c) {
    return (a - b) * std::exp(-a * a - b * b - 2 * c * c);
  }));
  const Field moved = shift(u, 2, 2);
  CHECK(J(moved, s, 1.0) == doctest::Approx(J(u, s, 1.0)).epsilon(1e-9));
}

TEST_CASE("mountain floor") {
  const SplitScheme s = cubic_scheme(3);
  const auto g = build_grid(SymmetryClass::radial(3), 12.0, 0.1);
  const MountainFloor mf = sample_mountain_floor(g, s, 16, 3);
  CHECK(mf.r0 > 0.0);
  CHECK(mf.rho0 > 0.0);
  CHECK(sampled_sphere_min(g, s, mf.r0, 64, 1000) >= mf.rho0);
}
