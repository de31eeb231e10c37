#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>

#include "scalarfield/errors.hpp"
#include "scalarfield/profile.hpp"

using namespace scalarfield;

namespace {

const SplitScheme& cubic1() {
  static const SplitScheme s = make_scheme(std::make_shared<NonlinearityModel>(NonlinearityModel::cubic(1)));
  return s;
}

const GridPtr& line_grid() {
  static const GridPtr g = build_grid(SymmetryClass::line(), 300.0, 0.1);
  return g;
}

// ground state of -u'' + u = u^3 on the line
double soliton(double x) { return std::sqrt(2.0) / std::cosh(x); }

// u_n = w(x) - w(x - 4n), n = 1..64
const FieldSequence& two_bumps() {
  static const FieldSequence seq = [] {
    FieldSequence s;
    for (int n = 1; n <= 64; ++n)
      s.push_back(sample(line_grid(), [n](double x, double, double) { return soliton(x) - soliton(x - 4.0 * n); }));
    return s;
  }();
  return seq;
}

FieldSequence spreading() {
  FieldSequence s;
  for (int n = 1; n <= 64; ++n)
    s.push_back(sample(line_grid(), [n](double x, double, double) { return soliton(x / n) / std::sqrt(n); }));
  return s;
}

DecomposeOptions fixed_floor() {
  DecomposeOptions o;
  o.rho_floor = 1.0;
  return o;
}

}  // namespace

TEST_CASE("window masses and the vanishing functional") {
  const auto& g = line_grid();
  const FieldSequence zeros(8, Field(g));
  CHECK(vanishing_sigma(zeros) == 0.0);

  const Field bump = sample(g, [](double x, double, double) { return soliton(x); });
  const auto m = window_masses(bump);
  REQUIRE(m.size() == g->axis(0).size());
  const auto top = std::max_element(m.begin(), m.end()) - m.begin();
  CHECK(g->axis(0).nodes[top] == doctest::Approx(0.0).epsilon(1e-12));

  const FieldSequence still(8, bump);
  CHECK(vanishing_sigma(still) == doctest::Approx(m[top]).epsilon(1e-14));

  const FieldSequence spread = spreading();
  double prev = INFINITY;
  for (int n : {8, 16, 32, 64}) {
    const FieldSequence one{spread[n - 1]};
    const double s = vanishing_sigma(one, 1.0, 1.0);
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("extraction from a constant sequence returns the member") {
  const Field bump = sample(line_grid(), [](double x, double, double) { return soliton(x - 3.0); });
  const FieldSequence seq(6, bump);
  const Extraction ex = extract_profile(seq);
  for (long y : ex.centers) CHECK(y == 30);
  const Field back = shift(ex.profile, 0, 30);
  CHECK((back.values() - bump.values()).cwiseAbs().maxCoeff() <= 1e-12);
  for (const Field& r : ex.residual) CHECK(r.values().cwiseAbs().maxCoeff() <= 1e-12);

  ExtractOptions high;
  high.threshold = 1e6;
  CHECK_THROWS_AS(extract_profile(seq, high), Error);
}

TEST_CASE("planted two-bump decomposition") {
  const auto& seq = two_bumps();
  const ProfileDecomposition dec = decompose(seq, cubic1(), fixed_floor());
  REQUIRE(dec.l == 2);
  CHECK(dec.reached_vanishing);
  const Field w = sample(line_grid(), [](double x, double, double) { return soliton(x); });
  CHECK((dec.profiles[0].values() - w.values()).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((dec.profiles[1].values() + w.values()).cwiseAbs().maxCoeff() <= 1e-8);
  for (std::size_t n = 0; n < seq.size(); ++n) {
    CHECK(dec.centers[0][n] == 0);
    CHECK(std::abs(dec.centers[1][n] - 40L * static_cast<long>(n + 1)) <= 1);
  }
  const VerifyReport rep = verify_decomposition(seq, dec, cubic1());
  CHECK(rep.passed);
  CHECK(rep.energy_residual <= 1e-6);
  CHECK(rep.tail_residual <= 1e-6);
  CHECK(rep.min_separation >= 10.0);
  for (double r : rep.profile_gradients) CHECK(r <= 5e-3);
  CHECK(rep.norm_budget_excess <= 1e-6);

  // idempotent and deterministic
  const ProfileDecomposition again = decompose(seq, cubic1(), fixed_floor());
  CHECK(again.l == dec.l);
  CHECK(again.centers == dec.centers);
  CHECK((again.profiles[1].values() - dec.profiles[1].values()).cwiseAbs().maxCoeff() == 0.0);
  const ProfileDecomposition of_residual = decompose(dec.residual, cubic1(), fixed_floor());
  for (const Field& p : of_residual.profiles) CHECK(norm_h1(p) <= 1e-6);
}

TEST_CASE("deleting a profile breaks energy additivity") {
  const auto& seq = two_bumps();
  ProfileDecomposition dec = decompose(seq, cubic1(), fixed_floor());
  REQUIRE(dec.l == 2);
  const double lost = dec.energies[1];
  dec.profiles.pop_back();
  dec.centers.pop_back();
  dec.energies.pop_back();
  --dec.l;
  const VerifyReport rep = verify_decomposition(seq, dec, cubic1());
  CHECK_FALSE(rep.energy_ok);
  CHECK(rep.energy_residual == doctest::Approx(std::abs(lost)).epsilon(1e-6));
}

TEST_CASE("slow spreading is not resolved on a finite tail") {
  // the tail still carries window mass well above the threshold, so an
  // extracted profile is not a critical point
  const FieldSequence seq = spreading();
  const ProfileDecomposition dec = decompose(seq, cubic1(), fixed_floor());
  CHECK(vanishing_sigma(seq) > dec.vanish_threshold);
  const VerifyReport rep = verify_decomposition(seq, dec, cubic1());
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("sequence round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "scalarfield_seq_test";
  std::filesystem::remove_all(dir);
  const FieldSequence seq(two_bumps().begin(), two_bumps().begin() + 3);
  write_sequence(seq, dir);
  const FieldSequence back = read_sequence(line_grid(), dir);
  REQUIRE(back.size() == 3);
  for (std::size_t n = 0; n < 3; ++n) CHECK((back[n].values() - seq[n].values()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK_THROWS_AS(read_sequence(line_grid(), dir / "missing"), Error);
  std::filesystem::remove_all(dir);
}
