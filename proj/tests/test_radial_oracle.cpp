#include <doctest.h>

#include <cmath>
#include <memory>

#include "scalarfield/errors.hpp"
#include "scalarfield/functional.hpp"
#include "scalarfield/radial_oracle.hpp"

using namespace scalarfield;

namespace {

const NonlinearityModel& cubic() {
  static const NonlinearityModel m = NonlinearityModel::cubic(3);
  return m;
}

}  // namespace

TEST_CASE("shooting outcomes at extreme amplitudes") {
  CHECK(shoot(cubic(), 3, 0.1).outcome == ShootOutcome::TurnsBack);
  const ShootResult big = shoot(cubic(), 3, 10.0);
  CHECK(big.outcome == ShootOutcome::Crosses);
  CHECK(big.zeros == 1);
}

TEST_CASE("cubic ground state") {
  const ShootingResult gs = ground_state(cubic(), 3);
  // amplitude confirmed by an independent scipy shooting run
  CHECK(gs.alpha == doctest::Approx(4.33738768).epsilon(1e-8));
  CHECK(gs.decay_verified);
  CHECK(std::abs(gs.P) / gs.grad2 <= 1e-3);
  CHECK(gs.J == doctest::Approx(18.89725).epsilon(1e-5));
  for (std::size_t i = 0; i + 1 < gs.profile.u.size(); ++i) CHECK(gs.profile.u[i] > 0.0);
  CHECK(gs.profile.du.front() == 0.0);

  OracleOptions tight;
  tight.shoot.rtol = 1e-11;
  const ShootingResult gs2 = ground_state(cubic(), 3, tight);
  CHECK(std::abs(gs2.alpha - gs.alpha) <= 1e-6 * gs.alpha);
}

TEST_CASE("excited states") {
  const ShootingResult s0 = bound_state(cubic(), 3, 0);
  const ShootingResult s1 = bound_state(cubic(), 3, 1);
  const ShootingResult s2 = bound_state(cubic(), 3, 2);
  CHECK(s0.J < s1.J);
  CHECK(s1.J < s2.J);
  int zeros = 0;
  for (std::size_t i = 1; i < s2.profile.u.size(); ++i)
    if ((s2.profile.u[i] > 0.0) != (s2.profile.u[i - 1] > 0.0)) ++zeros;
  CHECK(zeros == 2);
  CHECK(std::abs(s1.P) / s1.grad2 <= 1e-3);
}

TEST_CASE("grid energy of the oracle is stable under refinement") {
  const ShootingResult gs = ground_state(cubic(), 3);
  const SplitScheme s = make_scheme(std::make_shared<NonlinearityModel>(cubic()));
  const double J1 = J(oracle_field(gs, build_grid(SymmetryClass::radial(3), 20.0, 0.05)), s, 1.0);
  const double J2 = J(oracle_field(gs, build_grid(SymmetryClass::radial(3), 40.0, 0.025)), s, 1.0);
  CHECK(std::abs(J1 - J2) <= 3e-3 * std::abs(J2));
}

TEST_CASE("no bracket") {
  const NonlinearityModel lin([](double t) { return -t; }, [](double t) { return -0.5 * t * t; }, 3);
  OracleOptions o;
  o.alpha_max = 50.0;
  CHECK_THROWS_AS(ground_state(lin, 3, o), Error);
}
