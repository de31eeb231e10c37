#pragma once

#include <string>
#include <vector>

#include "scalarfield/grid.hpp"
#include "scalarfield/nonlinearity.hpp"

namespace scalarfield {

enum class ShootOutcome {
  Crosses,    // more zeros than requested
  TurnsBack,  // |u| turns back towards larger values before the next zero
  Decays,     // |u| + |u'| fell below the decay floor
  BlowsUp,
};

std::string to_string(ShootOutcome o);

struct ShootOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double r_start = 1e-6;
  double r_max = 60.0;
  double decay_floor = 1e-8;
  double blowup = 1e6;
  int nodes = 0;  // zeros allowed before the outcome is decided
};

struct Trajectory {
  std::vector<double> r, u, du;
};

struct ShootResult {
  ShootOutcome outcome = ShootOutcome::Decays;
  int zeros = 0;
  double r_end = 0.0;
  Trajectory trajectory;
};

/// Integrates u'' + (N-1)/r u' + f(u) = 0, u(0) = alpha, u'(0) = 0, from a
/// two-term series start. `sample_dr` > 0 records the profile on a uniform r
/// grid; otherwise only the outcome is computed.
ShootResult shoot(const NonlinearityModel& model, int N, double alpha, const ShootOptions& opts = {},
                  double sample_dr = 0.0);

struct ShootingResult {
  double alpha = 0.0;
  int nodes = 0;
  bool decay_verified = false;
  double r_last = 0.0;  // profile set to 0 beyond this radius
  Trajectory profile;
  double J = 0.0;  // continuum energy from the profile
  double P = 0.0;  // continuum Pohozaev value
  double grad2 = 0.0;
};

struct OracleOptions {
  ShootOptions shoot{};
  double alpha_min = 1e-2;
  double alpha_max = 1e3;
  double scan_factor = 1.05;
  double alpha_tol = 1e-12;  // relative bisection tolerance
  double sample_dr = 1e-3;
};

/// k-node radial bound state by bisection on alpha; k = 0 is the ground state.
ShootingResult bound_state(const NonlinearityModel& model, int N, int k, const OracleOptions& opts = {});
ShootingResult ground_state(const NonlinearityModel& model, int N, const OracleOptions& opts = {});

/// Oracle profile resampled on a radial grid (linear interpolation).
Field oracle_field(const ShootingResult& res, const GridPtr& grid);

}  // namespace scalarfield
