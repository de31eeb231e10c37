#include "scalarfield/radial_oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

namespace odeint = boost::numeric::odeint;

std::string to_string(ShootOutcome o) {
  switch (o) {
    case ShootOutcome::Crosses: return "crosses";
    case ShootOutcome::TurnsBack: return "turns_back";
    case ShootOutcome::Decays: return "decays";
    case ShootOutcome::BlowsUp: return "blows_up";
  }
  return "unknown";
}

namespace {

using State = std::array<double, 2>;

enum class Phase { Growing, Shrinking };

Phase phase_of(const State& x) { return x[0] * x[1] > 0.0 ? Phase::Growing : Phase::Shrinking; }

}  // namespace

ShootResult shoot(const NonlinearityModel& model, int N, double alpha, const ShootOptions& opts,
                  double sample_dr) {
  if (!(alpha > 0.0)) throw Error(ErrorKind::BadEndpoint, "shooting amplitude must be positive");
  const double Nd = static_cast<double>(N);
  auto rhs = [&model, Nd](const State& x, State& dx, double r) {
    dx[0] = x[1];
    dx[1] = -(Nd - 1.0) / r * x[1] - model.f(x[0]);
  };

  const double r0 = opts.r_start;
  const double fa = model.f(alpha);
  State x{alpha - fa * r0 * r0 / (2.0 * Nd), -fa * r0 / Nd};

  auto stepper = odeint::make_dense_output(opts.atol, opts.rtol, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(x, r0, 1e-4);

  ShootResult res;
  Trajectory& tr = res.trajectory;
  if (sample_dr > 0.0) {
    tr.r.push_back(0.0);
    tr.u.push_back(alpha);
    tr.du.push_back(0.0);
  }
  double next_sample = sample_dr;
  Phase phase = phase_of(x);
  double prev_u = x[0];
  int steps = 0;

  while (true) {
    if (++steps > 5000000) throw Error(ErrorKind::StiffnessFailure, "step budget exhausted");
    stepper.do_step(rhs);
    const double r = stepper.current_time();
    const State& s = stepper.current_state();
    if (!std::isfinite(s[0]) || !std::isfinite(s[1])) {
      throw Error(ErrorKind::StiffnessFailure, "non-finite state during shooting");
    }
    if (sample_dr > 0.0) {
      State tmp;
      while (next_sample <= r && next_sample <= opts.r_max) {
        stepper.calc_state(next_sample, tmp);
        tr.r.push_back(next_sample);
        tr.u.push_back(tmp[0]);
        tr.du.push_back(tmp[1]);
        next_sample += sample_dr;
      }
    }
    res.r_end = r;
    if ((s[0] > 0.0) != (prev_u > 0.0) && s[0] != 0.0) {
      ++res.zeros;
      if (res.zeros > opts.nodes) {
        res.outcome = ShootOutcome::Crosses;
        return res;
      }
      phase = Phase::Growing;
    }
    prev_u = s[0];
    const Phase now = phase_of(s);
    if (phase == Phase::Shrinking && now == Phase::Growing) {
      res.outcome = ShootOutcome::TurnsBack;
      return res;
    }
    phase = now;
    if (std::abs(s[0]) + std::abs(s[1]) < opts.decay_floor) {
      res.outcome = ShootOutcome::Decays;
      return res;
    }
    if (std::abs(s[0]) > opts.blowup) {
      res.outcome = ShootOutcome::BlowsUp;
      return res;
    }
    if (r >= opts.r_max) {
      res.outcome = ShootOutcome::TurnsBack;
      return res;
    }
  }
}

namespace {

bool too_large(const ShootResult& r) {
  return r.outcome == ShootOutcome::Crosses || r.outcome == ShootOutcome::BlowsUp;
}

}  // namespace

ShootingResult bound_state(const NonlinearityModel& model, int N, int k, const OracleOptions& opts) {
  ShootOptions so = opts.shoot;
  so.nodes = k;

  // Scan upward for the first amplitude with more than k zeros.
  double lo = 0.0;
  double hi = 0.0;
  bool have_lo = false;
  for (double a = opts.alpha_min; a <= opts.alpha_max; a *= opts.scan_factor) {
    const ShootResult r = shoot(model, N, a, so);
    if (too_large(r) && r.zeros > k) {
      if (have_lo) {
        hi = a;
        break;
      }
    } else if (!too_large(r)) {
      lo = a;
      have_lo = true;
      if (r.outcome == ShootOutcome::Decays && r.zeros == k) {
        hi = a;
        break;
      }
    }
  }
  if (!(hi > 0.0)) {
    std::ostringstream os;
    os << "no undershoot/overshoot bracket for " << k << " nodes in [" << opts.alpha_min << ", "
       << opts.alpha_max << "]";
    throw Error(ErrorKind::NoBracket, os.str());
  }

  while (hi - lo > opts.alpha_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const ShootResult r = shoot(model, N, mid, so);
    if (r.outcome == ShootOutcome::Decays && r.zeros == k) {
      lo = hi = mid;
      break;
    }
    if (too_large(r)) hi = mid; else lo = mid;
  }

  ShootingResult out;
  out.alpha = lo;
  out.nodes = k;
  ShootResult r = shoot(model, N, lo, so, opts.sample_dr);
  Trajectory& tr = r.trajectory;

  // Cut at the smallest |u| after the k-th zero: beyond it the numerical
  // trajectory departs from the decaying solution.
  std::size_t start = 0;
  int zeros = 0;
  for (std::size_t i = 1; i < tr.u.size() && zeros < k; ++i) {
    if ((tr.u[i] > 0.0) != (tr.u[i - 1] > 0.0)) {
      ++zeros;
      start = i;
    }
  }
  std::size_t cut = tr.u.size() - 1;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < tr.u.size(); ++i) {
    const double m = std::abs(tr.u[i]) + std::abs(tr.du[i]);
    if (m < best) {
      best = m;
      cut = i;
    }
  }
  tr.r.resize(cut + 1);
  tr.u.resize(cut + 1);
  tr.du.resize(cut + 1);
  out.r_last = tr.r.back();
  out.decay_verified = best < 1e-6;
  out.profile = std::move(tr);

  const double Nd = static_cast<double>(N);
  const double omega = sphere_area(N - 1);
  double J = 0.0;
  double P = 0.0;
  double G = 0.0;
  const auto& rs = out.profile.r;
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    auto integrand = [&](std::size_t j, double& g, double& fF) {
      const double w = std::pow(rs[j], Nd - 1.0);
      g = out.profile.du[j] * out.profile.du[j] * w;
      fF = model.F(out.profile.u[j]) * w;
    };
    double g0, F0, g1, F1;
    integrand(i, g0, F0);
    integrand(i + 1, g1, F1);
    const double dr = rs[i + 1] - rs[i];
    G += 0.5 * dr * (g0 + g1);
    J += 0.5 * dr * (0.5 * (g0 + g1) - (F0 + F1));
    P += 0.5 * dr * (0.5 * (Nd - 2.0) * (g0 + g1) - Nd * (F0 + F1));
  }
  out.J = omega * J;
  out.P = omega * P;
  out.grad2 = omega * G;
  return out;
}

ShootingResult ground_state(const NonlinearityModel& model, int N, const OracleOptions& opts) {
  return bound_state(model, N, 0, opts);
}

Field oracle_field(const ShootingResult& res, const GridPtr& grid) {
  if (grid->symmetry().kind != ClassKind::Radial) {
    throw Error(ErrorKind::WrongSymmetryClass, "oracle profiles live on radial grids");
  }
  const auto& rs = res.profile.r;
  const auto& us = res.profile.u;
  return sample(grid, [&](double r, double, double) {
    if (r >= res.r_last) return 0.0;
    auto it = std::upper_bound(rs.begin(), rs.end(), r);
    if (it == rs.begin()) return us.front();
    const auto i = static_cast<std::size_t>(it - rs.begin());
    if (i >= rs.size()) return us.back();
    const double w = (r - rs[i - 1]) / (rs[i] - rs[i - 1]);
    return (1.0 - w) * us[i - 1] + w * us[i];
  });
}

}  // namespace scalarfield
