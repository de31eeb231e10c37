#include "scalarfield/profile.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

int translation_axis(const ReducedGrid& grid) {
  for (std::size_t a = 0; a < grid.dims(); ++a)
    if (grid.axis(a).kind == AxisKind::Line) return static_cast<int>(a);
  return -1;
}

std::vector<double> window_masses(const Field& v, double radius) {
  const ReducedGrid& g = v.g();
  const Eigen::VectorXd& w = g.weights();
  const double r2 = radius * radius;
  const int ax = translation_axis(g);
  if (ax < 0) {
    double m = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
      const auto x = g.coords(n);
      if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= r2) m += w[n] * v[n] * v[n];
    }
    return {m};
  }
  // per line node, the mass of each transverse shell that fits in the ball
  const Axis& line = g.axis(ax);
  const auto len = static_cast<long>(line.size());
  const long reach = static_cast<long>(std::floor(radius / line.h + 1e-9));
  std::vector<std::vector<std::pair<double, double>>> slab(line.size());  // (rho^2, mass)
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto x = g.coords(n);
    const auto idx = g.multi_index(n);
    double rho2 = 0.0;
    for (std::size_t b = 0; b < g.dims(); ++b)
      if (static_cast<int>(b) != ax) rho2 += x[b] * x[b];
    if (rho2 <= r2) slab[idx[ax]].emplace_back(rho2, w[n] * v[n] * v[n]);
  }
  std::vector<double> out(line.size(), 0.0);
  for (long c = 0; c < len; ++c) {
    double m = 0.0;
    for (long k = std::max(0L, c - reach); k <= std::min(len - 1, c + reach); ++k) {
      const double d = line.nodes[k] - line.nodes[c];
      for (const auto& [rho2, mass] : slab[k])
        if (rho2 + d * d <= r2 + 1e-12) m += mass;
    }
    out[c] = m;
  }
  return out;
}

namespace {

std::size_t tail_start(std::size_t n, double fraction) {
  const auto count = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n))));
  return n - std::min(n, count);
}

}  // namespace

double vanishing_sigma(const FieldSequence& seq, double radius, double tail_fraction) {
  if (seq.empty()) throw Error(ErrorKind::ShapeMismatch, "empty sequence");
  double sigma = 0.0;
  for (std::size_t n = tail_start(seq.size(), tail_fraction); n < seq.size(); ++n) {
    const auto m = window_masses(seq[n], radius);
    sigma = std::max(sigma, *std::max_element(m.begin(), m.end()));
  }
  return sigma;
}

Field weak_limit_proxy(const FieldSequence& tail) {
  if (tail.empty()) throw Error(ErrorKind::ShapeMismatch, "empty tail");
  Field out = tail.front();
  for (std::size_t k = 1; k < tail.size(); ++k) {
    check_same_grid(out, tail[k]);
    for (std::size_t n = 0; n < out.size(); ++n)
      if (std::abs(tail[k][n]) < std::abs(out[n])) out[n] = tail[k][n];
  }
  return out;
}

Extraction extract_profile(const FieldSequence& seq, const ExtractOptions& opts) {
  const double sigma = vanishing_sigma(seq, opts.radius, opts.tail_fraction);
  if (!(sigma > opts.threshold)) {
    std::ostringstream os;
    os << "sequence is vanishing: sigma = " << sigma << " <= " << opts.threshold;
    throw Error(ErrorKind::BelowThreshold, os.str());
  }
  const ReducedGrid& g = seq.front().g();
  const int ax = translation_axis(g);
  Extraction ex;
  for (const Field& v : seq) {
    check_same_grid(seq.front(), v);
    if (opts.force_zero_center || ax < 0) {
      ex.centers.push_back(0);
      continue;
    }
    const auto m = window_masses(v, opts.radius);
    // first maximum, i.e. the smallest coordinate among ties
    const auto best = static_cast<long>(std::max_element(m.begin(), m.end()) - m.begin());
    ex.centers.push_back(best - static_cast<long>(g.axis(ax).size() - 1) / 2);
  }
  FieldSequence tail;
  for (std::size_t n = tail_start(seq.size(), opts.tail_fraction); n < seq.size(); ++n) {
    tail.push_back(ax < 0 ? seq[n] : shift(seq[n], static_cast<std::size_t>(ax), -ex.centers[n]));
  }
  ex.profile = weak_limit_proxy(tail);
  for (std::size_t n = 0; n < seq.size(); ++n) {
    const Field placed = ax < 0 ? ex.profile : shift(ex.profile, static_cast<std::size_t>(ax), ex.centers[n]);
    ex.residual.push_back(seq[n] - placed);
  }
  return ex;
}

ProfileDecomposition decompose(const FieldSequence& seq, const SplitScheme& scheme, const DecomposeOptions& opts) {
  if (seq.empty()) throw Error(ErrorKind::ShapeMismatch, "empty sequence");
  ProfileDecomposition dec;
  const auto m1 = window_masses(seq.front(), opts.radius);
  dec.vanish_threshold = opts.vanish_rel * *std::max_element(m1.begin(), m1.end());

  double sup_norm2 = 0.0;
  for (const Field& u : seq) sup_norm2 = std::max(sup_norm2, std::pow(norm_h1(u), 2));
  dec.rho_floor = opts.rho_floor;
  if (!(dec.rho_floor > 0.0)) {
    try {
      dec.rho_floor = sample_mountain_floor(seq.front().grid(), scheme, 16, 1).r0;
    } catch (const Error&) {
      dec.rho_floor = 1.0;
    }
  }
  dec.l_cap = static_cast<int>(std::floor(sup_norm2 / (dec.rho_floor * dec.rho_floor))) + 1;

  auto record = [&](const Extraction& ex) {
    dec.profiles.push_back(ex.profile);
    dec.centers.push_back(ex.centers);
    dec.energies.push_back(J(ex.profile, scheme, 1.0));
    dec.residual = ex.residual;
    ++dec.l;
  };

  ExtractOptions first{opts.radius, opts.tail_fraction, -1.0, true};
  record(extract_profile(seq, first));
  ExtractOptions next{opts.radius, opts.tail_fraction, dec.vanish_threshold, false};
  while (true) {
    if (vanishing_sigma(dec.residual, opts.radius, opts.tail_fraction) <= dec.vanish_threshold) {
      dec.reached_vanishing = true;
      break;
    }
    if (dec.l >= dec.l_cap) break;
    record(extract_profile(dec.residual, next));
  }
  for (const Field& v : dec.residual) dec.residual_norms.push_back(norm_h1(v));
  return dec;
}

VerifyReport verify_decomposition(const FieldSequence& seq, const ProfileDecomposition& dec,
                                  const SplitScheme& scheme, const VerifyOptions& opts) {
  VerifyReport rep;
  const ReducedGrid& g = seq.front().g();
  const int ax = translation_axis(g);
  const double h = ax < 0 ? 0.0 : g.axis(ax).h;
  const std::size_t last = seq.size() - 1;

  // (i) first centre pinned at 0, later centres pairwise far apart
  rep.centers_ok = !dec.centers.empty() &&
                   std::all_of(dec.centers[0].begin(), dec.centers[0].end(), [](long y) { return y == 0; });
  if (!rep.centers_ok) rep.failures.push_back("(i) first centre sequence is not identically 0");
  rep.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dec.centers.size(); ++i)
    for (std::size_t j = i + 1; j < dec.centers.size(); ++j)
      rep.min_separation = std::min(rep.min_separation,
                                    h * std::abs(static_cast<double>(dec.centers[i][last] - dec.centers[j][last])));
  const double floor = opts.separation_windows * 2.0 * opts.radius;
  if (dec.centers.size() > 1 && rep.min_separation < floor) {
    rep.centers_ok = false;
    rep.failures.push_back("(i) centres closer than the separation floor at the last index");
  }

  // (ii) nonzero profiles beyond the first, each nearly critical
  rep.profiles_ok = true;
  double budget = 0.0;
  for (std::size_t k = 0; k < dec.profiles.size(); ++k) {
    const Field& w = dec.profiles[k];
    const double nw = norm_h1(w);
    budget += nw * nw;
    if (nw <= opts.zero_norm) {
      rep.profile_gradients.push_back(0.0);
      if (k > 0) {
        rep.profiles_ok = false;
        rep.failures.push_back("(ii) profile " + std::to_string(k + 1) + " is zero");
      }
      continue;
    }
    const double r = dual_residual(w, scheme, 1.0);
    rep.profile_gradients.push_back(r);
    if (r > opts.gradient_tol) {
      rep.profiles_ok = false;
      rep.failures.push_back("(ii) profile " + std::to_string(k + 1) + " is not critical");
    }
  }
  double sup_norm2 = 0.0;
  for (const Field& u : seq) sup_norm2 = std::max(sup_norm2, std::pow(norm_h1(u), 2));
  rep.norm_budget_excess = budget - sup_norm2;

  // (iii) energy additivity at the last index
  double sum = 0.0;
  for (const Field& w : dec.profiles) sum += J(w, scheme, 1.0);
  rep.energy_residual = std::abs(J(seq[last], scheme, 1.0) - sum);
  rep.energy_ok = rep.energy_residual <= opts.energy_tol;
  if (!rep.energy_ok) rep.failures.push_back("(iii) energies do not add up");

  // (iv) vanishing residual on the tail
  rep.tail_residual = 0.0;
  for (std::size_t n = tail_start(seq.size(), opts.tail_fraction); n < dec.residual.size(); ++n)
    rep.tail_residual = std::max(rep.tail_residual, norm_h1(dec.residual[n]));
  rep.residual_ok = rep.tail_residual <= opts.residual_tol;
  if (!rep.residual_ok) rep.failures.push_back("(iv) residual does not vanish");

  rep.passed = rep.centers_ok && rep.profiles_ok && rep.energy_ok && rep.residual_ok;
  return rep;
}

FieldSequence read_sequence(const GridPtr& grid, const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorKind::IoError, "missing manifest.json in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::IoError, std::string("bad manifest: ") + e.what());
  }
  FieldSequence seq;
  for (const auto& f : manifest.at("files").get<std::vector<std::string>>()) seq.push_back(read_field_csv(grid, dir / f));
  if (seq.empty()) throw Error(ErrorKind::IoError, "manifest lists no fields");
  return seq;
}

void write_sequence(const FieldSequence& seq, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (std::size_t n = 0; n < seq.size(); ++n) {
    std::ostringstream name;
    name << "u_" << std::setw(3) << std::setfill('0') << n << ".csv";
    write_field_csv(seq[n], dir / name.str());
    files.push_back(name.str());
  }
  nlohmann::json manifest;
  manifest["count"] = seq.size();
  manifest["files"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorKind::IoError, "cannot write manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

}  // namespace scalarfield
