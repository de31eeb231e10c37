#include "scalarfield/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scalarfield/errors.hpp"

namespace scalarfield {

namespace {

double simpson_step(const ScalarFn& g, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(g, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(g, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

double adaptive_simpson(const ScalarFn& g, double a, double b, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a);
  const double fb = g(b);
  const double fm = g(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(g, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

// ---------------------------------------------------------------------------

PrimitiveTable::PrimitiveTable(ScalarFn g, double t_max, double spacing)
    : g_(std::move(g)), t_max_(t_max), spacing_(spacing) {
  const auto n = static_cast<std::size_t>(std::ceil(t_max_ / spacing_));
  t_max_ = static_cast<double>(n) * spacing_;
  values_.assign(n + 1, 0.0);
  slopes_.assign(n + 1, 0.0);
  slopes_[0] = g_(0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i - 1) * spacing_;
    const double b = static_cast<double>(i) * spacing_;
    values_[i] = values_[i - 1] + adaptive_simpson(g_, a, b, 1e-14, 30);
    slopes_[i] = g_(b);
  }
}

double PrimitiveTable::operator()(double t) const {
  const double x = std::abs(t);
  if (x >= t_max_) {
    // relative tolerance: the tail grows like a power of x
    const double m = 0.5 * (t_max_ + x);
    const double coarse = (x - t_max_) / 6.0 * (g_(t_max_) + 4.0 * g_(m) + g_(x));
    return values_.back() + adaptive_simpson(g_, t_max_, x, 1e-12 * (1.0 + std::abs(coarse)), 24);
  }
  const auto i = static_cast<std::size_t>(x / spacing_);
  const double s = (x - static_cast<double>(i) * spacing_) / spacing_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * values_[i] + h10 * spacing_ * slopes_[i] + h01 * values_[i + 1] +
         h11 * spacing_ * slopes_[i + 1];
}

// ---------------------------------------------------------------------------

NonlinearityModel::NonlinearityModel(ScalarFn f, std::optional<ScalarFn> F, int N,
                                     std::optional<ClosedFormTag> tag)
    : f_(std::move(f)), N_(N), tag_(std::move(tag)) {
  if (F) {
    F_ = std::move(*F);
  } else {
    auto table = std::make_shared<PrimitiveTable>(f_, 64.0, 1.0 / 512.0);
    F_ = [table](double t) { return (*table)(t); };
  }
}

NonlinearityModel NonlinearityModel::power(double a, double b, double p, int N) {
  auto f = [a, b, p](double t) { return -a * t + b * std::pow(std::abs(t), p - 1.0) * t; };
  auto F = [a, b, p](double t) {
    return -0.5 * a * t * t + b * std::pow(std::abs(t), p + 1.0) / (p + 1.0);
  };
  ClosedFormTag tag{"power", {{"a", a}, {"b", b}, {"p", p}}};
  if (a == 1.0 && b == 1.0 && p == 3.0) tag.name = "cubic";
  return NonlinearityModel(f, F, N, tag);
}

NonlinearityModel NonlinearityModel::cubic_quintic(double a, double b, double c, int N) {
  auto f = [a, b, c](double t) { return -a * t + b * t * t * t - c * std::pow(t, 5); };
  auto F = [a, b, c](double t) {
    const double t2 = t * t;
    return -0.5 * a * t2 + 0.25 * b * t2 * t2 - c * t2 * t2 * t2 / 6.0;
  };
  return NonlinearityModel(f, F, N, ClosedFormTag{"cubic-quintic", {{"a", a}, {"b", b}, {"c", c}}});
}

NonlinearityModel NonlinearityModel::tabulated(std::vector<std::pair<double, double>> samples,
                                               int N) {
  std::sort(samples.begin(), samples.end());
  if (samples.empty() || samples.front().first > 0.0) samples.insert(samples.begin(), {0.0, 0.0});
  auto table = std::make_shared<std::vector<std::pair<double, double>>>(std::move(samples));
  auto f = [table](double t) {
    const double x = std::abs(t);
    const auto& s = *table;
    if (x >= s.back().first) return sgn(t) * s.back().second;
    auto it = std::upper_bound(s.begin(), s.end(), x,
                               [](double v, const auto& e) { return v < e.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (x - lo.first) / (hi.first - lo.first);
    return sgn(t) * ((1.0 - w) * lo.second + w * hi.second);
  };
  return NonlinearityModel(f, std::nullopt, N, ClosedFormTag{"tabulated", {}});
}

double NonlinearityModel::critical_exponent() const {
  if (N_ <= 2) return std::numeric_limits<double>::infinity();
  return static_cast<double>(N_ + 2) / static_cast<double>(N_ - 2);
}

// ---------------------------------------------------------------------------

double derive_mu(const NonlinearityModel& model, const LimsupProbe& probe) {
  double proxy = -std::numeric_limits<double>::infinity();
  for (int j = probe.levels - probe.tail + 1; j <= probe.levels; ++j) {
    const double t = std::ldexp(probe.t0, -j);
    proxy = std::max(proxy, model.f(t) / t);
  }
  if (!std::isfinite(proxy) || proxy >= 0.0) {
    std::ostringstream os;
    os << "limsup proxy of f(t)/t near 0 is " << proxy;
    throw Error(ErrorKind::NotNegativeDefiniteAtZero, os.str());
  }
  return -0.5 * proxy;
}

SplitScheme::SplitScheme(ModelPtr model, double mu, double table_max, double table_spacing)
    : model_(std::move(model)), mu_(mu) {
  const auto* m = model_.get();
  F1_table_ = PrimitiveTable(
      [m, mu](double t) {
        const double v = m->f(t) + 2.0 * mu * t;
        return t >= 0.0 ? std::max(v, 0.0) : std::min(v, 0.0);
      },
      table_max, table_spacing);
}

double SplitScheme::f1(double t) const {
  const double v = model_->f(t) + 2.0 * mu_ * t;
  return t >= 0.0 ? std::max(v, 0.0) : std::min(v, 0.0);
}

double SplitScheme::F1(double t) const { return std::max(F1_table_(t), 0.0); }

double SplitScheme::f_lambda(double lambda, double t) const {
  return model_->f(t) - (1.0 - lambda) * f1(t);
}

double SplitScheme::F_lambda(double lambda, double t) const {
  return model_->F(t) - (1.0 - lambda) * F1(t);
}

void SplitScheme::check_lambda(double lambda) const {
  const double lo = complete_ ? lambda0_ : 0.0;
  if (!(lambda >= lo - 1e-14 && lambda <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " outside [" << lo << ", 1]";
    throw Error(ErrorKind::LambdaOutOfRange, os.str());
  }
}

void SplitScheme::set_zeta(double zeta, double lambda0) {
  if (!(lambda0 > 0.0 && lambda0 < 1.0) || !(lambda0 * F1(zeta) - F2(zeta) > 0.0)) {
    throw Error(ErrorKind::SplitNotSubordinate, "lambda0 F1(zeta) - F2(zeta) must be positive");
  }
  zeta_ = zeta;
  lambda0_ = lambda0;
  complete_ = true;
}

SplitScheme split(ModelPtr model, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::NotNegativeDefiniteAtZero, "mu must be positive");
  return SplitScheme(std::move(model), mu);
}

double find_zeta(const NonlinearityModel& model, const ZetaSearch& search) {
  std::optional<SplitScheme> scheme;
  try {
    const double mu = derive_mu(model);
    scheme.emplace(std::make_shared<NonlinearityModel>(model), mu,
                   std::max(16.0, search.t_max), 1.0 / 256.0);
  } catch (const Error&) {
    // (f2) fails: fall back to the plain F > 0 rule.
  }
  const auto count = static_cast<long>(std::floor((search.t_max - search.t_min) / search.step));
  double best_t = 0.0;
  double best_F = 0.0;
  for (long i = 0; i <= count; ++i) {
    const double t = search.t_min + static_cast<double>(i) * search.step;
    if (t <= 0.0) continue;
    const double F = model.F(t);
    if (F > 0.0 && scheme && 2.0 * F >= scheme->F1(t)) return t;
    if (F > best_F) {
      best_F = F;
      best_t = t;
    }
  }
  if (best_F > 0.0) return best_t;
  std::ostringstream os;
  os << "F <= 0 on [" << search.t_min << ", " << search.t_max << "]";
  throw Error(ErrorKind::NoPositivePrimitive, os.str());
}

double find_lambda0(const SplitScheme& scheme, double zeta) {
  const double F1 = scheme.F1(zeta);
  const double F2 = scheme.F2(zeta);
  if (!(F1 > F2) || !(F2 >= 0.0)) {
    std::ostringstream os;
    os << "F1(zeta) = " << F1 << " does not exceed F2(zeta) = " << F2;
    throw Error(ErrorKind::SplitNotSubordinate, os.str());
  }
  return 0.5 * (F2 / F1 + 1.0);
}

SplitScheme make_scheme(ModelPtr model, const ZetaSearch& search, const LimsupProbe& probe) {
  const double mu = derive_mu(*model, probe);
  SplitScheme scheme = split(model, mu);
  const double zeta = find_zeta(*model, search);
  scheme.set_zeta(zeta, find_lambda0(scheme, zeta));
  return scheme;
}

// ---------------------------------------------------------------------------

TruncationResult truncate(const NonlinearityModel& model, double zeta, double t_max,
                          double scan_step) {
  const auto count = static_cast<long>(std::floor((t_max - zeta) / scan_step));
  double prev_t = zeta;
  double prev_f = model.f(zeta);
  std::optional<double> root;
  if (prev_f == 0.0) root = zeta;
  for (long i = 1; i <= count && !root; ++i) {
    const double t = zeta + static_cast<double>(i) * scan_step;
    const double ft = model.f(t);
    if (ft == 0.0) {
      root = t;
    } else if ((ft > 0.0) != (prev_f > 0.0)) {
      double lo = prev_t;
      double hi = t;
      const bool lo_positive = prev_f > 0.0;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if ((model.f(mid) > 0.0) == lo_positive) lo = mid; else hi = mid;
      }
      root = 0.5 * (lo + hi);
    }
    prev_t = t;
    prev_f = ft;
  }
  if (!root) return TruncationResult{model, false, 0.0, "no-truncation"};

  const double z1 = *root;
  const double F_at = model.F(z1);
  auto base = std::make_shared<NonlinearityModel>(model);
  auto f = [base, z1](double t) { return std::abs(t) <= z1 ? base->f(t) : 0.0; };
  auto F = [base, z1, F_at](double t) { return std::abs(t) <= z1 ? base->F(t) : F_at; };
  std::optional<ClosedFormTag> tag = model.tag();
  if (tag) {
    tag->name += "+truncated";
    tag->params.emplace_back("zeta1", z1);
  }
  return TruncationResult{NonlinearityModel(f, F, model.dimension(), tag), true, z1, "truncated"};
}

// ---------------------------------------------------------------------------

double default_p0(int N) {
  return 0.5 * (1.0 + static_cast<double>(N + 2) / static_cast<double>(N - 2));
}

ComparisonEnvelope::ComparisonEnvelope(const SplitScheme& scheme, double p0, double t_max,
                                       double spacing)
    : model_(scheme.model_ptr()), mu_(scheme.mu()), p0_(p0), spacing_(spacing) {
  const auto n = static_cast<std::size_t>(std::ceil(t_max / spacing));
  t_max_ = static_cast<double>(n) * spacing_;
  running_max_.assign(n + 1, 0.0);
  cumulative_.assign(n + 1, 0.0);

  // delta0: last point before h first becomes positive, refined by bisection.
  std::size_t first_positive = n + 1;
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = static_cast<double>(i) * spacing_;
    running_max_[i] = std::max(running_max_[i - 1], h_pos(t) / std::pow(t, p0_));
    if (first_positive > n && h_pos(t) > 0.0) first_positive = i;
  }
  if (first_positive <= n) {
    double lo = static_cast<double>(first_positive - 1) * spacing_;
    double hi = static_cast<double>(first_positive) * spacing_;
    for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (h_pos(mid) > 0.0) hi = mid; else lo = mid;
    }
    delta0_ = lo;
  } else {
    delta0_ = t_max_;
  }

  // Gauss-Legendre (5 points) per panel; hbar is smooth on each panel up to
  // one kink where the two branches of the max cross.
  static constexpr double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
  static constexpr double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
  for (std::size_t i = 1; i <= n; ++i) {
    const double a = static_cast<double>(i - 1) * spacing_;
    double sum = 0.0;
    for (int q = 0; q < 5; ++q) {
      const double s = a + 0.5 * spacing_ * (gx[q] + 1.0);
      sum += gw[q] * std::max(std::pow(s, p0_) * running_max_[i - 1], h_pos(s));
    }
    cumulative_[i] = cumulative_[i - 1] + 0.5 * spacing_ * sum;
  }
}

double ComparisonEnvelope::h_pos(double t) const { return std::max(mu_ * t + model_->f(t), 0.0); }

double ComparisonEnvelope::hbar_pos(double t) const {
  if (t <= 0.0) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(t / spacing_), running_max_.size() - 1);
  const double node_t = static_cast<double>(i) * spacing_;
  if (node_t == t) return std::pow(t, p0_) * running_max_[i];
  return std::max(std::pow(t, p0_) * running_max_[i], h_pos(t));
}

double ComparisonEnvelope::Hbar_pos(double t) const {
  if (t <= 0.0) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(t / spacing_), cumulative_.size() - 1);
  const double a = static_cast<double>(i) * spacing_;
  if (t <= a) return cumulative_[i];
  return cumulative_[i] +
         adaptive_simpson([this](double s) { return hbar_pos(s); }, a, t, 1e-13, 20);
}

double ComparisonEnvelope::h(double t) const { return t >= 0.0 ? h_pos(t) : -h_pos(-t); }
double ComparisonEnvelope::hbar(double t) const { return t >= 0.0 ? hbar_pos(t) : -hbar_pos(-t); }
double ComparisonEnvelope::Hbar(double t) const { return Hbar_pos(std::abs(t)); }

ComparisonEnvelope comparison_envelope(const SplitScheme& scheme, double p0) {
  return ComparisonEnvelope(scheme, p0);
}

// ---------------------------------------------------------------------------

bool BLReport::all_passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const ConditionResult& c) { return c.passed; });
}

BLReport validate_BL(const NonlinearityModel& model, const BLValidationOptions& opts) {
  BLReport report;

  {
    ConditionResult c{"f1", true, "", {}};
    double worst_odd = 0.0;
    double worst_jump = 0.0;
    double prev = model.f(-opts.sample_max);
    for (int i = 0; i < opts.sample_count; ++i) {
      const double t =
          -opts.sample_max + 2.0 * opts.sample_max * i / static_cast<double>(opts.sample_count - 1);
      const double ft = model.f(t);
      const double scale = std::max(1.0, std::abs(ft));
      worst_odd = std::max(worst_odd, std::abs(ft + model.f(-t)) / scale);
      worst_jump = std::max(worst_jump, std::abs(ft - prev));
      prev = ft;
    }
    c.passed = worst_odd <= 1e-12 && worst_jump <= opts.jump_bound * std::max(1.0, std::abs(prev));
    std::ostringstream os;
    os << "max relative odd defect " << worst_odd << ", max jump on sample grid " << worst_jump;
    c.evidence = os.str();
    report.conditions.push_back(c);
  }

  {
    ConditionResult c{"f2", false, "", {}};
    double proxy = -std::numeric_limits<double>::infinity();
    for (int j = 0; j <= opts.probe.levels; ++j) {
      const double t = std::ldexp(opts.probe.t0, -j);
      const double ratio = model.f(t) / t;
      c.samples.emplace_back(t, ratio);
      if (j > opts.probe.levels - opts.probe.tail) proxy = std::max(proxy, ratio);
    }
    c.passed = std::isfinite(proxy) && proxy < 0.0;
    std::ostringstream os;
    os << "limsup proxy of f(t)/t as t->0: " << proxy;
    c.evidence = os.str();
    report.conditions.push_back(c);
  }

  {
    ConditionResult c{"f3", false, "", {}};
    const double p = model.critical_exponent();
    std::vector<double> ratios;
    for (int j = 0; j <= opts.growth_levels; ++j) {
      const double t = std::ldexp(1.0, j);
      const double ratio = std::abs(model.f(t)) / std::pow(t, p);
      ratios.push_back(ratio);
      c.samples.emplace_back(t, ratio);
    }
    bool decreasing = true;
    for (std::size_t i = ratios.size() - 4; i + 1 < ratios.size(); ++i)
      decreasing = decreasing && ratios[i + 1] <= ratios[i] * (1.0 + 1e-12);
    c.passed = ratios.back() <= opts.growth_tol && decreasing;
    std::ostringstream os;
    os << "|f(t)|/t^" << p << " at t = 2^" << opts.growth_levels << ": " << ratios.back()
       << (decreasing ? " (non-increasing tail)" : " (tail not decreasing)");
    c.evidence = os.str();
    report.conditions.push_back(c);
  }

  {
    ConditionResult c{"f4", false, "", {}};
    try {
      const double zeta = find_zeta(model, opts.zeta);
      c.passed = true;
      std::ostringstream os;
      os << "zeta = " << zeta << " with F(zeta) = " << model.F(zeta);
      c.evidence = os.str();
      c.samples.emplace_back(zeta, model.F(zeta));
    } catch (const Error& e) {
      c.evidence = e.what();
    }
    report.conditions.push_back(c);
  }
  return report;
}

}  // namespace scalarfield
