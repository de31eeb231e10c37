#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalarfield {

using ScalarFn = std::function<double(double)>;

/// Adaptive Simpson quadrature of g over [a, b].
double adaptive_simpson(const ScalarFn& g, double a, double b, double abs_tol = 1e-10,
                        int max_depth = 48);

/// Even primitive G(t) = int_0^t g of an odd integrand g, tabulated on
/// [0, t_max] and evaluated by cubic Hermite interpolation (the tabulated
/// derivative is g itself). Beyond t_max it falls back to direct quadrature.
class PrimitiveTable {
 public:
  PrimitiveTable() = default;
  PrimitiveTable(ScalarFn g, double t_max, double spacing);

  double operator()(double t) const;
  double t_max() const { return t_max_; }

 private:
  ScalarFn g_;
  double t_max_ = 0.0;
  double spacing_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

/// Closed-form tag carried by built-in models; echoed into reports.
struct ClosedFormTag {
  std::string name;
  std::vector<std::pair<std::string, double>> params;
};

/// A Berestycki-Lions nonlinearity f together with its primitive F and the
/// space dimension N. Immutable after construction.
class NonlinearityModel {
 public:
  /// When `F` is empty the primitive is tabulated from `f`.
  NonlinearityModel(ScalarFn f, std::optional<ScalarFn> F, int N,
                    std::optional<ClosedFormTag> tag = std::nullopt);

  /// f(t) = -a t + b |t|^{p-1} t.
  static NonlinearityModel power(double a, double b, double p, int N);
  /// f(t) = -t + t^3.
  static NonlinearityModel cubic(int N) { return power(1.0, 1.0, 3.0, N); }
  /// f(t) = -a t + b t^3 - c t^5.
  static NonlinearityModel cubic_quintic(double a, double b, double c, int N);
  /// Piecewise-linear interpolation of (t, f(t)) samples given for t >= 0,
  /// extended oddly. A sample at t = 0 with value 0 is implied.
  static NonlinearityModel tabulated(std::vector<std::pair<double, double>> samples, int N);

  double f(double t) const { return f_(t); }
  double F(double t) const { return F_(t); }
  int dimension() const { return N_; }
  const std::optional<ClosedFormTag>& tag() const { return tag_; }
  const ScalarFn& f_fn() const { return f_; }

  /// (N+2)/(N-2); infinite for N <= 2.
  double critical_exponent() const;

 private:
  ScalarFn f_;
  ScalarFn F_;
  int N_;
  std::optional<ClosedFormTag> tag_;
};

using ModelPtr = std::shared_ptr<const NonlinearityModel>;

/// Dyadic probe for limsup_{t->0} f(t)/t: scales t = t0 * 2^{-j}, j = 0..levels,
/// the last `tail` scales form the limsup proxy.
struct LimsupProbe {
  double t0 = 1.0;
  int levels = 40;
  int tail = 8;
};

double derive_mu(const NonlinearityModel& model, const LimsupProbe& probe = {});

/// Split f = f1 - f2 with f1(t) = max{f(t) + 2 mu t, 0} for t >= 0 (odd
/// extension), f2 = f1 - f, and the lambda-family f^lambda = lambda f1 - f2.
class SplitScheme {
 public:
  SplitScheme(ModelPtr model, double mu, double table_max = 64.0,
              double table_spacing = 1.0 / 512.0);

  const NonlinearityModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  int dimension() const { return model_->dimension(); }

  double mu() const { return mu_; }
  double zeta() const { return zeta_; }
  double lambda0() const { return lambda0_; }
  bool complete() const { return complete_; }

  double f1(double t) const;
  double f2(double t) const { return f1(t) - model_->f(t); }
  double F1(double t) const;
  double F2(double t) const { return F1(t) - model_->F(t); }

  /// f^lambda = f - (1 - lambda) f1, identical to lambda f1 - f2.
  double f_lambda(double lambda, double t) const;
  double F_lambda(double lambda, double t) const;

  /// Throws LambdaOutOfRange unless lambda is in [lambda0, 1].
  void check_lambda(double lambda) const;

  /// Fixes zeta and lambda0 (validated against the SplitScheme invariant).
  void set_zeta(double zeta, double lambda0);

 private:
  ModelPtr model_;
  double mu_;
  double zeta_ = 0.0;
  double lambda0_ = 0.0;
  bool complete_ = false;
  PrimitiveTable F1_table_;
};

SplitScheme split(ModelPtr model, double mu);

struct ZetaSearch {
  double t_min = 0.0;
  double t_max = 10.0;
  double step = 1e-3;
};

/// Some zeta > 0 with F(zeta) > 0. Prefers the first scan point where
/// 2F >= F1 (so that lambda0 <= 3/4); otherwise the scan maximizer of F.
double find_zeta(const NonlinearityModel& model, const ZetaSearch& search = {});

/// Midpoint of (F2(zeta)/F1(zeta), 1).
double find_lambda0(const SplitScheme& scheme, double zeta);

/// derive_mu, split, find_zeta and find_lambda0 in sequence.
SplitScheme make_scheme(ModelPtr model, const ZetaSearch& search = {},
                        const LimsupProbe& probe = {});

struct TruncationResult {
  NonlinearityModel model;
  bool truncated = false;
  double zeta1 = 0.0;
  std::string flag;
};

/// Replaces f by 0 for |t| above the first zero zeta1 >= zeta found in
/// [zeta, t_max]; unchanged (flag "no-truncation") when no zero is found.
TruncationResult truncate(const NonlinearityModel& model, double zeta, double t_max = 10.0,
                          double scan_step = 1e-3);

/// Comparison envelope: h(t) = max{mu t + f(t), 0} (odd), its p0-monotone
/// hull hbar(t) = t^p0 max_{0<s<=t} h(s)/s^p0 and Hbar = int hbar.
class ComparisonEnvelope {
 public:
  ComparisonEnvelope(const SplitScheme& scheme, double p0, double t_max = 12.0,
                     double spacing = 1e-4);

  double p0() const { return p0_; }
  double delta0() const { return delta0_; }
  double t_max() const { return t_max_; }
  double h(double t) const;
  double hbar(double t) const;
  double Hbar(double t) const;

 private:
  double h_pos(double t) const;
  double hbar_pos(double t) const;
  double Hbar_pos(double t) const;

  ModelPtr model_;
  double mu_;
  double p0_;
  double t_max_;
  double spacing_;
  double delta0_ = 0.0;
  std::vector<double> running_max_;  // max_{nodes <= t_i} h/t^p0
  std::vector<double> cumulative_;   // Hbar at nodes
};

/// Default p0: midpoint of (1, (N+2)/(N-2)).
double default_p0(int N);

ComparisonEnvelope comparison_envelope(const SplitScheme& scheme, double p0);

struct ConditionResult {
  std::string name;
  bool passed = false;
  std::string evidence;
  std::vector<std::pair<double, double>> samples;
};

struct BLReport {
  std::vector<ConditionResult> conditions;
  bool all_passed() const;
};

struct BLValidationOptions {
  double sample_max = 10.0;
  int sample_count = 2001;
  double jump_bound = 1e-1;  // continuity modulus on the sample grid
  LimsupProbe probe{};
  int growth_levels = 24;    // (f3) probed at t = 2^j, j = 0..levels
  double growth_tol = 1e-3;
  ZetaSearch zeta{};
};

/// Sampled evidence for (f1)-(f4).
BLReport validate_BL(const NonlinearityModel& model, const BLValidationOptions& opts = {});

}  // namespace scalarfield
