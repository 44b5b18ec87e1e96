#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "spo/geometry.hpp"

namespace spo {

class LossError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// n observations (x_i in R^p, c_i in R^d).
struct LabeledSample {
  std::vector<Vec> xs;
  std::vector<Vec> cs;

  std::size_t n() const { return xs.size(); }
  int p() const { return xs.empty() ? 0 : static_cast<int>(xs.front().size()); }
  int d() const { return cs.empty() ? 0 : static_cast<int>(cs.front().size()); }

  /// Throws LossError unless n >= 1, dimensions are uniform and entries finite.
  void validate() const;
};

/// gamma > 0 is the margin; gamma_bar >= gamma bounds the range of margins in
/// uniform-in-gamma statements. norm_q is the exponent of the primal norm, so
/// predictions are measured by ||c_hat||_* = ||c_hat||_{q'}.
struct MarginParams {
  double gamma = 1.0;
  double gamma_bar = 1.0;
  double norm_q = 2.0;

  static MarginParams with_gamma(double gamma, double norm_q = 2.0) { return {gamma, gamma, norm_q}; }
  void validate() const;
};

/// c^T (w*(c_hat) - w*(c)).
double spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c);

/// gamma-margin SPO loss: the SPO loss when ||c_hat||_* > gamma, otherwise the
/// interpolation (s/gamma) spo + (1 - s/gamma) omega_S(c) with s = ||c_hat||_*.
double margin_spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c, const MarginParams& params);

/// Hard gamma-margin SPO loss: omega_S(c) once ||c_hat||_* <= gamma. Accepts gamma = 0.
double hard_margin_spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c,
                            const MarginParams& params);

enum class LossKind { Spo, Margin, HardMargin };

struct LossSpec {
  LossKind kind = LossKind::Spo;
  MarginParams margin{};

  static LossSpec spo() { return {}; }
  static LossSpec margin_loss(double gamma, double norm_q = 2.0) {
    return {LossKind::Margin, MarginParams::with_gamma(gamma, norm_q)};
  }
  static LossSpec hard_margin(double gamma, double norm_q = 2.0) {
    return {LossKind::HardMargin, MarginParams::with_gamma(gamma, norm_q)};
  }
};

double evaluate_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c, const LossSpec& spec);

using Predictor = std::function<Vec(const Vec&)>;

/// x -> B x with B of shape d x p.
struct LinearPredictor {
  Mat B;
  Vec operator()(const Vec& x) const { return B * x; }
};

/// (1/n) sum_i loss(f(x_i), c_i).
double empirical_risk(const FeasibleRegion& region, const Predictor& predictor, const LabeledSample& sample,
                      const LossSpec& spec);

}  // namespace spo
