#include "spo/losses.hpp"

#include <cmath>
#include <string>

namespace spo {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw LossError(what);
}

void check_pair(const FeasibleRegion& region, const Vec& c_hat, const Vec& c) {
  require(c_hat.size() == region.dim() && c.size() == region.dim(),
          "prediction/cost dimension does not match the region");
}

}  // namespace

void LabeledSample::validate() const {
  require(!xs.empty(), "sample is empty");
  require(xs.size() == cs.size(), "xs and cs differ in length");
  const auto p = xs.front().size();
  const auto d = cs.front().size();
  require(p >= 1 && d >= 1, "feature and cost dimensions must be >= 1");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i].size() != p || cs[i].size() != d) throw LossError("non-uniform dimensions at row " + std::to_string(i));
    if (!xs[i].allFinite() || !cs[i].allFinite()) throw LossError("non-finite entry at row " + std::to_string(i));
  }
}

void MarginParams::validate() const {
  require(gamma > 0.0, "gamma must be positive");
  require(gamma_bar >= gamma, "gamma_bar must be >= gamma");
  require(norm_q >= 1.0, "norm exponent must be >= 1");
}

double spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c) {
  check_pair(region, c_hat, c);
  return c.dot(linopt_oracle(region, c_hat) - linopt_oracle(region, c));
}

double margin_spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c, const MarginParams& params) {
  require(params.gamma > 0.0, "margin SPO loss needs gamma > 0");
  check_pair(region, c_hat, c);
  const double s = dual_norm(c_hat, params.norm_q);
  const double spo = spo_loss(region, c_hat, c);
  if (s > params.gamma) return spo;
  const double t = s / params.gamma;
  return t * spo + (1.0 - t) * linopt_gap(region, c);
}

double hard_margin_spo_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c,
                            const MarginParams& params) {
  require(params.gamma >= 0.0, "hard margin SPO loss needs gamma >= 0");
  check_pair(region, c_hat, c);
  if (dual_norm(c_hat, params.norm_q) > params.gamma) return spo_loss(region, c_hat, c);
  return linopt_gap(region, c);
}

double evaluate_loss(const FeasibleRegion& region, const Vec& c_hat, const Vec& c, const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Spo: return spo_loss(region, c_hat, c);
    case LossKind::Margin: return margin_spo_loss(region, c_hat, c, spec.margin);
    case LossKind::HardMargin: return hard_margin_spo_loss(region, c_hat, c, spec.margin);
  }
  throw LossError("unknown loss kind");
}

double empirical_risk(const FeasibleRegion& region, const Predictor& predictor, const LabeledSample& sample,
                      const LossSpec& spec) {
  sample.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < sample.n(); ++i) {
    const Vec c_hat = predictor(sample.xs[i]);
    total += evaluate_loss(region, c_hat, sample.cs[i], spec);
  }
  return total / static_cast<double>(sample.n());
}

}  // namespace spo
