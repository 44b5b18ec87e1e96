#include "spo/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_set>

#include "spo/rng.hpp"

namespace spo {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw ComplexityError(what);
}

constexpr std::uint64_t kSaltSpo = 0x5350u;
constexpr std::uint64_t kSaltMulti = 0x4d56u;

McEstimate summarize(const std::vector<double>& values) {
  McEstimate est;
  est.draws = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  est.estimate = mean;
  if (values.size() > 1) est.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / values.size());
  return est;
}

}  // namespace

Vec Hypothesis::predict(std::size_t i, const Vec& x) const {
  if (is_linear()) return matrix() * x;
  const auto& t = outputs();
  if (i >= t.size()) throw ComplexityError("prediction table has no entry for point " + std::to_string(i));
  return t[i];
}

int Hypothesis::output_dim() const {
  if (is_linear()) return static_cast<int>(matrix().rows());
  return outputs().empty() ? 0 : static_cast<int>(outputs().front().size());
}

void FiniteHypothesisSet::validate(std::size_t n, int p) const {
  require(!items.empty(), "hypothesis set is empty");
  const int d = items.front().output_dim();
  require(d >= 1, "hypotheses must have output dimension >= 1");
  for (const auto& h : items) {
    require(h.output_dim() == d, "hypotheses differ in output dimension");
    if (h.is_linear()) {
      require(h.matrix().cols() == p, "hypothesis matrix expects a different feature dimension");
    } else {
      require(h.outputs().size() >= n, "prediction table shorter than the sample");
      for (const auto& o : h.outputs()) require(o.size() == d, "prediction table rows differ in dimension");
    }
  }
}

McEstimate rademacher_spo_mc(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                             const LabeledSample& sample, std::size_t m_draws, std::uint64_t seed) {
  sample.validate();
  hypotheses.validate(sample.n(), sample.p());
  require(m_draws >= 1, "need at least one Monte-Carlo draw");
  const std::size_t n = sample.n();
  std::vector<std::vector<double>> losses(hypotheses.size(), std::vector<double>(n));
  for (std::size_t h = 0; h < hypotheses.size(); ++h)
    for (std::size_t i = 0; i < n; ++i)
      losses[h][i] = spo_loss(region, hypotheses.items[h].predict(i, sample.xs[i]), sample.cs[i]);

  std::vector<double> values(m_draws);
  std::vector<double> sigma(n);
  for (std::size_t m = 0; m < m_draws; ++m) {
    Sampler rng(substream(seed, m, kSaltSpo));
    for (auto& s : sigma) s = rng.sign();
    double best = -kInf;
    for (const auto& row : losses) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += sigma[i] * row[i];
      best = std::max(best, acc / static_cast<double>(n));
    }
    values[m] = best;
  }
  return summarize(values);
}

McEstimate rademacher_multivariate_mc(const FiniteHypothesisSet& hypotheses, const std::vector<Vec>& xs,
                                      std::size_t m_draws, std::uint64_t seed) {
  require(!xs.empty(), "feature list is empty");
  hypotheses.validate(xs.size(), static_cast<int>(xs.front().size()));
  require(m_draws >= 1, "need at least one Monte-Carlo draw");
  const std::size_t n = xs.size();
  const int d = hypotheses.items.front().output_dim();
  // Sum_i sigma_i^T f(x_i) only needs each hypothesis' predictions.
  std::vector<Mat> preds;
  preds.reserve(hypotheses.size());
  for (const auto& h : hypotheses.items) {
    Mat P(d, static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) P.col(static_cast<Eigen::Index>(i)) = h.predict(i, xs[i]);
    preds.push_back(std::move(P));
  }
  std::vector<double> values(m_draws);
  Mat sigma(d, static_cast<Eigen::Index>(n));
  for (std::size_t m = 0; m < m_draws; ++m) {
    Sampler rng(substream(seed, m, kSaltMulti));
    for (Eigen::Index i = 0; i < sigma.cols(); ++i)
      for (Eigen::Index j = 0; j < d; ++j) sigma(j, i) = rng.sign();
    double best = -kInf;
    for (const auto& P : preds) best = std::max(best, sigma.cwiseProduct(P).sum() / static_cast<double>(n));
    values[m] = best;
  }
  return summarize(values);
}

std::size_t count_restrictions(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                               const std::vector<Vec>& xs) {
  require(region.has_finite_extreme_points(), "restriction counting needs finitely many extreme points");
  require(!xs.empty(), "feature list is empty");
  hypotheses.validate(xs.size(), static_cast<int>(xs.front().size()));
  std::set<std::vector<double>> tuples;
  for (const auto& h : hypotheses.items) {
    std::vector<double> key;
    key.reserve(xs.size() * static_cast<std::size_t>(region.dim()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const Vec w = linopt_oracle(region, h.predict(i, xs[i]));
      key.insert(key.end(), w.data(), w.data() + w.size());
    }
    tuples.insert(std::move(key));
  }
  return tuples.size();
}

double massart_bound(double card, std::size_t n, double omega) {
  require(card >= 1.0, "class cardinality must be >= 1");
  require(n >= 1, "n must be >= 1");
  require(omega >= 0.0, "omega must be >= 0");
  return omega * std::sqrt(2.0 * std::log(card) / static_cast<double>(n));
}

void LabelTable::validate() const {
  require(points >= 0 && hypotheses >= 1, "label table needs at least one hypothesis");
  require(labels.size() == static_cast<std::size_t>(points) * static_cast<std::size_t>(hypotheses),
          "label table is not rectangular");
  for (int v : labels) require(v >= 1, "labels must be >= 1");
}

LabelTable label_table(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                       const std::vector<Vec>& xs) {
  require(region.has_finite_extreme_points(), "label tables need finitely many extreme points");
  require(!xs.empty(), "feature list is empty");
  hypotheses.validate(xs.size(), static_cast<int>(xs.front().size()));
  LabelTable t;
  t.points = static_cast<int>(xs.size());
  t.hypotheses = static_cast<int>(hypotheses.size());
  t.labels.resize(static_cast<std::size_t>(t.points) * t.hypotheses);
  std::map<std::vector<double>, int> ids;
  for (int i = 0; i < t.points; ++i) {
    for (int h = 0; h < t.hypotheses; ++h) {
      const Vec w = linopt_oracle(region, hypotheses.items[h].predict(i, xs[i]));
      const auto [it, fresh] = ids.emplace(std::vector<double>(w.data(), w.data() + w.size()),
                                           static_cast<int>(ids.size()) + 1);
      t.labels[static_cast<std::size_t>(i) * t.hypotheses + h] = it->second;
    }
  }
  return t;
}

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (int x : v) {
      h ^= static_cast<std::uint64_t>(x);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

// Does F restricted to `pts` N-shatter them?
bool shatters(const LabelTable& table, const std::vector<int>& pts) {
  const std::size_t k = pts.size();
  std::unordered_set<std::vector<int>, TupleHash> patterns;
  std::vector<int> tuple(k);
  for (int h = 0; h < table.hypotheses; ++h) {
    for (std::size_t j = 0; j < k; ++j) tuple[j] = table.at(pts[j], h);
    patterns.insert(tuple);
  }
  const std::size_t full = std::size_t{1} << k;
  if (patterns.size() < full) return false;
  const std::vector<std::vector<int>> distinct(patterns.begin(), patterns.end());
  for (std::size_t a = 0; a < distinct.size(); ++a) {
    for (std::size_t b = a + 1; b < distinct.size(); ++b) {
      const auto& g1 = distinct[a];
      const auto& g2 = distinct[b];
      bool disjoint = true;
      for (std::size_t j = 0; j < k && disjoint; ++j) disjoint = g1[j] != g2[j];
      if (!disjoint) continue;
      bool all = true;
      // T = empty and T = all are g2 and g1 themselves.
      for (std::size_t mask = 1; mask + 1 < full && all; ++mask) {
        for (std::size_t j = 0; j < k; ++j) tuple[j] = (mask >> j) & 1U ? g1[j] : g2[j];
        all = patterns.count(tuple) > 0;
      }
      if (all) return true;
    }
  }
  return false;
}

}  // namespace

int natarajan_dim_bruteforce(const LabelTable& table) {
  table.validate();
  require(table.points <= kNatarajanMaxPoints, "Natarajan search budget: at most 12 points");
  require(table.hypotheses <= kNatarajanMaxHypotheses, "Natarajan search budget: at most 2^16 hypotheses");
  const int m = table.points;
  for (int k = 1; k <= m; ++k) {
    // No set of size k can be shattered by fewer than 2^k functions.
    if (k < 63 && (std::size_t{1} << k) > static_cast<std::size_t>(table.hypotheses)) return k - 1;
    bool found = false;
    std::vector<int> pts(static_cast<std::size_t>(k));
    std::vector<bool> pick(static_cast<std::size_t>(m), false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
      std::size_t j = 0;
      for (int i = 0; i < m; ++i)
        if (pick[i]) pts[j++] = i;
      found = shatters(table, pts);
    } while (!found && std::prev_permutation(pick.begin(), pick.end()));
    if (!found) return k - 1;
  }
  return m;
}

double linear_class_rad_bound(const LinearPredictorClass& cls, double x_radius, std::size_t n) {
  require(n >= 1, "n must be >= 1");
  require(cls.beta > 0.0, "beta must be positive");
  require(cls.d >= 1 && cls.p >= 1, "dimensions must be >= 1");
  require(x_radius >= 0.0, "feature radius must be >= 0");
  const double nn = static_cast<double>(n);
  switch (cls.kind) {
    case ConstraintKind::Frobenius:
      return x_radius * cls.beta * std::sqrt(2.0 * cls.d / nn);
    case ConstraintKind::L1Vec:
      require(static_cast<long>(cls.p) * cls.d > 1, "l1 bound needs p*d > 1");
      return x_radius * cls.beta * std::sqrt(6.0 * std::log(static_cast<double>(cls.p) * cls.d) / nn);
    case ConstraintKind::GroupLasso:
      require(cls.p > 1, "group-lasso bound needs p > 1");
      return x_radius * cls.beta * std::sqrt(6.0 * cls.d * std::log(static_cast<double>(cls.p)) / nn);
  }
  throw ComplexityError("unknown constraint kind");
}

}  // namespace spo
