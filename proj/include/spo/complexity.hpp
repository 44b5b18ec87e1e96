#pragma once

#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "spo/geometry.hpp"
#include "spo/losses.hpp"

namespace spo {

class ComplexityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// One predictor of a finite class: either a d x p matrix (x -> Bx) or an
/// explicit table of predictions, one d-vector per sample point.
class Hypothesis {
 public:
  static Hypothesis linear(Mat B) { return Hypothesis(std::move(B)); }
  static Hypothesis table(std::vector<Vec> outputs) { return Hypothesis(std::move(outputs)); }

  /// Prediction at sample point `i` with features `x`.
  Vec predict(std::size_t i, const Vec& x) const;
  int output_dim() const;
  bool is_linear() const { return std::holds_alternative<Mat>(rep_); }
  const Mat& matrix() const { return std::get<Mat>(rep_); }
  const std::vector<Vec>& outputs() const { return std::get<std::vector<Vec>>(rep_); }

 private:
  explicit Hypothesis(Mat B) : rep_(std::move(B)) {}
  explicit Hypothesis(std::vector<Vec> t) : rep_(std::move(t)) {}
  std::variant<Mat, std::vector<Vec>> rep_;
};

/// The supremum over H is taken exactly over this finite list.
struct FiniteHypothesisSet {
  std::vector<Hypothesis> items;

  std::size_t size() const { return items.size(); }
  /// Non-empty, one output dimension, tables cover all n points, matrices take p inputs.
  void validate(std::size_t n, int p) const;
};

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t draws = 0;
};

inline constexpr std::size_t kDefaultMcDraws = 2000;

/// Monte-Carlo estimate of E_sigma[ max_f (1/n) sum_i sigma_i l_SPO(f(x_i), c_i) ].
McEstimate rademacher_spo_mc(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                             const LabeledSample& sample, std::size_t m_draws, std::uint64_t seed);

/// Monte-Carlo estimate of E_sigma[ max_f (1/n) sum_i sigma_i^T f(x_i) ],
/// sigma_i uniform on {-1, +1}^d.
McEstimate rademacher_multivariate_mc(const FiniteHypothesisSet& hypotheses, const std::vector<Vec>& xs,
                                      std::size_t m_draws, std::uint64_t seed);

/// Number of distinct tuples (w*(f(x_1)), ..., w*(f(x_n))) over f in H.
std::size_t count_restrictions(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                               const std::vector<Vec>& xs);

/// Massart's finite-class bound omega sqrt(2 ln(card) / n).
double massart_bound(double card, std::size_t n, double omega);

/// Labels in {1..L} of |F| functions on m points, row-major by point.
struct LabelTable {
  int points = 0;
  int hypotheses = 0;
  std::vector<int> labels;

  int at(int point, int hypothesis) const { return labels[static_cast<std::size_t>(point) * hypotheses + hypothesis]; }
  void validate() const;
};

/// Table of w*(f(x_i)), with every distinct decision vector given its own label.
LabelTable label_table(const FeasibleRegion& region, const FiniteHypothesisSet& hypotheses,
                       const std::vector<Vec>& xs);

inline constexpr int kNatarajanMaxPoints = 12;
inline constexpr int kNatarajanMaxHypotheses = 1 << 16;

/// Largest N-shattered subset size, by exhaustive search over subsets of
/// increasing size. Needs points <= 12 and hypotheses <= 2^16.
int natarajan_dim_bruteforce(const LabelTable& table);

enum class ConstraintKind { Frobenius, L1Vec, GroupLasso };

/// {x -> Bx : B in R^{d x p}, ||B|| <= beta} for the chosen constraint norm.
struct LinearPredictorClass {
  ConstraintKind kind = ConstraintKind::Frobenius;
  double beta = 1.0;
  int d = 1;
  int p = 1;
};

/// Closed-form multivariate Rademacher bound. `x_radius` is rho_2(X) for the
/// Frobenius class and rho_inf(X) for the l1 / group-lasso classes.
double linear_class_rad_bound(const LinearPredictorClass& cls, double x_radius, std::size_t n);

}  // namespace spo
