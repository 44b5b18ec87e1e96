#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spo {

class BoundError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every parameter any of the generalization bounds consumes. Optional fields
/// are only required by the bounds that use them.
struct BoundInputs {
  std::size_t n = 1;
  double delta = 0.05;
  double omega = 0.0;                 // omega_S(C)
  std::optional<double> rho2_C;
  std::optional<double> mu;
  std::optional<double> gamma;
  std::optional<double> gamma_bar;
  std::optional<double> d_N;          // Natarajan dimension of w*(H)
  std::optional<double> card_S;       // number of extreme points
  std::optional<int> d;
  std::optional<int> p;
  std::optional<double> rho2_S;
  // Rademacher complexity of the SPO-loss class.
  // A closed-form value wins over a Monte-Carlo estimate.
  std::optional<double> rad_spo;
  std::optional<double> rad_spo_estimate;
  // Multivariate Rademacher complexity of H (margin bounds).
  std::optional<double> rad_multi;
  std::optional<double> rad_multi_estimate;
  double empirical_risk = 0.0;        // plain SPO empirical risk
  std::optional<double> margin_risk;  // empirical gamma-margin SPO risk

  void validate() const;
};

enum class BoundVariant { Expected, Empirical };

std::string to_string(BoundVariant v);
BoundVariant bound_variant_from_string(const std::string& s);

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

struct BoundReport {
  std::string theorem_id;
  BoundVariant variant = BoundVariant::Expected;
  double value = 0.0;  // sum of terms, in order
  std::vector<BoundTerm> terms;
  BoundInputs inputs;

  /// Value of the named term, 0 if absent.
  double term(const std::string& name) const;
};

BoundReport bound_rademacher(const BoundInputs& in, BoundVariant variant);
BoundReport bound_natarajan(const BoundInputs& in);
/// bound_natarajan with d_N = d p.
BoundReport bound_linear_polyhedral(const BoundInputs& in);
/// Covering-number bound for arbitrary compact convex S; the O(1/n) part is
/// reported as the separate `remainder` term.
BoundReport bound_covering(const BoundInputs& in);
/// 5 sqrt(2) rho2(C) rad / (gamma mu): bound on the Rademacher complexity of
/// the gamma-margin SPO loss class.
double margin_rad_bound(double rho2_C, double rad_multi, double gamma, double mu);
BoundReport bound_margin(const BoundInputs& in, BoundVariant variant);
BoundReport bound_margin_uniform(const BoundInputs& in, BoundVariant variant);

/// Known theorem ids: rademacher, natarajan, linear_polyhedral, covering,
/// margin, margin_uniform.
const std::vector<std::string>& bound_ids();
BoundReport evaluate_bound(const std::string& id, const BoundInputs& in, BoundVariant variant);

/// Every bound whose inputs are present, in bound_ids() order, both variants
/// where the bound has two.
std::vector<BoundReport> bound_all(const BoundInputs& in);

}  // namespace spo
