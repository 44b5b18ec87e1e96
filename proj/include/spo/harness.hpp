#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spo/bounds.hpp"
#include "spo/complexity.hpp"
#include "spo/geometry.hpp"
#include "spo/io.hpp"
#include "spo/losses.hpp"

namespace spo {

class HarnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class FeatureDist { UnitSphere, Gaussian };

/// Synthetic predict-then-optimize experiment. Costs follow the
/// Gaussian-linear generator c = B* x + noise g, mapped into the cost domain.
struct ExperimentConfig {
  FeasibleRegion region = FeasibleRegion::unit_simplex(1);
  CostDomain costs;
  Mat true_model;  // d x p
  double noise = 0.5;
  FeatureDist features = FeatureDist::UnitSphere;
  std::size_t n = 100;
  int p = 1;
  int d = 1;
  std::size_t trials = 200;
  double delta = 0.05;
  std::vector<double> gamma_grid{0.05, 0.1, 0.2, 0.4, 0.8};
  /// Margin for the fixed-gamma bound; must be chosen before seeing data.
  double gamma = 0.2;
  /// Frobenius radius of the predictor class; the fitted model is projected onto it.
  double beta = 1.0;
  std::size_t m_fresh = 100000;
  std::uint64_t seed = 1;
  /// Bounds to evaluate; empty means every bound applicable to the region.
  std::vector<std::string> bounds;
  /// Sample sizes for the bound-vs-n curves.
  std::vector<std::size_t> plot_ns{25, 50, 100, 200, 400, 800, 1600, 3200};

  void validate() const;
};

/// Builds a config with a seeded random B* (unit Frobenius norm) and an l2
/// cost ball of radius 1; beta = 2 ||B*||_F.
ExperimentConfig default_config(FeasibleRegion region, int p, std::size_t n, std::uint64_t seed);

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

LabeledSample generate_sample(const ExperimentConfig& config, std::uint64_t trial_seed);

inline constexpr double kLeastSquaresRidge = 1e-8;

/// argmin_B sum_i ||B x_i - c_i||^2 + ridge ||B||_F^2 via the normal equations.
Mat fit_least_squares(const LabeledSample& sample);

/// Mean SPO loss of `predictor` over m_fresh fresh draws from the generator.
McEstimate true_risk_mc(const FeasibleRegion& region, const Predictor& predictor, const ExperimentConfig& config,
                        std::size_t m_fresh, std::uint64_t seed);

struct TrialRecord {
  std::size_t trial = 0;
  double empirical_spo = 0.0;
  std::vector<double> margin_risks;  // one per gamma_grid entry
  double true_risk = 0.0;
  double true_risk_se = 0.0;
  double gamma_bar = 0.0;
  /// Data-driven gamma minimizing the uniform bound (NaN when not applicable).
  double selected_gamma = 0.0;
  std::vector<double> bounds;      // aligned with ValidityResult::bound_names
  std::vector<bool> violations;    // true_risk - 3 se > bound
};

struct BoundSummary {
  std::string name;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  double frequency = 0.0;
  double mean_value = 0.0;
};

struct ValidityResult {
  std::vector<std::string> bound_names;
  std::vector<TrialRecord> records;
  std::vector<BoundSummary> summary;
  double mean_true_risk = 0.0;
  double mean_empirical_risk = 0.0;
  double mean_selected_gamma = 0.0;

  /// Every bound's violation frequency is <= delta.
  bool within(double delta) const;
};

/// Every bound name the experiment understands.
const std::vector<std::string>& experiment_bound_names();

/// Names of the bounds evaluated for this config: `config.bounds` when given
/// (each must be applicable to the region), otherwise all applicable ones.
std::vector<std::string> applicable_bounds(const ExperimentConfig& config);

ValidityResult run_bound_validity(const ExperimentConfig& config);

std::string trials_csv(const ExperimentConfig& config, const ValidityResult& result);
Json summary_json(const ExperimentConfig& config, const ValidityResult& result);
/// n, then one column per bound: the bound at zero empirical risk.
std::string bounds_vs_n_csv(const ExperimentConfig& config);

/// Writes trials.csv, summary.json and plotdata/bounds_vs_n.csv under `dir`.
void write_experiment_outputs(const std::string& dir, const ExperimentConfig& config, const ValidityResult& result);

struct LipschitzAuditConfig {
  FeasibleRegion region = FeasibleRegion::l2_ball(1.0, Vec::Zero(2));
  std::size_t pairs = 100000;
  std::vector<double> gammas{0.1, 0.5, 1.0, 2.0};
  double min_norm = 0.01;
  std::uint64_t seed = 1;
};

struct LipschitzAuditReport {
  std::size_t pairs = 0;
  std::size_t skipped = 0;
  /// max ||w*(c1) - w*(c2)|| mu min(||c1||*, ||c2||*) / ||c1 - c2||*
  double oracle_ratio = 0.0;
  /// max |l_gamma(c1) - l_gamma(c2)| / ((5 ||c||* / (gamma mu)) ||c1 - c2||*)
  double margin_ratio = 0.0;
  /// Same against (1/gamma)(||c||*/mu + 2 omega_S(c)).
  double margin_ratio_sharp = 0.0;
  /// Oracle ratio at c1 = e1, c2 = e2 (NaN for d = 1).
  double witness_ratio = 0.0;

  bool ok(double tol = 1e-7) const {
    return oracle_ratio <= 1.0 + tol && margin_ratio <= 1.0 + tol && margin_ratio_sharp <= 1.0 + tol;
  }
};

LipschitzAuditReport run_lipschitz_audit(const LipschitzAuditConfig& config);

}  // namespace spo
