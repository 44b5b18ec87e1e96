#include "spo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "spo/rng.hpp"

namespace spo {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw HarnessError(what);
}

constexpr std::uint64_t kSaltTrial = 0x7452u;
constexpr std::uint64_t kSaltFresh = 0x4672u;
constexpr std::uint64_t kSaltModel = 0x4d64u;
constexpr std::uint64_t kSaltAudit = 0x4c70u;

const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Draws (x, c) pairs from the configured generator.
class ObservationStream {
 public:
  ObservationStream(const ExperimentConfig& config, std::uint64_t seed)
      : config_(config), rng_(substream(seed, 0, kSaltTrial)) {}

  // Fills x and c in place; the hot path of the fresh-sample loop.
  void next(Vec& x, Vec& c) {
    x.resize(config_.p);
    for (int i = 0; i < config_.p; ++i) x[i] = rng_.normal();
    if (config_.features == FeatureDist::UnitSphere) {
      double nrm = x.norm();
      while (nrm <= 1e-300) {
        for (int i = 0; i < config_.p; ++i) x[i] = rng_.normal();
        nrm = x.norm();
      }
      x /= nrm;
    }
    c.resize(config_.d);
    c.noalias() = config_.true_model * x;
    if (config_.noise > 0.0)
      for (int i = 0; i < config_.d; ++i) c[i] += config_.noise * rng_.normal();
    if (config_.costs.kind == CostDomainKind::L2Ball) {
      const double nrm = c.norm();
      if (nrm > config_.costs.ball_radius) c *= config_.costs.ball_radius / nrm;
    } else {
      c = project_to_cost_domain(config_.costs, c);
    }
  }

 private:
  const ExperimentConfig& config_;
  Sampler rng_;
};

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  return substream(seed, index, salt)();
}

bool is_polyhedral(const FeasibleRegion& r) { return r.has_finite_extreme_points(); }

bool has_margin_bounds(const ExperimentConfig& c) {
  return c.region.mu() && *c.region.mu() > 0.0 && c.region.norm_q() == 2.0;
}

// Shared inputs of all bounds for one trial.
BoundInputs base_inputs(const ExperimentConfig& config, std::size_t n) {
  BoundInputs in;
  in.n = n;
  in.delta = config.delta;
  in.omega = config.costs.omega;
  in.rho2_C = config.costs.rho2;
  in.d = config.region.dim();
  in.p = config.p;
  in.rho2_S = region_radius(config.region, 2.0);
  if (is_polyhedral(config.region)) in.card_S = static_cast<double>(count_extreme_points(config.region));
  if (config.region.mu()) in.mu = *config.region.mu();
  return in;
}

double massart_natarajan_rad(const BoundInputs& in) {
  const double dN = static_cast<double>(*in.d) * static_cast<double>(*in.p);
  return in.omega * std::sqrt(2.0 * dN * std::log(static_cast<double>(in.n) * *in.card_S * *in.card_S) /
                              static_cast<double>(in.n));
}

double frobenius_rad(const ExperimentConfig& config, double x_radius, std::size_t n) {
  return linear_class_rad_bound({ConstraintKind::Frobenius, config.beta, config.region.dim(), config.p}, x_radius, n);
}

struct TrialBounds {
  std::vector<double> values;
  double selected_gamma = kNaN;
};

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::validate() const {
  require(p >= 1 && d >= 1, "p and d must be >= 1");
  require(region.dim() == d, "region dimension differs from d");
  require(true_model.rows() == d && true_model.cols() == p, "true model must be d x p");
  require(true_model.allFinite(), "true model has non-finite entries");
  require(noise >= 0.0 && std::isfinite(noise), "noise level must be finite and >= 0");
  require(n >= 1, "n must be >= 1");
  require(trials >= 1, "need at least one trial");
  require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  require(!gamma_grid.empty(), "gamma grid is empty");
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    require(gamma_grid[i] > 0.0, "gamma grid must be positive");
    if (i) require(gamma_grid[i] > gamma_grid[i - 1], "gamma grid must be ascending");
  }
  require(gamma > 0.0, "gamma must be positive");
  require(beta > 0.0, "beta must be positive");
  require(m_fresh >= 1, "m_fresh must be >= 1");
  for (auto pn : plot_ns) require(pn >= 1, "plot sample sizes must be >= 1");
}

ExperimentConfig default_config(FeasibleRegion region, int p, std::size_t n, std::uint64_t seed) {
  ExperimentConfig c;
  c.d = region.dim();
  c.p = p;
  c.n = n;
  c.seed = seed;
  c.costs = l2_cost_ball(region, 1.0);
  c.region = std::move(region);
  Sampler rng(substream(seed, 0, kSaltModel));
  c.true_model.resize(c.d, p);
  for (Eigen::Index i = 0; i < c.true_model.size(); ++i) c.true_model.data()[i] = rng.normal();
  c.true_model /= c.true_model.norm();
  c.beta = 2.0;
  return c;
}

ExperimentConfig config_from_json(const Json& j) {
  require(j.is_object(), "experiment config must be a JSON object");
  require(j.contains("region"), "experiment config needs 'region'");
  ExperimentConfig c;
  c.region = region_from_json(j["region"]);
  c.d = c.region.dim();
  if (j.contains("d")) require(j["d"].get<int>() == c.d, "'d' disagrees with the region");
  require(j.contains("p") && j["p"].is_number_integer(), "experiment config needs integer 'p'");
  c.p = j["p"].get<int>();
  c.costs = j.contains("cost_domain") ? cost_domain_from_json(c.region, j["cost_domain"]) : l2_cost_ball(c.region, 1.0);
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("true_model")) {
    c.true_model = mat_from_json(j["true_model"]);
  } else {
    c.true_model = default_config(c.region, c.p, 1, c.seed).true_model;
  }
  if (j.contains("noise")) c.noise = j["noise"].get<double>();
  if (j.contains("features")) {
    const std::string f = j["features"];
    require(f == "unit_sphere" || f == "gaussian", "features must be unit_sphere or gaussian");
    c.features = f == "unit_sphere" ? FeatureDist::UnitSphere : FeatureDist::Gaussian;
  }
  if (j.contains("n")) c.n = j["n"].get<std::size_t>();
  if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
  if (j.contains("delta")) c.delta = j["delta"].get<double>();
  if (j.contains("gamma_grid")) c.gamma_grid = j["gamma_grid"].get<std::vector<double>>();
  c.gamma = j.contains("gamma") ? j["gamma"].get<double>() : c.gamma_grid[c.gamma_grid.size() / 2];
  c.beta = j.contains("beta") ? j["beta"].get<double>() : 2.0 * std::max(c.true_model.norm(), 0.5);
  if (j.contains("m_fresh")) c.m_fresh = j["m_fresh"].get<std::size_t>();
  if (j.contains("plot_ns")) c.plot_ns = j["plot_ns"].get<std::vector<std::size_t>>();
  if (j.contains("bounds")) c.bounds = j["bounds"].get<std::vector<std::string>>();
  c.validate();
  applicable_bounds(c);
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  return Json{{"region", region_to_json(c.region)},
              {"cost_domain", cost_domain_to_json(c.costs)},
              {"true_model", mat_to_json(c.true_model)},
              {"noise", c.noise},
              {"features", c.features == FeatureDist::UnitSphere ? "unit_sphere" : "gaussian"},
              {"n", c.n},
              {"p", c.p},
              {"d", c.d},
              {"trials", c.trials},
              {"delta", c.delta},
              {"gamma_grid", c.gamma_grid},
              {"gamma", c.gamma},
              {"beta", c.beta},
              {"m_fresh", c.m_fresh},
              {"seed", c.seed},
              {"plot_ns", c.plot_ns},
              {"bounds", c.bounds}};
}

LabeledSample generate_sample(const ExperimentConfig& config, std::uint64_t trial_seed) {
  config.validate();
  ObservationStream stream(config, trial_seed);
  LabeledSample s;
  s.xs.resize(config.n);
  s.cs.resize(config.n);
  for (std::size_t i = 0; i < config.n; ++i) stream.next(s.xs[i], s.cs[i]);
  return s;
}

Mat fit_least_squares(const LabeledSample& sample) {
  sample.validate();
  const auto n = static_cast<Eigen::Index>(sample.n());
  Mat X(n, sample.p()), C(n, sample.d());
  for (Eigen::Index i = 0; i < n; ++i) {
    X.row(i) = sample.xs[static_cast<std::size_t>(i)].transpose();
    C.row(i) = sample.cs[static_cast<std::size_t>(i)].transpose();
  }
  Mat gram = X.transpose() * X;
  gram.diagonal().array() += kLeastSquaresRidge;
  const Mat Bt = gram.ldlt().solve(X.transpose() * C);  // p x d
  return Bt.transpose();
}

McEstimate true_risk_mc(const FeasibleRegion& region, const Predictor& predictor, const ExperimentConfig& config,
                        std::size_t m_fresh, std::uint64_t seed) {
  require(m_fresh >= 1, "m_fresh must be >= 1");
  ObservationStream stream(config, seed);
  Vec x, c, c_hat(config.d);
  const auto* linear = predictor.target<LinearPredictor>();
  // Welford accumulation.
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 0; k < m_fresh; ++k) {
    stream.next(x, c);
    if (linear)
      c_hat.noalias() = linear->B * x;
    else
      c_hat = predictor(x);
    const double loss = spo_loss(region, c_hat, c);
    const double delta = loss - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (loss - mean);
  }
  McEstimate est;
  est.estimate = mean;
  est.draws = m_fresh;
  if (m_fresh > 1) est.std_error = std::sqrt(m2 / static_cast<double>(m_fresh - 1) / static_cast<double>(m_fresh));
  return est;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& experiment_bound_names() {
  static const std::vector<std::string> names{"rademacher_empirical",    "linear_polyhedral",
                                              "covering",                "margin_expected",
                                              "margin_empirical",        "margin_uniform_expected",
                                              "margin_uniform_empirical"};
  return names;
}

std::vector<std::string> applicable_bounds(const ExperimentConfig& config) {
  const bool bounded_x = config.features == FeatureDist::UnitSphere;
  auto reason = [&](const std::string& name) -> std::string {
    if (name == "rademacher_empirical" || name == "linear_polyhedral")
      return is_polyhedral(config.region) ? "" : "needs a region with finitely many extreme points";
    if (name == "covering") return "";
    if (name.rfind("margin", 0) == 0) {
      if (!has_margin_bounds(config)) return "needs a region with an l2 strong-convexity constant mu";
      if (name.find("expected") != std::string::npos && !bounded_x)
        return "needs bounded features (unit_sphere) for the expected complexity";
      return "";
    }
    return "unknown bound";
  };
  std::vector<std::string> names;
  if (config.bounds.empty()) {
    for (const auto& name : experiment_bound_names())
      if (reason(name).empty()) names.push_back(name);
    return names;
  }
  for (const auto& name : config.bounds) {
    const std::string why = reason(name);
    if (!why.empty()) throw HarnessError("bound '" + name + "' " + why);
    names.push_back(name);
  }
  return names;
}

bool ValidityResult::within(double delta) const {
  return std::all_of(summary.begin(), summary.end(), [&](const BoundSummary& s) { return s.frequency <= delta; });
}

namespace {

TrialBounds evaluate_trial_bounds(const ExperimentConfig& config, const std::vector<std::string>& names,
                                  const FeasibleRegion& region, const LabeledSample& sample, const Predictor& f,
                                  double empirical_spo, double gamma_bar) {
  const BoundInputs base = [&] {
    BoundInputs in = base_inputs(config, sample.n());
    in.empirical_risk = empirical_spo;
    return in;
  }();
  double sample_x_radius = 0.0;
  for (const auto& x : sample.xs) sample_x_radius = std::max(sample_x_radius, x.norm());

  auto margin_inputs = [&](double gamma, bool expected) {
    BoundInputs in = base;
    in.gamma = gamma;
    in.gamma_bar = gamma_bar;
    in.margin_risk = empirical_risk(region, f, sample, LossSpec::margin_loss(gamma));
    in.rad_multi = frobenius_rad(config, expected ? 1.0 : sample_x_radius, sample.n());
    return in;
  };

  TrialBounds out;
  out.values.assign(names.size(), kNaN);
  auto wanted = [&](const char* name) { return std::find(names.begin(), names.end(), name) != names.end(); };
  const bool want_expected = wanted("margin_uniform_expected");
  const bool want_empirical = wanted("margin_uniform_empirical");
  double uniform_expected = kNaN, uniform_empirical = kNaN;
  if ((want_expected || want_empirical) && gamma_bar > 0.0) {
    // Data-driven margin: the uniform bound holds for every gamma in (0, gamma_bar] at once.
    std::vector<double> candidates;
    for (double g : config.gamma_grid)
      if (g < gamma_bar) candidates.push_back(g);
    candidates.push_back(gamma_bar);
    const BoundVariant pick = want_expected ? BoundVariant::Expected : BoundVariant::Empirical;
    double best = kInf;
    for (double g : candidates) {
      const double v = bound_margin_uniform(margin_inputs(g, pick == BoundVariant::Expected), pick).value;
      if (v < best) {
        best = v;
        out.selected_gamma = g;
      }
    }
    if (want_expected)
      uniform_expected = bound_margin_uniform(margin_inputs(out.selected_gamma, true), BoundVariant::Expected).value;
    if (want_empirical)
      uniform_empirical =
          bound_margin_uniform(margin_inputs(out.selected_gamma, false), BoundVariant::Empirical).value;
  }

  for (std::size_t k = 0; k < names.size(); ++k) {
    const std::string& name = names[k];
    if (name == "rademacher_empirical") {
      BoundInputs in = base;
      in.rad_spo = massart_natarajan_rad(in);
      out.values[k] = bound_rademacher(in, BoundVariant::Empirical).value;
    } else if (name == "linear_polyhedral") {
      out.values[k] = bound_linear_polyhedral(base).value;
    } else if (name == "covering") {
      out.values[k] = bound_covering(base).value;
    } else if (name == "margin_expected") {
      out.values[k] = bound_margin(margin_inputs(config.gamma, true), BoundVariant::Expected).value;
    } else if (name == "margin_empirical") {
      out.values[k] = bound_margin(margin_inputs(config.gamma, false), BoundVariant::Empirical).value;
    } else if (name == "margin_uniform_expected") {
      out.values[k] = uniform_expected;
    } else if (name == "margin_uniform_empirical") {
      out.values[k] = uniform_empirical;
    }
  }
  return out;
}

}  // namespace

ValidityResult run_bound_validity(const ExperimentConfig& config) {
  config.validate();
  ValidityResult result;
  result.bound_names = applicable_bounds(config);
  const std::size_t nb = result.bound_names.size();
  std::vector<std::size_t> evaluated(nb, 0), violations(nb, 0);
  std::vector<double> sums(nb, 0.0);
  std::size_t selected_count = 0;

  for (std::size_t t = 0; t < config.trials; ++t) {
    const LabeledSample sample = generate_sample(config, derived_seed(config.seed, t, kSaltTrial));
    Mat B = fit_least_squares(sample);
    const double fro = B.norm();
    if (fro > config.beta) B *= config.beta / fro;
    const LinearPredictor f{B};

    TrialRecord rec;
    rec.trial = t;
    rec.empirical_spo = empirical_risk(config.region, f, sample, LossSpec::spo());
    for (double g : config.gamma_grid)
      rec.margin_risks.push_back(empirical_risk(config.region, f, sample, LossSpec::margin_loss(g)));
    for (const auto& x : sample.xs) rec.gamma_bar = std::max(rec.gamma_bar, (B * x).norm());
    const McEstimate truth =
        true_risk_mc(config.region, f, config, config.m_fresh, derived_seed(config.seed, t, kSaltFresh));
    rec.true_risk = truth.estimate;
    rec.true_risk_se = truth.std_error;

    TrialBounds tb =
        evaluate_trial_bounds(config, result.bound_names, config.region, sample, f, rec.empirical_spo, rec.gamma_bar);
    rec.selected_gamma = tb.selected_gamma;
    rec.bounds = std::move(tb.values);
    rec.violations.assign(nb, false);
    for (std::size_t k = 0; k < nb; ++k) {
      if (std::isnan(rec.bounds[k])) continue;
      ++evaluated[k];
      sums[k] += rec.bounds[k];
      rec.violations[k] = rec.true_risk - 3.0 * rec.true_risk_se > rec.bounds[k];
      if (rec.violations[k]) ++violations[k];
    }
    result.mean_true_risk += rec.true_risk;
    result.mean_empirical_risk += rec.empirical_spo;
    if (!std::isnan(rec.selected_gamma)) {
      result.mean_selected_gamma += rec.selected_gamma;
      ++selected_count;
    }
    result.records.push_back(std::move(rec));
  }
  const double T = static_cast<double>(config.trials);
  result.mean_true_risk /= T;
  result.mean_empirical_risk /= T;
  result.mean_selected_gamma = selected_count ? result.mean_selected_gamma / selected_count : kNaN;
  for (std::size_t k = 0; k < nb; ++k) {
    BoundSummary s;
    s.name = result.bound_names[k];
    s.evaluated = evaluated[k];
    s.violations = violations[k];
    s.frequency = evaluated[k] ? static_cast<double>(violations[k]) / evaluated[k] : 0.0;
    s.mean_value = evaluated[k] ? sums[k] / evaluated[k] : kNaN;
    result.summary.push_back(s);
  }
  return result;
}

// ---------------------------------------------------------------------------

std::string trials_csv(const ExperimentConfig& config, const ValidityResult& result) {
  std::string out = "trial,empirical_spo";
  for (double g : config.gamma_grid) out += ",margin_risk_" + format_double(g);
  out += ",true_risk,true_risk_se,gamma_bar,selected_gamma";
  for (const auto& b : result.bound_names) out += ",bound_" + b;
  for (const auto& b : result.bound_names) out += ",violation_" + b;
  out += '\n';
  for (const auto& r : result.records) {
    out += std::to_string(r.trial) + "," + format_double(r.empirical_spo);
    for (double m : r.margin_risks) out += "," + format_double(m);
    out += "," + format_double(r.true_risk) + "," + format_double(r.true_risk_se) + "," + format_double(r.gamma_bar) +
           "," + format_double(r.selected_gamma);
    for (double b : r.bounds) out += "," + format_double(b);
    for (bool v : r.violations) out += v ? ",1" : ",0";
    out += '\n';
  }
  return out;
}

Json summary_json(const ExperimentConfig& config, const ValidityResult& result) {
  Json bounds = Json::array();
  for (const auto& s : result.summary)
    bounds.push_back(Json{{"name", s.name},
                          {"evaluated", s.evaluated},
                          {"violations", s.violations},
                          {"frequency", s.frequency},
                          {"mean_value", s.mean_value}});
  Json j{{"region", to_string(config.region.kind())},
         {"d", config.d},
         {"p", config.p},
         {"n", config.n},
         {"trials", config.trials},
         {"delta", config.delta},
         {"seed", config.seed},
         {"m_fresh", config.m_fresh},
         {"data_generator", "gaussian-linear c = B* x + noise g, mapped into the cost domain (synthetic)"},
         {"omega", config.costs.omega},
         {"rho2_C", config.costs.rho2},
         {"mean_true_risk", result.mean_true_risk},
         {"mean_empirical_risk", result.mean_empirical_risk},
         {"bounds", bounds},
         {"all_within_delta", result.within(config.delta)}};
  if (!std::isnan(result.mean_selected_gamma)) j["mean_selected_gamma"] = result.mean_selected_gamma;
  return j;
}

std::string bounds_vs_n_csv(const ExperimentConfig& config) {
  const auto names = applicable_bounds(config);
  std::string out = "n";
  for (const auto& b : names) out += "," + b;
  out += '\n';
  const double gamma_bar = config.gamma_grid.back();
  for (std::size_t n : config.plot_ns) {
    BoundInputs in = base_inputs(config, n);
    out += std::to_string(n);
    for (const auto& name : names) {
      double v = kNaN;
      BoundInputs m = in;
      m.gamma = std::min(config.gamma, gamma_bar);
      m.gamma_bar = gamma_bar;
      m.margin_risk = 0.0;
      m.rad_multi = frobenius_rad(config, 1.0, n);
      try {
        if (name == "rademacher_empirical") {
          in.rad_spo = massart_natarajan_rad(in);
          v = bound_rademacher(in, BoundVariant::Empirical).value;
        } else if (name == "linear_polyhedral") {
          v = bound_linear_polyhedral(in).value;
        } else if (name == "covering") {
          v = bound_covering(in).value;
        } else if (name == "margin_expected") {
          v = bound_margin(m, BoundVariant::Expected).value;
        } else if (name == "margin_empirical") {
          v = bound_margin(m, BoundVariant::Empirical).value;
        } else if (name == "margin_uniform_expected") {
          v = bound_margin_uniform(m, BoundVariant::Expected).value;
        } else if (name == "margin_uniform_empirical") {
          v = bound_margin_uniform(m, BoundVariant::Empirical).value;
        }
      } catch (const BoundError&) {
        // log arguments invalid at this n
      }
      out += "," + format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_experiment_outputs(const std::string& dir, const ExperimentConfig& config, const ValidityResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "plotdata");
  write_text_file((fs::path(dir) / "trials.csv").string(), trials_csv(config, result));
  write_text_file((fs::path(dir) / "summary.json").string(), summary_json(config, result).dump(2) + "\n");
  write_text_file((fs::path(dir) / "plotdata" / "bounds_vs_n.csv").string(), bounds_vs_n_csv(config));
}

// ---------------------------------------------------------------------------

namespace {

// Vector with dual norm `target`, random direction.
Vec random_with_dual_norm(Sampler& rng, int d, double q, double target) {
  Vec v = rng.gaussian(d);
  return v * (target / dual_norm(v, q));
}

}  // namespace

LipschitzAuditReport run_lipschitz_audit(const LipschitzAuditConfig& config) {
  const FeasibleRegion& region = config.region;
  require(region.mu() && *region.mu() > 0.0, "Lipschitz audit needs a region with mu > 0");
  require(!config.gammas.empty(), "Lipschitz audit needs at least one gamma");
  require(config.min_norm > 0.0, "min_norm must be positive");
  const double mu = *region.mu();
  const double q = region.norm_q();
  const int d = region.dim();
  LipschitzAuditReport rep;
  rep.pairs = config.pairs;
  for (std::size_t s = 0; s < config.pairs; ++s) {
    Sampler rng(substream(config.seed, s, kSaltAudit));
    // Oracle pair, norms spread over three decades above min_norm.
    const Vec c1 = random_with_dual_norm(rng, d, q, config.min_norm * std::pow(10.0, rng.uniform(0.0, 3.0)));
    Vec c2;
    if (rng.uniform() < 0.5) {
      c2 = random_with_dual_norm(rng, d, q, config.min_norm * std::pow(10.0, rng.uniform(0.0, 3.0)));
    } else {
      c2 = c1 + random_with_dual_norm(rng, d, q, dual_norm(c1, q) * std::pow(10.0, rng.uniform(-4.0, 0.0)));
    }
    const double n1 = dual_norm(c1, q), n2 = dual_norm(c2, q);
    const double gap = dual_norm(c1 - c2, q);
    if (gap == 0.0 || std::min(n1, n2) < config.min_norm) {
      ++rep.skipped;
    } else {
      const double lhs = lq_norm(linopt_oracle(region, c1) - linopt_oracle(region, c2), q);
      rep.oracle_ratio = std::max(rep.oracle_ratio, lhs * mu * std::min(n1, n2) / gap);
    }

    // Margin-loss triple around the margin scale.
    const double gamma = config.gammas[s % config.gammas.size()];
    const Vec h1 = random_with_dual_norm(rng, d, q, gamma * rng.uniform(0.0, 3.0));
    Vec h2;
    if (rng.uniform() < 0.5) {
      h2 = random_with_dual_norm(rng, d, q, gamma * rng.uniform(0.0, 3.0));
    } else {
      h2 = h1 + random_with_dual_norm(rng, d, q, gamma * std::pow(10.0, rng.uniform(-4.0, 0.0)));
    }
    const Vec c = random_with_dual_norm(rng, d, q, rng.uniform(0.1, 3.0));
    const double hgap = dual_norm(h1 - h2, q);
    if (hgap == 0.0) {
      ++rep.skipped;
      continue;
    }
    const MarginParams mp = MarginParams::with_gamma(gamma, q);
    const double diff = std::abs(margin_spo_loss(region, h1, c, mp) - margin_spo_loss(region, h2, c, mp));
    const double cstar = dual_norm(c, q);
    const double lip5 = 5.0 * cstar / (gamma * mu);
    const double lip_sharp = (cstar / mu + 2.0 * linopt_gap(region, c)) / gamma;
    rep.margin_ratio = std::max(rep.margin_ratio, diff / (lip5 * hgap));
    rep.margin_ratio_sharp = std::max(rep.margin_ratio_sharp, diff / (lip_sharp * hgap));
  }
  if (d >= 2) {
    const Vec e1 = Vec::Unit(d, 0), e2 = Vec::Unit(d, 1);
    const double lhs = lq_norm(linopt_oracle(region, e1) - linopt_oracle(region, e2), q);
    rep.witness_ratio = lhs * mu * std::min(dual_norm(e1, q), dual_norm(e2, q)) / dual_norm(e1 - e2, q);
  } else {
    rep.witness_ratio = kNaN;
  }
  return rep;
}

}  // namespace spo
