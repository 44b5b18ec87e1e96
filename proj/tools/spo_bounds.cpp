// spo-bounds: command-line front end for the SPO generalization-bounds library.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "spo/bounds.hpp"
#include "spo/complexity.hpp"
#include "spo/geometry.hpp"
#include "spo/harness.hpp"
#include "spo/io.hpp"
#include "spo/losses.hpp"
#include "spo/verify.hpp"

namespace {

using namespace spo;

Vec parse_vector(const std::string& text) { return vec_from_json(Json::parse(text)); }

// Writes to `path`, or stdout when empty.
void emit(const std::string& text, const std::string& path) {
  if (path.empty())
    std::cout << text;
  else
    write_text_file(path, text);
}

LossSpec parse_loss(const std::string& kind, std::optional<double> gamma, double q) {
  if (kind == "spo") return LossSpec::spo();
  if (!gamma) throw std::invalid_argument("--gamma is required for loss '" + kind + "'");
  if (kind == "margin") return LossSpec::margin_loss(*gamma, q);
  if (kind == "hard") return LossSpec::hard_margin(*gamma, q);
  throw std::invalid_argument("unknown loss '" + kind + "' (spo, margin, hard)");
}

struct Args {
  std::string region, c_hat, c, sample, model, loss = "spo", hypotheses, table, inputs, variant, config, out;
  std::optional<double> gamma;
  std::optional<int> p;
  std::size_t draws = kDefaultMcDraws;
  std::uint64_t seed = 1;
  std::string bound_id;
};

int run_loss_eval(const Args& a) {
  const FeasibleRegion region = region_from_json(read_json_file(a.region));
  const double q = region.norm_q();
  if (!a.sample.empty()) {
    if (a.model.empty()) throw std::invalid_argument("--sample needs --model");
    const LabeledSample sample = read_sample_file(a.sample, a.p);
    const LinearPredictor f{mat_from_json(read_json_file(a.model))};
    const double risk = empirical_risk(region, f, sample, parse_loss(a.loss, a.gamma, q));
    Json out{{"loss", a.loss}, {"n", sample.n()}, {"empirical_risk", risk}};
    if (a.gamma) out["gamma"] = *a.gamma;
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  if (a.c_hat.empty() || a.c.empty()) throw std::invalid_argument("give --c-hat and --c, or --sample and --model");
  const Vec c_hat = parse_vector(a.c_hat), c = parse_vector(a.c);
  Json out{{"spo", spo_loss(region, c_hat, c)},
           {"gap", linopt_gap(region, c)},
           {"w_star_c_hat", vec_to_json(linopt_oracle(region, c_hat))},
           {"w_star_c", vec_to_json(linopt_oracle(region, c))}};
  if (a.gamma) {
    const auto mp = MarginParams::with_gamma(*a.gamma, q);
    out["gamma"] = *a.gamma;
    out["margin"] = margin_spo_loss(region, c_hat, c, mp);
    out["hard_margin"] = hard_margin_spo_loss(region, c_hat, c, mp);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

Json mc_json(const McEstimate& e) {
  return Json{{"estimate", e.estimate}, {"std_error", e.std_error}, {"draws", e.draws}};
}

int run_rad_spo(const Args& a) {
  const FeasibleRegion region = region_from_json(read_json_file(a.region));
  const FiniteHypothesisSet H = hypotheses_from_json(read_json_file(a.hypotheses));
  const LabeledSample sample = read_sample_file(a.sample, a.p);
  Json out = mc_json(rademacher_spo_mc(region, H, sample, a.draws, a.seed));
  if (region.has_finite_extreme_points()) {
    const std::size_t card = count_restrictions(region, H, sample.xs);
    // Omega over the realized costs only.
    double omega = 0.0;
    for (const auto& c : sample.cs) omega = std::max(omega, linopt_gap(region, c));
    out["restrictions"] = card;
    out["massart_bound"] = massart_bound(static_cast<double>(card), sample.n(), omega);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_rad_multi(const Args& a) {
  const FiniteHypothesisSet H = hypotheses_from_json(read_json_file(a.hypotheses));
  const LabeledSample sample = read_sample_file(a.sample, a.p);
  std::cout << mc_json(rademacher_multivariate_mc(H, sample.xs, a.draws, a.seed)).dump(2) << "\n";
  return 0;
}

int run_natarajan(const Args& a) {
  LabelTable table;
  if (!a.table.empty()) {
    table = label_table_from_json(read_json_file(a.table));
  } else {
    if (a.region.empty() || a.hypotheses.empty() || a.sample.empty())
      throw std::invalid_argument("give --table, or --region with --hypotheses and --sample");
    const FeasibleRegion region = region_from_json(read_json_file(a.region));
    table = label_table(region, hypotheses_from_json(read_json_file(a.hypotheses)), read_sample_file(a.sample, a.p).xs);
  }
  const int dim = natarajan_dim_bruteforce(table);
  std::cout << Json{{"points", table.points}, {"hypotheses", table.hypotheses}, {"natarajan_dim", dim}}.dump(2) << "\n";
  return 0;
}

int run_bound(const Args& a) {
  const BoundInputs in = bound_inputs_from_json(read_json_file(a.inputs));
  if (a.bound_id == "all") {
    emit(bound_reports_to_csv(bound_all(in)), a.out);
    return 0;
  }
  const BoundVariant v = a.variant.empty() ? BoundVariant::Expected : bound_variant_from_string(a.variant);
  emit(bound_report_to_json(evaluate_bound(a.bound_id, in, v)).dump(2) + "\n", a.out);
  return 0;
}

int run_experiment(const Args& a) {
  const ExperimentConfig config = config_from_json(read_json_file(a.config));
  const ValidityResult result = run_bound_validity(config);
  write_experiment_outputs(a.out, config, result);
  for (const auto& s : result.summary)
    std::cerr << s.name << ": " << s.violations << "/" << s.evaluated << " violations, mean bound "
              << format_double(s.mean_value) << "\n";
  return result.within(config.delta) ? 0 : 1;
}

int run_verify(const Args& a) {
  const VerifyReport rep = verify_all(a.seed);
  emit(rep.to_json().dump(2) + "\n", a.out);
  for (const auto& au : rep.audits)
    if (!au.passed) std::cerr << "FAILED: " << au.name << "\n";
  return rep.passed() ? 0 : 1;
}

int run_region_info(const Args& a) {
  const FeasibleRegion region = region_from_json(read_json_file(a.region));
  Json out{{"kind", to_string(region.kind())},
           {"dim", region.dim()},
           {"rho2", region_radius(region, 2.0)},
           {"diameter2", region_diameter_l2(region)}};
  if (region.mu()) out["mu"] = *region.mu();
  if (region.has_finite_extreme_points()) out["extreme_points"] = count_extreme_points(region);
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SPO loss, complexity estimators and generalization-bound calculators"};
  app.require_subcommand(1);
  Args a;

  auto* loss = app.add_subcommand("loss", "Loss evaluation")->require_subcommand(1);
  auto* loss_eval = loss->add_subcommand("eval", "SPO / margin losses for one pair, or an empirical risk");
  loss_eval->add_option("--region", a.region, "Region descriptor (JSON file)")->required();
  loss_eval->add_option("--c-hat", a.c_hat, "Predicted cost as a JSON array");
  loss_eval->add_option("--c", a.c, "Realized cost as a JSON array");
  loss_eval->add_option("--gamma", a.gamma, "Margin parameter");
  loss_eval->add_option("--sample", a.sample, "Sample file (CSV or JSON)");
  loss_eval->add_option("--model", a.model, "Linear model B (JSON d x p matrix)");
  loss_eval->add_option("--loss", a.loss, "spo, margin or hard (with --sample)");
  loss_eval->add_option("--p", a.p, "Feature count for headerless CSV");

  auto* cx = app.add_subcommand("complexity", "Complexity estimators")->require_subcommand(1);
  auto* rad_spo = cx->add_subcommand("rad-spo", "Monte-Carlo Rademacher complexity of the SPO loss class");
  auto* rad_multi = cx->add_subcommand("rad-multi", "Monte-Carlo multivariate Rademacher complexity");
  auto* nat = cx->add_subcommand("natarajan", "Brute-force Natarajan dimension");
  for (auto* sub : {rad_spo, rad_multi}) {
    sub->add_option("--hypotheses", a.hypotheses, "Hypothesis set (JSON)")->required();
    sub->add_option("--sample", a.sample, "Sample file (CSV or JSON)")->required();
    sub->add_option("--draws", a.draws, "Sign-vector draws");
    sub->add_option("--seed", a.seed, "Seed");
    sub->add_option("--p", a.p, "Feature count for headerless CSV");
  }
  rad_spo->add_option("--region", a.region, "Region descriptor (JSON file)")->required();
  nat->add_option("--table", a.table, "Label table (JSON)");
  nat->add_option("--region", a.region, "Region descriptor (JSON file)");
  nat->add_option("--hypotheses", a.hypotheses, "Hypothesis set (JSON)");
  nat->add_option("--sample", a.sample, "Points to label (sample file)");
  nat->add_option("--p", a.p, "Feature count for headerless CSV");

  auto* bound = app.add_subcommand("bound", "Generalization-bound calculators");
  std::string ids = "all";
  for (const auto& id : bound_ids()) ids += ", " + id;
  bound->add_option("id", a.bound_id, "Bound id: " + ids)->required();
  bound->add_option("--inputs", a.inputs, "Bound inputs (JSON file)")->required();
  bound->add_option("--variant", a.variant, "expected or empirical");
  bound->add_option("--out", a.out, "Output file (default stdout)");

  auto* exp = app.add_subcommand("experiment", "Synthetic experiments")->require_subcommand(1);
  auto* exp_run = exp->add_subcommand("run", "Bound-validity experiment");
  exp_run->add_option("--config", a.config, "Experiment config (JSON)")->required();
  exp_run->add_option("--out", a.out, "Output directory")->required();

  auto* ver = app.add_subcommand("verify", "Property audits")->require_subcommand(1);
  auto* ver_all = ver->add_subcommand("all", "Run every audit; nonzero exit on any failure");
  ver_all->add_option("--seed", a.seed, "Seed")->required();
  ver_all->add_option("--out", a.out, "Report file (default stdout)");

  auto* region = app.add_subcommand("region", "Region utilities")->require_subcommand(1);
  auto* info = region->add_subcommand("info", "Metrics of a region descriptor");
  info->add_option("--region", a.region, "Region descriptor (JSON file)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*loss_eval) return run_loss_eval(a);
    if (*rad_spo) return run_rad_spo(a);
    if (*rad_multi) return run_rad_multi(a);
    if (*nat) return run_natarajan(a);
    if (*bound) return run_bound(a);
    if (*exp_run) return run_experiment(a);
    if (*ver_all) return run_verify(a);
    if (*info) return run_region_info(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
