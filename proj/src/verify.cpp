#include "spo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spo/harness.hpp"
#include "spo/rng.hpp"

namespace spo {

namespace {

constexpr double kTol = 1e-9;
constexpr double kLipTol = 1e-7;

Sampler draw(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) { return Sampler(substream(seed, index, salt)); }

Dag grid_dag(int rows, int cols) {
  Dag g;
  g.nodes = rows * cols;
  g.source = 0;
  g.sink = rows * cols - 1;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const int u = r * cols + c;
      if (c + 1 < cols) g.arcs.push_back({u, u + 1});
      if (r + 1 < rows) g.arcs.push_back({u, u + cols});
    }
  return g;
}

FeasibleRegion square() {
  return FeasibleRegion::vertex_polytope({Vec::Constant(2, 1.0), (Vec(2) << 1, -1).finished(),
                                          (Vec(2) << -1, 1).finished(), Vec::Constant(2, -1.0)});
}

Vec vec3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

// Columns are the points, so c^T W gives every objective at once.
Mat as_columns(const std::vector<Vec>& pts, int d) {
  Mat W(d, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) W.col(static_cast<Eigen::Index>(k)) = pts[k];
  return W;
}

struct Excess {
  double max = -std::numeric_limits<double>::infinity();
  std::size_t violations = 0;
  void add(double excess, double tol) {
    max = std::max(max, excess);
    if (excess > tol) ++violations;
  }
};

Json excess_json(const Excess& e) {
  return Json{{"max_excess", std::isfinite(e.max) ? Json(e.max) : Json(nullptr)}, {"violations", e.violations}};
}

// Random DAG on nodes 0..N-1 with forward arcs (shuffled order), source 0 and
// sink N-1, retried until a path exists.
FeasibleRegion random_dag(Sampler& rng) {
  for (;;) {
    Dag g;
    g.nodes = 3 + static_cast<int>(rng.index(5));
    g.source = 0;
    g.sink = g.nodes - 1;
    std::vector<Arc> pool;
    for (int i = 0; i < g.nodes; ++i)
      for (int j = i + 1; j < g.nodes; ++j) pool.push_back({i, j});
    std::shuffle(pool.begin(), pool.end(), rng.engine());
    const std::size_t m = std::min<std::size_t>(pool.size(), 2 + rng.index(11));
    g.arcs.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
    try {
      return FeasibleRegion::dag_paths(g);
    } catch (const GeometryError&) {
      // no source->sink path; draw again
    }
  }
}

Mat random_matrix(Sampler& rng, int d, int p) {
  Mat B(d, p);
  for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = rng.normal();
  return B;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(audits.begin(), audits.end(), [](const AuditResult& a) { return a.passed; });
}

Json VerifyReport::to_json() const {
  Json list = Json::array();
  for (const auto& a : audits)
    list.push_back(Json{{"name", a.name}, {"passed", a.passed}, {"samples", a.samples}, {"details", a.details}});
  return Json{{"seed", seed}, {"passed", passed()}, {"audits", list}};
}

// ---------------------------------------------------------------------------

AuditResult audit_oracle_optimality(std::uint64_t seed, const AuditSizes& sizes) {
  const std::vector<std::pair<std::string, FeasibleRegion>> regions = {
      {"l2_ball", FeasibleRegion::l2_ball(1.5, vec3(0.5, -1.0, 0.2))},
      {"l1.5_ball", FeasibleRegion::lq_ball(1.5, 1.0, Vec::Zero(3))},
      {"unit_simplex", FeasibleRegion::unit_simplex(4)},
      {"square", square()},
      {"grid_dag", FeasibleRegion::dag_paths(grid_dag(3, 3))},
  };
  AuditResult res{"oracle_optimality"};
  res.passed = true;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& [name, region] = regions[r];
    const int d = region.dim();
    Sampler pts = draw(seed, r, 0x6f70);
    std::vector<Vec> feasible;
    for (std::size_t k = 0; k < sizes.feasible; ++k) feasible.push_back(sample_point(region, pts));
    const Mat W = as_columns(feasible, d);
    Mat E;
    if (region.has_finite_extreme_points()) E = as_columns(enumerate_extreme_points(region), d);
    Excess sampled, exact;
    std::size_t infeasible = 0;
    for (std::size_t k = 0; k < sizes.costs; ++k) {
      Sampler rng = draw(seed, k, 0x6f71 + r);
      const Vec c = rng.gaussian(d) * std::pow(10.0, rng.uniform(-2.0, 2.0));
      const Vec w = linopt_oracle(region, c);
      const double v = c.dot(w);
      sampled.add(v - (c.transpose() * W).minCoeff(), kTol);
      if (E.size()) exact.add(v - (c.transpose() * E).minCoeff(), kTol);
      if (region.kind() == RegionKind::LqBall && !contains(region, w)) ++infeasible;
    }
    Json entry{{"sampled", excess_json(sampled)}, {"infeasible_outputs", infeasible}};
    if (E.size()) entry["extreme_points"] = excess_json(exact);
    res.details[name] = entry;
    res.samples += sizes.costs;
    res.passed = res.passed && sampled.violations == 0 && exact.violations == 0 && infeasible == 0;
  }
  return res;
}

AuditResult audit_dag_enumeration(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"dag_enumeration"};
  std::size_t count_mismatch = 0, value_mismatch = 0, tie_mismatch = 0, max_arcs = 0;
  constexpr int kCostsPerDag = 20;
  for (std::size_t g = 0; g < sizes.dags; ++g) {
    Sampler rng = draw(seed, g, 0x6461);
    const FeasibleRegion region = random_dag(rng);
    max_arcs = std::max<std::size_t>(max_arcs, region.dag().arcs.size());
    const auto paths = enumerate_extreme_points(region);
    if (paths.size() != count_extreme_points(region)) ++count_mismatch;
    for (int k = 0; k < kCostsPerDag; ++k) {
      const bool integral = k % 2 == 1;  // small integers force ties
      Vec c(region.dim());
      for (int a = 0; a < region.dim(); ++a)
        c[a] = integral ? static_cast<double>(rng.index(3)) : rng.normal();
      // Enumeration runs in lexicographic arc order, so the first strict
      // minimizer is the tie-break winner.
      std::size_t best = 0;
      for (std::size_t i = 1; i < paths.size(); ++i)
        if (c.dot(paths[i]) < c.dot(paths[best])) best = i;
      const Vec w = linopt_oracle(region, c);
      if (std::abs(c.dot(w) - c.dot(paths[best])) > kTol) ++value_mismatch;
      if (integral && w != paths[best]) ++tie_mismatch;
      ++res.samples;
    }
  }
  res.details = Json{{"graphs", sizes.dags},
                     {"max_arcs", max_arcs},
                     {"count_mismatches", count_mismatch},
                     {"value_mismatches", value_mismatch},
                     {"tie_break_mismatches", tie_mismatch}};
  res.passed = count_mismatch == 0 && value_mismatch == 0 && tie_mismatch == 0 && max_arcs <= 12;
  return res;
}

namespace {

struct LipschitzCase {
  std::string name;
  FeasibleRegion region;
  std::size_t pairs;
};

std::vector<LipschitzCase> lipschitz_cases(const AuditSizes& sizes) {
  return {{"unit_ball_2d", FeasibleRegion::l2_ball(1.0, Vec::Zero(2)), sizes.pairs},
          {"ball_3d_r2_offcenter", FeasibleRegion::l2_ball(2.0, vec3(1.0, -1.0, 0.5)), sizes.pairs / 10},
          {"interval", FeasibleRegion::interval(-0.5, 0.5), sizes.pairs / 10}};
}

}  // namespace

AuditResult audit_lipschitz_like(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"lipschitz_like"};
  res.passed = true;
  const auto cases = lipschitz_cases(sizes);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    LipschitzAuditConfig cfg;
    cfg.region = cases[i].region;
    cfg.pairs = cases[i].pairs;
    cfg.seed = substream(seed, i, 0x6c6c)();
    const auto rep = run_lipschitz_audit(cfg);
    Json entry{{"pairs", rep.pairs}, {"skipped", rep.skipped}, {"max_ratio", rep.oracle_ratio}};
    bool ok = rep.oracle_ratio <= 1.0 + kLipTol;
    if (cases[i].name == "unit_ball_2d") {
      entry["witness_ratio"] = rep.witness_ratio;
      ok = ok && std::abs(rep.witness_ratio - 1.0) <= 1e-9;
    }
    res.details[cases[i].name] = entry;
    res.samples += rep.pairs;
    res.passed = res.passed && ok;
  }
  return res;
}

AuditResult audit_margin_lipschitz(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"margin_lipschitz"};
  res.passed = true;
  const auto cases = lipschitz_cases(sizes);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    LipschitzAuditConfig cfg;
    cfg.region = cases[i].region;
    cfg.pairs = cases[i].pairs;
    cfg.seed = substream(seed, i, 0x6d6c)();
    const auto rep = run_lipschitz_audit(cfg);
    res.details[cases[i].name] =
        Json{{"triples", rep.pairs}, {"max_ratio_5c", rep.margin_ratio}, {"max_ratio_sharp", rep.margin_ratio_sharp}};
    res.samples += rep.pairs;
    res.passed = res.passed && rep.margin_ratio <= 1.0 + kLipTol && rep.margin_ratio_sharp <= 1.0 + kLipTol;
  }
  return res;
}

AuditResult audit_gap_bound(std::uint64_t seed, const AuditSizes& sizes) {
  const std::vector<std::pair<std::string, FeasibleRegion>> regions = {
      {"unit_ball_2d", FeasibleRegion::l2_ball(1.0, Vec::Zero(2))},
      {"ball_3d_r2", FeasibleRegion::l2_ball(2.0, Vec::Zero(3))},
      {"ball_2d_r0.5_offcenter", FeasibleRegion::l2_ball(0.5, (Vec(2) << 3.0, -2.0).finished())},
      {"interval", FeasibleRegion::interval(-0.5, 0.5)},
  };
  AuditResult res{"gap_bound"};
  res.passed = true;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& [name, region] = regions[r];
    const double mu = *region.mu();
    Excess excess;
    double equality_gap = 0.0;
    for (std::size_t k = 0; k < sizes.costs; ++k) {
      Sampler rng = draw(seed, k, 0x6762 + r);
      const Vec c = rng.gaussian(region.dim()) * std::pow(10.0, rng.uniform(-2.0, 2.0));
      const double bound = 2.0 * dual_norm(c, region.norm_q()) / mu;
      const double gap = linopt_gap(region, c);
      excess.add(gap - bound, kTol * std::max(1.0, bound));
      equality_gap = std::max(equality_gap, std::abs(gap - bound) / std::max(1.0, bound));
    }
    res.details[name] = Json{{"bound", excess_json(excess)}, {"max_relative_equality_gap", equality_gap}};
    res.samples += sizes.costs;
    // l2 balls attain the bound exactly.
    res.passed = res.passed && excess.violations == 0 && equality_gap <= kTol;
  }
  return res;
}

AuditResult audit_loss_ordering(std::uint64_t seed, const AuditSizes& sizes) {
  const std::vector<std::pair<std::string, FeasibleRegion>> regions = {
      {"interval", FeasibleRegion::interval(-0.5, 0.5)},
      {"unit_simplex", FeasibleRegion::unit_simplex(3)},
      {"square", square()},
      {"unit_ball_2d", FeasibleRegion::l2_ball(1.0, Vec::Zero(2))},
      {"l1.5_ball", FeasibleRegion::lq_ball(1.5, 1.0, Vec::Zero(3))},
      {"grid_dag", FeasibleRegion::dag_paths(grid_dag(2, 3))},
  };
  std::vector<double> grid;
  for (int k = 0; k < 10; ++k) grid.push_back(0.01 * std::pow(10.0, k / 3.0));
  AuditResult res{"loss_ordering"};
  res.passed = true;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& [name, region] = regions[r];
    const double q = region.norm_q();
    Excess spo_nonneg, spo_margin, margin_hard, hard_gap, monotone;
    for (std::size_t k = 0; k < sizes.costs; ++k) {
      Sampler rng = draw(seed, k, 0x6f72 + r);
      const Vec c_hat = rng.gaussian(region.dim()) * std::pow(10.0, rng.uniform(-2.5, 1.5));
      const Vec c = rng.gaussian(region.dim()) * rng.uniform(0.1, 3.0);
      const double spo = spo_loss(region, c_hat, c);
      const double gap = linopt_gap(region, c);
      spo_nonneg.add(-spo, kTol);
      double prev = -kInf;
      for (double g : grid) {
        const auto mp = MarginParams::with_gamma(g, q);
        const double m = margin_spo_loss(region, c_hat, c, mp);
        const double h = hard_margin_spo_loss(region, c_hat, c, mp);
        spo_margin.add(spo - m, kTol);
        margin_hard.add(m - h, kTol);
        hard_gap.add(h - gap, kTol);
        monotone.add(prev - m, kTol);
        prev = m;
      }
    }
    res.details[name] = Json{{"spo_nonnegative", excess_json(spo_nonneg)},
                             {"spo_le_margin", excess_json(spo_margin)},
                             {"margin_le_hard", excess_json(margin_hard)},
                             {"hard_le_gap", excess_json(hard_gap)},
                             {"margin_monotone_in_gamma", excess_json(monotone)}};
    res.samples += sizes.costs;
    res.passed = res.passed && spo_nonneg.violations + spo_margin.violations + margin_hard.violations +
                                       hard_gap.violations + monotone.violations ==
                                   0;
  }
  res.details["gamma_grid_points"] = grid.size();
  return res;
}

AuditResult audit_strong_convexity(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"strong_convexity"};
  const auto interval = FeasibleRegion::interval(-0.5, 0.5);
  const auto ball = FeasibleRegion::l2_ball(1.0, Vec::Zero(2));
  const auto a = verify_strong_convexity(interval, 2.0, sizes.convexity, substream(seed, 0, 0x7363)());
  const auto b = verify_strong_convexity(ball, 1.0, sizes.convexity, substream(seed, 1, 0x7363)());
  const auto c = verify_strong_convexity(ball, 10.0, sizes.convexity, substream(seed, 2, 0x7363)());
  auto summary = [](const ViolationReport& r) {
    return Json{{"samples", r.samples}, {"violations", r.violations}, {"max_violation", r.max_violation}};
  };
  res.details = Json{{"interval_mu2", summary(a)}, {"unit_ball_mu1", summary(b)}, {"unit_ball_mu10", summary(c)}};
  Json witness = Json::object();
  for (const auto& [k, v] : c.witness) witness[k] = vec_to_json(v);
  res.details["unit_ball_mu10"]["witness"] = witness;
  res.samples = a.samples + b.samples + c.samples;
  res.passed = a.ok() && b.ok() && !c.ok() && !c.witness.empty();
  return res;
}

AuditResult audit_optimality_condition(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"optimality_condition"};
  // Hand-evaluated equality case: c = e1, w = e2 on the unit disc.
  const auto disc = FeasibleRegion::l2_ball(1.0, Vec::Zero(2));
  const Vec e1 = Vec::Unit(2, 0), e2 = Vec::Unit(2, 1);
  const Vec wbar = linopt_oracle(disc, e1);
  const double lhs = e1.dot(e2 - wbar);
  const double rhs = 0.5 * 1.0 * e1.norm() * (e2 - wbar).squaredNorm();
  res.details["equality_case"] = Json{{"lhs", lhs}, {"rhs", rhs}};
  bool ok = std::abs(lhs - 1.0) <= 1e-12 && std::abs(rhs - 1.0) <= 1e-12;

  const std::vector<std::pair<std::string, FeasibleRegion>> regions = {
      {"unit_ball_2d", disc},
      {"ball_3d_r2_offcenter", FeasibleRegion::l2_ball(2.0, vec3(1.0, -1.0, 0.5))},
      {"interval", FeasibleRegion::interval(-0.5, 0.5)},
  };
  constexpr std::size_t kCosts = 10;
  for (std::size_t r = 0; r < regions.size(); ++r) {
    const auto& [name, region] = regions[r];
    std::size_t samples = 0, violations = 0;
    double worst = -kInf;
    for (std::size_t k = 0; k < kCosts; ++k) {
      Sampler rng = draw(seed, k, 0x6f63 + r);
      const Vec c = rng.gaussian(region.dim()) * std::pow(10.0, rng.uniform(-1.0, 1.0));
      const auto rep = verify_optimality_condition(region, c, sizes.convexity / kCosts, rng.engine()());
      samples += rep.samples;
      violations += rep.violations;
      worst = std::max(worst, rep.max_violation);
    }
    res.details[name] = Json{{"samples", samples}, {"violations", violations}, {"max_violation", worst}};
    res.samples += samples;
    ok = ok && violations == 0;
  }
  res.passed = ok;
  return res;
}

AuditResult audit_binary_equivalence(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"binary_equivalence"};
  const auto region = FeasibleRegion::interval(-0.5, 0.5);
  const double gammas[] = {0.1, 0.5, 1.0};
  double spo_err = 0.0, ramp_err = 0.0;
  for (std::size_t k = 0; k < sizes.costs; ++k) {
    Sampler rng = draw(seed, k, 0x6269);
    double chat = rng.uniform(-2.0, 2.0);
    if (chat == 0.0) chat = 0.25;
    const double c = rng.sign();
    const double gamma = gammas[k % 3];
    const Vec vh = Vec::Constant(1, chat), vc = Vec::Constant(1, c);
    const double zero_one = c * chat < 0.0 ? 1.0 : 0.0;
    const double ramp = std::min(1.0, std::max(0.0, 1.0 - c * chat / gamma));
    spo_err = std::max(spo_err, std::abs(spo_loss(region, vh, vc) - zero_one));
    ramp_err = std::max(ramp_err, std::abs(margin_spo_loss(region, vh, vc, MarginParams::with_gamma(gamma)) - ramp));
    ++res.samples;
  }
  const auto costs = enumerated_costs(region, {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)});
  res.details = Json{{"max_abs_error_zero_one", spo_err},
                     {"max_abs_error_ramp", ramp_err},
                     {"omega", costs.omega},
                     {"rho2_C", costs.rho2},
                     {"mu", *region.mu()}};
  res.passed = spo_err <= 1e-12 && ramp_err <= 1e-12 && costs.omega == 1.0 && costs.rho2 == 1.0 && *region.mu() == 2.0;
  return res;
}

AuditResult audit_multiclass_equivalence(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"multiclass_equivalence"};
  constexpr int d = 4;
  const auto region = FeasibleRegion::unit_simplex(d);
  std::size_t mismatches = 0, non_binary = 0, ties = 0;
  for (std::size_t k = 0; k < sizes.costs; ++k) {
    Sampler rng = draw(seed, k, 0x6d63);
    Vec chat = rng.gaussian(d);
    if (k % 2) chat = chat.array().round().max(-1.0).min(1.0).matrix();  // ties on purpose
    const int label = static_cast<int>(rng.index(d));
    const Vec c = -Vec::Unit(d, label);
    // Predicted label: first index attaining the max of the score -c_hat.
    int pred = 0;
    for (int j = 1; j < d; ++j)
      if (-chat[j] > -chat[pred]) pred = j;
    if ((chat.array() == chat[pred]).count() > 1) ++ties;
    const double loss = spo_loss(region, chat, c);
    if (loss != 0.0 && loss != 1.0) ++non_binary;
    if (loss != (pred == label ? 0.0 : 1.0)) ++mismatches;
    ++res.samples;
  }
  res.details = Json{{"mismatches", mismatches}, {"non_binary_values", non_binary}, {"tie_inputs", ties}};
  res.passed = mismatches == 0 && non_binary == 0;
  return res;
}

AuditResult audit_massart_chain(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"massart_chain"};
  res.passed = true;
  Json list = Json::array();
  for (std::size_t t = 0; t < sizes.classes; ++t) {
    Sampler rng = draw(seed, t, 0x6d61);
    const bool simplex = t % 2 == 0;
    const FeasibleRegion region = simplex ? FeasibleRegion::unit_simplex(3) : square();
    const int d = region.dim(), p = 2;
    std::vector<Vec> members;
    if (simplex) {
      for (int i = 0; i < d; ++i) members.push_back(-Vec::Unit(d, i));
    } else {
      for (int i = 0; i < 4; ++i) members.push_back(rng.gaussian(d));
    }
    const CostDomain domain = enumerated_costs(region, members);
    const std::size_t n = 2 + rng.index(7);
    LabeledSample sample;
    for (std::size_t i = 0; i < n; ++i) {
      sample.xs.push_back(rng.gaussian(p));
      sample.cs.push_back(members[rng.index(members.size())]);
    }
    FiniteHypothesisSet H;
    const std::size_t m = 1 + rng.index(6);
    for (std::size_t h = 0; h < m; ++h) {
      if (rng.uniform() < 0.5) {
        H.items.push_back(Hypothesis::linear(random_matrix(rng, d, p)));
      } else {
        std::vector<Vec> outs;
        for (std::size_t i = 0; i < n; ++i) outs.push_back(rng.gaussian(d));
        H.items.push_back(Hypothesis::table(outs));
      }
    }
    // Exact expectation over all 2^n sign vectors.
    Mat L(m, n);
    for (std::size_t h = 0; h < m; ++h)
      for (std::size_t i = 0; i < n; ++i)
        L(h, i) = spo_loss(region, H.items[h].predict(i, sample.xs[i]), sample.cs[i]);
    double exact = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Vec sigma(n);
      for (std::size_t i = 0; i < n; ++i) sigma[i] = (mask >> i) & 1u ? 1.0 : -1.0;
      exact += (L * sigma).maxCoeff() / static_cast<double>(n);
    }
    exact /= static_cast<double>(1u << n);
    const McEstimate mc = rademacher_spo_mc(region, H, sample, sizes.mc_draws, rng.engine()());
    const std::size_t card = count_restrictions(region, H, sample.xs);
    const double massart = massart_bound(static_cast<double>(card), n, domain.omega);
    const bool ok = exact <= massart + 1e-12 && mc.estimate <= massart + 3.0 * mc.std_error + 1e-12 &&
                    std::abs(mc.estimate - exact) <= 5.0 * mc.std_error + 1e-12;
    list.push_back(Json{{"region", simplex ? "unit_simplex" : "square"},
                        {"n", n},
                        {"hypotheses", m},
                        {"restrictions", card},
                        {"exact", exact},
                        {"mc", mc.estimate},
                        {"mc_se", mc.std_error},
                        {"massart", massart}});
    res.samples += sizes.mc_draws;
    res.passed = res.passed && ok;
  }
  res.details["classes"] = list;
  return res;
}

AuditResult audit_natarajan_linear(std::uint64_t seed, const AuditSizes&) {
  AuditResult res{"natarajan_linear"};
  res.passed = true;
  // Every function from 2 points to 2 labels.
  LabelTable full{2, 4, {1, 1, 2, 2, 1, 2, 1, 2}};
  const int full_dim = natarajan_dim_bruteforce(full);
  res.details["full_function_table"] = full_dim;
  res.passed = full_dim == 2;

  struct Case {
    std::string region;
    int p;
  };
  const std::vector<Case> cases = {{"unit_simplex_2", 1}, {"unit_simplex_2", 2}, {"square", 1}, {"square", 2}};
  Json list = Json::array();
  std::size_t k = 0;
  for (const auto& cs : cases) {
    const FeasibleRegion region = cs.region == "square" ? square() : FeasibleRegion::unit_simplex(2);
    const int d = region.dim(), p = cs.p;
    // All matrices with entries in {-1, 0, 1}.
    FiniteHypothesisSet H;
    const int cells = d * p;
    int total = 1;
    for (int i = 0; i < cells; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      Mat B(d, p);
      int rest = code;
      for (int i = 0; i < cells; ++i, rest /= 3) B.data()[i] = static_cast<double>(rest % 3 - 1);
      H.items.push_back(Hypothesis::linear(B));
    }
    for (int rep = 0; rep < 3; ++rep, ++k) {
      Sampler rng = draw(seed, k, 0x6e61);
      std::vector<Vec> xs;
      for (int i = 0; i < 5; ++i) xs.push_back(rng.gaussian(p));
      const int dim = natarajan_dim_bruteforce(label_table(region, H, xs));
      list.push_back(Json{{"region", cs.region}, {"d", d}, {"p", p}, {"points", 5}, {"dim", dim}});
      res.passed = res.passed && dim <= d * p;
      ++res.samples;
    }
  }
  res.details["instances"] = list;
  return res;
}

AuditResult audit_closed_form_domination(std::uint64_t seed, const AuditSizes& sizes) {
  AuditResult res{"closed_form_domination"};
  res.passed = true;
  constexpr double beta = 1.0;
  Json list = Json::array();
  std::size_t k = 0;
  for (int d : {2, 5})
    for (int p : {2, 5})
      for (std::size_t n : {50u, 400u}) {
        Sampler rng = draw(seed, k++, 0x6366);
        std::vector<Vec> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(rng.unit_sphere(p));
        FiniteHypothesisSet H;
        for (int h = 0; h < 50; ++h) {
          Mat B = random_matrix(rng, d, p);
          B *= beta * rng.uniform(0.5, 1.0) / B.norm();
          H.items.push_back(Hypothesis::linear(B));
        }
        const McEstimate mc = rademacher_multivariate_mc(H, xs, sizes.mc_draws, rng.engine()());
        const double bound = linear_class_rad_bound({ConstraintKind::Frobenius, beta, d, p}, 1.0, n);
        list.push_back(Json{{"d", d}, {"p", p}, {"n", n}, {"mc", mc.estimate}, {"mc_se", mc.std_error}, {"bound", bound}});
        res.passed = res.passed && mc.estimate <= bound + 3.0 * mc.std_error;
        res.samples += sizes.mc_draws;
      }
  res.details["configs"] = list;
  return res;
}

AuditResult audit_bound_arithmetic(std::uint64_t seed, const AuditSizes&) {
  AuditResult res{"bound_arithmetic"};
  bool ok = true;

  BoundInputs nat;
  nat.n = 100;
  nat.card_S = 3;
  nat.d_N = 2;
  nat.omega = 1.0;
  nat.delta = 0.05;
  const double nat_value = bound_natarajan(nat).value;
  const double nat_direct = 2.0 * std::sqrt(4.0 * std::log(900.0) / 100.0) + std::sqrt(std::log(20.0) / 200.0);
  res.details["natarajan_example"] = nat_value;
  ok = ok && std::abs(nat_value - 1.1656) <= 5e-4 && std::abs(nat_value - nat_direct) <= 1e-12;

  BoundInputs rad;
  rad.n = 100;
  rad.rad_spo = 0.1;
  rad.omega = 1.0;
  rad.delta = 0.05;
  rad.empirical_risk = 0.2;
  const double rad_value = bound_rademacher(rad, BoundVariant::Expected).value;
  res.details["rademacher_example"] = rad_value;
  ok = ok && std::abs(rad_value - 0.5224) <= 5e-4;

  // Linear-polyhedral is the Natarajan bound at d_N = dp.
  double poly_diff = 0.0, sum_diff = 0.0, uniform_term = 0.0;
  for (std::size_t k = 0; k < 200; ++k) {
    Sampler rng = draw(seed, k, 0x6261);
    BoundInputs in;
    in.n = 10 + rng.index(5000);
    in.delta = rng.uniform(0.001, 0.5);
    in.omega = rng.uniform(0.0, 3.0);
    in.rho2_C = rng.uniform(0.0, 3.0);
    in.mu = rng.uniform(0.1, 3.0);
    in.gamma_bar = rng.uniform(0.1, 3.0);
    in.gamma = *in.gamma_bar * rng.uniform(0.05, 1.0);
    in.d = 1 + static_cast<int>(rng.index(6));
    in.p = 1 + static_cast<int>(rng.index(6));
    in.card_S = 1.0 + static_cast<double>(rng.index(30));
    in.d_N = static_cast<double>(*in.d * *in.p);
    in.rho2_S = rng.uniform(0.5, 3.0);
    in.rad_spo = rng.uniform(0.0, 1.0);
    in.rad_multi = rng.uniform(0.0, 1.0);
    in.empirical_risk = rng.uniform(0.0, 1.0);
    in.margin_risk = in.empirical_risk + rng.uniform(0.0, 0.5);
    poly_diff = std::max(poly_diff, std::abs(bound_linear_polyhedral(in).value - bound_natarajan(in).value));
    for (const auto& r : bound_all(in)) {
      double s = 0.0;
      for (const auto& t : r.terms) {
        s += t.value;
        if (t.value < 0.0) ok = false;
      }
      sum_diff = std::max(sum_diff, std::abs(s - r.value));
    }
    BoundInputs eq = in;
    eq.gamma = eq.gamma_bar;
    for (auto v : {BoundVariant::Expected, BoundVariant::Empirical})
      uniform_term = std::max(uniform_term, std::abs(bound_margin_uniform(eq, v).term("uniformity")));
    ++res.samples;
  }
  res.details["linear_polyhedral_max_diff"] = poly_diff;
  res.details["terms_sum_max_diff"] = sum_diff;
  res.details["uniformity_at_gamma_bar"] = uniform_term;
  res.passed = ok && poly_diff == 0.0 && sum_diff <= 1e-12 && uniform_term == 0.0;
  return res;
}

AuditResult audit_bound_monotonicity(std::uint64_t seed, const AuditSizes&) {
  AuditResult res{"bound_monotonicity"};
  std::size_t violations = 0;
  Json failures = Json::array();
  for (std::size_t k = 0; k < 200; ++k) {
    Sampler rng = draw(seed, k, 0x6d6f);
    BoundInputs in;
    in.n = 20 + rng.index(2000);
    in.delta = rng.uniform(0.001, 0.5);
    in.omega = rng.uniform(0.1, 3.0);
    in.rho2_C = rng.uniform(0.1, 3.0);
    in.mu = rng.uniform(0.1, 3.0);
    in.gamma_bar = rng.uniform(0.5, 3.0);
    in.gamma = *in.gamma_bar * rng.uniform(0.1, 0.5);
    in.d = 1 + static_cast<int>(rng.index(6));
    in.p = 1 + static_cast<int>(rng.index(6));
    in.card_S = 2.0 + static_cast<double>(rng.index(30));
    in.d_N = static_cast<double>(1 + rng.index(10));
    in.rho2_S = rng.uniform(0.5, 3.0);
    in.rad_spo = rng.uniform(0.0, 1.0);
    in.rad_multi = rng.uniform(0.0, 1.0);
    in.empirical_risk = rng.uniform(0.0, 1.0);
    in.margin_risk = in.empirical_risk;

    struct Move {
      const char* name;
      BoundInputs changed;
      int direction;  // +1: bound may only grow, -1: only shrink
    };
    std::vector<Move> moves;
    auto add = [&](const char* name, int dir, auto edit) {
      BoundInputs c = in;
      edit(c);
      moves.push_back({name, c, dir});
    };
    add("n_up", -1, [](BoundInputs& c) { c.n *= 2; });
    add("omega_up", +1, [](BoundInputs& c) { c.omega *= 1.5; });
    add("delta_down", +1, [](BoundInputs& c) { c.delta /= 2.0; });
    add("dN_up", +1, [](BoundInputs& c) { *c.d_N += 1.0; });
    add("card_up", +1, [](BoundInputs& c) { *c.card_S += 1.0; });
    add("gamma_down", +1, [](BoundInputs& c) { *c.gamma /= 2.0; });
    for (const auto& mv : moves)
      for (const auto& id : bound_ids())
        for (auto v : {BoundVariant::Expected, BoundVariant::Empirical}) {
          const double before = evaluate_bound(id, in, v).value;
          const double after = evaluate_bound(id, mv.changed, v).value;
          const double delta = (after - before) * mv.direction;
          ++res.samples;
          if (delta < -1e-12 * std::max(1.0, std::abs(before))) {
            ++violations;
            if (failures.size() < 5)
              failures.push_back(Json{{"bound", id}, {"variant", to_string(v)}, {"move", mv.name}, {"before", before},
                                      {"after", after}});
          }
        }
    // Uniform-in-gamma bound dominates the fixed-gamma bound.
    for (auto v : {BoundVariant::Expected, BoundVariant::Empirical}) {
      ++res.samples;
      if (bound_margin_uniform(in, v).value < bound_margin(in, v).value) ++violations;
    }
  }
  res.details = Json{{"violations", violations}, {"examples", failures}};
  res.passed = violations == 0;
  return res;
}

VerifyReport verify_all(std::uint64_t seed, const AuditSizes& sizes) {
  VerifyReport rep;
  rep.seed = seed;
  using Audit = AuditResult (*)(std::uint64_t, const AuditSizes&);
  const Audit audits[] = {audit_oracle_optimality,   audit_dag_enumeration,       audit_lipschitz_like,
                          audit_margin_lipschitz,    audit_gap_bound,             audit_loss_ordering,
                          audit_strong_convexity,    audit_optimality_condition,  audit_binary_equivalence,
                          audit_multiclass_equivalence, audit_massart_chain,      audit_natarajan_linear,
                          audit_closed_form_domination, audit_bound_arithmetic,   audit_bound_monotonicity};
  for (std::size_t i = 0; i < std::size(audits); ++i)
    rep.audits.push_back(audits[i](substream(seed, i, 0x7661)(), sizes));
  return rep;
}

}  // namespace spo
