#include "spo/bounds.hpp"

#include <cmath>

namespace spo {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw BoundError(what);
}

void require(bool cond, const std::string& what) {
  if (!cond) throw BoundError(what);
}

template <class T>
T need(const std::optional<T>& v, const char* name) {
  require(v.has_value(), std::string("bound input '") + name + "' is required");
  return *v;
}

double nd(const BoundInputs& in) { return static_cast<double>(in.n); }

// omega sqrt(ln(a/delta) / 2n)
double deviation(const BoundInputs& in, double a) { return in.omega * std::sqrt(std::log(a / in.delta) / (2.0 * nd(in))); }

BoundReport finish(std::string id, BoundVariant variant, std::vector<BoundTerm> terms, const BoundInputs& in) {
  BoundReport r;
  r.theorem_id = std::move(id);
  r.variant = variant;
  r.terms = std::move(terms);
  r.inputs = in;
  for (const auto& t : r.terms) r.value += t.value;
  return r;
}

double spo_rad(const BoundInputs& in) {
  if (in.rad_spo) return *in.rad_spo;
  if (in.rad_spo_estimate) return *in.rad_spo_estimate;
  throw BoundError("bound input 'rad_spo' (or 'rad_spo_estimate') is required");
}

double multi_rad(const BoundInputs& in) {
  if (in.rad_multi) return *in.rad_multi;
  if (in.rad_multi_estimate) return *in.rad_multi_estimate;
  throw BoundError("bound input 'rad_multi' (or 'rad_multi_estimate') is required");
}

}  // namespace

void BoundInputs::validate() const {
  require(n >= 1, "n must be >= 1");
  require(delta > 0.0 && delta <= 1.0, "delta must lie in (0, 1]");
  require(omega >= 0.0, "omega must be >= 0");
  require(empirical_risk >= 0.0, "empirical risk must be >= 0");
  if (rho2_C) require(*rho2_C >= 0.0, "rho2_C must be >= 0");
  if (rho2_S) require(*rho2_S >= 0.0, "rho2_S must be >= 0");
  if (d_N) require(*d_N >= 0.0, "d_N must be >= 0");
  if (margin_risk) require(*margin_risk >= 0.0, "margin risk must be >= 0");
  for (const auto* r : {&rad_spo, &rad_spo_estimate, &rad_multi, &rad_multi_estimate})
    if (*r) require(**r >= 0.0, "Rademacher complexities must be >= 0");
}

std::string to_string(BoundVariant v) { return v == BoundVariant::Expected ? "expected" : "empirical"; }

BoundVariant bound_variant_from_string(const std::string& s) {
  if (s == "expected") return BoundVariant::Expected;
  if (s == "empirical") return BoundVariant::Empirical;
  throw BoundError("unknown bound variant '" + s + "'");
}

double BoundReport::term(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t.value;
  return 0.0;
}

BoundReport bound_rademacher(const BoundInputs& in, BoundVariant variant) {
  in.validate();
  const double rad = spo_rad(in);
  const double dev = variant == BoundVariant::Expected ? deviation(in, 1.0) : 3.0 * deviation(in, 2.0);
  return finish("rademacher", variant,
                {{"empirical_risk", in.empirical_risk}, {"complexity", 2.0 * rad}, {"deviation", dev}}, in);
}

BoundReport bound_natarajan(const BoundInputs& in) {
  in.validate();
  const double dN = need(in.d_N, "d_N");
  const double card = need(in.card_S, "card_S");
  require(card >= 1.0, "card_S must be >= 1");
  const double arg = nd(in) * card * card;
  require(arg > 1.0, "n |S|^2 must exceed 1");
  const double complexity = 2.0 * in.omega * std::sqrt(2.0 * dN * std::log(arg) / nd(in));
  return finish("natarajan", BoundVariant::Expected,
                {{"empirical_risk", in.empirical_risk}, {"complexity", complexity}, {"deviation", deviation(in, 1.0)}},
                in);
}

BoundReport bound_linear_polyhedral(const BoundInputs& in) {
  BoundInputs sub = in;
  sub.d_N = static_cast<double>(need(in.d, "d")) * static_cast<double>(need(in.p, "p"));
  BoundReport r = bound_natarajan(sub);
  r.theorem_id = "linear_polyhedral";
  return r;
}

BoundReport bound_covering(const BoundInputs& in) {
  in.validate();
  const double d = need(in.d, "d");
  const double p = need(in.p, "p");
  const double rho_S = need(in.rho2_S, "rho2_S");
  const double rho_C = need(in.rho2_C, "rho2_C");
  const double arg = 2.0 * nd(in) * rho_S * d;
  require(arg > 1.0, "2 n rho2(S) d must exceed 1");
  const double root = std::sqrt(2.0 * p * std::log(arg) / nd(in));
  const double complexity = 4.0 * d * in.omega * root;
  const double remainder = 2.0 * (2.0 * rho_C / nd(in)) * (1.0 + 2.0 * d * root);
  return finish("covering", BoundVariant::Empirical,
                {{"empirical_risk", in.empirical_risk},
                 {"complexity", complexity},
                 {"deviation", 3.0 * deviation(in, 2.0)},
                 {"remainder", remainder}},
                in);
}

double margin_rad_bound(double rho2_C, double rad_multi, double gamma, double mu) {
  require(gamma > 0.0, "gamma must be positive");
  require(mu > 0.0, "mu must be positive");
  return 5.0 * std::sqrt(2.0) * rho2_C * rad_multi / (gamma * mu);
}

BoundReport bound_margin(const BoundInputs& in, BoundVariant variant) {
  in.validate();
  const double gamma = need(in.gamma, "gamma");
  const double mu = need(in.mu, "mu");
  require(gamma > 0.0, "gamma must be positive");
  require(mu > 0.0, "mu must be positive");
  const double risk = need(in.margin_risk, "margin_risk");
  const double complexity = 2.0 * margin_rad_bound(need(in.rho2_C, "rho2_C"), multi_rad(in), gamma, mu);
  const double dev = variant == BoundVariant::Expected ? deviation(in, 1.0) : 3.0 * deviation(in, 2.0);
  return finish("margin", variant, {{"empirical_risk", risk}, {"complexity", complexity}, {"deviation", dev}}, in);
}

BoundReport bound_margin_uniform(const BoundInputs& in, BoundVariant variant) {
  in.validate();
  const double gamma = need(in.gamma, "gamma");
  const double gamma_bar = need(in.gamma_bar, "gamma_bar");
  const double mu = need(in.mu, "mu");
  require(gamma > 0.0, "gamma must be positive");
  require(gamma <= gamma_bar, "gamma must not exceed gamma_bar");
  require(mu > 0.0, "mu must be positive");
  const double risk = need(in.margin_risk, "margin_risk");
  const double complexity = 4.0 * margin_rad_bound(need(in.rho2_C, "rho2_C"), multi_rad(in), gamma, mu);
  const double uniformity = in.omega * std::sqrt(std::log(std::log2(2.0 * gamma_bar / gamma)) / nd(in));
  const double dev = variant == BoundVariant::Expected ? deviation(in, 2.0) : 3.0 * deviation(in, 4.0);
  return finish("margin_uniform", variant,
                {{"empirical_risk", risk}, {"complexity", complexity}, {"uniformity", uniformity}, {"deviation", dev}},
                in);
}

const std::vector<std::string>& bound_ids() {
  static const std::vector<std::string> ids{"rademacher", "natarajan", "linear_polyhedral",
                                            "covering",   "margin",    "margin_uniform"};
  return ids;
}

BoundReport evaluate_bound(const std::string& id, const BoundInputs& in, BoundVariant variant) {
  if (id == "rademacher") return bound_rademacher(in, variant);
  if (id == "natarajan") return bound_natarajan(in);
  if (id == "linear_polyhedral") return bound_linear_polyhedral(in);
  if (id == "covering") return bound_covering(in);
  if (id == "margin") return bound_margin(in, variant);
  if (id == "margin_uniform") return bound_margin_uniform(in, variant);
  throw BoundError("unknown theorem id '" + id + "'");
}

std::vector<BoundReport> bound_all(const BoundInputs& in) {
  in.validate();
  std::vector<BoundReport> out;
  const bool has_spo_rad = in.rad_spo || in.rad_spo_estimate;
  const bool has_multi_rad = in.rad_multi || in.rad_multi_estimate;
  const bool margin_ok = in.margin_risk && in.rho2_C && in.mu && in.gamma && has_multi_rad;
  for (const auto& id : bound_ids()) {
    bool applicable = false;
    bool two_variants = false;
    if (id == "rademacher") applicable = has_spo_rad, two_variants = true;
    if (id == "natarajan") applicable = in.d_N && in.card_S;
    if (id == "linear_polyhedral") applicable = in.d && in.p && in.card_S;
    if (id == "covering") applicable = in.d && in.p && in.rho2_S && in.rho2_C;
    if (id == "margin") applicable = margin_ok, two_variants = true;
    if (id == "margin_uniform") applicable = margin_ok && in.gamma_bar, two_variants = true;
    if (!applicable) continue;
    out.push_back(evaluate_bound(id, in, BoundVariant::Expected));
    if (two_variants) out.push_back(evaluate_bound(id, in, BoundVariant::Empirical));
  }
  return out;
}

}  // namespace spo
