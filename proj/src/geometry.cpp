#include "spo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

namespace spo {

namespace {

// Literal messages stay unallocated on the success path.
void require(bool cond, const char* what) {
  if (!cond) throw GeometryError(what);
}

void check_cost(const FeasibleRegion& region, const Vec& c) {
  if (c.size() != region.dim())
    throw GeometryError("cost vector has dimension " + std::to_string(c.size()) + ", region has " +
                        std::to_string(region.dim()));
  require(c.allFinite(), "cost vector has non-finite entries");
}

// Out-arcs of each node, in arc-index order.
std::vector<std::vector<int>> out_arcs(const Dag& dag) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(dag.nodes));
  for (std::size_t a = 0; a < dag.arcs.size(); ++a) out[dag.arcs[a].tail].push_back(static_cast<int>(a));
  return out;
}

// Shortest source->sink path with the lexicographic tie rule.
Vec dag_shortest_path(const FeasibleRegion& region, const Vec& c) {
  const Dag& dag = region.dag();
  const auto out = out_arcs(dag);
  std::vector<double> dist(static_cast<std::size_t>(dag.nodes), kInf);
  dist[dag.sink] = 0.0;
  const auto& topo = region.topo_nodes();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int v = *it;
    if (v == dag.sink) continue;
    for (int a : out[v]) {
      const double dh = dist[dag.arcs[a].head];
      if (dh == kInf) continue;
      dist[v] = std::min(dist[v], c[a] + dh);
    }
  }
  Vec w = Vec::Zero(region.dim());
  int u = dag.source;
  while (u != dag.sink) {
    int chosen = -1;
    for (int a : out[u]) {
      const double dh = dist[dag.arcs[a].head];
      if (dh != kInf && c[a] + dh == dist[u]) {
        chosen = a;
        break;
      }
    }
    require(chosen >= 0, "internal: DAG backtrack failed");
    w[chosen] = 1.0;
    u = dag.arcs[chosen].head;
  }
  return w;
}

std::vector<bool> reaches_sink(const FeasibleRegion& region) {
  const Dag& dag = region.dag();
  const auto out = out_arcs(dag);
  std::vector<bool> ok(static_cast<std::size_t>(dag.nodes), false);
  ok[dag.sink] = true;
  const auto& topo = region.topo_nodes();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    for (int a : out[*it]) {
      if (ok[dag.arcs[a].head]) ok[*it] = true;
    }
  }
  return ok;
}

// Longest source->sink path length measured in arcs.
int dag_longest_arc_count(const FeasibleRegion& region) {
  const Dag& dag = region.dag();
  const auto out = out_arcs(dag);
  std::vector<int> len(static_cast<std::size_t>(dag.nodes), -1);
  len[dag.sink] = 0;
  const auto& topo = region.topo_nodes();
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    const int v = *it;
    if (v == dag.sink) continue;
    for (int a : out[v]) {
      const int lh = len[dag.arcs[a].head];
      if (lh >= 0) len[v] = std::max(len[v], lh + 1);
    }
  }
  return len[dag.source];
}

// sup_{||u||_from <= 1} ||u||_to in R^d.
double norm_ratio(double from, double to, int d) {
  const double inv_from = std::isinf(from) ? 0.0 : 1.0 / from;
  const double inv_to = std::isinf(to) ? 0.0 : 1.0 / to;
  const double e = inv_to - inv_from;
  return e > 0.0 ? std::pow(static_cast<double>(d), e) : 1.0;
}

Vec unit_in_norm(const Vec& v, double q) { return v / lq_norm(v, q); }

}  // namespace

// ---------------------------------------------------------------------------

double conjugate_exponent(double q) {
  require(q >= 1.0, "norm exponent must be >= 1");
  if (q == 1.0) return kInf;
  if (std::isinf(q)) return 1.0;
  return q / (q - 1.0);
}

double lq_norm(const Vec& v, double q) {
  require(q >= 1.0, "norm exponent must be >= 1");
  if (v.size() == 0) return 0.0;
  if (std::isinf(q)) return v.cwiseAbs().maxCoeff();
  if (q == 1.0) return v.cwiseAbs().sum();
  if (q == 2.0) return v.norm();
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / scale, q);
  return scale * std::pow(acc, 1.0 / q);
}

double dual_norm(const Vec& c, double q) { return lq_norm(c, conjugate_exponent(q)); }

std::string to_string(RegionKind kind) {
  switch (kind) {
    case RegionKind::VertexPolytope: return "vertex_polytope";
    case RegionKind::UnitSimplex: return "unit_simplex";
    case RegionKind::DagPathPolytope: return "dag_paths";
    case RegionKind::LqBall: return "lq_ball";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------

FeasibleRegion FeasibleRegion::vertex_polytope(std::vector<Vec> vertices) {
  require(!vertices.empty(), "vertex polytope needs at least one vertex");
  const auto d = vertices.front().size();
  require(d >= 1, "vertex dimension must be >= 1");
  std::set<std::vector<double>> seen;
  for (const auto& v : vertices) {
    require(v.size() == d, "vertices must share one dimension");
    require(v.allFinite(), "vertex has non-finite entries");
    require(seen.emplace(v.data(), v.data() + v.size()).second, "duplicate vertex");
  }
  FeasibleRegion r;
  r.kind_ = RegionKind::VertexPolytope;
  r.dim_ = static_cast<int>(d);
  r.vertices_ = std::move(vertices);
  return r;
}

FeasibleRegion FeasibleRegion::unit_simplex(int dim) {
  require(dim >= 1, "simplex dimension must be >= 1");
  FeasibleRegion r;
  r.kind_ = RegionKind::UnitSimplex;
  r.dim_ = dim;
  r.vertices_.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) r.vertices_.push_back(Vec::Unit(dim, i));
  return r;
}

FeasibleRegion FeasibleRegion::dag_paths(Dag dag) {
  require(dag.nodes >= 2, "DAG needs at least two nodes");
  require(!dag.arcs.empty(), "DAG needs at least one arc");
  auto in_range = [&](int v) { return v >= 0 && v < dag.nodes; };
  require(in_range(dag.source) && in_range(dag.sink), "source/sink out of range");
  require(dag.source != dag.sink, "source and sink must differ");
  std::vector<int> indeg(static_cast<std::size_t>(dag.nodes), 0);
  for (const auto& a : dag.arcs) {
    require(in_range(a.tail) && in_range(a.head), "arc endpoint out of range");
    require(a.tail != a.head, "self loops are not allowed");
    ++indeg[a.head];
  }
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(dag.nodes));
  for (const auto& a : dag.arcs) succ[a.tail].push_back(a.head);

  // Kahn's algorithm, smallest node id first for a reproducible order.
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < dag.nodes; ++v)
    if (indeg[v] == 0) ready.push(v);
  std::vector<int> topo;
  while (!ready.empty()) {
    const int v = ready.top();
    ready.pop();
    topo.push_back(v);
    for (int h : succ[v])
      if (--indeg[h] == 0) ready.push(h);
  }
  require(static_cast<int>(topo.size()) == dag.nodes, "graph has a cycle");

  FeasibleRegion r;
  r.kind_ = RegionKind::DagPathPolytope;
  r.dim_ = static_cast<int>(dag.arcs.size());
  r.dag_ = std::move(dag);
  r.topo_nodes_ = std::move(topo);
  require(reaches_sink(r)[r.dag_.source], "no source->sink path");
  return r;
}

FeasibleRegion FeasibleRegion::lq_ball(double q, double radius, Vec center, std::optional<double> mu) {
  require(q > 1.0 && q <= 2.0, "l_q ball exponent must lie in (1, 2]");
  require(radius > 0.0 && std::isfinite(radius), "ball radius must be positive");
  require(center.size() >= 1 && center.allFinite(), "ball center must be a finite vector");
  FeasibleRegion r;
  r.kind_ = RegionKind::LqBall;
  r.dim_ = static_cast<int>(center.size());
  r.q_ = q;
  r.radius_ = radius;
  r.center_ = std::move(center);
  if (!mu && q == 2.0) mu = 1.0 / radius;
  if (mu) {
    require(*mu >= 0.0, "mu must be non-negative");
    if (*mu > 0.0) {
      const auto report = verify_strong_convexity(r, *mu, 512, 0x5eedULL);
      require(report.ok(), "declared mu fails the strong convexity check");
    }
    r.mu_ = mu;
  }
  return r;
}

FeasibleRegion FeasibleRegion::interval(double lo, double hi) {
  require(lo < hi, "interval needs lo < hi");
  Vec c(1);
  c[0] = 0.5 * (lo + hi);
  return lq_ball(2.0, 0.5 * (hi - lo), c);
}

const std::vector<Vec>& FeasibleRegion::vertices() const {
  require(kind_ == RegionKind::VertexPolytope || kind_ == RegionKind::UnitSimplex,
          "region has no explicit vertex list");
  return vertices_;
}

const Dag& FeasibleRegion::dag() const {
  require(kind_ == RegionKind::DagPathPolytope, "region is not a DAG path polytope");
  return dag_;
}

// ---------------------------------------------------------------------------

std::size_t linopt_vertex_index(const FeasibleRegion& region, const Vec& c) {
  check_cost(region, c);
  if (region.kind() == RegionKind::UnitSimplex) {
    std::size_t best = 0;
    for (Eigen::Index i = 1; i < c.size(); ++i)
      if (c[i] < c[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
    return best;
  }
  const auto& vs = region.vertices();
  std::size_t best = 0;
  double best_val = c.dot(vs[0]);
  for (std::size_t i = 1; i < vs.size(); ++i) {
    const double val = c.dot(vs[i]);
    if (val < best_val) {
      best_val = val;
      best = i;
    }
  }
  return best;
}

Vec linopt_oracle(const FeasibleRegion& region, const Vec& c) {
  check_cost(region, c);
  switch (region.kind()) {
    case RegionKind::VertexPolytope:
    case RegionKind::UnitSimplex:
      return region.vertices()[linopt_vertex_index(region, c)];
    case RegionKind::DagPathPolytope:
      return dag_shortest_path(region, c);
    case RegionKind::LqBall: {
      const double scale = c.cwiseAbs().maxCoeff();
      if (scale == 0.0) return region.center();
      if (region.q() == 2.0) return region.center() - region.radius() * (c / c.norm());
      // Gradient of the dual norm at c: the unit-l_q vector aligned with c.
      const double qd = conjugate_exponent(region.q());
      Vec g(c.size());
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        const double a = std::abs(c[i]) / scale;
        g[i] = (c[i] < 0 ? -1.0 : (c[i] > 0 ? 1.0 : 0.0)) * std::pow(a, qd - 1.0);
      }
      return region.center() - region.radius() * unit_in_norm(g, region.q());
    }
  }
  throw GeometryError("unknown region kind");
}

double linopt_gap(const FeasibleRegion& region, const Vec& c) {
  check_cost(region, c);
  switch (region.kind()) {
    case RegionKind::LqBall:
      return 2.0 * region.radius() * dual_norm(c, region.q());
    case RegionKind::UnitSimplex:
      return c.maxCoeff() - c.minCoeff();
    case RegionKind::VertexPolytope: {
      double lo = kInf, hi = -kInf;
      for (const auto& v : region.vertices()) {
        const double val = c.dot(v);
        lo = std::min(lo, val);
        hi = std::max(hi, val);
      }
      return hi - lo;
    }
    case RegionKind::DagPathPolytope: {
      const double lo = c.dot(dag_shortest_path(region, c));
      const double hi = -(-c).dot(dag_shortest_path(region, -c));
      return std::max(0.0, hi - lo);
    }
  }
  throw GeometryError("unknown region kind");
}

double region_radius(const FeasibleRegion& region, double q) {
  require(q >= 1.0, "norm exponent must be >= 1");
  switch (region.kind()) {
    case RegionKind::UnitSimplex:
      return 1.0;
    case RegionKind::VertexPolytope: {
      double best = 0.0;
      for (const auto& v : region.vertices()) best = std::max(best, lq_norm(v, q));
      return best;
    }
    case RegionKind::DagPathPolytope: {
      const int len = dag_longest_arc_count(region);
      return std::isinf(q) ? 1.0 : std::pow(static_cast<double>(len), 1.0 / q);
    }
    case RegionKind::LqBall: {
      const Vec& ctr = region.center();
      if (ctr.cwiseAbs().maxCoeff() == 0.0) return region.radius() * norm_ratio(region.q(), q, region.dim());
      if (q == region.q()) return lq_norm(ctr, q) + region.radius();
      if (std::isinf(q)) return ctr.cwiseAbs().maxCoeff() + region.radius();
      throw GeometryError("radius of an off-center l_q ball is only exact for q = ball exponent or inf");
    }
  }
  throw GeometryError("unknown region kind");
}

double region_diameter_l2(const FeasibleRegion& region) {
  switch (region.kind()) {
    case RegionKind::UnitSimplex:
      return region.dim() >= 2 ? std::sqrt(2.0) : 0.0;
    case RegionKind::LqBall:
      return 2.0 * region.radius() * norm_ratio(region.q(), 2.0, region.dim());
    case RegionKind::VertexPolytope:
    case RegionKind::DagPathPolytope: {
      const auto pts = enumerate_extreme_points(region, 4000);
      double best = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
      return best;
    }
  }
  throw GeometryError("unknown region kind");
}

std::uint64_t count_extreme_points(const FeasibleRegion& region) {
  switch (region.kind()) {
    case RegionKind::UnitSimplex:
    case RegionKind::VertexPolytope:
      return region.vertices().size();
    case RegionKind::DagPathPolytope: {
      const Dag& dag = region.dag();
      const auto out = out_arcs(dag);
      std::vector<std::uint64_t> cnt(static_cast<std::size_t>(dag.nodes), 0);
      cnt[dag.sink] = 1;
      const auto& topo = region.topo_nodes();
      for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        const int v = *it;
        if (v == dag.sink) continue;
        for (int a : out[v]) {
          const std::uint64_t add = cnt[dag.arcs[a].head];
          require(cnt[v] <= std::numeric_limits<std::uint64_t>::max() - add, "path count overflows 64 bits");
          cnt[v] += add;
        }
      }
      return cnt[dag.source];
    }
    case RegionKind::LqBall:
      throw GeometryError("an l_q ball has infinitely many extreme points");
  }
  throw GeometryError("unknown region kind");
}

std::vector<Vec> enumerate_extreme_points(const FeasibleRegion& region, std::size_t limit) {
  switch (region.kind()) {
    case RegionKind::UnitSimplex:
    case RegionKind::VertexPolytope:
      require(region.vertices().size() <= limit, "extreme point enumeration exceeds limit");
      return region.vertices();
    case RegionKind::DagPathPolytope: {
      require(count_extreme_points(region) <= limit, "path enumeration exceeds limit");
      const Dag& dag = region.dag();
      const auto out = out_arcs(dag);
      const auto ok = reaches_sink(region);
      std::vector<Vec> paths;
      Vec cur = Vec::Zero(region.dim());
      // Depth-first in arc-index order.
      auto dfs = [&](auto&& self, int u) -> void {
        if (u == dag.sink) {
          paths.push_back(cur);
          return;
        }
        for (int a : out[u]) {
          if (!ok[dag.arcs[a].head]) continue;
          cur[a] = 1.0;
          self(self, dag.arcs[a].head);
          cur[a] = 0.0;
        }
      };
      dfs(dfs, dag.source);
      return paths;
    }
    case RegionKind::LqBall:
      throw GeometryError("an l_q ball has infinitely many extreme points");
  }
  throw GeometryError("unknown region kind");
}

bool contains(const FeasibleRegion& region, const Vec& w, double tol) {
  require(w.size() == region.dim(), "point dimension mismatch");
  switch (region.kind()) {
    case RegionKind::LqBall:
      return lq_norm(w - region.center(), region.q()) <= region.radius() + tol;
    case RegionKind::UnitSimplex:
      return w.minCoeff() >= -tol && std::abs(w.sum() - 1.0) <= tol;
    default:
      throw GeometryError("membership test is only available for balls and the simplex");
  }
}

// ---------------------------------------------------------------------------

Vec sample_point(const FeasibleRegion& region, Sampler& sampler) {
  const int d = region.dim();
  switch (region.kind()) {
    case RegionKind::LqBall: {
      Vec u = unit_in_norm(sampler.gaussian(d), region.q());
      double t = 1.0;
      if (sampler.uniform() < 0.5) t = std::pow(sampler.uniform(), 1.0 / d);
      return region.center() + region.radius() * t * u;
    }
    case RegionKind::UnitSimplex:
    case RegionKind::VertexPolytope: {
      const auto& vs = region.vertices();
      if (sampler.uniform() < 0.25) return vs[sampler.index(vs.size())];
      Vec w = Vec::Zero(d);
      double total = 0.0;
      for (const auto& v : vs) {
        const double e = -std::log(1.0 - sampler.uniform());
        w += e * v;
        total += e;
      }
      return w / total;
    }
    case RegionKind::DagPathPolytope: {
      const int k = 1 + static_cast<int>(sampler.index(3));
      Vec w = Vec::Zero(d);
      double total = 0.0;
      for (int i = 0; i < k; ++i) {
        const double e = -std::log(1.0 - sampler.uniform());
        w += e * linopt_oracle(region, sampler.gaussian(d));
        total += e;
      }
      return w / total;
    }
  }
  throw GeometryError("unknown region kind");
}

ViolationReport verify_strong_convexity(const FeasibleRegion& region, double mu, std::size_t n_samples,
                                        std::uint64_t seed) {
  require(region.kind() == RegionKind::LqBall, "strong convexity sampler needs an l_q ball");
  require(mu > 0.0, "mu must be positive");
  require(n_samples >= 1, "need at least one sample");
  const double q = region.q();
  const int d = region.dim();
  ViolationReport report;
  report.samples = n_samples;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Sampler rng(substream(seed, s));
    const Vec w1 = sample_point(region, rng);
    Vec w2 = sample_point(region, rng);
    if (rng.uniform() < 0.25) {
      // Short chords probe the local curvature of the boundary.
      const Vec dir = unit_in_norm(w1 - region.center() + 0.05 * region.radius() * rng.gaussian(d), q);
      w2 = region.center() + region.radius() * dir;
    }
    const double lambda = rng.uniform();
    const Vec mid = lambda * w1 + (1.0 - lambda) * w2;
    const double chord = lq_norm(w1 - w2, q);
    const double ball_r = 0.5 * mu * lambda * (1.0 - lambda) * chord * chord;
    Vec u;
    const Vec radial = mid - region.center();
    if (rng.uniform() < 0.5 && lq_norm(radial, q) > 0.0) {
      u = unit_in_norm(radial, q);
    } else {
      u = unit_in_norm(rng.gaussian(d), q);
    }
    const Vec probe = mid + ball_r * u;
    const double excess = lq_norm(probe - region.center(), q) - region.radius();
    if (excess > kGeomTol) ++report.violations;
    if (excess > report.max_violation) {
      report.max_violation = excess;
      Vec lam(1);
      lam[0] = lambda;
      report.witness = {{"w1", w1}, {"w2", w2}, {"lambda", lam}, {"u", u}, {"probe", probe}};
    }
  }
  return report;
}

ViolationReport verify_optimality_condition(const FeasibleRegion& region, const Vec& c, std::size_t n_samples,
                                            std::uint64_t seed) {
  check_cost(region, c);
  require(region.mu() && *region.mu() > 0.0, "optimality condition needs a region with mu > 0");
  require(c.cwiseAbs().maxCoeff() > 0.0, "optimality condition needs c != 0");
  require(n_samples >= 1, "need at least one sample");
  const double mu = *region.mu();
  const double q = region.norm_q();
  const Vec wbar = linopt_oracle(region, c);
  const double cstar = dual_norm(c, q);
  ViolationReport report;
  report.samples = n_samples;
  for (std::size_t s = 0; s < n_samples; ++s) {
    Sampler rng(substream(seed, s));
    const Vec w = sample_point(region, rng);
    const double lhs = c.dot(w - wbar);
    const double dist = lq_norm(w - wbar, q);
    const double rhs = 0.5 * mu * cstar * dist * dist;
    const double excess = rhs - lhs;
    if (excess > kGeomTol) ++report.violations;
    if (excess > report.max_violation) {
      report.max_violation = excess;
      report.witness = {{"w", w}, {"w_star", wbar}};
    }
  }
  return report;
}

double log_covering_count(double rho2_S, int d, double eps) {
  require(rho2_S > 0.0, "rho2(S) must be positive");
  require(d >= 1, "dimension must be >= 1");
  require(eps > 0.0, "eps must be positive");
  return d * std::log(2.0 * rho2_S * std::sqrt(static_cast<double>(d)) / eps);
}

// ---------------------------------------------------------------------------

CostDomain enumerated_costs(const FeasibleRegion& region, std::vector<Vec> members) {
  require(!members.empty(), "enumerated cost domain needs at least one member");
  CostDomain dom;
  dom.kind = CostDomainKind::Enumerated;
  const double qd = conjugate_exponent(region.norm_q());
  for (const auto& c : members) {
    check_cost(region, c);
    dom.rho2 = std::max(dom.rho2, c.norm());
    dom.rho_star = std::max(dom.rho_star, lq_norm(c, qd));
    dom.omega = std::max(dom.omega, linopt_gap(region, c));
  }
  dom.members = std::move(members);
  return dom;
}

CostDomain l2_cost_ball(const FeasibleRegion& region, double radius) {
  require(radius >= 0.0 && std::isfinite(radius), "cost ball radius must be finite and >= 0");
  CostDomain dom;
  dom.kind = CostDomainKind::L2Ball;
  dom.ball_radius = radius;
  dom.rho2 = radius;
  dom.rho_star = radius * norm_ratio(2.0, conjugate_exponent(region.norm_q()), region.dim());
  // sup_{||c||_2 <= r} (max - min of c^T w) = r * diam_2(S)
  dom.omega = radius * region_diameter_l2(region);
  return dom;
}

Vec project_to_cost_domain(const CostDomain& domain, const Vec& v) {
  if (domain.kind == CostDomainKind::L2Ball) {
    const double nrm = v.norm();
    if (nrm <= domain.ball_radius) return v;
    return v * (domain.ball_radius / nrm);
  }
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < domain.members.size(); ++i) {
    const double dd = (domain.members[i] - v).squaredNorm();
    if (dd < best_d) {
      best_d = dd;
      best = i;
    }
  }
  return domain.members[best];
}

}  // namespace spo
