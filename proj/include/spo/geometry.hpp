#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spo/rng.hpp"

namespace spo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Absolute tolerance used by every geometric membership / inequality check.
inline constexpr double kGeomTol = 1e-9;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Norms

/// Hölder conjugate exponent: 1/q + 1/q' = 1 (1 <-> inf).
double conjugate_exponent(double q);

/// ||v||_q for q in [1, inf].
double lq_norm(const Vec& v, double q);

/// Dual of the l_q norm, i.e. ||c||_{q'}.
double dual_norm(const Vec& c, double q);

// ---------------------------------------------------------------------------
// Feasible regions

enum class RegionKind { VertexPolytope, UnitSimplex, DagPathPolytope, LqBall };

std::string to_string(RegionKind kind);

struct Arc {
  int tail = 0;
  int head = 0;
};

/// Directed acyclic graph whose source->sink paths are the extreme points of
/// the path polytope. The decision vector is indexed by arc position.
struct Dag {
  int nodes = 0;
  std::vector<Arc> arcs;
  int source = 0;
  int sink = 0;
};

class FeasibleRegion {
 public:
  /// Convex hull of a finite vertex list. Duplicates are rejected.
  static FeasibleRegion vertex_polytope(std::vector<Vec> vertices);
  static FeasibleRegion unit_simplex(int dim);
  static FeasibleRegion dag_paths(Dag dag);
  /// {w : ||w - center||_q <= radius}, q in (1, 2]. A declared mu is certified
  /// by sampling at construction. For q = 2 with no declaration mu = 1/radius.
  static FeasibleRegion lq_ball(double q, double radius, Vec center,
                                std::optional<double> mu = std::nullopt);
  static FeasibleRegion l2_ball(double radius, Vec center) {
    return lq_ball(2.0, radius, std::move(center));
  }
  /// Interval [lo, hi] as a one-dimensional l2 ball.
  static FeasibleRegion interval(double lo, double hi);

  RegionKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::optional<double> mu() const { return mu_; }
  bool has_finite_extreme_points() const { return kind_ != RegionKind::LqBall; }

  /// Exponent of the norm in which mu and the oracle's Lipschitz-like
  /// property are stated: q for balls, 2 otherwise.
  double norm_q() const { return kind_ == RegionKind::LqBall ? q_ : 2.0; }

  const std::vector<Vec>& vertices() const;
  const Dag& dag() const;
  /// Node ids in topological order.
  const std::vector<int>& topo_nodes() const { return topo_nodes_; }
  double q() const { return q_; }
  double radius() const { return radius_; }
  const Vec& center() const { return center_; }

 private:
  FeasibleRegion() = default;

  RegionKind kind_ = RegionKind::UnitSimplex;
  int dim_ = 0;
  std::optional<double> mu_;
  std::vector<Vec> vertices_;
  Dag dag_;
  std::vector<int> topo_nodes_;
  double q_ = 2.0;
  double radius_ = 0.0;
  Vec center_;
};

// ---------------------------------------------------------------------------
// Linear optimization

/// w*(c): a minimizer of c^T w over the region.
///
/// Ties: vertex sets pick the lowest vertex index, DAGs the lexicographically
/// smallest arc-index sequence along the source->sink backtrack, balls return
/// the center for c = 0.
Vec linopt_oracle(const FeasibleRegion& region, const Vec& c);

/// Index of the chosen extreme point for VertexPolytope / UnitSimplex.
std::size_t linopt_vertex_index(const FeasibleRegion& region, const Vec& c);

/// omega_S(c) = max_{w in S} c^T w - min_{w in S} c^T w.
double linopt_gap(const FeasibleRegion& region, const Vec& c);

/// rho_q(S) = sup_{w in S} ||w||_q.
double region_radius(const FeasibleRegion& region, double q);

/// Euclidean diameter sup ||w1 - w2||_2 over S.
double region_diameter_l2(const FeasibleRegion& region);

/// |extreme points|; for DAGs the number of source->sink paths.
std::uint64_t count_extreme_points(const FeasibleRegion& region);

/// Every extreme point (path incidence vectors for DAGs), up to `limit`.
std::vector<Vec> enumerate_extreme_points(const FeasibleRegion& region,
                                          std::size_t limit = 100000);

bool contains(const FeasibleRegion& region, const Vec& w, double tol = kGeomTol);

// ---------------------------------------------------------------------------
// Numerical certificates

struct ViolationReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  /// Largest observed excess over the allowed value (<= 0 means slack).
  double max_violation = -kInf;
  /// Named components of the tuple attaining max_violation.
  std::vector<std::pair<std::string, Vec>> witness;

  bool ok() const { return violations == 0; }
};

/// Samples (w1, w2, lambda, u) and checks that
/// lambda w1 + (1-lambda) w2 + (mu/2) lambda (1-lambda) ||w1 - w2||^2 u lies in S.
ViolationReport verify_strong_convexity(const FeasibleRegion& region, double mu,
                                        std::size_t n_samples, std::uint64_t seed);

/// Checks c^T (w - w*) >= (mu/2) ||c||_* ||w - w*||^2 over sampled w in S.
ViolationReport verify_optimality_condition(const FeasibleRegion& region, const Vec& c,
                                            std::size_t n_samples, std::uint64_t seed);

/// Feasible point drawn from S (boundary-heavy for balls).
Vec sample_point(const FeasibleRegion& region, Sampler& sampler);

/// log of the covering-ball count (2 rho2(S) sqrt(d) / eps)^d.
double log_covering_count(double rho2_S, int d, double eps);

// ---------------------------------------------------------------------------
// Cost domains

enum class CostDomainKind { Enumerated, L2Ball };

struct CostDomain {
  CostDomainKind kind = CostDomainKind::L2Ball;
  std::vector<Vec> members;  // Enumerated only
  double ball_radius = 0.0;  // L2Ball only
  double rho2 = 0.0;
  double rho_star = 0.0;     // sup ||c||_* w.r.t. the region's norm
  double omega = 0.0;        // omega_S(C)
};

CostDomain enumerated_costs(const FeasibleRegion& region, std::vector<Vec> members);
CostDomain l2_cost_ball(const FeasibleRegion& region, double radius);

/// Nearest point of C to v (Euclidean); scaling onto the ball for L2Ball.
Vec project_to_cost_domain(const CostDomain& domain, const Vec& v);

}  // namespace spo
