// Randomized invariants. Each case draws its own instances from a fixed seed so
// failures reproduce; the case index is printed on failure via INFO.
#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "spo/bounds.hpp"
#include "spo/complexity.hpp"
#include "spo/losses.hpp"

using namespace spo;
using oracle::v;

namespace {

constexpr int kCases = 300;

FeasibleRegion random_polytope(Sampler& rng, int d) {
  std::vector<Vec> verts;
  const int m = d + 1 + static_cast<int>(rng.index(5));
  for (int i = 0; i < m; ++i) verts.push_back(rng.gaussian(d));
  return FeasibleRegion::vertex_polytope(std::move(verts));
}

FeasibleRegion random_ball(Sampler& rng, int d) {
  return FeasibleRegion::l2_ball(rng.uniform(0.2, 3.0), rng.gaussian(d));
}

/// One random region of each kind, cycling with k.
FeasibleRegion random_region(Sampler& rng, int k) {
  const int d = 1 + static_cast<int>(rng.index(4));
  switch (k % 4) {
    case 0: return random_polytope(rng, d);
    case 1: return FeasibleRegion::unit_simplex(d + 1);
    case 2: return FeasibleRegion::dag_paths(oracle::grid_dag(2 + static_cast<int>(rng.index(2)), 2 + static_cast<int>(rng.index(2))));
    default: return FeasibleRegion::lq_ball(rng.uniform(1.1, 2.0), rng.uniform(0.2, 3.0), rng.gaussian(d));
  }
}

/// Reference objective minimum over the region, independent of the library oracle.
double reference_min(const FeasibleRegion& region, const Vec& c) {
  switch (region.kind()) {
    case RegionKind::VertexPolytope: {
      double best = kInf;
      for (const auto& w : region.vertices()) best = std::min(best, c.dot(w));
      return best;
    }
    case RegionKind::UnitSimplex: return c.minCoeff();
    case RegionKind::DagPathPolytope: {
      double best = kInf;
      for (const auto& path : oracle::all_paths(region.dag()))
        best = std::min(best, c.dot(oracle::incidence(region.dag(), path)));
      return best;
    }
    case RegionKind::LqBall: {
      // Hoelder: min = c^T center - r ||c||_{q'}.
      const double qs = region.q() / (region.q() - 1.0);
      return c.dot(region.center()) - region.radius() * oracle::lq(c, qs);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double ramp(double margin, double gamma) { return std::min(1.0, std::max(0.0, 1.0 - margin / gamma)); }

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("oracle attains the minimum objective and is feasible") {
  Sampler rng(substream(101, 0));
  for (int k = 0; k < kCases; ++k) {
    INFO("case " << k);
    const FeasibleRegion region = random_region(rng, k);
    const Vec c = rng.gaussian(region.dim());
    const Vec w = linopt_oracle(region, c);
    if (region.kind() == RegionKind::VertexPolytope) {
      CHECK(std::any_of(region.vertices().begin(), region.vertices().end(),
                        [&](const Vec& u) { return u == w; }));
    } else if (region.kind() == RegionKind::DagPathPolytope) {
      const auto paths = oracle::all_paths(region.dag());
      CHECK(std::any_of(paths.begin(), paths.end(),
                        [&](const std::vector<int>& p) { return oracle::incidence(region.dag(), p) == w; }));
    } else {
      CHECK(contains(region, w, 1e-9));
    }
    CHECK(c.dot(w) == doctest::Approx(reference_min(region, c)).epsilon(1e-10));
    // No sampled feasible point does better.
    for (int s = 0; s < 10; ++s) CHECK(c.dot(w) <= c.dot(sample_point(region, rng)) + 1e-10);
  }
}

TEST_CASE("SPO loss lies in [0, omega_S(c)]") {
  Sampler rng(substream(102, 0));
  for (int k = 0; k < kCases; ++k) {
    INFO("case " << k);
    const FeasibleRegion region = random_region(rng, k);
    const Vec chat = rng.gaussian(region.dim()), c = rng.gaussian(region.dim());
    const double loss = spo_loss(region, chat, c);
    CHECK(loss >= -1e-12);
    CHECK(loss <= linopt_gap(region, c) + 1e-10);
  }
}

TEST_CASE("Lipschitz-like oracle on l2 balls") {
  Sampler rng(substream(103, 0));
  for (int k = 0; k < kCases; ++k) {
    INFO("case " << k);
    const int d = 1 + static_cast<int>(rng.index(5));
    const FeasibleRegion ball = random_ball(rng, d);
    const Vec c1 = rng.gaussian(d);
    const Vec c2 = (k % 2) ? rng.gaussian(d) : Vec(c1 + 1e-3 * rng.gaussian(d));
    const double lhs = (linopt_oracle(ball, c1) - linopt_oracle(ball, c2)).norm();
    const double rhs = (c1 - c2).norm() / (*ball.mu() * std::min(c1.norm(), c2.norm()));
    CHECK(lhs <= rhs * (1 + 1e-9) + 1e-14);
  }
}

TEST_CASE("loss ordering and margin monotonicity") {
  Sampler rng(substream(104, 0));
  for (int k = 0; k < kCases; ++k) {
    INFO("case " << k);
    const FeasibleRegion region = random_region(rng, k);
    const double q = region.norm_q();
    const Vec c = rng.gaussian(region.dim());
    const Vec chat = rng.uniform(0.0, 2.0) * rng.unit_sphere(region.dim());
    const double g1 = rng.uniform(0.05, 2.0), g2 = g1 * rng.uniform(1.0, 3.0);
    const double spo = spo_loss(region, chat, c);
    const double m1 = margin_spo_loss(region, chat, c, MarginParams::with_gamma(g1, q));
    const double m2 = margin_spo_loss(region, chat, c, MarginParams::with_gamma(g2, q));
    const double hard = hard_margin_spo_loss(region, chat, c, MarginParams::with_gamma(g1, q));
    CHECK(spo <= m1 + 1e-12);
    CHECK(m1 <= hard + 1e-12);
    CHECK(hard <= linopt_gap(region, c) + 1e-12);
    CHECK(m1 <= m2 + 1e-12);
  }
}

TEST_CASE("binary reduction") {
  const FeasibleRegion iv = FeasibleRegion::interval(-0.5, 0.5);
  Sampler rng(substream(105, 0));
  for (int k = 0; k < kCases; ++k) {
    const double chat = rng.uniform(-2.0, 2.0);
    const double c = rng.sign();
    const double gamma = rng.uniform(0.05, 2.0);
    INFO("chat " << chat << " c " << c << " gamma " << gamma);
    CHECK(spo_loss(iv, Vec::Constant(1, chat), Vec::Constant(1, c)) == (chat * c > 0 ? 0.0 : 1.0));
    CHECK(margin_spo_loss(iv, Vec::Constant(1, chat), Vec::Constant(1, c), MarginParams::with_gamma(gamma)) ==
          doctest::Approx(ramp(chat * c, gamma)).epsilon(1e-12));
  }
}

TEST_CASE("multiclass reduction") {
  Sampler rng(substream(106, 0));
  for (int k = 0; k < kCases; ++k) {
    const int d = 2 + static_cast<int>(rng.index(6));
    const FeasibleRegion simplex = FeasibleRegion::unit_simplex(d);
    const Vec chat = rng.gaussian(d);
    const std::size_t y = rng.index(d);
    Vec c = Vec::Zero(d);
    c[static_cast<Eigen::Index>(y)] = -1.0;
    Eigen::Index pred = 0;
    chat.minCoeff(&pred);
    CHECK(spo_loss(simplex, chat, c) == (static_cast<std::size_t>(pred) == y ? 0.0 : 1.0));
  }
}

TEST_CASE("exact Rademacher average is below the Massart bound") {
  Sampler rng(substream(107, 0));
  for (int k = 0; k < 60; ++k) {
    INFO("case " << k);
    const FeasibleRegion region = (k % 2) ? FeasibleRegion::unit_simplex(3) : random_polytope(rng, 2);
    const int d = region.dim(), p = 2;
    const std::size_t n = 2 + rng.index(8);
    LabeledSample s;
    for (std::size_t i = 0; i < n; ++i) {
      s.xs.push_back(rng.gaussian(p));
      s.cs.push_back(rng.gaussian(d));
    }
    FiniteHypothesisSet H;
    const std::size_t m = 1 + rng.index(6);
    for (std::size_t h = 0; h < m; ++h) H.items.push_back(Hypothesis::linear(Mat::Random(d, p)));
    Mat L(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    double omega = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      omega = std::max(omega, linopt_gap(region, s.cs[i]));
      for (std::size_t h = 0; h < m; ++h)
        L(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(i)) =
            spo_loss(region, H.items[h].matrix() * s.xs[i], s.cs[i]);
    }
    const double exact = oracle::exact_rademacher(L);
    const std::size_t restrictions = count_restrictions(region, H, s.xs);
    CHECK(restrictions <= m);
    CHECK(exact <= massart_bound(static_cast<double>(std::max<std::size_t>(restrictions, 1)), n, omega) + 1e-12);
    const McEstimate est = rademacher_spo_mc(region, H, s, 4000, 9);
    CHECK(std::abs(est.estimate - exact) <= 5.0 * est.std_error + 1e-12);
  }
}

TEST_CASE("complexity estimates grow with the hypothesis set") {
  Sampler rng(substream(108, 0));
  for (int k = 0; k < 40; ++k) {
    INFO("case " << k);
    const FeasibleRegion region = FeasibleRegion::unit_simplex(3);
    LabeledSample s;
    for (int i = 0; i < 8; ++i) {
      s.xs.push_back(rng.gaussian(2));
      s.cs.push_back(rng.gaussian(3));
    }
    FiniteHypothesisSet small, big;
    for (int h = 0; h < 3; ++h) small.items.push_back(Hypothesis::linear(Mat::Random(3, 2)));
    big = small;
    for (int h = 0; h < 3; ++h) big.items.push_back(Hypothesis::linear(Mat::Random(3, 2)));
    CHECK(rademacher_spo_mc(region, small, s, 500, k).estimate <= rademacher_spo_mc(region, big, s, 500, k).estimate + 1e-15);
    CHECK(rademacher_multivariate_mc(small, s.xs, 500, k).estimate <=
          rademacher_multivariate_mc(big, s.xs, 500, k).estimate + 1e-15);
    CHECK(count_restrictions(region, small, s.xs) <= count_restrictions(region, big, s.xs));
    CHECK(natarajan_dim_bruteforce(label_table(region, small, s.xs)) <=
          natarajan_dim_bruteforce(label_table(region, big, s.xs)));
  }
}

TEST_CASE("bounds: term sums, positivity and monotonicity") {
  Sampler rng(substream(109, 0));
  for (int k = 0; k < kCases; ++k) {
    INFO("case " << k);
    BoundInputs in;
    in.n = 10 + rng.index(5000);
    in.delta = rng.uniform(0.01, 0.5);
    in.omega = rng.uniform(0.1, 5.0);
    in.rho2_C = rng.uniform(0.1, 5.0);
    in.mu = rng.uniform(0.1, 5.0);
    in.gamma = rng.uniform(0.05, 1.0);
    in.gamma_bar = *in.gamma * rng.uniform(1.0, 4.0);
    in.d_N = static_cast<double>(rng.index(10));
    in.card_S = 2.0 + static_cast<double>(rng.index(50));
    in.d = 1 + static_cast<int>(rng.index(6));
    in.p = 1 + static_cast<int>(rng.index(6));
    in.rho2_S = rng.uniform(0.5, 5.0);
    in.rad_spo = rng.uniform(0.0, 1.0);
    in.rad_multi = rng.uniform(0.0, 1.0);
    in.empirical_risk = rng.uniform(0.0, 1.0);
    in.margin_risk = in.empirical_risk + rng.uniform(0.0, 0.5);

    const auto base = bound_all(in);
    REQUIRE(base.size() == 9);
    BoundInputs more_n = in, more_delta = in, more_risk = in;
    more_n.n = in.n * 4;
    more_delta.delta = std::min(1.0, in.delta * 2);
    more_risk.empirical_risk += 0.1;
    *more_risk.margin_risk += 0.1;
    const auto a = bound_all(more_n), b = bound_all(more_delta), r = bound_all(more_risk);
    for (std::size_t i = 0; i < base.size(); ++i) {
      INFO(base[i].theorem_id << " " << to_string(base[i].variant));
      double sum = 0.0;
      for (const auto& t : base[i].terms) {
        CHECK(t.value >= 0.0);
        sum += t.value;
      }
      CHECK(base[i].value == doctest::Approx(sum).epsilon(1e-14));
      CHECK(b[i].value <= base[i].value + 1e-15);
      CHECK(r[i].value > base[i].value);
      // Rademacher inputs are fixed numbers, so only the deviation shrinks; the
      // other bounds shrink with n as a whole.
      CHECK(a[i].value - a[i].terms.front().value <= base[i].value - base[i].terms.front().value + 1e-15);
    }
  }
}

}  // TEST_SUITE
