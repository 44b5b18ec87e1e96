#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "spo/complexity.hpp"
#include "spo/rng.hpp"

using namespace spo;
using oracle::v;

namespace {

Mat loss_matrix(const FeasibleRegion& region, const FiniteHypothesisSet& H, const LabeledSample& s) {
  Mat L(H.size(), s.n());
  for (std::size_t h = 0; h < H.size(); ++h)
    for (std::size_t i = 0; i < s.n(); ++i) L(h, i) = spo_loss(region, H.items[h].predict(i, s.xs[i]), s.cs[i]);
  return L;
}

Mat random_matrix(Sampler& rng, int d, int p) {
  Mat B(d, p);
  for (Eigen::Index i = 0; i < B.size(); ++i) B.data()[i] = rng.normal();
  return B;
}

}  // namespace

TEST_SUITE("complexity") {

TEST_CASE("single hypothesis has zero SPO Rademacher complexity in expectation") {
  const auto simplex = FeasibleRegion::unit_simplex(3);
  Sampler rng(substream(1, 0));
  LabeledSample s;
  for (int i = 0; i < 20; ++i) {
    s.xs.push_back(rng.gaussian(2));
    s.cs.push_back(-Vec::Unit(3, static_cast<int>(rng.index(3))));
  }
  FiniteHypothesisSet H{{Hypothesis::linear(random_matrix(rng, 3, 2))}};
  const auto est = rademacher_spo_mc(simplex, H, s, 4000, 7);
  CHECK(std::abs(est.estimate) <= 3.0 * est.std_error + 1e-12);
  CHECK(est.draws == 4000);
}

TEST_CASE("n = 1 with losses {0, omega} gives omega / 2") {
  const auto interval = FeasibleRegion::interval(-0.5, 0.5);
  LabeledSample s{{Vec::Constant(1, 1.0)}, {Vec::Constant(1, 1.0)}};
  // Right and wrong sign predictions: losses 0 and 1.
  FiniteHypothesisSet H{{Hypothesis::table({Vec::Constant(1, 0.5)}), Hypothesis::table({Vec::Constant(1, -0.5)})}};
  CHECK(oracle::exact_rademacher(loss_matrix(interval, H, s)) == doctest::Approx(0.5));
  const auto est = rademacher_spo_mc(interval, H, s, 2000, 3);
  CHECK(std::abs(est.estimate - 0.5) <= 3.0 * est.std_error);
}

TEST_CASE("MC estimator agrees with exact sign enumeration") {
  Sampler rng(substream(2, 0));
  const FeasibleRegion regions[] = {FeasibleRegion::unit_simplex(3),
                                    FeasibleRegion::vertex_polytope({v({1, 1}), v({1, -1}), v({-1, 1}), v({-1, -1})})};
  for (int t = 0; t < 10; ++t) {
    const auto& region = regions[t % 2];
    const int d = region.dim();
    LabeledSample s;
    const int n = 3 + t % 5;
    for (int i = 0; i < n; ++i) {
      s.xs.push_back(rng.gaussian(2));
      s.cs.push_back(rng.gaussian(d));
    }
    FiniteHypothesisSet H;
    for (int h = 0; h < 4; ++h) H.items.push_back(Hypothesis::linear(random_matrix(rng, d, 2)));
    const double exact = oracle::exact_rademacher(loss_matrix(region, H, s));
    const auto est = rademacher_spo_mc(region, H, s, 3000, 100 + t);
    CHECK(std::abs(est.estimate - exact) <= 4.0 * est.std_error + 1e-12);
    // Massart over the realized restriction count.
    double omega = 0.0;
    for (const auto& c : s.cs) omega = std::max(omega, linopt_gap(region, c));
    CHECK(exact <= massart_bound(static_cast<double>(count_restrictions(region, H, s.xs)), s.n(), omega) + 1e-12);
  }
}

TEST_CASE("estimators are deterministic per seed and monotone in the class") {
  Sampler rng(substream(4, 0));
  const auto simplex = FeasibleRegion::unit_simplex(3);
  LabeledSample s;
  for (int i = 0; i < 30; ++i) {
    s.xs.push_back(rng.gaussian(2));
    s.cs.push_back(rng.gaussian(3));
  }
  FiniteHypothesisSet H;
  for (int h = 0; h < 5; ++h) H.items.push_back(Hypothesis::linear(random_matrix(rng, 3, 2)));
  const auto a = rademacher_spo_mc(simplex, H, s, 500, 9);
  const auto b = rademacher_spo_mc(simplex, H, s, 500, 9);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);
  const auto m1 = rademacher_multivariate_mc(H, s.xs, 500, 9);
  CHECK(m1.estimate == rademacher_multivariate_mc(H, s.xs, 500, 9).estimate);

  FiniteHypothesisSet bigger = H;
  bigger.items.push_back(Hypothesis::linear(random_matrix(rng, 3, 2)));
  CHECK(rademacher_spo_mc(simplex, bigger, s, 500, 9).estimate >= a.estimate);
  CHECK(rademacher_multivariate_mc(bigger, s.xs, 500, 9).estimate >= m1.estimate);
}

TEST_CASE("multivariate estimator") {
  Sampler rng(substream(5, 0));
  std::vector<Vec> xs;
  for (int i = 0; i < 8; ++i) xs.push_back(rng.unit_sphere(3));
  FiniteHypothesisSet one{{Hypothesis::linear(random_matrix(rng, 2, 3))}};
  const auto e = rademacher_multivariate_mc(one, xs, 4000, 1);
  CHECK(std::abs(e.estimate) <= 3.0 * e.std_error);

  // d = 1 collapses to the scalar average of sigma_i b^T x_i; check exactly.
  FiniteHypothesisSet scalar;
  for (int h = 0; h < 3; ++h) scalar.items.push_back(Hypothesis::linear(random_matrix(rng, 1, 3)));
  Mat L(3, static_cast<Eigen::Index>(xs.size()));
  for (int h = 0; h < 3; ++h)
    for (std::size_t i = 0; i < xs.size(); ++i) L(h, static_cast<Eigen::Index>(i)) = (scalar.items[h].matrix() * xs[i])[0];
  const double exact = oracle::exact_rademacher(L);
  const auto mc = rademacher_multivariate_mc(scalar, xs, 4000, 2);
  CHECK(std::abs(mc.estimate - exact) <= 4.0 * mc.std_error);
}

TEST_CASE("restriction counting") {
  const auto simplex = FeasibleRegion::unit_simplex(3);
  const std::vector<Vec> xs{v({1, 0}), v({0, 1})};
  const Mat B = (Mat(3, 2) << 1, 0, 0, 1, 0.5, 0.5).finished();
  CHECK(count_restrictions(simplex, FiniteHypothesisSet{{Hypothesis::linear(B)}}, xs) == 1);
  // All three map every x to vertex 0.
  FiniteHypothesisSet same;
  for (double a : {1.0, 2.0, 3.0}) same.items.push_back(Hypothesis::table({v({-a, 0, 0}), v({-a, 1, 1})}));
  CHECK(count_restrictions(simplex, same, xs) == 1);
  // Three hypotheses, two points, by hand: (e0, e1), (e0, e1), (e2, e1).
  FiniteHypothesisSet three{{Hypothesis::table({v({-1, 0, 0}), v({0, -1, 0})}),
                             Hypothesis::table({v({-2, 0, 0}), v({0, -3, 0})}),
                             Hypothesis::table({v({0, 0, -1}), v({0, -1, 0})})}};
  std::set<std::pair<std::size_t, std::size_t>> tuples;
  for (const auto& h : three.items)
    tuples.insert({linopt_vertex_index(simplex, h.predict(0, xs[0])), linopt_vertex_index(simplex, h.predict(1, xs[1]))});
  CHECK(count_restrictions(simplex, three, xs) == tuples.size());
  CHECK(tuples.size() == 2);
  CHECK_THROWS_AS(count_restrictions(FeasibleRegion::l2_ball(1, Vec::Zero(3)), three, xs), ComplexityError);
}

TEST_CASE("Massart bound") {
  CHECK(massart_bound(1.0, 10, 1.0) == 0.0);
  CHECK(massart_bound(std::exp(2.0), 2, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(massart_bound(7.0, 13, 2.0) == doctest::Approx(2.0 * massart_bound(7.0, 13, 1.0)));
  CHECK_THROWS_AS(massart_bound(0.5, 10, 1.0), ComplexityError);
}

TEST_CASE("Natarajan dimension examples") {
  CHECK(natarajan_dim_bruteforce(LabelTable{3, 1, {1, 2, 3}}) == 0);
  // Every function from 2 points to 2 labels.
  CHECK(natarajan_dim_bruteforce(LabelTable{2, 4, {1, 1, 2, 2, 1, 2, 1, 2}}) == 2);
  // Constant disagreement but no mixing: 1.
  CHECK(natarajan_dim_bruteforce(LabelTable{2, 2, {1, 2, 1, 2}}) == 1);
  CHECK_THROWS_AS(natarajan_dim_bruteforce(LabelTable{13, 1, std::vector<int>(13, 1)}), ComplexityError);
}

TEST_CASE("Natarajan search agrees with the definition on random tables") {
  Sampler rng(substream(6, 0));
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + static_cast<int>(rng.index(4));
    const int H = 2 + static_cast<int>(rng.index(10));
    const int L = 2 + static_cast<int>(rng.index(2));
    LabelTable table{m, H, {}};
    std::vector<std::vector<int>> rows(H, std::vector<int>(m));
    table.labels.resize(static_cast<std::size_t>(m * H));
    for (int i = 0; i < m; ++i)
      for (int h = 0; h < H; ++h) {
        const int lab = 1 + static_cast<int>(rng.index(L));
        table.labels[static_cast<std::size_t>(i * H + h)] = lab;
        rows[h][i] = lab;
      }
    CHECK(natarajan_dim_bruteforce(table) == oracle::natarajan_dim(rows, m));
  }
}

TEST_CASE("Natarajan dimension of linear oracle classes stays below dp") {
  Sampler rng(substream(7, 0));
  const FeasibleRegion simplex = FeasibleRegion::unit_simplex(2);
  for (int p : {1, 2}) {
    FiniteHypothesisSet H;
    for (int k = 0; k < 60; ++k) H.items.push_back(Hypothesis::linear(random_matrix(rng, 2, p)));
    std::vector<Vec> xs;
    for (int i = 0; i < 6; ++i) xs.push_back(rng.gaussian(p));
    CHECK(natarajan_dim_bruteforce(label_table(simplex, H, xs)) <= 2 * p);
  }
}

TEST_CASE("closed-form linear class bounds") {
  CHECK(linear_class_rad_bound({ConstraintKind::Frobenius, 1.0, 4, 3}, 1.0, 100) ==
        doctest::Approx(std::sqrt(8.0) / 10.0));
  CHECK(linear_class_rad_bound({ConstraintKind::L1Vec, 1.0, 10, 10}, 1.0, 100) ==
        doctest::Approx(std::sqrt(6.0 * std::log(100.0) / 100.0)));
  CHECK(linear_class_rad_bound({ConstraintKind::L1Vec, 1.0, 10, 10}, 1.0, 100) == doctest::Approx(0.5257).epsilon(1e-4));
  CHECK(linear_class_rad_bound({ConstraintKind::GroupLasso, 2.0, 3, 5}, 0.5, 50) ==
        doctest::Approx(0.5 * 2.0 * std::sqrt(6.0 * 3 * std::log(5.0) / 50.0)));
  const LinearPredictorClass fro{ConstraintKind::Frobenius, 1.5, 2, 2};
  CHECK(linear_class_rad_bound(fro, 1.0, 400) == doctest::Approx(linear_class_rad_bound(fro, 1.0, 100) / 2.0));
  CHECK_THROWS_AS(linear_class_rad_bound({ConstraintKind::L1Vec, 1.0, 1, 1}, 1.0, 10), ComplexityError);
  CHECK_THROWS_AS(linear_class_rad_bound({ConstraintKind::GroupLasso, 1.0, 3, 1}, 1.0, 10), ComplexityError);
}

TEST_CASE("closed form dominates the estimate for Frobenius-bounded classes") {
  Sampler rng(substream(8, 0));
  for (int d : {2, 5})
    for (int p : {2, 5}) {
      std::vector<Vec> xs;
      for (int i = 0; i < 50; ++i) xs.push_back(rng.unit_sphere(p));
      FiniteHypothesisSet H;
      for (int h = 0; h < 20; ++h) {
        Mat B = random_matrix(rng, d, p);
        H.items.push_back(Hypothesis::linear(B / B.norm()));
      }
      const auto e = rademacher_multivariate_mc(H, xs, 1000, 3);
      CHECK(e.estimate <= linear_class_rad_bound({ConstraintKind::Frobenius, 1.0, d, p}, 1.0, 50) + 3 * e.std_error);
    }
}

TEST_CASE("hypothesis validation") {
  CHECK_THROWS_AS(FiniteHypothesisSet{}.validate(3, 2), ComplexityError);
  FiniteHypothesisSet mixed{{Hypothesis::linear(Mat::Zero(2, 3)), Hypothesis::linear(Mat::Zero(3, 3))}};
  CHECK_THROWS_AS(mixed.validate(3, 3), ComplexityError);
  FiniteHypothesisSet short_table{{Hypothesis::table({v({1, 2})})}};
  CHECK_THROWS_AS(short_table.validate(3, 3), ComplexityError);
}

}  // TEST_SUITE
