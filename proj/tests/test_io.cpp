#include <cmath>
#include <cstdlib>
#include <limits>

#include "doctest.h"
#include "oracles.hpp"
#include "spo/io.hpp"

using namespace spo;
using oracle::v;

namespace {

void check_same_region(const FeasibleRegion& a, const FeasibleRegion& b) {
  CHECK(a.kind() == b.kind());
  CHECK(a.dim() == b.dim());
  CHECK(a.mu() == b.mu());
  CHECK(region_to_json(a).dump() == region_to_json(b).dump());
  // Same oracle on a few directions.
  Sampler rng(substream(3, 0));
  for (int k = 0; k < 20; ++k) {
    const Vec c = rng.gaussian(a.dim());
    CHECK((linopt_oracle(a, c) - linopt_oracle(b, c)).norm() <= 1e-14);
  }
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("region round trips") {
  const std::vector<FeasibleRegion> regions{
      FeasibleRegion::vertex_polytope({v({1, 1}), v({1, -1}), v({-1, 1}), v({-1, -1})}),
      FeasibleRegion::unit_simplex(4),
      FeasibleRegion::dag_paths(oracle::grid_dag(2, 3)),
      FeasibleRegion::lq_ball(1.5, 2.0, v({0.5, -1})),
      FeasibleRegion::l2_ball(3.0, v({0, 0, 1})),
      FeasibleRegion::interval(-0.5, 0.5),
  };
  for (const auto& r : regions) check_same_region(r, region_from_json(region_to_json(r)));
}

TEST_CASE("region descriptor forms") {
  const Json nested = Json::parse(R"({"kind": "dag_paths", "dag": {"nodes": 3, "source": 0, "sink": 2,
      "arcs": [[0, 1], [1, 2], [0, 2]]}})");
  const FeasibleRegion r = region_from_json(nested);
  CHECK(r.dim() == 3);
  CHECK(count_extreme_points(r) == 2);

  const FeasibleRegion iv = region_from_json(Json::parse(R"({"kind": "interval", "lo": -0.5, "hi": 0.5})"));
  CHECK(iv.kind() == RegionKind::LqBall);
  CHECK(iv.radius() == 0.5);
  CHECK(*iv.mu() == 2.0);

  const FeasibleRegion ball = region_from_json(Json::parse(R"({"kind": "lq_ball", "dim": 3, "radius": 1})"));
  CHECK(ball.center() == Vec::Zero(3));
  CHECK(ball.q() == 2.0);

  CHECK_THROWS_AS(region_from_json(Json::parse(R"({"kind": "torus"})")), FormatError);
  CHECK_THROWS_AS(region_from_json(Json::parse(R"({"dim": 2})")), FormatError);
  CHECK_THROWS(region_from_json(Json::parse(R"({"kind": "unit_simplex", "dim": 0})")));
  CHECK_THROWS_AS(region_from_json(Json::parse(R"({"kind": "vertex_polytope", "dim": 3, "vertices": [[0, 1], [1, 0]]})")),
                  FormatError);
}

TEST_CASE("sample CSV") {
  const LabeledSample s{{v({1, 2}), v({-0.1, 3.5})}, {v({0.25, 1, -2}), v({1e-9, 0, 7})}};
  const std::string csv = sample_to_csv(s);
  CHECK(csv.rfind("x1,x2,c1,c2,c3\n", 0) == 0);
  const LabeledSample back = sample_from_csv(csv);
  REQUIRE(back.n() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.xs[i] == s.xs[i]);
    CHECK(back.cs[i] == s.cs[i]);
  }
  const LabeledSample raw = sample_from_csv("1,2,3\n4,5,6\n", 1);
  CHECK(raw.xs[1] == v({4}));
  CHECK(raw.cs[1] == v({5, 6}));
  CHECK_THROWS_AS(sample_from_csv("1,2,3\n"), FormatError);
  CHECK_THROWS_AS(sample_from_csv("x1,c1\n1,2,3\n"), FormatError);
  CHECK_THROWS_AS(sample_from_csv("x1,c1\n1,abc\n"), FormatError);

  const LabeledSample js = sample_from_json(sample_to_json(s));
  CHECK(js.cs[1] == s.cs[1]);
}

TEST_CASE("hypotheses and label tables") {
  FiniteHypothesisSet set;
  set.items.push_back(Hypothesis::linear(Mat::Identity(2, 3)));
  set.items.push_back(Hypothesis::table({v({1, 0}), v({0, 1})}));
  const FiniteHypothesisSet back = hypotheses_from_json(hypotheses_to_json(set));
  REQUIRE(back.size() == 2);
  CHECK(back.items[0].is_linear());
  CHECK(back.items[0].matrix() == set.items[0].matrix());
  CHECK(back.items[1].outputs()[1] == v({0, 1}));

  LabelTable t{2, 3, {1, 2, 1, 2, 2, 1}};
  const LabelTable tb = label_table_from_json(label_table_to_json(t));
  CHECK(tb.labels == t.labels);
  CHECK(tb.points == 2);
  CHECK(tb.hypotheses == 3);
}

TEST_CASE("bound inputs") {
  BoundInputs in;
  in.n = 100;
  in.omega = 1.0;
  in.card_S = 3;
  in.d_N = 2;
  const BoundInputs back = bound_inputs_from_json(bound_inputs_to_json(in));
  CHECK(back.n == 100);
  CHECK(back.card_S == 3.0);
  CHECK(!back.mu.has_value());
  CHECK_THROWS_AS(bound_inputs_from_json(Json::parse(R"({"n": 10, "omgea": 1})")), FormatError);
  CHECK_THROWS_AS(bound_inputs_from_json(Json::parse(R"({"n": "ten"})")), FormatError);

  const auto reports = bound_all(in);
  const std::string csv = bound_reports_to_csv(reports);
  CHECK(csv.rfind("theorem_id,variant,value,empirical_risk,complexity,deviation,uniformity,remainder\nnatarajan,", 0) ==
        0);
}

TEST_CASE("number formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5, 1e22, 0.0, 5e-324, std::numeric_limits<double>::max()}) {
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
}

}  // TEST_SUITE
