#include <cmath>

#include "doctest.h"
#include "spo/bounds.hpp"

using namespace spo;

namespace {

double sum_terms(const BoundReport& r) {
  double s = 0.0;
  for (const auto& t : r.terms) s += t.value;
  return s;
}

BoundInputs margin_inputs() {
  BoundInputs in;
  in.n = 400;
  in.delta = 0.05;
  in.omega = 1.0;
  in.rho2_C = 1.0;
  in.mu = 2.0;
  in.gamma = 0.5;
  in.gamma_bar = 0.5;
  in.rad_multi = 0.05;
  in.margin_risk = 0.1;
  return in;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("Rademacher bound") {
  BoundInputs in;
  in.n = 10;
  in.rad_spo = 0.0;
  CHECK(bound_rademacher(in, BoundVariant::Expected).value == 0.0);

  in.omega = 1.0;
  in.rad_spo = 0.3;
  in.delta = 1.0;
  CHECK(bound_rademacher(in, BoundVariant::Expected).term("deviation") == 0.0);

  BoundInputs ex;
  ex.n = 100;
  ex.rad_spo = 0.1;
  ex.omega = 1.0;
  ex.delta = 0.05;
  ex.empirical_risk = 0.2;
  const auto r = bound_rademacher(ex, BoundVariant::Expected);
  CHECK(r.value == doctest::Approx(0.2 + 0.2 + std::sqrt(std::log(20.0) / 200.0)).epsilon(1e-14));
  CHECK(r.value == doctest::Approx(0.5224).epsilon(1e-3));
  const auto e = bound_rademacher(ex, BoundVariant::Empirical);
  CHECK(e.value == doctest::Approx(0.2 + 0.2 + 3.0 * std::sqrt(std::log(40.0) / 200.0)).epsilon(1e-14));
  CHECK(r.theorem_id == "rademacher");

  ex.rad_spo.reset();
  CHECK_THROWS_AS(bound_rademacher(ex, BoundVariant::Expected), BoundError);
  ex.rad_spo_estimate = 0.1;
  CHECK(bound_rademacher(ex, BoundVariant::Expected).value == doctest::Approx(r.value));
  // A closed-form value wins over the estimate.
  ex.rad_spo = 0.2;
  CHECK(bound_rademacher(ex, BoundVariant::Expected).term("complexity") == doctest::Approx(0.4));
}

TEST_CASE("Natarajan bound") {
  BoundInputs in;
  in.n = 100;
  in.card_S = 3;
  in.d_N = 2;
  in.omega = 1.0;
  in.delta = 0.05;
  const auto r = bound_natarajan(in);
  const double direct = 2.0 * std::sqrt(4.0 * std::log(900.0) / 100.0) + std::sqrt(std::log(20.0) / 200.0);
  CHECK(r.value == doctest::Approx(direct).epsilon(1e-14));
  CHECK(std::abs(r.value - 1.1656) <= 5e-4);
  CHECK(r.term("complexity") == doctest::Approx(1.0433).epsilon(1e-4));
  CHECK(r.term("deviation") == doctest::Approx(0.1224).epsilon(1e-3));

  BoundInputs zero = in;
  zero.d_N = 0;
  zero.empirical_risk = 0.3;
  CHECK(bound_natarajan(zero).value == doctest::Approx(0.3 + std::sqrt(std::log(20.0) / 200.0)));
  BoundInputs flat = in;
  flat.omega = 0.0;
  flat.empirical_risk = 0.25;
  CHECK(bound_natarajan(flat).value == 0.25);

  BoundInputs bad = in;
  bad.card_S = 0.5;
  CHECK_THROWS_AS(bound_natarajan(bad), BoundError);
  bad.card_S = 1;
  bad.n = 1;
  CHECK_THROWS_AS(bound_natarajan(bad), BoundError);
  bad = in;
  bad.d_N.reset();
  CHECK_THROWS_AS(bound_natarajan(bad), BoundError);
}

TEST_CASE("linear polyhedral bound") {
  BoundInputs in;
  in.n = 100;
  in.card_S = 4;
  in.d = 2;
  in.p = 3;
  in.omega = 1.0;
  in.delta = 0.1;
  BoundInputs nat = in;
  nat.d_N = 6;
  CHECK(bound_linear_polyhedral(in).value == bound_natarajan(nat).value);
  CHECK(bound_linear_polyhedral(in).theorem_id == "linear_polyhedral");
  BoundInputs doubled = in;
  doubled.p = 6;
  CHECK(bound_linear_polyhedral(doubled).term("complexity") ==
        doctest::Approx(std::sqrt(2.0) * bound_linear_polyhedral(in).term("complexity")));
  in.p = 2;
  CHECK(bound_linear_polyhedral(in).value ==
        doctest::Approx(2.0 * std::sqrt(8.0 * std::log(1600.0) / 100.0) + std::sqrt(std::log(10.0) / 200.0)));
}

TEST_CASE("covering bound") {
  BoundInputs in;
  in.n = 1000;
  in.d = 2;
  in.p = 3;
  in.rho2_S = 1.0;
  in.rho2_C = 1.0;
  in.omega = 2.0;
  in.delta = 0.05;
  const auto r = bound_covering(in);
  const double root = std::sqrt(6.0 * std::log(4000.0) / 1000.0);
  CHECK(r.term("complexity") == doctest::Approx(4 * 2 * 2.0 * root).epsilon(1e-14));
  CHECK(r.term("deviation") == doctest::Approx(3 * 2.0 * std::sqrt(std::log(40.0) / 2000.0)).epsilon(1e-14));
  CHECK(r.term("remainder") == doctest::Approx(2 * (2.0 / 1000.0) * (1 + 4 * root)).epsilon(1e-14));
  CHECK(r.term("remainder") < r.term("complexity"));
  CHECK(r.variant == BoundVariant::Empirical);

  BoundInputs nc = in;
  nc.rho2_C = 0.0;
  CHECK(bound_covering(nc).term("remainder") == 0.0);

  BoundInputs big = in;
  big.n = 100000;
  const double ratio = bound_covering(big).term("complexity") / r.term("complexity");
  CHECK(ratio == doctest::Approx(0.1 * std::sqrt(std::log(400000.0) / std::log(4000.0))));

  BoundInputs tiny = in;
  tiny.n = 1;
  tiny.rho2_S = 0.2;
  tiny.d = 1;
  CHECK_THROWS_AS(bound_covering(tiny), BoundError);
}

TEST_CASE("margin bound") {
  BoundInputs in = margin_inputs();
  const auto r = bound_margin(in, BoundVariant::Expected);
  CHECK(r.value == doctest::Approx(0.1 + 10 * std::sqrt(2.0) * 0.05 / (0.5 * 2.0) + std::sqrt(std::log(20.0) / 800.0)));
  CHECK(margin_rad_bound(1.0, 0.05, 0.5, 2.0) == doctest::Approx(5 * std::sqrt(2.0) * 0.05));
  const auto e = bound_margin(in, BoundVariant::Empirical);
  CHECK(e.term("deviation") == doctest::Approx(3.0 * std::sqrt(std::log(40.0) / 800.0)));

  BoundInputs zero = in;
  zero.rad_multi = 0.0;
  CHECK(bound_margin(zero, BoundVariant::Expected).value == doctest::Approx(0.1 + std::sqrt(std::log(20.0) / 800.0)));
  BoundInputs wide = in;
  wide.gamma = 1.0;
  CHECK(bound_margin(wide, BoundVariant::Expected).term("complexity") == doctest::Approx(r.term("complexity") / 2.0));

  BoundInputs bad = in;
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bound_margin(bad, BoundVariant::Expected), BoundError);
  bad = in;
  bad.mu = -1.0;
  CHECK_THROWS_AS(bound_margin(bad, BoundVariant::Expected), BoundError);
  bad = in;
  bad.margin_risk.reset();
  CHECK_THROWS_AS(bound_margin(bad, BoundVariant::Expected), BoundError);
}

TEST_CASE("uniform margin bound") {
  BoundInputs in = margin_inputs();
  for (auto v : {BoundVariant::Expected, BoundVariant::Empirical}) {
    CHECK(bound_margin_uniform(in, v).term("uniformity") == 0.0);
    CHECK(bound_margin_uniform(in, v).value >= bound_margin(in, v).value);
  }
  in.gamma_bar = 1.0;
  CHECK(bound_margin_uniform(in, BoundVariant::Expected).term("uniformity") ==
        doctest::Approx(std::sqrt(std::log(2.0) / 400.0)));
  in.gamma_bar = 2.0;  // log2(8) = 3
  CHECK(bound_margin_uniform(in, BoundVariant::Expected).term("uniformity") ==
        doctest::Approx(std::sqrt(std::log(3.0) / 400.0)));
  const auto r = bound_margin_uniform(in, BoundVariant::Expected);
  CHECK(r.term("complexity") == doctest::Approx(20 * std::sqrt(2.0) * 0.05 / (0.5 * 2.0)));
  CHECK(r.term("deviation") == doctest::Approx(std::sqrt(std::log(40.0) / 800.0)));
  CHECK(bound_margin_uniform(in, BoundVariant::Empirical).term("deviation") ==
        doctest::Approx(3.0 * std::sqrt(std::log(80.0) / 800.0)));

  BoundInputs bad = margin_inputs();
  bad.gamma = 0.6;
  CHECK_THROWS_AS(bound_margin_uniform(bad, BoundVariant::Expected), BoundError);
  bad.gamma = 0.0;
  CHECK_THROWS_AS(bound_margin_uniform(bad, BoundVariant::Expected), BoundError);
}

TEST_CASE("bound_all and report invariants") {
  BoundInputs in = margin_inputs();
  in.gamma = 0.25;
  in.d = 2;
  in.p = 2;
  in.card_S = 4;
  in.d_N = 3;
  in.rho2_S = 1.0;
  in.rad_spo = 0.1;
  in.empirical_risk = 0.05;
  const auto all = bound_all(in);
  CHECK(all.size() == 9);
  for (const auto& r : all) {
    CHECK(r.value == doctest::Approx(sum_terms(r)).epsilon(1e-15));
    for (const auto& t : r.terms) CHECK(t.value >= 0.0);
    CHECK(r.value >= r.terms.front().value);
  }
  BoundInputs only_nat;
  only_nat.n = 50;
  only_nat.d_N = 1;
  only_nat.card_S = 2;
  CHECK(bound_all(only_nat).size() == 1);
  CHECK_THROWS_AS(evaluate_bound("nope", in, BoundVariant::Expected), BoundError);
  CHECK(bound_variant_from_string("empirical") == BoundVariant::Empirical);
  CHECK_THROWS_AS(bound_variant_from_string("other"), BoundError);
}

TEST_CASE("input validation") {
  BoundInputs in;
  in.rad_spo = 0.1;
  in.n = 0;
  CHECK_THROWS_AS(bound_rademacher(in, BoundVariant::Expected), BoundError);
  in.n = 10;
  in.delta = 0.0;
  CHECK_THROWS_AS(bound_rademacher(in, BoundVariant::Expected), BoundError);
  in.delta = 1.5;
  CHECK_THROWS_AS(bound_rademacher(in, BoundVariant::Expected), BoundError);
  in.delta = 0.1;
  in.omega = -1.0;
  CHECK_THROWS_AS(bound_rademacher(in, BoundVariant::Expected), BoundError);
}

}  // TEST_SUITE
