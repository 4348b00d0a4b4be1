#include "doctest.h"
#include "support.hpp"
#include "windcournot/demand.hpp"
#include "windcournot/errors.hpp"

using namespace windcournot;

TEST_CASE("price evaluates both families") {
  const auto lin = DemandSpec::linear(3.0);
  CHECK(price(lin, 1.0) == 2.0);
  CHECK(price(lin, 0.0) == 3.0);
  const auto quad = DemandSpec::quadratic(3.0, 1.0, 0.1);
  CHECK(price(quad, 2.0) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("derivatives are analytic") {
  const auto lin = DemandSpec::linear(3.0);
  for (double q : {0.0, 0.7, 5.0}) {
    CHECK(price_deriv(lin, q) == -1.0);
    CHECK(price_second_deriv(lin, q) == 0.0);
  }
  const auto quad = DemandSpec::quadratic(3.0, 1.0, 0.1);
  CHECK(price_deriv(quad, 2.0) == doctest::Approx(-1.4).epsilon(1e-15));
  CHECK(price_second_deriv(quad, 0.3) == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("utility integrates price") {
  CHECK(utility(DemandSpec::linear(1.0), 1.0) == 0.5);
  CHECK(utility(DemandSpec::linear(3.0), 2.16) == doctest::Approx(4.1472).epsilon(1e-14));
  CHECK(utility(DemandSpec::quadratic(3.0, 1.0, 0.1), 0.0) == 0.0);
  CHECK(utility(DemandSpec::linear(3.0), 0.0) == 0.0);
}

TEST_CASE("concavity validation") {
  CHECK(validate_concavity(DemandSpec::linear(3.0), 10.0).valid);
  const auto flat = validate_concavity(DemandSpec::quadratic(3.0, 0.0, 0.1), 1.0);
  CHECK_FALSE(flat.valid);
  REQUIRE(flat.violation_at.has_value());
  CHECK(*flat.violation_at == 0.0);
  CHECK(validate_concavity(DemandSpec::quadratic(3.0, 1.0, 0.1), 5.0).valid);
  CHECK_THROWS_AS(validate_concavity(DemandSpec::linear(3.0), 0.0), InvalidParameter);
  CHECK_THROWS_AS(DemandSpec::quadratic(3.0, -1.0, 0.0), InvalidParameter);
  CHECK_THROWS_AS(DemandSpec::quadratic(3.0, 1.0, -0.1), InvalidParameter);
}

TEST_CASE("unit-linear detection") {
  CHECK(DemandSpec::linear(2.0).is_unit_linear());
  CHECK(DemandSpec::quadratic(2.0, 1.0, 0.0).is_unit_linear());
  CHECK_FALSE(DemandSpec::quadratic(2.0, 1.0, 0.1).is_unit_linear());
  CHECK_FALSE(DemandSpec::quadratic(2.0, 2.0, 0.0).is_unit_linear());
}

TEST_CASE("property: price strictly decreasing, utility sandwiched, slope matches") {
  testing_support::Gen gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const DemandSpec spec = gen.demand();
    const double q_max = gen.uniform(0.5, 10.0);
    REQUIRE(validate_concavity(spec, q_max).valid);
    const double q1 = gen.uniform(0.0, q_max);
    const double q2 = gen.uniform(0.0, q_max);
    if (q1 != q2) {
      CHECK((q1 < q2) == (price(spec, q1) > price(spec, q2)));
    }
    const double q = gen.uniform(0.0, q_max - 0.1);
    const double h = gen.uniform(1e-3, 0.1);
    const double gain = utility(spec, q + h) - utility(spec, q);
    CHECK(gain >= h * price(spec, q + h) - 1e-12);
    CHECK(gain <= h * price(spec, q) + 1e-12);
    const double fd = (price(spec, q + 1e-5) - price(spec, q - 1e-5)) / 2e-5;
    CHECK(std::abs(fd - price_deriv(spec, q)) <= 1e-8 * std::abs(price_deriv(spec, q)));
  }
}
