#include "doctest.h"
#include "support.hpp"
#include "windcournot/analysis.hpp"
#include "windcournot/errors.hpp"
#include "windcournot/mixed_market.hpp"

using namespace windcournot;
using doctest::Approx;

namespace {

MixedMarketParams linear_mixed(double beta, double d, double low, double cost,
                               double high = 2.0) {
  return {DemandSpec::linear(3.0), beta, d, low, high, cost};
}

}  // namespace

TEST_CASE("regime report") {
  const auto bad = check_assumption4(linear_mixed(0.5, 0.5, 0.1, 1.0, 1.8));
  CHECK_FALSE(bad.cost_ok);
  CHECK(bad.cost_margin == Approx(-1.6));
  CHECK(bad.low_ok);
  CHECK(bad.low_margin == Approx(2.6));
  CHECK_FALSE(bad.ok());

  const auto p = linear_mixed(0.5, 0.5, 0.1, 0.0, 1.2);
  const auto report = check_assumption4(p);
  const double mean_wind = 2.0 * (0.5 * 1.2 + 0.5 * 0.1);
  CHECK(report.x_floor == Approx((3.0 - mean_wind) / 2.0).epsilon(1e-12));
  CHECK(report.ok());

  // A cost above every attainable price clamps x̲ at zero.
  CHECK(check_assumption4(linear_mixed(0.5, 0.5, 0.1, 5.0)).x_floor == 0.0);
}

TEST_CASE("closed forms") {
  const auto d0 = mixed_closed_form_linear(3.0, 1.0, 0.5, 0.0, 0.1);
  CHECK(d0.phi == Approx(0.82).epsilon(1e-14));
  CHECK(d0.x == Approx(0.54).epsilon(1e-14));
  const auto d1 = mixed_closed_form_linear(3.0, 1.0, 0.5, 1.0, 0.1);
  CHECK(d1.phi == Approx(1.0).epsilon(1e-14));
  CHECK(d1.x == Approx(0.45).epsilon(1e-14));
  const auto mid = mixed_closed_form_linear(3.0, 1.0, 0.5, 0.4, 0.1);
  CHECK(mid.phi == Approx(1.415 / 1.55).epsilon(1e-14));
  CHECK(mid.phi == Approx(0.912903).epsilon(1e-6));
  CHECK(mid.x == Approx(0.493548).epsilon(1e-6));
  const auto solved = solve_mixed(linear_mixed(0.5, 0.4, 0.1, 1.0), MixedMethod::iterative);
  CHECK(std::abs(solved.phi - mid.phi) <= 1e-10);
  CHECK(std::abs(solved.x - mid.x) <= 1e-10);
}

TEST_CASE("d-derivatives") {
  CHECK(dphi_dd_linear(3.0, 1.0, 0.5, 0.0, 0.1) == Approx(0.288).epsilon(1e-14));
  CHECK(dx_dd_linear(3.0, 1.0, 0.5, 0.0, 0.1) == Approx(-0.144).epsilon(1e-14));
  const double h = 1e-5;
  const double d = 0.3;
  const double fd = (mixed_closed_form_linear(3.0, 1.0, 0.5, d + h, 0.1).phi -
                     mixed_closed_form_linear(3.0, 1.0, 0.5, d - h, 0.1).phi) /
                    (2 * h);
  CHECK(std::abs(fd - dphi_dd_linear(3.0, 1.0, 0.5, d, 0.1)) <= 1e-6);
  const double fdx = (mixed_closed_form_linear(3.0, 1.0, 0.5, d + h, 0.1).x -
                      mixed_closed_form_linear(3.0, 1.0, 0.5, d - h, 0.1).x) /
                     (2 * h);
  CHECK(std::abs(fdx - dx_dd_linear(3.0, 1.0, 0.5, d, 0.1)) <= 1e-6);
}

TEST_CASE("solver routes and residuals") {
  const auto cf = solve_mixed(linear_mixed(0.5, 0.0, 0.1, 1.0));
  CHECK(cf.method == MixedMethod::closed_form);
  CHECK(std::abs(cf.residual_wind) <= 1e-10);
  CHECK(std::abs(cf.residual_trad) <= 1e-10);
  const auto it = solve_mixed(linear_mixed(0.5, 0.0, 0.1, 1.0), MixedMethod::iterative);
  CHECK(it.method == MixedMethod::iterative);
  CHECK(it.outer_iterations > 0);
  CHECK(std::abs(it.phi - 0.82) <= 1e-10);
  CHECK(std::abs(it.x - 0.54) <= 1e-10);

  MixedMarketParams quad = linear_mixed(0.5, 0.5, 0.1, 1.0);
  quad.demand = DemandSpec::quadratic(3.0, 1.0, 0.1);
  CHECK_THROWS_AS(solve_mixed(quad, MixedMethod::closed_form), InvalidParameter);
  const auto q = solve_mixed(quad);
  CHECK(q.method == MixedMethod::iterative);
  CHECK(std::abs(q.residual_wind) <= 1e-10);
  CHECK(std::abs(q.residual_trad) <= 1e-10);
  CHECK(q.phi > quad.low);
  CHECK(q.phi < quad.high);
}

TEST_CASE("boundary: expensive traditional generation stays off") {
  const auto p = linear_mixed(0.5, 0.5, 0.1, 2.9);
  CHECK(mixed_closed_form_linear(3.0, 2.9, 0.5, 0.5, 0.1).x < 0.0);
  const auto eq = solve_mixed(p);
  CHECK(eq.method == MixedMethod::iterative);
  CHECK(eq.x == 0.0);
  CHECK(eq.x_at_boundary);
  CHECK(eq.residual_trad <= 0.0);
  CHECK(std::abs(eq.residual_wind) <= 1e-10);
  CHECK_THROWS_AS(solve_mixed(p, MixedMethod::closed_form), AssumptionViolation);
}

TEST_CASE("regime violations are reported") {
  // High capacity below the interior output.
  CHECK_THROWS_AS(solve_mixed(linear_mixed(0.5, 0.5, 0.1, 1.0, 0.5)), AssumptionViolation);
  // Large low capacity curtails in the low state.
  CHECK_THROWS_AS(solve_mixed(linear_mixed(0.5, 0.5, 0.9, 0.0)), AssumptionViolation);
  CHECK_THROWS_AS(solve_mixed(linear_mixed(0.5, 0.5, 0.1, -1.0)), InvalidParameter);
}

TEST_CASE("traditional output falls as cost rises") {
  double prev = 1e9;
  for (double c : testing_support::steps(0.0, 1.5, 0.1)) {
    const auto eq = solve_mixed(linear_mixed(0.5, 0.5, 0.1, c));
    CHECK(eq.x < prev);
    prev = eq.x;
  }
}

TEST_CASE("iterative solver matches closed forms on the linear grid") {
  int cells = 0;
  for (double beta : testing_support::steps(0.1, 0.9, 0.1)) {
    for (double d : testing_support::steps(0.0, 1.0, 0.05)) {
      for (double low : {0.1, 0.3}) {
        for (double c : {0.0, 0.5, 1.0}) {
          const auto p = linear_mixed(beta, d, low, c);
          const auto cf = solve_mixed(p, MixedMethod::closed_form);
          const auto it = solve_mixed(p, MixedMethod::iterative);
          CHECK(std::abs(cf.phi - it.phi) <= 1e-10);
          CHECK(std::abs(cf.x - it.x) <= 1e-10);
          ++cells;
        }
      }
    }
  }
  CHECK(cells == 9 * 21 * 2 * 3);
}

TEST_CASE("comparative statics in d on the linear grid") {
  for (double beta : testing_support::steps(0.1, 0.9, 0.1)) {
    for (double low : {0.1, 0.3}) {
      for (double c : {0.0, 0.5, 1.0}) {
        double prev_phi = -1.0;
        double prev_x = 0.0;
        double prev_q = 0.0;
        double prev_w = 0.0;
        for (double d : testing_support::steps(0.0, 1.0, 0.05)) {
          const auto p = linear_mixed(beta, d, low, c);
          const auto eq = solve_mixed(p);
          const double eq_q = eq.x + 2 * beta * eq.phi + 2 * (1 - beta) * low;
          const double ew = expectations_mixed(p, eq).e_welfare;
          if (prev_phi >= 0.0) {
            CHECK(eq.phi > prev_phi);
            CHECK(eq.x < prev_x);
            CHECK(eq_q > prev_q);
            CHECK(ew >= prev_w - 1e-12);
          }
          prev_phi = eq.phi;
          prev_x = eq.x;
          prev_q = eq_q;
          prev_w = ew;
        }
        for (double d : {0.2, 0.5, 0.8}) {
          const double h = 1e-4;
          const auto at = [&](double dd) {
            const auto pp = linear_mixed(beta, dd, low, c);
            return expectations_mixed(pp, solve_mixed(pp)).e_price;
          };
          const double slope = (at(d + h) - at(d - h)) / (2 * h);
          CHECK(std::abs(slope + beta * dphi_dd_linear(3.0, c, beta, d, low)) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("quadratic demand: expected welfare in d (reported)") {
  int pairs = 0;
  int increasing = 0;
  for (double beta : {0.3, 0.5, 0.7}) {
    for (double c : {0.0, 0.5}) {
      MixedMarketParams p = linear_mixed(beta, 0.0, 0.1, c);
      p.demand = DemandSpec::quadratic(3.0, 1.0, 0.1);
      double prev = 0.0;
      for (double d : testing_support::steps(0.0, 1.0, 0.1)) {
        p.d = d;
        const auto eq = solve_mixed(p);
        CHECK(std::abs(eq.residual_wind) <= 1e-10);
        const double ew = expectations_mixed(p, eq).e_welfare;
        if (d > 0.0) {
          ++pairs;
          if (ew >= prev) ++increasing;
        }
        prev = ew;
      }
    }
  }
  MESSAGE("quadratic mixed market: E[W] non-decreasing on " << increasing << " of "
                                                            << pairs << " d-steps");
  CHECK(pairs > 0);
}
