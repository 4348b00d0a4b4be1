#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "windcournot/analysis.hpp"
#include "windcournot/mixed_market.hpp"
#include "windcournot/oracle.hpp"

using namespace windcournot;
using doctest::Approx;

namespace {

DuopolyParams fig(double d) { return {DemandSpec::linear(3.0), 0.5, d, 0.6, 2.0}; }

double step_of(const DuopolyParams& p, int n) { return (p.high - p.low) / n; }

}  // namespace

TEST_CASE("expected profit against hand enumeration") {
  const DuopolyParams p = fig(1.0);
  // Pr{H|H} = Pr{L|H} = 1/2 at β = 1/2, d = 1.
  const double q = 1.0;
  const double expected = 0.5 * q * (3.0 - q - 1.2) + 0.5 * q * (3.0 - q - 0.6);
  CHECK(oracle::expected_profit(p, State::high, q, 1.2) == Approx(expected).epsilon(1e-15));
  const double low = 0.5 * 0.6 * (3.0 - 0.6 - 1.2) + 0.5 * 0.6 * (3.0 - 1.2);
  CHECK(oracle::expected_profit(p, State::low, 0.6, 1.2) == Approx(low).epsilon(1e-15));
}

TEST_CASE("grid best responses") {
  const DuopolyParams p = fig(1.0);
  CHECK(std::abs(oracle::best_response_grid(p, 1.08, 4000) - 1.08) <= step_of(p, 4000));
  CHECK(std::abs(oracle::best_response_grid(p, p.low, 4000) - (3.0 - 0.6) / 2.0) <=
        step_of(p, 4000));
  CHECK(std::abs(oracle::best_response_grid(fig(0.0), 1.0, 4000) - 1.0) <= step_of(p, 4000));
  CHECK_THROWS_AS(oracle::best_response_grid(p, 1.08, 99), InvalidParameter);
}

TEST_CASE("grid fixed point") {
  const auto g = oracle::fixed_point_equilibrium(fig(1.0), 2000);
  CHECK(g.grid_step == Approx(7e-4));
  CHECK(std::abs(g.phi_hat - 1.08) <= g.grid_step);
  const auto g0 = oracle::fixed_point_equilibrium(fig(0.0), 2000);
  CHECK(std::abs(g0.phi_hat - 1.0) <= g0.grid_step);
  CHECK(g0.iterations >= 1);
}

TEST_CASE("a converged grid point is a best response to itself") {
  int converged = 0;
  for (double d : testing_support::steps(0.0, 1.0, 0.1)) {
    const DuopolyParams p = fig(d);
    const auto g = oracle::fixed_point_equilibrium(p, 1000);
    if (!g.converged) continue;
    ++converged;
    const double own = oracle::expected_profit(p, State::high, g.phi_hat, g.phi_hat);
    for (int k = 0; k <= 1000; ++k) {
      const double q = p.low + k * g.grid_step;
      CHECK(oracle::expected_profit(p, State::high, q, g.phi_hat) <= own + 1e-14);
    }
  }
  MESSAGE("converged fixed points: " << converged << " of 11");
}

TEST_CASE("property: grid equilibria match the analytic solver") {
  testing_support::Gen gen(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const DuopolyParams p = gen.duopoly();
    const double phi = solve_phi_duopoly(p).phi;
    const auto g = oracle::fixed_point_equilibrium(p, 1000);
    CAPTURE(trial);
    CHECK(std::abs(g.phi_hat - phi) <= g.grid_step);
    CHECK(oracle::low_state_check(p, phi, 1000).holds);
    CHECK(oracle::deviation_check(p, phi, 1000).holds);
  }
}

TEST_CASE("low-state output and deviations") {
  const DuopolyParams p = fig(1.0);
  const auto low = oracle::low_state_check(p, 1.08, 2000);
  CHECK(low.holds);
  CHECK(low.best_action == Approx(0.6));
  const auto dev = oracle::deviation_check(p, 1.08, 2000);
  CHECK(dev.holds);
  CHECK(dev.max_gain <= dev.tolerance);
  // A strategy far from equilibrium must be beaten.
  CHECK_FALSE(oracle::deviation_check(p, 1.9, 2000).holds);
}

TEST_CASE("multi-producer grid fixed point") {
  const auto dem = DemandSpec::linear(3.0);
  for (int n : {3, 5}) {
    for (double d : {0.0, 0.5, 1.0}) {
      const auto dist = mixture_family(n, 0.5, d);
      const double low = 0.3 * 3.0 / n;
      const double phi = solve_phi_multi(dist, dem, low, 2.0).phi;
      const auto g = oracle::fixed_point_equilibrium_multi(dist, dem, low, 2.0, 2000);
      CHECK(std::abs(g.phi_hat - phi) <= g.grid_step);
    }
  }
}

TEST_CASE("central differences") {
  const auto affine = [](double x) { return 4.0 * x - 1.5; };
  for (double h : {1e-1, 1.0, 10.0}) {
    CHECK(oracle::central_difference(affine, 0.3, h) == Approx(4.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(oracle::central_difference(affine, 0.3, 0.0), InvalidParameter);

  const auto phi = [](double d) { return phi_closed_form_linear(3.0, 0.5, d, 0.6); };
  CHECK(std::abs(oracle::central_difference(phi, 0.5, 1e-5) - dphi_dd(fig(0.5))) <= 1e-6);

  for (double d : {0.1, 0.5, 0.9}) {
    const auto price = [](double dd) {
      const MixedMarketParams m{DemandSpec::linear(3.0), 0.5, dd, 0.1, 2.0, 1.0};
      return expectations_mixed(m, solve_mixed(m)).e_price;
    };
    const double slope = oracle::central_difference(price, d, 1e-5);
    CHECK(std::abs(slope + 0.5 * dphi_dd_linear(3.0, 1.0, 0.5, d, 0.1)) <= 1e-6);
  }
}

TEST_CASE("transfer scan reproduces the analytic interval") {
  const CollusionParams worked{1.0, 0.5, 0.5, 0.1, 0.0};
  const auto scan = oracle::transfer_scan(worked, 0.3625);
  CHECK(scan.any_feasible);
  CHECK(std::abs(scan.t_min - 0.215) <= scan.step);
  CHECK(std::abs(scan.t_max - 0.423125) <= scan.step);
  CollusionParams penalised = worked;
  penalised.gamma = 0.01;
  CHECK_FALSE(oracle::transfer_scan(penalised, 0.3625).any_feasible);

  testing_support::Gen gen(5);
  for (int trial = 0; trial < 40; ++trial) {
    const CollusionParams p{1.0, gen.uniform(0.1, 0.9), gen.uniform(0.05, 1.0),
                            gen.uniform(0.05, 0.3), gen.coin() ? 0.0 : gen.uniform(0.0, 0.01)};
    const auto b = transfer_bounds(p);
    const auto s = oracle::transfer_scan(p, competitive_phi(p), -1.0, 2.0, 1e-4);
    CAPTURE(trial);
    const double lo = std::max(b.interval_lo, -1.0);
    const double hi = std::min(b.interval_hi, 2.0);
    if (hi - lo > 2.0 * s.step) {
      REQUIRE(s.any_feasible);
      CHECK(std::abs(s.t_min - lo) <= s.step);
      CHECK(std::abs(s.t_max - hi) <= s.step);
    } else if (hi < lo - 2.0 * s.step) {
      CHECK_FALSE(s.any_feasible);
    }
  }
}
