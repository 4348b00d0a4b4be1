#include "windcournot/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "windcournot/errors.hpp"
#include "windcournot/numeric.hpp"

namespace windcournot {

namespace {

// Marginal revenue of a producer selling `own` when total output is `total`.
double marginal_revenue(const DemandSpec& demand, double own, double total) {
  return price(demand, total) + own * price_deriv(demand, total);
}

void require_capacities(double low, double high) {
  if (!(low > 0.0 && low < high)) {
    throw InvalidParameter("capacities must satisfy 0 < L < H");
  }
}

}  // namespace

void DuopolyParams::validate() const {
  correlation().validate();
  require_capacities(low, high);
}

Assumption1Report check_assumption1(const DuopolyParams& params) {
  params.validate();
  Assumption1Report report;
  report.low_margin = marginal_revenue(params.demand, params.low, 2.0 * params.low);
  report.high_margin = marginal_revenue(params.demand, params.high, params.high);
  report.low_ok = report.low_margin > 0.0;
  report.high_ok = report.high_margin < 0.0;
  return report;
}

double duopoly_foc(const DuopolyParams& params, double x) {
  const auto corr = params.correlation();
  const double p_low = duopoly_conditional(corr, State::high, State::low);
  const double p_high = duopoly_conditional(corr, State::high, State::high);
  return p_low * marginal_revenue(params.demand, x, params.low + x) +
         p_high * marginal_revenue(params.demand, x, 2.0 * x);
}

EquilibriumResult solve_phi_duopoly(const DuopolyParams& params,
                                    SolveMethod method) {
  const Assumption1Report report = check_assumption1(params);
  if (!report.ok()) {
    std::ostringstream msg;
    msg << "outside the curtailment regime: P(2L)+LP'(2L) = " << report.low_margin
        << ", P(H)+HP'(H) = " << report.high_margin;
    throw AssumptionViolation(msg.str());
  }

  EquilibriumResult result;
  result.low = params.low;
  result.method = method;
  if (method == SolveMethod::closed_form) {
    if (!params.demand.is_unit_linear()) {
      throw InvalidParameter("closed-form equilibrium needs P(Q) = s - Q");
    }
    result.phi = phi_closed_form_linear(params.demand.s, params.beta, params.d,
                                        params.low);
    result.foc_residual = duopoly_foc(params, result.phi);
    return result;
  }

  const auto foc = [&](double x) { return duopoly_foc(params, x); };
  if (!(foc(params.low) > 0.0 && foc(params.high) < 0.0)) {
    throw SolverFailure("first-order condition does not change sign on [L, H]");
  }
  const BisectionResult root = bisect_decreasing(foc, params.low, params.high);
  result.phi = root.root;
  result.foc_residual = root.residual;
  result.iterations = root.iterations;
  return result;
}

double phi_closed_form_linear(double s, double beta, double d, double low) {
  return (s * beta + (s - low) * (1.0 - beta) * d) /
         (3.0 * beta + 2.0 * (1.0 - beta) * d);
}

double multi_foc(const JointAvailability& dist, const DemandSpec& demand,
                 double low, double x) {
  const auto cond = conditional_given_high(dist);
  const int others = dist.n_plus_1() - 1;
  double value = 0.0;
  for (int k = 0; k <= others; ++k) {
    const double p = cond[static_cast<std::size_t>(k)];
    if (p == 0.0) {
      continue;
    }
    const double total = x + k * x + (others - k) * low;
    value += p * marginal_revenue(demand, x, total);
  }
  return value;
}

double multi_low_margin(int n_plus_1, const DemandSpec& demand, double low) {
  return marginal_revenue(demand, low, n_plus_1 * low);
}

EquilibriumResult solve_phi_multi(const JointAvailability& dist,
                                  const DemandSpec& demand, double low,
                                  double high) {
  require_capacities(low, high);
  const double low_margin = multi_low_margin(dist.n_plus_1(), demand, low);
  if (!(low_margin > 0.0)) {
    std::ostringstream msg;
    msg << "low-state curtailment: P((N+1)L)+LP'((N+1)L) = " << low_margin;
    throw AssumptionViolation(msg.str());
  }

  EquilibriumResult result;
  result.low = low;
  result.method = SolveMethod::bisection;
  const auto foc = [&](double x) { return multi_foc(dist, demand, low, x); };
  const double at_high = foc(high);
  if (at_high >= 0.0) {
    result.phi = high;
    result.foc_residual = at_high;
    result.regime = Regime::no_curtailment;
    return result;
  }
  const BisectionResult root = bisect_decreasing(foc, low, high);
  result.phi = root.root;
  result.foc_residual = root.residual;
  result.iterations = root.iterations;
  return result;
}

double strategy_output(double phi, double w) { return std::min(w, phi); }

std::string to_string(SolveMethod method) {
  return method == SolveMethod::closed_form ? "closed_form" : "bisection";
}

std::string to_string(Regime regime) {
  return regime == Regime::curtailment ? "curtailment" : "no_curtailment";
}

}  // namespace windcournot
