#include "windcournot/mixed_market.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "windcournot/errors.hpp"
#include "windcournot/numeric.hpp"

namespace windcournot {

namespace {

constexpr double kCoordinateTolerance = 1e-11;
constexpr int kMaxOuterIterations = 10000;

struct WeightedTotal {
  double probability;
  double total;
};

// Wind output totals per joint state (LL, LH+HL, HH) given outputs per state.
std::array<WeightedTotal, 3> wind_totals(const MixedMarketParams& params,
                                         double low_output, double high_output) {
  const DuopolyJoint joint = duopoly_joint(params.correlation());
  return {{{joint.ll, 2.0 * low_output},
           {joint.lh + joint.hl, low_output + high_output},
           {joint.hh, 2.0 * high_output}}};
}

double expected_trad_margin(const MixedMarketParams& params, double low_output,
                            double high_output, double x) {
  double value = 0.0;
  for (const auto& [p, total] : wind_totals(params, low_output, high_output)) {
    value += p * (price(params.demand, total + x) +
                  x * price_deriv(params.demand, total + x));
  }
  return value - params.cost;
}

// Root in x >= 0 of a decreasing traditional-generator condition, clamped at 0.
template <typename F>
double solve_nonnegative(F&& margin, bool* at_boundary) {
  if (margin(0.0) <= 0.0) {
    if (at_boundary != nullptr) *at_boundary = true;
    return 0.0;
  }
  if (at_boundary != nullptr) *at_boundary = false;
  double upper = 1.0;
  for (int i = 0; margin(upper) >= 0.0; ++i) {
    if (i > 200) {
      throw SolverFailure("could not bracket the traditional generator's output");
    }
    upper *= 2.0;
  }
  return bisect_decreasing(margin, 0.0, upper).root;
}

double solve_x_given_phi(const MixedMarketParams& params, double phi,
                         bool* at_boundary) {
  return solve_nonnegative(
      [&](double x) { return trad_foc(params, phi, x); }, at_boundary);
}

// High-state output given x, clamped to [L, H]; the caller validates the
// final point.
double solve_phi_given_x(const MixedMarketParams& params, double x) {
  const auto foc = [&](double phi) { return wind_foc(params, phi, x); };
  if (foc(params.low) <= 0.0) return params.low;
  if (foc(params.high) >= 0.0) return params.high;
  return bisect_decreasing(foc, params.low, params.high).root;
}

double low_state_margin(const MixedMarketParams& params, double phi, double x) {
  const auto corr = params.correlation();
  const double p_high = duopoly_conditional(corr, State::low, State::high);
  const double p_low = duopoly_conditional(corr, State::low, State::low);
  const double mixed_total = phi + params.low + x;
  const double low_total = 2.0 * params.low + x;
  return p_high * (price(params.demand, mixed_total) +
                   params.low * price_deriv(params.demand, mixed_total)) +
         p_low * (price(params.demand, low_total) +
                  params.low * price_deriv(params.demand, low_total));
}

void finish(const MixedMarketParams& params, MixedResult& result) {
  result.residual_wind = wind_foc(params, result.phi, result.x);
  result.residual_trad = trad_foc(params, result.phi, result.x);
  result.low_state_margin = low_state_margin(params, result.phi, result.x);
  if (!(result.phi > params.low && result.phi < params.high)) {
    std::ostringstream msg;
    msg << "mixed market has no interior high-state output: phi = " << result.phi
        << " not in (" << params.low << ", " << params.high << ")";
    throw AssumptionViolation(msg.str());
  }
  if (!(result.low_state_margin > 0.0)) {
    std::ostringstream msg;
    msg << "low-state wind producer would curtail: margin = "
        << result.low_state_margin;
    throw AssumptionViolation(msg.str());
  }
}

MixedResult solve_iterative(const MixedMarketParams& params) {
  MixedResult result;
  result.method = MixedMethod::iterative;
  double x = 0.0;
  double phi = solve_phi_given_x(params, x);
  bool boundary = false;
  for (int it = 1; it <= kMaxOuterIterations; ++it) {
    const double next_x = solve_x_given_phi(params, phi, &boundary);
    const double next_phi = solve_phi_given_x(params, next_x);
    const bool settled = std::abs(next_x - x) < kCoordinateTolerance &&
                         std::abs(next_phi - phi) < kCoordinateTolerance;
    x = next_x;
    phi = next_phi;
    if (settled) {
      result.phi = phi;
      result.x = x;
      result.x_at_boundary = boundary;
      result.outer_iterations = it;
      return result;
    }
  }
  throw SolverFailure("mixed market coordinate iteration did not converge");
}

}  // namespace

void MixedMarketParams::validate() const {
  correlation().validate();
  if (!(low > 0.0 && low < high)) {
    throw InvalidParameter("capacities must satisfy 0 < L < H");
  }
  if (!(cost >= 0.0)) {
    throw InvalidParameter("marginal cost c must be non-negative");
  }
}

Assumption4Report check_assumption4(const MixedMarketParams& params) {
  params.validate();
  Assumption4Report report;
  const DemandSpec& demand = params.demand;
  const double low = params.low;
  const double high = params.high;

  // With φ = H the outputs equal the availabilities.
  report.x_floor = solve_nonnegative(
      [&](double x) { return expected_trad_margin(params, low, high, x); },
      nullptr);

  report.cost_margin = price(demand, 2.0 * high) - params.cost;
  report.cost_ok = report.cost_margin > 0.0;
  report.low_margin = price(demand, 3.0 * low) + low * price_deriv(demand, 3.0 * low);
  report.low_ok = report.low_margin > 0.0;
  const double total = high + low + report.x_floor;
  report.high_margin = price(demand, total) + high * price_deriv(demand, total);
  report.high_ok = report.high_margin < 0.0;
  return report;
}

double wind_foc(const MixedMarketParams& params, double phi, double x) {
  const auto corr = params.correlation();
  const double p_low = duopoly_conditional(corr, State::high, State::low);
  const double p_high = duopoly_conditional(corr, State::high, State::high);
  const double mixed_total = params.low + phi + x;
  const double high_total = 2.0 * phi + x;
  return p_low * (price(params.demand, mixed_total) +
                  phi * price_deriv(params.demand, mixed_total)) +
         p_high * (price(params.demand, high_total) +
                   phi * price_deriv(params.demand, high_total));
}

double trad_foc(const MixedMarketParams& params, double phi, double x) {
  return expected_trad_margin(params, params.low, phi, x);
}

MixedResult solve_mixed(const MixedMarketParams& params, MixedMethod method) {
  params.validate();
  const Assumption4Report report = check_assumption4(params);

  const bool linear = params.demand.is_unit_linear();
  if (method == MixedMethod::closed_form && !linear) {
    throw InvalidParameter("closed-form mixed equilibrium needs P(Q) = s - Q");
  }

  MixedResult result;
  bool use_closed = method == MixedMethod::closed_form ||
                    (method == MixedMethod::automatic && linear);
  if (use_closed) {
    const MixedClosedForm cf = mixed_closed_form_linear(
        params.demand.s, params.cost, params.beta, params.d, params.low);
    if (cf.x >= 0.0) {
      result.phi = cf.phi;
      result.x = cf.x;
      result.method = MixedMethod::closed_form;
    } else if (method == MixedMethod::closed_form) {
      throw AssumptionViolation(
          "closed form gives x < 0; the traditional generator does not produce");
    } else {
      use_closed = false;
    }
  }
  if (!use_closed) {
    result = solve_iterative(params);
  }
  result.assumption4 = report;
  finish(params, result);
  return result;
}

MixedClosedForm mixed_closed_form_linear(double s, double c, double beta,
                                         double d, double low) {
  const double numer = 0.5 * (s + c) * (beta + d * (1.0 - beta)) +
                       low * beta * (1.0 - beta) * (1.0 - d);
  const double denom = 3.0 * beta + 2.0 * d * (1.0 - beta) - beta * beta -
                       beta * d * (1.0 - beta);
  MixedClosedForm out;
  out.phi = numer / denom;
  out.x = 0.5 * (s - c) - out.phi * beta - low * (1.0 - beta);
  return out;
}

double dphi_dd_linear(double s, double c, double beta, double d, double low) {
  const double denom = 3.0 * beta + 2.0 * d * (1.0 - beta) - beta * beta -
                       beta * d * (1.0 - beta);
  return (s + c - 4.0 * low) * beta * (1.0 - beta) / (2.0 * denom * denom);
}

double dx_dd_linear(double s, double c, double beta, double d, double low) {
  return -beta * dphi_dd_linear(s, c, beta, d, low);
}

std::string to_string(MixedMethod method) {
  switch (method) {
    case MixedMethod::automatic:
      return "automatic";
    case MixedMethod::closed_form:
      return "closed_form";
    case MixedMethod::iterative:
      return "iterative";
  }
  return "";
}

}  // namespace windcournot
