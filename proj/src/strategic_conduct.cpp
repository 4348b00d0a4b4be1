#include "windcournot/strategic_conduct.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "windcournot/equilibrium.hpp"
#include "windcournot/errors.hpp"
#include "windcournot/numeric.hpp"
#include "windcournot/stochastic.hpp"

namespace windcournot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kFeasibilitySlack = 1e-12;

double linear_utility(double s, double q) { return s * q - 0.5 * q * q; }

struct Conditionals {
  double hh = 0.0;  // Pr{H|H}
  double lh = 0.0;  // Pr{L|H}
  double hl = 0.0;  // Pr{H|L}
};

Conditionals conditionals(double beta, double d) {
  const DuopolyCorrelation corr{beta, d};
  return {duopoly_conditional(corr, State::high, State::high),
          duopoly_conditional(corr, State::high, State::low),
          duopoly_conditional(corr, State::low, State::high)};
}

// Bounds with the penalty terms split out: lb = lb0 + γ·lb_rate,
// ub_irh = ub_irh0 - γ·irh_rate.
struct BoundParts {
  double lb0 = 0.0;
  double lb_rate = 0.0;
  double ub_ic = 0.0;
  double ub_irh0 = 0.0;
  double irh_rate = 0.0;
  bool degenerate = false;
};

BoundParts bound_parts(const CollusionParams& p) {
  const double pi_m = monopoly_profit(p.s);
  const double pi_l = low_profit(p.s, p.low);
  const double phi = competitive_phi(p);
  const Conditionals c = conditionals(p.beta, p.d);
  BoundParts out;
  out.ub_ic = 0.5 * c.hh + c.lh * (1.0 - pi_l / pi_m);
  out.lb0 = p.low * (p.s - phi - p.low) / pi_m;
  if (p.d == 0.0) {
    out.degenerate = true;
    out.lb_rate = kInf;
    out.ub_irh0 = kInf;
    out.irh_rate = 0.0;
    return out;
  }
  const double ratio = p.beta / (p.d * (1.0 - p.beta));
  out.ub_irh0 = 1.0 + 0.5 * ratio - ratio * phi * (p.s - 2.0 * phi) / pi_m -
                phi * (p.s - phi - p.low) / pi_m;
  out.lb_rate = 1.0 / (c.hl * pi_m);
  out.irh_rate = 1.0 / (c.lh * pi_m);
  return out;
}

double penalty_term(double gamma, double rate) {
  return gamma == 0.0 ? 0.0 : gamma * rate;
}

}  // namespace

void CollusionParams::validate() const {
  DuopolyCorrelation{beta, d}.validate();
  if (!(s > 0.0)) throw InvalidParameter("demand intercept s must be positive");
  if (!(gamma >= 0.0)) throw InvalidParameter("penalty gamma must be >= 0");
  if (!(low > 0.0)) throw InvalidParameter("low capacity L must be positive");
  if (!(low < s / 3.0)) {
    std::ostringstream msg;
    msg << "collusion analysis needs L < s/3; got L = " << low << ", s = " << s;
    throw AssumptionViolation(msg.str());
  }
}

double monopoly_profit(double s) { return s * s / 4.0; }

double low_profit(double s, double low) { return (s - 2.0 * low) * low; }

double competitive_phi(const CollusionParams& params) {
  return phi_closed_form_linear(params.s, params.beta, params.d, params.low);
}

TransferBounds transfer_bounds(const CollusionParams& params) {
  params.validate();
  const BoundParts parts = bound_parts(params);
  TransferBounds out;
  out.degenerate_full_correlation = parts.degenerate;
  out.ub_ic = parts.ub_ic;
  out.lb_irl = parts.lb0 + penalty_term(params.gamma, parts.lb_rate);
  if (parts.degenerate) {
    // A low producer never meets a high one, so only the penalty binds.
    out.lb_irl = params.gamma > 0.0 ? kInf : -kInf;
  }
  out.ub_irh = parts.ub_irh0 - penalty_term(params.gamma, parts.irh_rate);
  out.interval_lo = out.lb_irl;
  out.interval_hi = std::min(out.ub_ic, out.ub_irh);
  out.feasible = out.lb_irl <= out.interval_hi + kFeasibilitySlack;
  return out;
}

GammaHat gamma_hat(const CollusionParams& params) {
  params.validate();
  if (params.d == 0.0) {
    throw InvalidParameter("minimal penalty is undefined at d = 0");
  }
  const BoundParts parts = bound_parts(params);
  const double via_ic = (parts.ub_ic - parts.lb0) / parts.lb_rate;
  const double via_irh =
      (parts.ub_irh0 - parts.lb0) / (parts.lb_rate + parts.irh_rate);
  GammaHat out;
  out.binding = via_ic <= via_irh ? "ic" : "irh";
  out.value = std::max(0.0, std::min(via_ic, via_irh));

  const auto margin = [&](double gamma) {
    return std::min(parts.ub_ic, parts.ub_irh0 - gamma * parts.irh_rate) -
           (parts.lb0 + gamma * parts.lb_rate);
  };
  if (margin(0.0) <= 0.0) {
    out.bisection_value = 0.0;
    return out;
  }
  double upper = 1.0;
  while (margin(upper) > 0.0) upper *= 2.0;
  out.bisection_value = bisect_decreasing(margin, 0.0, upper, 0.0, 1e-15 * upper).root;
  return out;
}

std::vector<CollusionState> collusion_outcomes(const CollusionParams& params,
                                               double t) {
  params.validate();
  const DuopolyJoint joint = duopoly_joint({params.beta, params.d});
  const double s = params.s;
  const double low = params.low;
  const double pi_m = monopoly_profit(s);
  const double pi_l = low_profit(s, low);
  const double q_m = 0.5 * s;
  return {
      {"LL", joint.ll, low, low, 2.0 * low, pi_l, pi_l},
      {"LH", joint.lh, low, q_m - low, q_m, t * pi_m, (1.0 - t) * pi_m},
      {"HL", joint.hl, q_m - low, low, q_m, (1.0 - t) * pi_m, t * pi_m},
      {"HH", joint.hh, 0.5 * q_m, 0.5 * q_m, q_m, 0.5 * pi_m, 0.5 * pi_m},
  };
}

std::vector<CollusionState> competitive_outcomes(const CollusionParams& params) {
  params.validate();
  const DuopolyJoint joint = duopoly_joint({params.beta, params.d});
  const double s = params.s;
  const double phi = competitive_phi(params);
  const double low = params.low;
  const auto state = [&](const char* label, double p, double q1, double q2) {
    const double total = q1 + q2;
    return CollusionState{label, p, q1, q2, total, q1 * (s - total),
                          q2 * (s - total)};
  };
  return {state("LL", joint.ll, low, low), state("LH", joint.lh, low, phi),
          state("HL", joint.hl, phi, low), state("HH", joint.hh, phi, phi)};
}

double collusion_value(const CollusionParams& params, bool subtract_penalty) {
  double value = 0.0;
  for (const auto& st : collusion_outcomes(params, 0.0)) {
    value += st.probability * (st.profit1 + st.profit2);
  }
  for (const auto& st : competitive_outcomes(params)) {
    value -= st.probability * (st.profit1 + st.profit2);
  }
  return subtract_penalty ? value - 2.0 * params.gamma : value;
}

double collusion_welfare_cost(const CollusionParams& params) {
  double cost = 0.0;
  for (const auto& st : competitive_outcomes(params)) {
    cost += st.probability * linear_utility(params.s, st.total);
  }
  for (const auto& st : collusion_outcomes(params, 0.0)) {
    cost -= st.probability * linear_utility(params.s, st.total);
  }
  return cost;
}

namespace {

struct SharingGains {
  double welfare = 0.0;
  double profit = 0.0;
};

SharingGains enumerate_sharing(double beta, double d, double low, double s) {
  CollusionParams params{s, beta, d, low, 0.0};
  params.validate();
  const double half_rest = 0.5 * (s - low);
  const double third = s / 3.0;
  const auto shared = std::vector<CollusionState>{
      {"LL", 0, low, low, 2.0 * low, 0, 0},
      {"LH", 0, low, half_rest, low + half_rest, 0, 0},
      {"HL", 0, half_rest, low, low + half_rest, 0, 0},
      {"HH", 0, third, third, 2.0 * third, 0, 0},
  };
  const auto priv = competitive_outcomes(params);
  SharingGains out;
  for (std::size_t i = 0; i < priv.size(); ++i) {
    const double p = priv[i].probability;
    const double q_sh = shared[i].total;
    const double q_pr = priv[i].total;
    out.welfare += p * (linear_utility(s, q_sh) - linear_utility(s, q_pr));
    out.profit += p * (q_sh * (s - q_sh) - q_pr * (s - q_pr));
  }
  return out;
}

void require_agreement(const CheckedValue& v, const char* what) {
  if (std::isnan(v.closed_form)) return;
  if (std::abs(v.closed_form - v.enumerated) > kClosedFormAgreement) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": closed form " << v.closed_form
        << " disagrees with enumeration " << v.enumerated;
    throw SolverFailure(msg.str());
  }
}

// β²d(1-3L)(1-β) / ((β+d(1-β))(3β+2d(1-β))²), shared by both closed forms.
double sharing_factor(double beta, double d, double low) {
  const double mix = beta + d * (1.0 - beta);
  const double den = 3.0 * beta + 2.0 * d * (1.0 - beta);
  return beta * beta * d * (1.0 - 3.0 * low) * (1.0 - beta) / (mix * den * den);
}

}  // namespace

CheckedValue info_sharing_welfare_gain(double beta, double d, double low,
                                       double s) {
  CheckedValue out;
  out.enumerated = enumerate_sharing(beta, d, low, s).welfare;
  out.closed_form = kNaN;
  if (s == 1.0) {
    const double spread = d * (1.0 - beta);
    out.closed_form = sharing_factor(beta, d, low) / 36.0 *
                      (39.0 * beta + 28.0 * spread - 60.0 * low * spread -
                       81.0 * beta * low);
  }
  require_agreement(out, "information-sharing welfare gain");
  return out;
}

CheckedValue info_sharing_profit_gain(double beta, double d, double low,
                                      double s) {
  CheckedValue out;
  out.enumerated = enumerate_sharing(beta, d, low, s).profit;
  out.closed_form = kNaN;
  if (s == 1.0) {
    const double spread = d * (1.0 - beta);
    out.closed_form = sharing_factor(beta, d, low) / 18.0 *
                      (21.0 * beta + 16.0 * spread -
                       low * (81.0 * beta + 60.0 * spread));
  }
  require_agreement(out, "information-sharing profit gain");
  return out;
}

double l_star(double beta, double d) {
  DuopolyCorrelation{beta, d}.validate();
  const double spread = d * (1.0 - beta);
  return (21.0 * beta + 16.0 * spread) / (81.0 * beta + 60.0 * spread);
}

CollusionParams with_axis(CollusionParams params, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::d: params.d = value; break;
    case SweepAxis::beta: params.beta = value; break;
    case SweepAxis::low: params.low = value; break;
    case SweepAxis::gamma: params.gamma = value; break;
    case SweepAxis::s: params.s = value; break;
    default:
      throw InvalidParameter("axis " + to_string(axis) +
                             " does not apply to collusion");
  }
  return params;
}

Table sweep_collusion(const CollusionParams& base, SweepAxis axis,
                      std::span<const double> grid) {
  if (grid.empty()) throw InvalidParameter("sweep grid is empty");
  Table table({to_string(axis), "phi", "lb_irl", "ub_ic", "ub_irh", "gamma_hat",
               "value", "welfare_cost", "feasible", "binding", "status", "note"});
  for (double v : grid) {
    append_sweep_row(table, v, 7, 2, [&](std::vector<Cell>& row) {
      const CollusionParams params = with_axis(base, axis, v);
      const TransferBounds bounds = transfer_bounds(params);
      double hat = kNaN;
      std::string binding = "degenerate_full_correlation";
      if (!bounds.degenerate_full_correlation) {
        const GammaHat g = gamma_hat(params);
        hat = g.value;
        binding = g.binding;
      }
      for (double x : {competitive_phi(params), bounds.lb_irl, bounds.ub_ic,
                       bounds.ub_irh, hat, collusion_value(params),
                       collusion_welfare_cost(params)}) {
        row.emplace_back(x);
      }
      row.emplace_back(std::string(bounds.feasible ? "true" : "false"));
      row.emplace_back(binding);
    });
  }
  return table;
}

Table sweep_info_sharing(double beta, double d, double low, SweepAxis axis,
                         std::span<const double> grid) {
  if (grid.empty()) throw InvalidParameter("sweep grid is empty");
  if (axis != SweepAxis::beta && axis != SweepAxis::d && axis != SweepAxis::low) {
    throw InvalidParameter("information-sharing sweeps run over beta, d or L");
  }
  Table table({to_string(axis), "welfare_gain", "profit_gain", "l_star",
               "status", "note"});
  for (double v : grid) {
    append_sweep_row(table, v, 3, 0, [&](std::vector<Cell>& row) {
      const double b = axis == SweepAxis::beta ? v : beta;
      const double dd = axis == SweepAxis::d ? v : d;
      const double l = axis == SweepAxis::low ? v : low;
      row.emplace_back(info_sharing_welfare_gain(b, dd, l).enumerated);
      row.emplace_back(info_sharing_profit_gain(b, dd, l).enumerated);
      row.emplace_back(l_star(b, dd));
    });
  }
  return table;
}

Table l_star_surface(std::span<const double> beta_grid,
                     std::span<const double> d_grid) {
  if (beta_grid.empty() || d_grid.empty()) {
    throw InvalidParameter("surface grids must be non-empty");
  }
  std::vector<std::string> columns{"beta"};
  for (double d : d_grid) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "d=%g", d);
    columns.emplace_back(buf);
  }
  Table table(std::move(columns));
  for (double beta : beta_grid) {
    std::vector<Cell> row{beta};
    for (double d : d_grid) row.emplace_back(l_star(beta, d));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace windcournot
