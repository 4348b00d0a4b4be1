#include "windcournot/analysis.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "windcournot/errors.hpp"

namespace windcournot {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

StateRow make_state(const DemandSpec& demand, std::string label, double p,
                    double total, std::vector<double> outputs) {
  StateRow row;
  row.label = std::move(label);
  row.probability = p;
  row.total_output = total;
  row.price = price(demand, total);
  row.welfare = utility(demand, total);
  for (double q : outputs) row.profits.push_back(q * row.price);
  return row;
}

void accumulate(ExpectationReport& report) {
  for (const StateRow& row : report.per_state_table) {
    report.e_welfare += row.probability * row.welfare;
    report.e_price += row.probability * row.price;
    report.e_total_output += row.probability * row.total_output;
    report.e_profit_per_firm += row.probability * row.profits.front();
  }
}

}  // namespace

ExpectationReport expectations_duopoly(const DuopolyParams& params,
                                       const EquilibriumResult& eq) {
  const DuopolyJoint joint = duopoly_joint(params.correlation());
  const double lo = strategy_output(eq.phi, params.low);
  const double hi = strategy_output(eq.phi, params.high);
  ExpectationReport report;
  report.per_state_table = {
      make_state(params.demand, "LL", joint.ll, lo + lo, {lo, lo}),
      make_state(params.demand, "LH", joint.lh, lo + hi, {lo, hi}),
      make_state(params.demand, "HL", joint.hl, hi + lo, {hi, lo}),
      make_state(params.demand, "HH", joint.hh, hi + hi, {hi, hi}),
  };
  accumulate(report);
  return report;
}

ExpectationReport expectations_multi(const JointAvailability& dist,
                                     const DemandSpec& demand,
                                     const EquilibriumResult& eq) {
  const int n1 = dist.n_plus_1();
  const double lo = eq.low;
  ExpectationReport report;
  for (int k = 0; k <= n1; ++k) {
    const double total = (eq.phi - lo) * k + n1 * lo;
    StateRow row = make_state(demand, "S=" + std::to_string(k),
                              dist.count_probs()[static_cast<std::size_t>(k)],
                              total, {total / n1});
    report.per_state_table.push_back(std::move(row));
  }
  accumulate(report);
  return report;
}

ExpectationReport expectations_mixed(const MixedMarketParams& params,
                                     const MixedResult& eq) {
  const DuopolyJoint joint = duopoly_joint(params.correlation());
  const double lo = params.low;
  const double hi = eq.phi;
  const double x = eq.x;
  const auto state = [&](const char* label, double p, double q1, double q2) {
    StateRow row = make_state(params.demand, label, p, q1 + q2 + x, {q1, q2, x});
    row.welfare -= params.cost * x;
    row.profits[2] -= params.cost * x;
    return row;
  };
  ExpectationReport report;
  report.per_state_table = {state("LL", joint.ll, lo, lo),
                            state("LH", joint.lh, lo, hi),
                            state("HL", joint.hl, hi, lo),
                            state("HH", joint.hh, hi, hi)};
  accumulate(report);
  for (const StateRow& row : report.per_state_table) {
    report.e_profit_trad += row.probability * row.profits[2];
  }
  return report;
}

double dphi_dd(const DuopolyParams& params, const EquilibriumResult& eq) {
  if (eq.regime != Regime::curtailment) return 0.0;
  const double beta = params.beta;
  const double d = params.d;
  const double low = params.low;
  const DemandSpec& dem = params.demand;
  if (dem.is_unit_linear()) {
    const double den = 3.0 * beta + 2.0 * d * (1.0 - beta);
    return beta * (1.0 - beta) * (dem.s - 3.0 * low) / (den * den);
  }
  const double phi = eq.phi;
  const auto corr = params.correlation();
  const double p_lh = duopoly_conditional(corr, State::high, State::low);
  const double p_hh = duopoly_conditional(corr, State::high, State::high);
  const double mix = beta + d * (1.0 - beta);
  const double dp_lh = beta * (1.0 - beta) / (mix * mix);
  const double a = low + phi;
  const double b = 2.0 * phi;
  const double gap = price(dem, a) + phi * price_deriv(dem, a) - price(dem, b) -
                     phi * price_deriv(dem, b);
  const double slope =
      p_lh * (2.0 * price_deriv(dem, a) + phi * price_second_deriv(dem, a)) +
      p_hh * (3.0 * price_deriv(dem, b) + 2.0 * phi * price_second_deriv(dem, b));
  return -dp_lh * gap / slope;
}

double dphi_dd(const DuopolyParams& params) {
  return dphi_dd(params, solve_phi_duopoly(params));
}

namespace {

struct DecompositionInputs {
  EquilibriumResult eq;
  DuopolyJoint joint;
  double zeta = 0.0;
  double dphi = 0.0;
};

DecompositionInputs prepare(const DuopolyParams& params) {
  DecompositionInputs in;
  in.eq = solve_phi_duopoly(params);
  in.joint = duopoly_joint(params.correlation());
  in.zeta = zeta(params.correlation());
  in.dphi = dphi_dd(params, in.eq);
  return in;
}

DecompositionReport assemble(double wd, double sc, double dphi) {
  return {wd, sc, wd + sc, dphi};
}

}  // namespace

DecompositionReport decompose_welfare_derivative(const DuopolyParams& params) {
  const auto in = prepare(params);
  const DemandSpec& dem = params.demand;
  const double phi = in.eq.phi;
  const double low = params.low;
  const double wd = in.zeta * wd_functional(
                                  [&](double x, double y) { return utility(dem, x + y); },
                                  low, phi);
  const double sc = 2.0 * in.dphi *
                    (in.joint.lh * price(dem, low + phi) + in.joint.hh * price(dem, 2.0 * phi));
  return assemble(wd, sc, in.dphi);
}

DecompositionReport decompose_price_derivative(const DuopolyParams& params) {
  const auto in = prepare(params);
  const DemandSpec& dem = params.demand;
  const double phi = in.eq.phi;
  const double low = params.low;
  // WD_P vanishes identically when P'' = 0; skip the rounding noise.
  const bool affine = dem.is_linear() || dem.b == 0.0;
  const double wd = affine ? 0.0
                           : in.zeta * wd_functional(
                                           [&](double x, double y) { return price(dem, x + y); },
                                           low, phi);
  const double sc = 2.0 * in.dphi *
                    (in.joint.lh * price_deriv(dem, low + phi) +
                     in.joint.hh * price_deriv(dem, 2.0 * phi));
  return assemble(wd, sc, in.dphi);
}

DecompositionReport decompose_profit_derivative(const DuopolyParams& params) {
  const auto in = prepare(params);
  const DemandSpec& dem = params.demand;
  const double phi = in.eq.phi;
  const double low = params.low;
  const double wd = in.zeta * wd_functional(
                                  [&](double x, double y) { return x * price(dem, x + y); },
                                  low, phi);
  const double sc = in.dphi * (in.joint.hl * low * price_deriv(dem, phi + low) +
                               in.joint.hh * phi * price_deriv(dem, 2.0 * phi));
  return assemble(wd, sc, in.dphi);
}

double profit_derivative_linear(double s, double beta, double d, double low) {
  const double den = 3.0 * beta + 2.0 * d * (1.0 - beta);
  return beta * beta * (1.0 - beta) * (s - 3.0 * low) / (den * den * den) *
         (beta * (2.0 * s - 9.0 * low) + d * (1.0 - beta) * (2.0 * s - 8.0 * low));
}

double expected_profit_unit_closed_form(double s, double beta, double d,
                                        double low) {
  if (s != 1.0) {
    throw InvalidParameter("closed-form expected profit holds only for s = 1");
  }
  const double den = 3.0 * beta + 2.0 * d * (1.0 - beta);
  const double k = s - 3.0 * low;
  return beta / 4.0 + low * (1.0 - 2.0 * beta) +
         low * low * (15.0 / 4.0 * beta - 2.0) -
         beta * beta * k * (s - 4.0 * low) / (2.0 * den) +
         beta * beta * beta * k * k / (4.0 * den * den);
}

ProfitThresholds profit_thresholds(double s) {
  if (!(s > 0.0)) throw InvalidParameter("demand intercept s must be positive");
  return {2.0 * s / 9.0, s / 4.0};
}

JointAvailability MultiMarketParams::distribution() const {
  if (family == AvailabilityFamily::duopoly) {
    if (n_plus_1 != 2) {
      throw InvalidParameter("the duopoly family needs exactly two producers");
    }
    return duopoly_family({beta, d});
  }
  return mixture_family(n_plus_1, beta, d);
}

void MultiMarketParams::validate() const {
  DuopolyCorrelation{beta, d}.validate();
  if (n_plus_1 < 2) throw InvalidParameter("need at least two producers");
  if (!(low > 0.0 && low < high)) {
    throw InvalidParameter("capacities must satisfy 0 < L < H");
  }
}

EquilibriumResult solve_multi(const MultiMarketParams& params) {
  params.validate();
  return solve_phi_multi(params.distribution(), params.demand, params.low,
                         params.high);
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "d") return SweepAxis::d;
  if (name == "beta") return SweepAxis::beta;
  if (name == "L") return SweepAxis::low;
  if (name == "H") return SweepAxis::high;
  if (name == "c") return SweepAxis::cost;
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "s") return SweepAxis::s;
  throw InvalidParameter("unknown sweep axis: " + name);
}

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::d: return "d";
    case SweepAxis::beta: return "beta";
    case SweepAxis::low: return "L";
    case SweepAxis::high: return "H";
    case SweepAxis::cost: return "c";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::s: return "s";
  }
  return "";
}

std::string to_string(AvailabilityFamily family) {
  return family == AvailabilityFamily::mixture ? "mixture" : "duopoly";
}

namespace {

template <typename P>
bool set_common(P& params, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::d: params.d = value; return true;
    case SweepAxis::beta: params.beta = value; return true;
    case SweepAxis::low: params.low = value; return true;
    case SweepAxis::high: params.high = value; return true;
    case SweepAxis::s: params.demand.s = value; return true;
    default: return false;
  }
}

[[noreturn]] void unsupported(SweepAxis axis, const char* market) {
  throw InvalidParameter("axis " + to_string(axis) + " does not apply to the " +
                         market + " market");
}

void require_grid(std::span<const double> grid) {
  if (grid.empty()) throw InvalidParameter("sweep grid is empty");
}

}  // namespace

void append_sweep_row(Table& table, double value, std::size_t numeric_after_axis,
                      std::size_t text_cols,
                      const std::function<void(std::vector<Cell>&)>& fill) {
  std::vector<Cell> row;
  row.emplace_back(value);
  std::string status = kStatusOk;
  std::string note;
  try {
    fill(row);
  } catch (const AssumptionViolation& e) {
    status = kStatusAssumption;
    note = e.what();
  } catch (const SolverFailure& e) {
    status = kStatusSolver;
    note = e.what();
  } catch (const InvalidParameter& e) {
    status = kStatusInvalid;
    note = e.what();
  }
  if (status != kStatusOk) {
    row.resize(1);
    for (std::size_t i = 0; i < numeric_after_axis; ++i) row.emplace_back(kNaN);
    for (std::size_t i = 0; i < text_cols; ++i) row.emplace_back(std::string());
  }
  row.emplace_back(status);
  row.emplace_back(note);
  table.add_row(std::move(row));
}

DuopolyParams with_axis(DuopolyParams params, SweepAxis axis, double value) {
  if (!set_common(params, axis, value)) unsupported(axis, "duopoly");
  return params;
}

MultiMarketParams with_axis(MultiMarketParams params, SweepAxis axis,
                            double value) {
  if (!set_common(params, axis, value)) unsupported(axis, "multi-producer");
  return params;
}

MixedMarketParams with_axis(MixedMarketParams params, SweepAxis axis,
                            double value) {
  if (axis == SweepAxis::cost) {
    params.cost = value;
    return params;
  }
  if (!set_common(params, axis, value)) unsupported(axis, "mixed");
  return params;
}

Table sweep_duopoly(const DuopolyParams& base, SweepAxis axis,
                    std::span<const double> grid) {
  require_grid(grid);
  Table table({to_string(axis), "phi", "E_welfare", "E_price", "E_profit",
               "E_output", "dphi_dd", "wd_welfare", "sc_welfare", "wd_price",
               "sc_price", "wd_profit", "sc_profit", "status", "note"});
  for (double value : grid) {
    append_sweep_row(table, value, 12, 0, [&](std::vector<Cell>& row) {
      const DuopolyParams params = with_axis(base, axis, value);
      const EquilibriumResult eq = solve_phi_duopoly(params);
      const ExpectationReport ex = expectations_duopoly(params, eq);
      const DecompositionReport w = decompose_welfare_derivative(params);
      const DecompositionReport p = decompose_price_derivative(params);
      const DecompositionReport f = decompose_profit_derivative(params);
      for (double v : {eq.phi, ex.e_welfare, ex.e_price, ex.e_profit_per_firm,
                       ex.e_total_output, w.dphi_dd, w.wd_term, w.sc_term,
                       p.wd_term, p.sc_term, f.wd_term, f.sc_term}) {
        row.emplace_back(v);
      }
    });
  }
  return table;
}

Table sweep_multi(const MultiMarketParams& base, SweepAxis axis,
                  std::span<const double> grid) {
  require_grid(grid);
  Table table({to_string(axis), "phi", "E_welfare", "E_price", "E_profit",
               "E_output", "regime", "status", "note"});
  for (double value : grid) {
    append_sweep_row(table, value, 5, 1, [&](std::vector<Cell>& row) {
      const MultiMarketParams params = with_axis(base, axis, value);
      const EquilibriumResult eq = solve_multi(params);
      const ExpectationReport ex =
          expectations_multi(params.distribution(), params.demand, eq);
      for (double v : {eq.phi, ex.e_welfare, ex.e_price, ex.e_profit_per_firm,
                       ex.e_total_output}) {
        row.emplace_back(v);
      }
      row.emplace_back(to_string(eq.regime));
    });
  }
  return table;
}

Table sweep_mixed(const MixedMarketParams& base, SweepAxis axis,
                  std::span<const double> grid) {
  require_grid(grid);
  Table table({to_string(axis), "phi", "x", "E_price", "E_welfare",
               "E_profit_wind", "E_profit_trad", "method", "status", "note"});
  for (double value : grid) {
    append_sweep_row(table, value, 6, 1, [&](std::vector<Cell>& row) {
      const MixedMarketParams params = with_axis(base, axis, value);
      const MixedResult eq = solve_mixed(params);
      const ExpectationReport ex = expectations_mixed(params, eq);
      for (double v : {eq.phi, eq.x, ex.e_price, ex.e_welfare,
                       ex.e_profit_per_firm, ex.e_profit_trad}) {
        row.emplace_back(v);
      }
      row.emplace_back(to_string(eq.method));
    });
  }
  return table;
}

bool has_status(const Table& table, const std::string& status) {
  const std::size_t idx = table.column_index("status");
  for (const auto& row : table.rows()) {
    if (std::get<std::string>(row[idx]) == status) return true;
  }
  return false;
}

std::string first_note(const Table& table, const std::string& status) {
  const std::size_t s_idx = table.column_index("status");
  const std::size_t n_idx = table.column_index("note");
  for (const auto& row : table.rows()) {
    if (std::get<std::string>(row[s_idx]) == status) {
      return std::get<std::string>(row[n_idx]);
    }
  }
  return {};
}

}  // namespace windcournot
