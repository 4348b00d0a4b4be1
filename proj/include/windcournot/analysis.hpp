#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "windcournot/demand.hpp"
#include "windcournot/equilibrium.hpp"
#include "windcournot/mixed_market.hpp"
#include "windcournot/stochastic.hpp"
#include "windcournot/table.hpp"

namespace windcournot {

/// One joint availability state. `profits` lists per-producer profits in
/// producer order; the multi-producer report stores the per-firm average.
struct StateRow {
  std::string label;
  double probability = 0.0;
  double total_output = 0.0;
  double price = 0.0;
  double welfare = 0.0;
  std::vector<double> profits;
};

/// Exact expectations over a finite state space. Each expectation is the
/// probability-weighted sum of the matching per-state column.
struct ExpectationReport {
  double e_welfare = 0.0;
  double e_price = 0.0;
  double e_profit_per_firm = 0.0;  // wind producer 1 (symmetric)
  double e_total_output = 0.0;     // includes traditional output if present
  double e_profit_trad = 0.0;      // mixed market only
  std::vector<StateRow> per_state_table;
};

/// f(x,y) + f(y,x) - f(x,x) - f(y,y).
template <typename F>
double wd_functional(F&& f, double x, double y) {
  return f(x, y) + f(y, x) - f(x, x) - f(y, y);
}

ExpectationReport expectations_duopoly(const DuopolyParams& params,
                                       const EquilibriumResult& eq);
ExpectationReport expectations_multi(const JointAvailability& dist,
                                     const DemandSpec& demand,
                                     const EquilibriumResult& eq);
/// Welfare nets out the traditional generator's cost c·x.
ExpectationReport expectations_mixed(const MixedMarketParams& params,
                                     const MixedResult& eq);

/// ∂φ/∂d at the duopoly equilibrium. Linear demand: derivative of the closed
/// form. Otherwise the implicit-function derivative of the high-state FOC.
/// Zero outside the curtailment regime.
double dphi_dd(const DuopolyParams& params, const EquilibriumResult& eq);
double dphi_dd(const DuopolyParams& params);

struct DecompositionReport {
  double wd_term = 0.0;  // diversification: ζ·WD_f
  double sc_term = 0.0;  // strategic curtailment: φ'·(...)
  double total = 0.0;
  double dphi_dd = 0.0;
};

/// ∂E[W]/∂d = ζ(2U(L+φ) - U(2L) - U(2φ)) + 2φ'(Pr{L,H}P(L+φ) + Pr{H,H}P(2φ)).
DecompositionReport decompose_welfare_derivative(const DuopolyParams& params);
/// Same split for E[P]; the WD term vanishes for linear demand.
DecompositionReport decompose_price_derivative(const DuopolyParams& params);
/// Per-firm profit. WD uses f(x,y) = xP(x+y); the curtailment term is
/// φ'(Pr{H,L}·L·P'(φ+L) + Pr{H,H}·φ·P'(2φ)), the FOC cancelling the rest.
DecompositionReport decompose_profit_derivative(const DuopolyParams& params);

/// ∂E[π_i]/∂d for P(Q) = s - Q:
/// β²(1-β)(s-3L) / (3β+2d(1-β))³ · [β(2s-9L) + d(1-β)(2s-8L)].
double profit_derivative_linear(double s, double beta, double d, double low);

/// Expected per-firm profit in closed form for P(Q) = 1 - Q. Only valid at
/// s = 1; throws InvalidParameter otherwise.
double expected_profit_unit_closed_form(double s, double beta, double d,
                                        double low);

struct ProfitThresholds {
  double l1 = 0.0;  // below: profit increasing in d
  double l2 = 0.0;  // above: profit decreasing in d
};
ProfitThresholds profit_thresholds(double s);

/// N+1 symmetric producers with an exchangeable availability law.
enum class AvailabilityFamily { mixture, duopoly };

struct MultiMarketParams {
  DemandSpec demand;
  int n_plus_1 = 3;
  AvailabilityFamily family = AvailabilityFamily::mixture;
  double beta = 0.5;
  double d = 1.0;
  double low = 0.0;
  double high = 0.0;

  JointAvailability distribution() const;
  void validate() const;
};

EquilibriumResult solve_multi(const MultiMarketParams& params);

enum class SweepAxis { d, beta, low, high, cost, gamma, s };

SweepAxis parse_sweep_axis(const std::string& name);
std::string to_string(SweepAxis axis);
std::string to_string(AvailabilityFamily family);

/// Row status of a sweep; failing points are kept with NaN numbers.
inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusAssumption = "assumption_violation";
inline constexpr const char* kStatusSolver = "solver_failure";
inline constexpr const char* kStatusInvalid = "invalid_parameter";

/// Sets the axis field on a copy of the parameters. Throws InvalidParameter
/// for axes the market does not have.
DuopolyParams with_axis(DuopolyParams params, SweepAxis axis, double value);
MultiMarketParams with_axis(MultiMarketParams params, SweepAxis axis,
                            double value);
MixedMarketParams with_axis(MixedMarketParams params, SweepAxis axis,
                            double value);

/// Columns: <axis>, phi, E_welfare, E_price, E_profit, E_output, dphi_dd,
/// wd_welfare, sc_welfare, wd_price, sc_price, wd_profit, sc_profit, status,
/// note. Rows follow grid order. Throws InvalidParameter on an empty grid.
Table sweep_duopoly(const DuopolyParams& base, SweepAxis axis,
                    std::span<const double> grid);
/// Columns: <axis>, phi, E_welfare, E_price, E_profit, E_output, regime,
/// status, note.
Table sweep_multi(const MultiMarketParams& base, SweepAxis axis,
                  std::span<const double> grid);
/// Columns: <axis>, phi, x, E_price, E_welfare, E_profit_wind, E_profit_trad,
/// method, status, note.
Table sweep_mixed(const MixedMarketParams& base, SweepAxis axis,
                  std::span<const double> grid);

/// Appends `axis_value`, the cells pushed by `fill`, then status and note.
/// When `fill` throws a library error the row instead carries `numeric` NaNs
/// and `text` empty strings after the axis value.
void append_sweep_row(Table& table, double axis_value, std::size_t numeric,
                      std::size_t text,
                      const std::function<void(std::vector<Cell>&)>& fill);

/// True if any sweep row carries `status`.
bool has_status(const Table& table, const std::string& status);
/// Note of the first row with `status`, empty if none.
std::string first_note(const Table& table, const std::string& status);

}  // namespace windcournot
