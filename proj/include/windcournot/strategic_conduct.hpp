#pragma once

#include <span>
#include <string>
#include <vector>

#include "windcournot/analysis.hpp"
#include "windcournot/table.hpp"

namespace windcournot {

/// Collusion between two producers facing P(Q) = s - Q, with 0 < L < s/3.
struct CollusionParams {
  double s = 1.0;
  double beta = 0.5;
  double d = 1.0;
  double low = 0.0;
  double gamma = 0.0;  // expected collusion penalty

  void validate() const;
};

double monopoly_profit(double s);           // s²/4
double low_profit(double s, double low);    // (s - 2L)L

/// High-state output of the competitive (non-collusive) equilibrium.
double competitive_phi(const CollusionParams& params);

/// Bounds on the share t of pooled monopoly profit paid to a low-state
/// colluder. At d = 0 the high-state participation bound is +∞ and the
/// low-state bound is -∞ without a penalty, +∞ with one.
struct TransferBounds {
  double lb_irl = 0.0;
  double ub_ic = 0.0;
  double ub_irh = 0.0;
  bool feasible = false;  // lb_irl <= min(ub_ic, ub_irh) + 1e-12
  double interval_lo = 0.0;
  double interval_hi = 0.0;
  bool degenerate_full_correlation = false;
};

TransferBounds transfer_bounds(const CollusionParams& params);

/// Smallest penalty that empties the transfer interval. `binding` names the
/// upper bound that meets lb_irl: "ic" or "irh". Requires d > 0.
struct GammaHat {
  double value = 0.0;
  double bisection_value = 0.0;
  std::string binding;
};

GammaHat gamma_hat(const CollusionParams& params);

struct CollusionState {
  std::string label;  // producer 1 state first
  double probability = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double total = 0.0;
  double profit1 = 0.0;
  double profit2 = 0.0;
};

/// Monopoly output whenever a producer is high; mixed states split π_M as
/// (1-t) to the high producer and t to the low one.
std::vector<CollusionState> collusion_outcomes(const CollusionParams& params,
                                               double t);
std::vector<CollusionState> competitive_outcomes(const CollusionParams& params);

/// E[joint collusive profit] - E[joint competitive profit]. The transfer
/// cancels in the joint sum. With `subtract_penalty` the 2γ penalty is
/// deducted.
double collusion_value(const CollusionParams& params,
                       bool subtract_penalty = false);
/// E[U(Q_competitive)] - E[U(Q_collusive)].
double collusion_welfare_cost(const CollusionParams& params);

/// A quantity computed both in closed form and by state enumeration. The
/// closed form is NaN unless s = 1.
struct CheckedValue {
  double closed_form = 0.0;
  double enumerated = 0.0;
};

/// Expected welfare gain from publicly sharing availability. Throws
/// AssumptionViolation unless L < s/3, and SolverFailure if the two routes
/// disagree by more than 1e-12.
CheckedValue info_sharing_welfare_gain(double beta, double d, double low,
                                       double s = 1.0);
/// Combined expected profit gain of both producers from sharing.
CheckedValue info_sharing_profit_gain(double beta, double d, double low,
                                      double s = 1.0);
/// Sharing raises producer profit iff L < L*(β, d), for s = 1.
double l_star(double beta, double d);

CollusionParams with_axis(CollusionParams params, SweepAxis axis, double value);

/// Columns: <axis>, phi, lb_irl, ub_ic, ub_irh, gamma_hat, value,
/// welfare_cost, feasible, binding, status, note.
Table sweep_collusion(const CollusionParams& base, SweepAxis axis,
                      std::span<const double> grid);
/// Columns: <axis>, welfare_gain, profit_gain, l_star, status, note. Axes:
/// beta, d, L.
Table sweep_info_sharing(double beta, double d, double low, SweepAxis axis,
                         std::span<const double> grid);
/// L* on a β × d grid: column "beta" then one column per d value.
Table l_star_surface(std::span<const double> beta_grid,
                     std::span<const double> d_grid);

inline constexpr double kClosedFormAgreement = 1e-12;

}  // namespace windcournot
