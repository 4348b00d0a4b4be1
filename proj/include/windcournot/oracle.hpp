#pragma once

#include "windcournot/equilibrium.hpp"
#include "windcournot/errors.hpp"
#include "windcournot/stochastic.hpp"
#include "windcournot/strategic_conduct.hpp"

// Brute-force checks that evaluate raw expected profits only. Nothing here
// calls a first-order condition.
namespace windcournot::oracle {

/// E[q·P(q + min(w_j, opponent_phi)) | w_i = own].
double expected_profit(const DuopolyParams& params, State own, double q,
                       double opponent_phi);

/// argmax over {L + k(H-L)/grid_n : k = 0..grid_n} of the high-state
/// expected profit; ties go to the smaller action. grid_n >= 100.
double best_response_grid(const DuopolyParams& params, double opponent_phi,
                          int grid_n);

struct GridEquilibrium {
  double phi_hat = 0.0;
  double grid_step = 0.0;
  int iterations = 0;
  bool converged = false;  // false: a 2-cycle was found, phi_hat is its midpoint
};

/// Best-response iteration from φ_0 = H. Throws SolverFailure once max_iter
/// is exceeded without a fixed point or 2-cycle.
GridEquilibrium fixed_point_equilibrium(const DuopolyParams& params, int grid_n,
                                        int max_iter = 1000);

/// High-state best response in the (N+1)-producer market when every
/// opponent plays min(w, opponent_phi).
double best_response_grid_multi(const JointAvailability& dist,
                                const DemandSpec& demand, double low,
                                double high, double opponent_phi, int grid_n);

/// Bisects over grid indices for the sign change of BR(φ) - φ. converged
/// means a grid point is its own best response; otherwise phi_hat is the
/// midpoint of the bracketing cell.
GridEquilibrium fixed_point_equilibrium_multi(const JointAvailability& dist,
                                              const DemandSpec& demand,
                                              double low, double high,
                                              int grid_n, int max_iter = 1000);

struct LowStateCheck {
  double best_action = 0.0;
  bool holds = false;  // best action on [0, L] is L itself
};

/// Exhaustive search over {kL/grid_n} for a low-state producer facing an
/// opponent who plays min(w, phi).
LowStateCheck low_state_check(const DuopolyParams& params, double phi,
                              int grid_n);

struct DeviationCheck {
  double max_gain = 0.0;   // best grid profit minus prescribed profit
  double tolerance = 0.0;  // step·max|P'|·H with step = H/grid_n
  bool holds = false;
};

/// For each own state w, searches [0, w] on a grid for an action beating
/// min(w, phi) against an opponent playing min(w_j, phi).
DeviationCheck deviation_check(const DuopolyParams& params, double phi,
                               int grid_n);

/// (f(x+h) - f(x-h)) / 2h.
template <typename F>
double central_difference(F&& f, double x, double h) {
  if (!(h > 0.0)) throw InvalidParameter("step h must be positive");
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct TransferScan {
  bool any_feasible = false;
  double t_min = 0.0;  // smallest feasible t on the scan grid
  double t_max = 0.0;  // largest feasible t on the scan grid
  double step = 0.0;
};

/// Scans t over [t_from, t_to] and tests the raw incentive and participation
/// inequalities at competitive high-state output phi.
TransferScan transfer_scan(const CollusionParams& params, double phi,
                           double t_from = -1.0, double t_to = 2.0,
                           double step = 1e-5);

}  // namespace windcournot::oracle
