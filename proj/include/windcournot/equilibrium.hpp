#pragma once

#include <string>

#include "windcournot/demand.hpp"
#include "windcournot/stochastic.hpp"

namespace windcournot {

/// Two-producer market with availabilities w_i ∈ {low, high}.
struct DuopolyParams {
  DemandSpec demand;
  double beta = 0.5;
  double d = 1.0;
  double low = 0.0;   // L
  double high = 0.0;  // H

  DuopolyCorrelation correlation() const { return {beta, d}; }
  /// Structural checks only: 0 < L < H and a valid correlation.
  void validate() const;
};

/// Low-state and high-state margins of the curtailment regime:
/// low  = P(2L) + L P'(2L)  (must be > 0: no curtailment when low)
/// high = P(H) + H P'(H)    (must be < 0: curtailment when high)
struct Assumption1Report {
  bool low_ok = false;
  bool high_ok = false;
  double low_margin = 0.0;
  double high_margin = 0.0;

  bool ok() const { return low_ok && high_ok; }
};

Assumption1Report check_assumption1(const DuopolyParams& params);

enum class SolveMethod { closed_form, bisection };

enum class Regime {
  curtailment,     // L < φ < H
  no_curtailment,  // FOC has no root below H; producers output q(w) = w
};

struct EquilibriumResult {
  double phi = 0.0;
  double low = 0.0;
  double foc_residual = 0.0;
  SolveMethod method = SolveMethod::bisection;
  Regime regime = Regime::curtailment;
  int iterations = 0;

  /// Symmetric strategy q(w) = min(w, φ) for the two availability levels.
  double output(State state) const { return state == State::high ? phi : low; }
};

/// Left side of the high-state first-order condition at candidate output x:
/// Pr{L|H}[P(L+x) + xP'(L+x)] + Pr{H|H}[P(2x) + xP'(2x)].
double duopoly_foc(const DuopolyParams& params, double x);

/// Symmetric Bayesian Nash equilibrium of the duopoly by bisection on [L, H].
/// Throws AssumptionViolation if check_assumption1 fails.
EquilibriumResult solve_phi_duopoly(const DuopolyParams& params,
                                    SolveMethod method = SolveMethod::bisection);

/// φ = (sβ + (s-L)(1-β)d) / (3β + 2(1-β)d) for P(Q) = s - Q.
double phi_closed_form_linear(double s, double beta, double d, double low);

/// Expected high-state first-order condition of the (N+1)-producer market.
double multi_foc(const JointAvailability& dist, const DemandSpec& demand,
                 double low, double x);

/// Low-state margin P((N+1)L) + L P'((N+1)L); positive means no low-state
/// curtailment.
double multi_low_margin(int n_plus_1, const DemandSpec& demand, double low);

/// Symmetric equilibrium of the (N+1)-producer market. A missing interior
/// root below H is returned as Regime::no_curtailment with φ = H.
EquilibriumResult solve_phi_multi(const JointAvailability& dist,
                                  const DemandSpec& demand, double low,
                                  double high);

/// q(w) = min(w, φ).
double strategy_output(double phi, double w);

std::string to_string(SolveMethod method);
std::string to_string(Regime regime);

inline constexpr double kFocResidualLimit = 1e-10;

}  // namespace windcournot
