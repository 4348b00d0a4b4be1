#pragma once

#include <string>

#include "windcournot/demand.hpp"
#include "windcournot/equilibrium.hpp"
#include "windcournot/stochastic.hpp"

namespace windcournot {

/// Two wind producers plus a traditional generator with constant marginal
/// cost c and unbounded capacity.
struct MixedMarketParams {
  DemandSpec demand;
  double beta = 0.5;
  double d = 1.0;
  double low = 0.0;
  double high = 0.0;
  double cost = 0.0;  // c

  DuopolyCorrelation correlation() const { return {beta, d}; }
  void validate() const;
};

struct Assumption4Report {
  bool cost_ok = false;  // c < P(2H)
  bool low_ok = false;   // P(3L) + L P'(3L) > 0
  bool high_ok = false;  // P(H+L+x̲) + H P'(H+L+x̲) < 0
  double x_floor = 0.0;  // x̲
  double cost_margin = 0.0;
  double low_margin = 0.0;
  double high_margin = 0.0;

  bool ok() const { return cost_ok && low_ok && high_ok; }
};

/// Evaluates the three regime conditions. x̲ solves
/// E[P(w1+w2+x) + xP'(w1+w2+x)] = c over the availability law, clamped at 0.
Assumption4Report check_assumption4(const MixedMarketParams& params);

enum class MixedMethod { automatic, closed_form, iterative };

struct MixedResult {
  double phi = 0.0;
  double x = 0.0;
  double residual_wind = 0.0;  // wind high-state FOC at (φ, x)
  double residual_trad = 0.0;  // traditional FOC; complementarity residual if x = 0
  bool x_at_boundary = false;
  double low_state_margin = 0.0;  // low wind producer's marginal profit at L
  int outer_iterations = 0;
  MixedMethod method = MixedMethod::automatic;
  Assumption4Report assumption4;
};

/// Wind producer high-state FOC at (φ, x).
double wind_foc(const MixedMarketParams& params, double phi, double x);
/// Traditional generator FOC at (φ, x), cost included.
double trad_foc(const MixedMarketParams& params, double phi, double x);

/// Solves the two-equation equilibrium system. Linear demand uses the closed
/// forms under MixedMethod::automatic; otherwise coordinates alternate
/// between bisection in φ and bisection in x until both move < 1e-11.
/// Throws AssumptionViolation when the solution leaves the curtailment regime
/// (no interior φ below H, or a low-state producer would curtail).
MixedResult solve_mixed(const MixedMarketParams& params,
                        MixedMethod method = MixedMethod::automatic);

struct MixedClosedForm {
  double phi = 0.0;
  double x = 0.0;
};

MixedClosedForm mixed_closed_form_linear(double s, double c, double beta,
                                         double d, double low);

/// ∂φ/∂d for linear demand.
double dphi_dd_linear(double s, double c, double beta, double d, double low);
/// ∂x/∂d = -β ∂φ/∂d for linear demand.
double dx_dd_linear(double s, double c, double beta, double d, double low);

std::string to_string(MixedMethod method);

}  // namespace windcournot
