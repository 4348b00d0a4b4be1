#include "windcournot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace windcournot::oracle {

namespace {

void require_grid(int grid_n) {
  if (grid_n < 100) throw InvalidParameter("oracle grid needs at least 100 steps");
}

// First index of the maximum of `value(k)` over k = 0..n.
template <typename F>
int argmax_index(int n, F&& value) {
  int best = 0;
  double best_value = value(0);
  for (int k = 1; k <= n; ++k) {
    const double v = value(k);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  return best;
}

template <typename BestResponse>
GridEquilibrium iterate_best_response(BestResponse&& respond, double start,
                                      double step, int max_iter) {
  GridEquilibrium out;
  out.grid_step = step;
  double prev = start;
  double current = respond(start);
  for (int it = 1; it <= max_iter; ++it) {
    const double next = respond(current);
    out.iterations = it;
    if (next == current) {
      out.phi_hat = current;
      out.converged = true;
      return out;
    }
    if (next == prev) {
      out.phi_hat = 0.5 * (current + next);
      out.converged = false;
      return out;
    }
    prev = current;
    current = next;
  }
  throw SolverFailure("best-response iteration exceeded its iteration budget");
}

}  // namespace

double expected_profit(const DuopolyParams& params, State own, double q,
                       double opponent_phi) {
  const DuopolyCorrelation corr = params.correlation();
  const double p_low = duopoly_conditional(corr, own, State::low);
  const double p_high = duopoly_conditional(corr, own, State::high);
  const double q_low = std::min(params.low, opponent_phi);
  const double q_high = std::min(params.high, opponent_phi);
  return q * (p_low * price(params.demand, q + q_low) +
              p_high * price(params.demand, q + q_high));
}

double best_response_grid(const DuopolyParams& params, double opponent_phi,
                          int grid_n) {
  require_grid(grid_n);
  const double lo = params.low;
  const double step = (params.high - params.low) / grid_n;
  const int k = argmax_index(grid_n, [&](int i) {
    return expected_profit(params, State::high, lo + i * step, opponent_phi);
  });
  return lo + k * step;
}

GridEquilibrium fixed_point_equilibrium(const DuopolyParams& params, int grid_n,
                                        int max_iter) {
  require_grid(grid_n);
  params.validate();
  return iterate_best_response(
      [&](double phi) { return best_response_grid(params, phi, grid_n); },
      params.high, (params.high - params.low) / grid_n, max_iter);
}

double best_response_grid_multi(const JointAvailability& dist,
                                const DemandSpec& demand, double low,
                                double high, double opponent_phi, int grid_n) {
  require_grid(grid_n);
  const std::vector<double> cond = conditional_given_high(dist);
  const int n = dist.n_plus_1() - 1;
  const double q_high = std::min(high, opponent_phi);
  const double q_low = std::min(low, opponent_phi);
  const double step = (high - low) / grid_n;
  const int k = argmax_index(grid_n, [&](int i) {
    const double q = low + i * step;
    double value = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double others = j * q_high + (n - j) * q_low;
      value += cond[static_cast<std::size_t>(j)] * q * price(demand, q + others);
    }
    return value;
  });
  return low + k * step;
}

GridEquilibrium fixed_point_equilibrium_multi(const JointAvailability& dist,
                                              const DemandSpec& demand,
                                              double low, double high,
                                              int grid_n, int max_iter) {
  require_grid(grid_n);
  // Simultaneous best-response dynamics oscillate once four or more producers
  // move together, so bracket the sign change of BR(φ) - φ instead. BR is
  // non-increasing in φ, which makes the gap monotone on the grid.
  const double step = (high - low) / grid_n;
  const auto gap = [&](int k) {
    const double phi = low + k * step;
    return best_response_grid_multi(dist, demand, low, high, phi, grid_n) - phi;
  };
  GridEquilibrium out;
  out.grid_step = step;
  int lo = 0;
  int hi = grid_n;
  if (gap(lo) <= 0.0 || gap(hi) >= 0.0) {
    // The fixed point sits on a grid edge.
    const int edge = gap(lo) <= 0.0 ? lo : hi;
    out.phi_hat = low + edge * step;
    out.converged = gap(edge) == 0.0;
    out.iterations = 1;
    return out;
  }
  while (hi - lo > 1) {
    if (++out.iterations > max_iter) {
      throw SolverFailure("grid fixed-point bracketing exceeded max_iter");
    }
    const int mid = lo + (hi - lo) / 2;
    const double g = gap(mid);
    if (g == 0.0) {
      out.phi_hat = low + mid * step;
      out.converged = true;
      return out;
    }
    (g > 0.0 ? lo : hi) = mid;
  }
  out.phi_hat = low + (lo + 0.5) * step;
  out.converged = false;
  return out;
}

LowStateCheck low_state_check(const DuopolyParams& params, double phi,
                              int grid_n) {
  require_grid(grid_n);
  const double step = params.low / grid_n;
  const int k = argmax_index(grid_n, [&](int i) {
    return expected_profit(params, State::low, i * step, phi);
  });
  LowStateCheck out;
  out.best_action = k == grid_n ? params.low : k * step;
  out.holds = k == grid_n;
  return out;
}

DeviationCheck deviation_check(const DuopolyParams& params, double phi,
                               int grid_n) {
  require_grid(grid_n);
  const double h = params.high;
  const double max_slope = std::max(std::abs(price_deriv(params.demand, 0.0)),
                                    std::abs(price_deriv(params.demand, 2.0 * h)));
  DeviationCheck out;
  out.tolerance = (h / grid_n) * max_slope * h;
  out.max_gain = -std::numeric_limits<double>::infinity();
  for (State own : {State::low, State::high}) {
    const double w = own == State::high ? params.high : params.low;
    const double prescribed = expected_profit(params, own, std::min(w, phi), phi);
    const double step = w / grid_n;
    for (int i = 0; i <= grid_n; ++i) {
      const double gain = expected_profit(params, own, i * step, phi) - prescribed;
      out.max_gain = std::max(out.max_gain, gain);
    }
  }
  out.holds = out.max_gain <= out.tolerance;
  return out;
}

TransferScan transfer_scan(const CollusionParams& params, double phi,
                           double t_from, double t_to, double step) {
  if (!(step > 0.0) || !(t_to >= t_from)) {
    throw InvalidParameter("transfer scan needs step > 0 and t_to >= t_from");
  }
  const DuopolyCorrelation corr{params.beta, params.d};
  const double p_hh = duopoly_conditional(corr, State::high, State::high);
  const double p_lh = duopoly_conditional(corr, State::high, State::low);
  const double p_hl = duopoly_conditional(corr, State::low, State::high);
  const double p_ll = duopoly_conditional(corr, State::low, State::low);
  const double s = params.s;
  const double low = params.low;
  const double pi_m = s * s / 4.0;
  const double pi_l = (s - 2.0 * low) * low;
  const double truthful_fixed = p_hh * pi_m / 2.0;

  TransferScan out;
  out.step = step;
  const auto count = static_cast<long>(std::floor((t_to - t_from) / step + 0.5));
  for (long i = 0; i <= count; ++i) {
    const double t = t_from + static_cast<double>(i) * step;
    const double truthful = truthful_fixed + p_lh * (pi_m - t * pi_m);
    const bool ic = truthful >= p_hh * t * pi_m + p_lh * pi_l;
    const bool irh = truthful - params.gamma >=
                     p_hh * phi * (s - 2.0 * phi) + p_lh * phi * (s - low - phi);
    const bool irl = p_hl * t * pi_m + p_ll * pi_l - params.gamma >=
                     p_hl * low * (s - phi - low) + p_ll * pi_l;
    if (ic && irh && irl) {
      if (!out.any_feasible) out.t_min = t;
      out.any_feasible = true;
      out.t_max = t;
    }
  }
  return out;
}

}  // namespace windcournot::oracle
