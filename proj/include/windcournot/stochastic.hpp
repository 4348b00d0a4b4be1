#pragma once

#include <span>
#include <vector>

namespace windcournot {

enum class State { low, high };

/// Two-producer availability law: prior β of the high state and dispersion d
/// (d = 0 perfectly correlated, d = 1 independent).
struct DuopolyCorrelation {
  double beta = 0.5;
  double d = 1.0;

  /// Throws InvalidParameter unless 0 < β < 1 and 0 <= d <= 1.
  void validate() const;
};

/// Pr{w_j = other | w_i = own}.
double duopoly_conditional(const DuopolyCorrelation& corr, State own,
                           State other);

/// Joint law over (w_1, w_2). lh is Pr{w_1 = L, w_2 = H}.
struct DuopolyJoint {
  double ll = 0.0;
  double lh = 0.0;
  double hl = 0.0;
  double hh = 0.0;
};

DuopolyJoint duopoly_joint(const DuopolyCorrelation& corr);

/// ∂Pr{L,H}/∂d; also equals -∂Pr{L,L}/∂d and -∂Pr{H,H}/∂d.
double zeta(const DuopolyCorrelation& corr);

/// Exchangeable law of N+1 binary availabilities, stored as the distribution
/// of S, the number of producers in the high state. A configuration with k
/// highs has probability count_probs[k] / C(N+1, k).
class JointAvailability {
 public:
  /// Throws InvalidParameter if the counts are not a distribution over
  /// {0..n_plus_1} or the implied marginal is not in (0,1).
  JointAvailability(int n_plus_1, std::vector<double> count_probs);

  int n_plus_1() const { return n_plus_1_; }
  const std::vector<double>& count_probs() const { return count_probs_; }
  /// Marginal probability that a given producer is high: E[S] / (N+1).
  double beta() const;

 private:
  int n_plus_1_;
  std::vector<double> count_probs_;
};

/// Common-shock mixture: with weight 1-d all producers share one
/// Bernoulli(β) draw, with weight d they are i.i.d. Bernoulli(β).
JointAvailability mixture_family(int n_plus_1, double beta, double d);

/// The two-producer law of `duopoly_joint` as a count distribution.
JointAvailability duopoly_family(const DuopolyCorrelation& corr);

/// Pr{S_{-i} = j | w_i = H} for j = 0..N.
std::vector<double> conditional_given_high(const JointAvailability& dist);

/// First-order dominance: conditional on the own high state, the lower-dispersion
/// law of S_{-i} first-order dominates the higher-dispersion one.
bool check_fosd(std::span<const double> cond_low_d,
                std::span<const double> cond_high_d);

/// Second-order dominance: the higher-dispersion law of S second-order dominates.
bool check_sosd(std::span<const double> count_low_d,
                std::span<const double> count_high_d);

inline constexpr double kDominanceTolerance = 1e-12;

}  // namespace windcournot
