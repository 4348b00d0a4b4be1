#include "windcournot/stochastic.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "windcournot/errors.hpp"

namespace windcournot {

namespace {

// Pr{S > j} for j = 0..size-1.
std::vector<double> tail_sums(std::span<const double> probs) {
  std::vector<double> tails(probs.size(), 0.0);
  double acc = 0.0;
  for (std::size_t j = probs.size(); j-- > 0;) {
    tails[j] = acc;
    acc += probs[j];
  }
  return tails;
}

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidParameter("dominance check needs two distributions of equal length");
  }
}

}  // namespace

void DuopolyCorrelation::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) {
    throw InvalidParameter("beta must lie in (0,1), got " + std::to_string(beta));
  }
  if (!(d >= 0.0 && d <= 1.0)) {
    throw InvalidParameter("d must lie in [0,1], got " + std::to_string(d));
  }
}

double duopoly_conditional(const DuopolyCorrelation& corr, State own,
                           State other) {
  corr.validate();
  const double denom = corr.beta + corr.d * (1.0 - corr.beta);
  const double high_given_own =
      own == State::high ? corr.beta / denom : corr.d * corr.beta / denom;
  return other == State::high ? high_given_own : 1.0 - high_given_own;
}

DuopolyJoint duopoly_joint(const DuopolyCorrelation& corr) {
  corr.validate();
  const double beta = corr.beta;
  const double denom = beta + corr.d * (1.0 - beta);
  DuopolyJoint joint;
  joint.hh = beta * beta / denom;
  joint.lh = (1.0 - beta) * corr.d * beta / denom;
  joint.hl = joint.lh;
  joint.ll = (1.0 - beta) * (1.0 - corr.d * beta / denom);
  return joint;
}

double zeta(const DuopolyCorrelation& corr) {
  corr.validate();
  const double denom = corr.beta + corr.d * (1.0 - corr.beta);
  return corr.beta * corr.beta * (1.0 - corr.beta) / (denom * denom);
}

JointAvailability::JointAvailability(int n_plus_1, std::vector<double> count_probs)
    : n_plus_1_(n_plus_1), count_probs_(std::move(count_probs)) {
  if (n_plus_1_ < 2) {
    throw InvalidParameter("n_plus_1 must be at least 2");
  }
  if (count_probs_.size() != static_cast<std::size_t>(n_plus_1_) + 1) {
    throw InvalidParameter("count_probs must have n_plus_1 + 1 entries");
  }
  double total = 0.0;
  for (double p : count_probs_) {
    if (!(p >= 0.0)) {
      throw InvalidParameter("count_probs entries must be non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidParameter("count_probs must sum to 1");
  }
  const double marginal = beta();
  if (!(marginal > 0.0 && marginal < 1.0)) {
    throw InvalidParameter("implied marginal beta must lie in (0,1)");
  }
}

double JointAvailability::beta() const {
  double mean = 0.0;
  for (std::size_t k = 0; k < count_probs_.size(); ++k) {
    mean += static_cast<double>(k) * count_probs_[k];
  }
  return mean / n_plus_1_;
}

JointAvailability mixture_family(int n_plus_1, double beta, double d) {
  DuopolyCorrelation{beta, d}.validate();
  if (n_plus_1 < 2) {
    throw InvalidParameter("n_plus_1 must be at least 2");
  }
  const auto n = static_cast<std::size_t>(n_plus_1);
  std::vector<double> probs(n + 1, 0.0);
  // Binomial(n, β) pmf by the ratio recursion C(n,k+1)/C(n,k) = (n-k)/(k+1).
  double coeff = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const double binom = coeff * std::pow(beta, static_cast<double>(k)) *
                         std::pow(1.0 - beta, static_cast<double>(n - k));
    probs[k] = d * binom;
    coeff = coeff * static_cast<double>(n - k) / static_cast<double>(k + 1);
  }
  probs[0] += (1.0 - d) * (1.0 - beta);
  probs[n] += (1.0 - d) * beta;
  return JointAvailability(n_plus_1, std::move(probs));
}

JointAvailability duopoly_family(const DuopolyCorrelation& corr) {
  const DuopolyJoint joint = duopoly_joint(corr);
  return JointAvailability(2, {joint.ll, joint.lh + joint.hl, joint.hh});
}

std::vector<double> conditional_given_high(const JointAvailability& dist) {
  const int n_plus_1 = dist.n_plus_1();
  const double marginal = dist.beta();
  const auto& counts = dist.count_probs();
  std::vector<double> cond(static_cast<std::size_t>(n_plus_1), 0.0);
  for (int j = 0; j < n_plus_1; ++j) {
    cond[static_cast<std::size_t>(j)] =
        counts[static_cast<std::size_t>(j) + 1] * (j + 1) / (n_plus_1 * marginal);
  }
  return cond;
}

bool check_fosd(std::span<const double> cond_low_d,
                std::span<const double> cond_high_d) {
  require_same_length(cond_low_d, cond_high_d);
  const auto tail_low = tail_sums(cond_low_d);
  const auto tail_high = tail_sums(cond_high_d);
  for (std::size_t j = 0; j < tail_low.size(); ++j) {
    if (tail_low[j] < tail_high[j] - kDominanceTolerance) {
      return false;
    }
  }
  return true;
}

bool check_sosd(std::span<const double> count_low_d,
                std::span<const double> count_high_d) {
  require_same_length(count_low_d, count_high_d);
  const auto tail_low = tail_sums(count_low_d);
  const auto tail_high = tail_sums(count_high_d);
  double cumulative = 0.0;
  for (std::size_t m = 0; m < tail_low.size(); ++m) {
    cumulative += tail_high[m] - tail_low[m];
    if (cumulative < -kDominanceTolerance) {
      return false;
    }
  }
  return true;
}

}  // namespace windcournot
