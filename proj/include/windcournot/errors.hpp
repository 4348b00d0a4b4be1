#pragma once

#include <stdexcept>
#include <string>

namespace windcournot {

/// A parameter is outside its documented domain (β ∉ (0,1), L ≥ H, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The parameters are well formed but the market is not in the regime the
/// equilibrium characterization covers (e.g. low-state curtailment).
class AssumptionViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A numerical routine failed to meet its tolerance or iteration budget.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace windcournot
