#pragma once

#include <optional>
#include <string>

namespace windcournot {

enum class DemandKind { linear, quadratic };

/// Concave, strictly decreasing inverse demand.
///
/// linear:    P(Q) = s - Q
/// quadratic: P(Q) = s - aQ - bQ^2
///
/// Prices are returned as computed, negative values included; regime checks
/// elsewhere decide whether a negative price is acceptable.
struct DemandSpec {
  DemandKind kind = DemandKind::linear;
  double s = 1.0;
  double a = 1.0;
  double b = 0.0;

  static DemandSpec linear(double intercept);
  static DemandSpec quadratic(double intercept, double slope, double curvature);

  bool is_linear() const { return kind == DemandKind::linear; }
  // Slope of P used where closed forms assume P(Q) = s - Q.
  bool is_unit_linear() const;
};

double price(const DemandSpec& spec, double q);
double price_deriv(const DemandSpec& spec, double q);
double price_second_deriv(const DemandSpec& spec, double q);

/// U(Q) = ∫_0^Q P(q) dq.
double utility(const DemandSpec& spec, double q);

struct ConcavityReport {
  bool valid = true;
  std::optional<double> violation_at;
  std::string reason;
};

/// Decides P' < 0 and P'' <= 0 on [0, q_max] in closed form.
ConcavityReport validate_concavity(const DemandSpec& spec, double q_max);

std::string to_string(DemandKind kind);

}  // namespace windcournot
