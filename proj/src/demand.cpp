#include "windcournot/demand.hpp"

#include <cmath>

#include "windcournot/errors.hpp"

namespace windcournot {

DemandSpec DemandSpec::linear(double intercept) {
  return DemandSpec{DemandKind::linear, intercept, 1.0, 0.0};
}

DemandSpec DemandSpec::quadratic(double intercept, double slope,
                                 double curvature) {
  if (slope < 0.0 || curvature < 0.0) {
    throw InvalidParameter(
        "quadratic demand needs a >= 0 and b >= 0 (P' < 0, P'' <= 0)");
  }
  return DemandSpec{DemandKind::quadratic, intercept, slope, curvature};
}

bool DemandSpec::is_unit_linear() const {
  return kind == DemandKind::linear || (a == 1.0 && b == 0.0);
}

double price(const DemandSpec& spec, double q) {
  switch (spec.kind) {
    case DemandKind::linear:
      return spec.s - q;
    case DemandKind::quadratic:
      return spec.s - spec.a * q - spec.b * q * q;
  }
  return 0.0;
}

double price_deriv(const DemandSpec& spec, double q) {
  switch (spec.kind) {
    case DemandKind::linear:
      return -1.0;
    case DemandKind::quadratic:
      return -spec.a - 2.0 * spec.b * q;
  }
  return 0.0;
}

double price_second_deriv(const DemandSpec& spec, double /*q*/) {
  switch (spec.kind) {
    case DemandKind::linear:
      return 0.0;
    case DemandKind::quadratic:
      return -2.0 * spec.b;
  }
  return 0.0;
}

double utility(const DemandSpec& spec, double q) {
  switch (spec.kind) {
    case DemandKind::linear:
      return spec.s * q - 0.5 * q * q;
    case DemandKind::quadratic:
      return spec.s * q - 0.5 * spec.a * q * q - spec.b * q * q * q / 3.0;
  }
  return 0.0;
}

ConcavityReport validate_concavity(const DemandSpec& spec, double q_max) {
  if (!(q_max > 0.0)) {
    throw InvalidParameter("validate_concavity needs q_max > 0");
  }
  ConcavityReport report;
  if (spec.kind == DemandKind::linear) {
    return report;
  }
  // P'' = -2b is constant; P' = -a - 2bq is monotone in q, so both
  // conditions are decided at the endpoints of [0, q_max].
  if (spec.b < 0.0) {
    report.valid = false;
    report.violation_at = 0.0;
    report.reason = "P'' > 0 (b < 0)";
    return report;
  }
  if (price_deriv(spec, 0.0) >= 0.0) {
    report.valid = false;
    report.violation_at = 0.0;
    report.reason = "P'(0) >= 0 (need a > 0)";
    return report;
  }
  if (price_deriv(spec, q_max) >= 0.0) {
    report.valid = false;
    report.violation_at = q_max;
    report.reason = "P'(q_max) >= 0";
  }
  return report;
}

std::string to_string(DemandKind kind) {
  return kind == DemandKind::linear ? "linear" : "quadratic";
}

}  // namespace windcournot
