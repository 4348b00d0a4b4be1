#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "windcournot/demand.hpp"
#include "windcournot/equilibrium.hpp"

namespace testing_support {

// Seeded generator for property tests; each test owns its stream.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }
  bool coin() { return integer(0, 1) == 1; }

  windcournot::DemandSpec demand() {
    const double s = uniform(1.0, 5.0);
    if (coin()) return windcournot::DemandSpec::linear(s);
    return windcournot::DemandSpec::quadratic(s, uniform(0.3, 1.5), uniform(0.0, 0.3));
  }

  // Duopoly parameters inside the curtailment regime; rejection sampled.
  windcournot::DuopolyParams duopoly() {
    for (;;) {
      windcournot::DuopolyParams p;
      p.demand = demand();
      p.beta = uniform(0.05, 0.95);
      p.d = uniform(0.0, 1.0);
      p.low = uniform(0.02, 0.6) * p.demand.s / 2.0;
      p.high = uniform(0.5, 2.0) * p.demand.s;
      if (p.low < p.high && windcournot::check_assumption1(p).ok()) return p;
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline std::vector<double> steps(double from, double to, double step) {
  std::vector<double> out;
  const int n = static_cast<int>((to - from) / step + 0.5);
  for (int i = 0; i <= n; ++i) out.push_back(from + i * step);
  return out;
}

}  // namespace testing_support
