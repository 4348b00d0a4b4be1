#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace windcournot::cli {

/// Malformed config file or flag combination; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridSpec {
  std::optional<double> from;
  std::optional<double> to;
  std::optional<int> steps;
};

struct SweepSpec {
  std::optional<std::string> over;
  GridSpec grid;
};

struct DemandConfig {
  std::optional<std::string> kind;
  std::optional<double> s;
  std::optional<double> a;
  std::optional<double> b;
};

struct AvailabilityConfig {
  int n_plus_1 = 0;
  std::vector<double> count_probs;
};

/// Every field is optional here; subcommands decide what they require.
struct RunConfig {
  std::optional<std::string> market;
  DemandConfig demand;
  std::optional<double> beta;
  std::optional<double> d;
  std::optional<double> low;
  std::optional<double> high;
  std::optional<double> cost;
  std::optional<double> gamma;
  std::optional<int> n_plus_1;
  std::optional<std::string> family;
  std::optional<AvailabilityConfig> availability;
  SweepSpec sweep;
  GridSpec beta_grid;
  GridSpec d_grid;
  std::optional<std::string> method;
  std::optional<std::string> format;
  std::optional<std::string> output;
  std::optional<int> grid;
};

/// Rejects unknown keys and wrongly typed values with ConfigError.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Fields set in `overrides` replace those in `base`.
RunConfig merge(RunConfig base, const RunConfig& overrides);

}  // namespace windcournot::cli
