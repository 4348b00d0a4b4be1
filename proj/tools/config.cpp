#include "config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace windcournot::cli {

namespace {

using nlohmann::json;

void require_object(const json& node, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!node.is_object()) throw ConfigError(where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : node.items()) {
    if (keys.count(key) == 0) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& node, const char* key, std::optional<T>& slot,
          const std::string& where) {
  if (!node.contains(key)) return;
  const json& value = node.at(key);
  const std::string name = where + "." + key;
  if constexpr (std::is_same_v<T, std::string>) {
    if (!value.is_string()) throw ConfigError(name + " must be a string");
    slot = value.get<std::string>();
  } else if constexpr (std::is_same_v<T, int>) {
    if (!value.is_number_integer()) throw ConfigError(name + " must be an integer");
    slot = value.get<int>();
  } else {
    if (!value.is_number()) throw ConfigError(name + " must be a number");
    slot = value.get<double>();
  }
}

GridSpec read_grid(const json& node, const std::string& where) {
  require_object(node, where, {"from", "to", "steps"});
  GridSpec grid;
  read(node, "from", grid.from, where);
  read(node, "to", grid.to, where);
  read(node, "steps", grid.steps, where);
  return grid;
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

void take_grid(GridSpec& dst, const GridSpec& src) {
  take(dst.from, src.from);
  take(dst.to, src.to);
  take(dst.steps, src.steps);
}

}  // namespace

RunConfig parse_config(const json& doc) {
  require_object(doc, "config",
                 {"market", "demand", "beta", "d", "L", "H", "c", "gamma",
                  "n_plus_1", "family", "availability", "sweep", "beta_grid",
                  "d_grid", "method", "format", "output", "grid"});
  RunConfig cfg;
  read(doc, "market", cfg.market, "config");
  if (doc.contains("demand")) {
    const json& dem = doc.at("demand");
    require_object(dem, "config.demand", {"kind", "s", "a", "b"});
    read(dem, "kind", cfg.demand.kind, "config.demand");
    read(dem, "s", cfg.demand.s, "config.demand");
    read(dem, "a", cfg.demand.a, "config.demand");
    read(dem, "b", cfg.demand.b, "config.demand");
  }
  read(doc, "beta", cfg.beta, "config");
  read(doc, "d", cfg.d, "config");
  read(doc, "L", cfg.low, "config");
  read(doc, "H", cfg.high, "config");
  read(doc, "c", cfg.cost, "config");
  read(doc, "gamma", cfg.gamma, "config");
  read(doc, "n_plus_1", cfg.n_plus_1, "config");
  read(doc, "family", cfg.family, "config");
  if (doc.contains("availability")) {
    const json& av = doc.at("availability");
    require_object(av, "config.availability", {"n_plus_1", "count_probs"});
    if (!av.contains("n_plus_1") || !av.at("n_plus_1").is_number_integer()) {
      throw ConfigError("config.availability.n_plus_1 must be an integer");
    }
    if (!av.contains("count_probs") || !av.at("count_probs").is_array()) {
      throw ConfigError("config.availability.count_probs must be an array");
    }
    AvailabilityConfig out;
    out.n_plus_1 = av.at("n_plus_1").get<int>();
    for (const json& p : av.at("count_probs")) {
      if (!p.is_number()) {
        throw ConfigError("config.availability.count_probs must hold numbers");
      }
      out.count_probs.push_back(p.get<double>());
    }
    cfg.availability = std::move(out);
  }
  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    require_object(sw, "config.sweep", {"over", "from", "to", "steps"});
    read(sw, "over", cfg.sweep.over, "config.sweep");
    read(sw, "from", cfg.sweep.grid.from, "config.sweep");
    read(sw, "to", cfg.sweep.grid.to, "config.sweep");
    read(sw, "steps", cfg.sweep.grid.steps, "config.sweep");
  }
  if (doc.contains("beta_grid")) cfg.beta_grid = read_grid(doc.at("beta_grid"), "config.beta_grid");
  if (doc.contains("d_grid")) cfg.d_grid = read_grid(doc.at("d_grid"), "config.d_grid");
  read(doc, "method", cfg.method, "config");
  read(doc, "format", cfg.format, "config");
  read(doc, "output", cfg.output, "config");
  read(doc, "grid", cfg.grid, "config");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_config(doc);
}

RunConfig merge(RunConfig base, const RunConfig& o) {
  take(base.market, o.market);
  take(base.demand.kind, o.demand.kind);
  take(base.demand.s, o.demand.s);
  take(base.demand.a, o.demand.a);
  take(base.demand.b, o.demand.b);
  take(base.beta, o.beta);
  take(base.d, o.d);
  take(base.low, o.low);
  take(base.high, o.high);
  take(base.cost, o.cost);
  take(base.gamma, o.gamma);
  take(base.n_plus_1, o.n_plus_1);
  take(base.family, o.family);
  take(base.availability, o.availability);
  take(base.sweep.over, o.sweep.over);
  take_grid(base.sweep.grid, o.sweep.grid);
  take_grid(base.beta_grid, o.beta_grid);
  take_grid(base.d_grid, o.d_grid);
  take(base.method, o.method);
  take(base.format, o.format);
  take(base.output, o.output);
  take(base.grid, o.grid);
  return base;
}

}  // namespace windcournot::cli
