#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "config.hpp"
#include "json.hpp"
#include "windcournot/analysis.hpp"
#include "windcournot/equilibrium.hpp"
#include "windcournot/errors.hpp"
#include "windcournot/mixed_market.hpp"
#include "windcournot/numeric.hpp"
#include "windcournot/oracle.hpp"
#include "windcournot/stochastic.hpp"
#include "windcournot/strategic_conduct.hpp"
#include "windcournot/table.hpp"

namespace windcournot::cli {

namespace {

using json = nlohmann::ordered_json;

// Raised when a check reports failure after the output was produced.
class Flagged : public std::runtime_error {
 public:
  Flagged(int code, std::string kind, const std::string& message)
      : std::runtime_error(message), code_(code), kind_(std::move(kind)) {}
  int code() const { return code_; }
  const std::string& kind() const { return kind_; }

 private:
  int code_;
  std::string kind_;
};

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <typename T>
T need(const std::optional<T>& v, const char* key) {
  if (!v) throw ConfigError(std::string("missing required key: ") + key);
  return *v;
}

// Value of an optional field, or 0 when the sweep axis will overwrite it.
double need_unless(const std::optional<double>& v, const char* key,
                   std::optional<SweepAxis> axis, SweepAxis field) {
  if (axis && *axis == field && !v) return 0.0;
  return need(v, key);
}

enum class Format { csv, json };

Format output_format(const RunConfig& cfg, Format fallback) {
  if (!cfg.format) return fallback;
  if (*cfg.format == "csv") return Format::csv;
  if (*cfg.format == "json") return Format::json;
  throw ConfigError("format must be csv or json");
}

DemandSpec make_demand(const RunConfig& cfg) {
  const std::string kind = cfg.demand.kind.value_or("linear");
  const double s = cfg.demand.s.value_or(1.0);
  if (kind == "linear") {
    if (cfg.demand.a || cfg.demand.b) {
      throw ConfigError("linear demand takes no a or b coefficients");
    }
    return DemandSpec::linear(s);
  }
  if (kind == "quadratic") {
    return DemandSpec::quadratic(s, cfg.demand.a.value_or(1.0),
                                 cfg.demand.b.value_or(0.0));
  }
  throw ConfigError("demand.kind must be linear or quadratic");
}

std::optional<SweepAxis> sweep_axis(const RunConfig& cfg) {
  return parse_sweep_axis(cfg.sweep.over.value_or("d"));
}

std::vector<double> sweep_grid(const RunConfig& cfg, SweepAxis axis) {
  const GridSpec& g = cfg.sweep.grid;
  double from = 0.0;
  double to = 1.0;
  if (axis != SweepAxis::d || g.from || g.to) {
    from = need(g.from, "sweep.from");
    to = need(g.to, "sweep.to");
  }
  const int steps = g.steps.value_or(41);
  if (steps < 1) throw ConfigError("sweep.steps must be at least 1");
  return linspace(from, to, static_cast<std::size_t>(steps));
}

std::vector<double> unit_grid(const GridSpec& g, double from, double to,
                              int steps, const char* key) {
  const int n = g.steps.value_or(steps);
  if (n < 1) throw ConfigError(std::string(key) + ".steps must be at least 1");
  return linspace(g.from.value_or(from), g.to.value_or(to),
                  static_cast<std::size_t>(n));
}

DuopolyParams duopoly_params(const RunConfig& cfg, std::optional<SweepAxis> axis) {
  DuopolyParams p;
  p.demand = make_demand(cfg);
  p.beta = need_unless(cfg.beta, "beta", axis, SweepAxis::beta);
  p.d = need_unless(cfg.d, "d", axis, SweepAxis::d);
  p.low = need_unless(cfg.low, "L", axis, SweepAxis::low);
  p.high = need_unless(cfg.high, "H", axis, SweepAxis::high);
  return p;
}

AvailabilityFamily parse_family(const std::optional<std::string>& name) {
  const std::string f = name.value_or("mixture");
  if (f == "mixture") return AvailabilityFamily::mixture;
  if (f == "duopoly") return AvailabilityFamily::duopoly;
  throw ConfigError("family must be mixture or duopoly");
}

MultiMarketParams multi_params(const RunConfig& cfg, std::optional<SweepAxis> axis) {
  MultiMarketParams p;
  p.demand = make_demand(cfg);
  p.n_plus_1 = need(cfg.n_plus_1, "n_plus_1");
  p.family = parse_family(cfg.family);
  p.beta = need_unless(cfg.beta, "beta", axis, SweepAxis::beta);
  p.d = need_unless(cfg.d, "d", axis, SweepAxis::d);
  p.low = need_unless(cfg.low, "L", axis, SweepAxis::low);
  p.high = need_unless(cfg.high, "H", axis, SweepAxis::high);
  return p;
}

MixedMarketParams mixed_params(const RunConfig& cfg, std::optional<SweepAxis> axis) {
  MixedMarketParams p;
  p.demand = make_demand(cfg);
  p.beta = need_unless(cfg.beta, "beta", axis, SweepAxis::beta);
  p.d = need_unless(cfg.d, "d", axis, SweepAxis::d);
  p.low = need_unless(cfg.low, "L", axis, SweepAxis::low);
  p.high = need_unless(cfg.high, "H", axis, SweepAxis::high);
  p.cost = need_unless(cfg.cost, "c", axis, SweepAxis::cost);
  return p;
}

CollusionParams collusion_params(const RunConfig& cfg, std::optional<SweepAxis> axis) {
  if (cfg.demand.kind && *cfg.demand.kind != "linear") {
    throw ConfigError("collusion and information sharing need linear demand");
  }
  CollusionParams p;
  p.s = cfg.demand.s.value_or(1.0);
  p.beta = need_unless(cfg.beta, "beta", axis, SweepAxis::beta);
  p.d = need_unless(cfg.d, "d", axis, SweepAxis::d);
  p.low = need_unless(cfg.low, "L", axis, SweepAxis::low);
  p.gamma = cfg.gamma.value_or(0.0);
  return p;
}

MixedMethod parse_mixed_method(const std::optional<std::string>& m) {
  const std::string name = m.value_or("automatic");
  if (name == "automatic") return MixedMethod::automatic;
  if (name == "closed_form") return MixedMethod::closed_form;
  if (name == "iterative") return MixedMethod::iterative;
  throw ConfigError("mixed method must be automatic, closed_form or iterative");
}

json expectations_json(const ExpectationReport& ex, bool with_trad) {
  json states = json::array();
  for (const StateRow& row : ex.per_state_table) {
    json profits = json::array();
    for (double p : row.profits) profits.push_back(num(p));
    states.push_back({{"state", row.label},
                      {"probability", num(row.probability)},
                      {"total_output", num(row.total_output)},
                      {"price", num(row.price)},
                      {"welfare", num(row.welfare)},
                      {"profits", profits}});
  }
  json out = {{"e_welfare", num(ex.e_welfare)},
              {"e_price", num(ex.e_price)},
              {"e_profit_per_firm", num(ex.e_profit_per_firm)},
              {"e_total_output", num(ex.e_total_output)}};
  if (with_trad) out["e_profit_trad"] = num(ex.e_profit_trad);
  out["states"] = states;
  return out;
}

json decomposition_json(const DecompositionReport& r) {
  return {{"wd_term", num(r.wd_term)}, {"sc_term", num(r.sc_term)},
          {"total", num(r.total)}};
}

// Nested JSON flattened to key,value rows with dotted keys.
void flatten(const json& node, const std::string& prefix, Table& table) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      flatten(value, prefix.empty() ? key : prefix + "." + key, table);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      flatten(node[i], prefix + "." + std::to_string(i), table);
    }
  } else if (node.is_number()) {
    table.add_row({prefix, node.get<double>()});
  } else if (node.is_null()) {
    table.add_row({prefix, std::string("null")});
  } else if (node.is_boolean()) {
    table.add_row({prefix, std::string(node.get<bool>() ? "true" : "false")});
  } else {
    table.add_row({prefix, node.get<std::string>()});
  }
}

void emit_document(const json& doc, Format format, std::ostream& out) {
  if (format == Format::json) {
    out << doc.dump(2) << '\n';
    return;
  }
  Table table({"key", "value"});
  flatten(doc, "", table);
  table.write_csv(out);
}

void emit_table(const Table& table, Format format, std::ostream& out) {
  if (format == Format::json) {
    table.write_json(out);
  } else {
    table.write_csv(out);
  }
}

// Exit-code escalation for sweep rows that failed.
void check_sweep_rows(const Table& table) {
  if (has_status(table, kStatusAssumption)) {
    throw Flagged(kExitAssumption, "assumption_violation",
                  first_note(table, kStatusAssumption));
  }
  if (has_status(table, kStatusInvalid)) {
    throw Flagged(kExitConfig, "invalid_parameter", first_note(table, kStatusInvalid));
  }
  if (has_status(table, kStatusSolver)) {
    throw Flagged(kExitSolver, "solver_failure", first_note(table, kStatusSolver));
  }
}

// ---- subcommands -------------------------------------------------------

void duopoly_solve(const RunConfig& cfg, std::ostream& out) {
  const DuopolyParams p = duopoly_params(cfg, std::nullopt);
  SolveMethod method = p.demand.is_unit_linear() ? SolveMethod::closed_form
                                                 : SolveMethod::bisection;
  if (cfg.method) {
    if (*cfg.method == "closed_form") {
      method = SolveMethod::closed_form;
    } else if (*cfg.method == "bisection") {
      method = SolveMethod::bisection;
    } else {
      throw ConfigError("duopoly method must be closed_form or bisection");
    }
  }
  const Assumption1Report a1 = check_assumption1(p);
  const EquilibriumResult eq = solve_phi_duopoly(p, method);
  const ExpectationReport ex = expectations_duopoly(p, eq);
  const DecompositionReport w = decompose_welfare_derivative(p);
  json doc = {
      {"market", "duopoly"},
      {"phi", num(eq.phi)},
      {"regime", to_string(eq.regime)},
      {"method", to_string(eq.method)},
      {"foc_residual", num(eq.foc_residual)},
      {"iterations", eq.iterations},
      {"assumption1",
       {{"low_ok", a1.low_ok},
        {"high_ok", a1.high_ok},
        {"low_margin", num(a1.low_margin)},
        {"high_margin", num(a1.high_margin)}}},
      {"expectations", expectations_json(ex, false)},
      {"dphi_dd", num(w.dphi_dd)},
      {"decomposition",
       {{"welfare", decomposition_json(w)},
        {"price", decomposition_json(decompose_price_derivative(p))},
        {"profit", decomposition_json(decompose_profit_derivative(p))}}},
  };
  emit_document(doc, output_format(cfg, Format::json), out);
}

void duopoly_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto axis = sweep_axis(cfg);
  const auto grid = sweep_grid(cfg, *axis);
  const Table table = sweep_duopoly(duopoly_params(cfg, axis), *axis, grid);
  emit_table(table, output_format(cfg, Format::csv), out);
  check_sweep_rows(table);
}

void multi_solve(const RunConfig& cfg, std::ostream& out) {
  json doc = {{"market", "multi"}};
  const DemandSpec demand = make_demand(cfg);
  const double low = need(cfg.low, "L");
  const double high = need(cfg.high, "H");
  std::optional<JointAvailability> dist;
  if (cfg.availability) {
    dist.emplace(cfg.availability->n_plus_1, cfg.availability->count_probs);
    doc["family"] = "explicit";
  } else {
    const MultiMarketParams p = multi_params(cfg, std::nullopt);
    p.validate();
    dist.emplace(p.distribution());
    doc["family"] = to_string(p.family);
  }
  if (!(low > 0.0 && low < high)) {
    throw InvalidParameter("capacities must satisfy 0 < L < H");
  }
  const EquilibriumResult eq = solve_phi_multi(*dist, demand, low, high);
  const ExpectationReport ex = expectations_multi(*dist, demand, eq);
  json probs = json::array();
  for (double v : dist->count_probs()) probs.push_back(num(v));
  doc["n_plus_1"] = dist->n_plus_1();
  doc["count_probs"] = probs;
  doc["phi"] = num(eq.phi);
  doc["regime"] = to_string(eq.regime);
  doc["foc_residual"] = num(eq.foc_residual);
  doc["low_margin"] = num(multi_low_margin(dist->n_plus_1(), demand, low));
  doc["expectations"] = expectations_json(ex, false);
  emit_document(doc, output_format(cfg, Format::json), out);
}

void multi_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.availability) {
    throw ConfigError("an explicit availability law cannot be swept; use family");
  }
  const auto axis = sweep_axis(cfg);
  const auto grid = sweep_grid(cfg, *axis);
  const Table table = sweep_multi(multi_params(cfg, axis), *axis, grid);
  emit_table(table, output_format(cfg, Format::csv), out);
  check_sweep_rows(table);
}

void mixed_solve(const RunConfig& cfg, std::ostream& out) {
  const MixedMarketParams p = mixed_params(cfg, std::nullopt);
  const MixedResult eq = solve_mixed(p, parse_mixed_method(cfg.method));
  const ExpectationReport ex = expectations_mixed(p, eq);
  const Assumption4Report& a4 = eq.assumption4;
  json doc = {
      {"market", "mixed"},
      {"phi", num(eq.phi)},
      {"x", num(eq.x)},
      {"method", to_string(eq.method)},
      {"residual_wind", num(eq.residual_wind)},
      {"residual_trad", num(eq.residual_trad)},
      {"x_at_boundary", eq.x_at_boundary},
      {"low_state_margin", num(eq.low_state_margin)},
      {"outer_iterations", eq.outer_iterations},
      {"assumption4",
       {{"ok", a4.ok()},
        {"cost_ok", a4.cost_ok},
        {"low_ok", a4.low_ok},
        {"high_ok", a4.high_ok},
        {"x_floor", num(a4.x_floor)},
        {"cost_margin", num(a4.cost_margin)},
        {"low_margin", num(a4.low_margin)},
        {"high_margin", num(a4.high_margin)}}},
      {"expectations", expectations_json(ex, true)},
  };
  if (p.demand.is_unit_linear()) {
    const double s = p.demand.s;
    doc["dphi_dd"] = num(dphi_dd_linear(s, p.cost, p.beta, p.d, p.low));
    doc["dx_dd"] = num(dx_dd_linear(s, p.cost, p.beta, p.d, p.low));
  }
  emit_document(doc, output_format(cfg, Format::json), out);
}

void mixed_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto axis = sweep_axis(cfg);
  const auto grid = sweep_grid(cfg, *axis);
  const Table table = sweep_mixed(mixed_params(cfg, axis), *axis, grid);
  emit_table(table, output_format(cfg, Format::csv), out);
  check_sweep_rows(table);
}

void collusion_assess(const RunConfig& cfg, std::ostream& out) {
  const CollusionParams p = collusion_params(cfg, std::nullopt);
  const TransferBounds b = transfer_bounds(p);
  json hat = nullptr;
  if (!b.degenerate_full_correlation) {
    const GammaHat g = gamma_hat(p);
    hat = {{"value", num(g.value)},
           {"bisection_value", num(g.bisection_value)},
           {"binding", g.binding}};
  }
  json doc = {
      {"s", num(p.s)},
      {"beta", num(p.beta)},
      {"d", num(p.d)},
      {"L", num(p.low)},
      {"gamma", num(p.gamma)},
      {"phi", num(competitive_phi(p))},
      {"pi_m", num(monopoly_profit(p.s))},
      {"pi_l", num(low_profit(p.s, p.low))},
      {"bounds",
       {{"lb_irl", num(b.lb_irl)},
        {"ub_ic", num(b.ub_ic)},
        {"ub_irh", num(b.ub_irh)},
        {"degenerate_full_correlation", b.degenerate_full_correlation}}},
      {"feasible", b.feasible},
      {"interval", b.feasible ? json::array({num(b.interval_lo), num(b.interval_hi)})
                              : json(nullptr)},
      {"gamma_hat", hat},
      {"value", num(collusion_value(p))},
      {"value_net_of_penalty", num(collusion_value(p, true))},
      {"welfare_cost", num(collusion_welfare_cost(p))},
  };
  emit_document(doc, output_format(cfg, Format::json), out);
}

void collusion_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto axis = sweep_axis(cfg);
  const auto grid = sweep_grid(cfg, *axis);
  const Table table = sweep_collusion(collusion_params(cfg, axis), *axis, grid);
  emit_table(table, output_format(cfg, Format::csv), out);
  check_sweep_rows(table);
}

json checked_json(const CheckedValue& v) {
  return {{"closed_form", num(v.closed_form)}, {"enumerated", num(v.enumerated)}};
}

void info_assess(const RunConfig& cfg, std::ostream& out) {
  const CollusionParams p = collusion_params(cfg, std::nullopt);
  const CheckedValue w = info_sharing_welfare_gain(p.beta, p.d, p.low, p.s);
  const CheckedValue g = info_sharing_profit_gain(p.beta, p.d, p.low, p.s);
  json doc = {{"s", num(p.s)},
              {"beta", num(p.beta)},
              {"d", num(p.d)},
              {"L", num(p.low)},
              {"welfare_gain", checked_json(w)},
              {"profit_gain", checked_json(g)},
              {"l_star", p.s == 1.0 ? num(l_star(p.beta, p.d)) : json(nullptr)},
              {"sharing_raises_profit", g.enumerated > 0.0}};
  emit_document(doc, output_format(cfg, Format::json), out);
}

void info_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.sweep.over) {
    const SweepAxis axis = parse_sweep_axis(*cfg.sweep.over);
    const auto grid = sweep_grid(cfg, axis);
    const CollusionParams p = collusion_params(cfg, axis);
    const Table table = sweep_info_sharing(p.beta, p.d, p.low, axis, grid);
    emit_table(table, output_format(cfg, Format::csv), out);
    check_sweep_rows(table);
    return;
  }
  const auto betas = unit_grid(cfg.beta_grid, 0.1, 0.9, 9, "beta_grid");
  const auto ds = unit_grid(cfg.d_grid, 0.0, 1.0, 11, "d_grid");
  emit_table(l_star_surface(betas, ds), output_format(cfg, Format::csv), out);
}

void validate_family(const RunConfig& cfg, std::ostream& out) {
  const int n1 = need(cfg.n_plus_1, "n_plus_1");
  const AvailabilityFamily family = parse_family(cfg.family);
  const double beta = need(cfg.beta, "beta");
  const auto ds = unit_grid(cfg.d_grid, 0.0, 1.0, 11, "d_grid");
  MultiMarketParams p;
  p.n_plus_1 = n1;
  p.family = family;
  p.beta = beta;
  std::vector<JointAvailability> laws;
  for (double d : ds) {
    p.d = d;
    laws.push_back(p.distribution());
  }
  Table table({"d", "d_prime", "fosd", "sosd"});
  std::string failure;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.size(); ++j) {
      const auto ci = conditional_given_high(laws[i]);
      const auto cj = conditional_given_high(laws[j]);
      const bool fosd = check_fosd(ci, cj);
      const bool sosd = check_sosd(laws[i].count_probs(), laws[j].count_probs());
      table.add_row({ds[i], ds[j], std::string(fosd ? "pass" : "fail"),
                     std::string(sosd ? "pass" : "fail")});
      if ((!fosd || !sosd) && failure.empty()) {
        std::ostringstream msg;
        msg << "dominance fails between d = " << ds[i] << " and d = " << ds[j];
        failure = msg.str();
      }
    }
  }
  emit_table(table, output_format(cfg, Format::csv), out);
  if (!failure.empty()) throw Flagged(kExitAssumption, "assumption_violation", failure);
}

// ---- verify --------------------------------------------------------------

std::vector<DuopolyParams> verify_cases(const RunConfig& cfg) {
  std::vector<DuopolyParams> cases;
  if (cfg.beta || cfg.low || cfg.high) {
    DuopolyParams base = duopoly_params(cfg, SweepAxis::d);
    if (cfg.d) {
      cases.push_back(base);
    } else {
      for (double d : {0.0, 0.5, 1.0}) cases.push_back(with_axis(base, SweepAxis::d, d));
    }
    return cases;
  }
  for (double d : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    cases.push_back({DemandSpec::linear(3.0), 0.5, d, 0.6, 2.0});
    cases.push_back({DemandSpec::quadratic(3.0, 1.0, 0.1), 0.5, d, 0.5, 2.0});
  }
  return cases;
}

json describe(const DuopolyParams& p) {
  return {{"demand", to_string(p.demand.kind)}, {"s", num(p.demand.s)},
          {"a", num(p.demand.a)},               {"b", num(p.demand.b)},
          {"beta", num(p.beta)},                {"d", num(p.d)},
          {"L", num(p.low)},                    {"H", num(p.high)}};
}

void verify(const RunConfig& cfg, std::ostream& out) {
  const int grid = cfg.grid.value_or(4000);
  if (grid < 100) throw ConfigError("grid must be at least 100");
  json checks = json::array();
  bool all_ok = true;
  std::string first_failure;
  const auto record = [&](json entry, bool ok, const std::string& what) {
    entry["passed"] = ok;
    checks.push_back(std::move(entry));
    if (!ok && first_failure.empty()) first_failure = what;
    all_ok = all_ok && ok;
  };

  for (const DuopolyParams& p : verify_cases(cfg)) {
    const EquilibriumResult eq = solve_phi_duopoly(p);
    const oracle::GridEquilibrium fp = oracle::fixed_point_equilibrium(p, grid);
    const double gap = std::abs(fp.phi_hat - eq.phi);
    record({{"check", "fixed_point"},
            {"params", describe(p)},
            {"phi", num(eq.phi)},
            {"phi_hat", num(fp.phi_hat)},
            {"grid_step", num(fp.grid_step)},
            {"converged", fp.converged},
            {"iterations", fp.iterations}},
           gap <= fp.grid_step * (1.0 + 1e-9), "fixed point disagrees with phi");
    const oracle::LowStateCheck low = oracle::low_state_check(p, eq.phi, grid);
    record({{"check", "low_state"}, {"params", describe(p)},
            {"best_action", num(low.best_action)}},
           low.holds, "low-state producer prefers an action below L");
    const oracle::DeviationCheck dev = oracle::deviation_check(p, eq.phi, grid);
    record({{"check", "no_deviation"}, {"params", describe(p)},
            {"max_gain", num(dev.max_gain)}, {"tolerance", num(dev.tolerance)}},
           dev.holds, "profitable deviation found");

    if (p.demand.is_unit_linear() && p.low < p.demand.s / 3.0) {
      const CollusionParams cp{p.demand.s, p.beta, p.d, p.low, cfg.gamma.value_or(0.0)};
      const TransferBounds b = transfer_bounds(cp);
      const oracle::TransferScan scan = oracle::transfer_scan(cp, competitive_phi(cp));
      bool ok = scan.any_feasible == b.feasible;
      if (ok && scan.any_feasible) {
        const double lo = std::max(b.interval_lo, -1.0);
        const double hi = std::min(b.interval_hi, 2.0);
        ok = std::abs(scan.t_min - lo) <= scan.step + 1e-9 &&
             std::abs(scan.t_max - hi) <= scan.step + 1e-9;
      }
      record({{"check", "transfer_scan"}, {"params", describe(p)},
              {"feasible", b.feasible}, {"scan_feasible", scan.any_feasible},
              {"t_min", num(scan.t_min)}, {"t_max", num(scan.t_max)}},
             ok, "transfer scan disagrees with the analytic bounds");
    }
  }

  if (cfg.market && *cfg.market == "multi" && !cfg.availability) {
    const MultiMarketParams mp = multi_params(cfg, std::nullopt);
    const JointAvailability dist = mp.distribution();
    const EquilibriumResult eq = solve_multi(mp);
    const oracle::GridEquilibrium fp = oracle::fixed_point_equilibrium_multi(
        dist, mp.demand, mp.low, mp.high, grid);
    record({{"check", "multi_fixed_point"},
            {"phi", num(eq.phi)},
            {"phi_hat", num(fp.phi_hat)},
            {"grid_step", num(fp.grid_step)},
            {"converged", fp.converged}},
           std::abs(fp.phi_hat - eq.phi) <= fp.grid_step * (1.0 + 1e-9),
           "multi-producer fixed point disagrees with phi");
  }

  const json doc = {{"grid", grid}, {"passed", all_ok}, {"checks", checks}};
  emit_document(doc, output_format(cfg, Format::json), out);
  if (!all_ok) throw Flagged(kExitOracle, "oracle_disagreement", first_failure);
}

// ---- dispatch ------------------------------------------------------------

void write_error(std::ostream& err, const std::string& kind,
                 const std::string& message, int code) {
  const json line = {{"error", kind}, {"message", message}, {"exit_code", code}};
  err << line.dump() << '\n';
}

struct Leaf {
  CLI::App* app;
  std::function<void(const RunConfig&, std::ostream&)> action;
};

void add_common_options(CLI::App* sub, std::string& config_path, RunConfig& o) {
  const auto real = [sub](const char* name, std::optional<double>& slot,
                          const char* help) {
    sub->add_option_function<double>(name, [&slot](const double& v) { slot = v; }, help);
  };
  const auto text = [sub](const char* name, std::optional<std::string>& slot,
                          const char* help) {
    sub->add_option_function<std::string>(
        name, [&slot](const std::string& v) { slot = v; }, help);
  };
  sub->add_option("--config", config_path, "JSON config file");
  text("--out", o.output, "write results to this file instead of stdout");
  text("--format", o.format, "csv or json");
  text("--demand", o.demand.kind, "linear or quadratic");
  real("--s", o.demand.s, "demand intercept");
  real("--a", o.demand.a, "quadratic demand slope");
  real("--b", o.demand.b, "quadratic demand curvature");
  real("--beta", o.beta, "probability of the high state");
  real("--d", o.d, "dispersion in [0, 1]");
  real("--L", o.low, "low-state capacity");
  real("--H", o.high, "high-state capacity");
  real("--c", o.cost, "traditional marginal cost");
  real("--gamma", o.gamma, "expected collusion penalty");
  sub->add_option_function<int>(
      "--n", [&o](const int& v) { o.n_plus_1 = v; }, "number of producers N+1");
  text("--family", o.family, "mixture or duopoly");
  text("--method", o.method, "solver method");
  text("--over", o.sweep.over, "sweep axis: d, beta, L, H, c, gamma, s");
  real("--from", o.sweep.grid.from, "sweep start");
  real("--to", o.sweep.grid.to, "sweep end");
  sub->add_option_function<int>(
      "--steps", [&o](const int& v) { o.sweep.grid.steps = v; }, "sweep points");
  sub->add_option_function<int>(
      "--d-grid", [&o](const int& v) { o.d_grid.steps = v; },
      "points in the d grid over [0, 1]");
  sub->add_option_function<int>(
      "--beta-grid", [&o](const int& v) { o.beta_grid.steps = v; },
      "points in the beta grid");
  sub->add_option_function<int>(
      "--grid", [&o](const int& v) { o.grid = v; }, "oracle grid resolution");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cournot equilibria with stochastic, correlated capacities"};
  app.require_subcommand(1);
  std::string config_path;
  RunConfig overrides;
  std::vector<Leaf> leaves;

  const auto leaf = [&](CLI::App* parent, const char* name, const char* help,
                        std::function<void(const RunConfig&, std::ostream&)> fn) {
    CLI::App* sub = parent->add_subcommand(name, help);
    add_common_options(sub, config_path, overrides);
    leaves.push_back({sub, std::move(fn)});
  };
  const auto group = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->require_subcommand(1);
    return sub;
  };

  CLI::App* duopoly = group("duopoly", "two producers");
  leaf(duopoly, "solve", "equilibrium, expectations, decomposition", duopoly_solve);
  leaf(duopoly, "sweep", "comparative statics over one parameter", duopoly_sweep);
  CLI::App* multi = group("multi", "N+1 producers");
  leaf(multi, "solve", "equilibrium and expectations", multi_solve);
  leaf(multi, "sweep", "comparative statics over one parameter", multi_sweep);
  CLI::App* mixed = group("mixed", "two wind producers and a traditional generator");
  leaf(mixed, "solve", "equilibrium and expectations", mixed_solve);
  leaf(mixed, "sweep", "comparative statics over one parameter", mixed_sweep);
  CLI::App* collusion = group("collusion", "transfer feasibility and deterrence");
  leaf(collusion, "assess", "bounds, minimal penalty, value and welfare cost",
       collusion_assess);
  leaf(collusion, "sweep", "collusion metrics over one parameter", collusion_sweep);
  CLI::App* info = group("info-sharing", "value of public information");
  leaf(info, "assess", "welfare and profit gains", info_assess);
  leaf(info, "sweep", "threshold surface, or gains over one parameter", info_sweep);
  leaf(&app, "validate", "dominance checks for an availability family",
       validate_family);
  leaf(&app, "verify", "brute-force oracle checks", verify);

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      throw ConfigError(e.what());
    }
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    cfg = merge(std::move(cfg), overrides);

    for (const Leaf& l : leaves) {
      if (!l.app->parsed()) continue;
      if (cfg.output) {
        std::ostringstream buffer;
        std::optional<Flagged> flagged;
        try {
          l.action(cfg, buffer);
        } catch (const Flagged& f) {
          flagged.emplace(f);
        }
        std::ofstream file(*cfg.output, std::ios::binary);
        if (!file) throw ConfigError("cannot write output file: " + *cfg.output);
        file << buffer.str();
        if (flagged) throw *flagged;
      } else {
        l.action(cfg, out);
      }
      return kExitOk;
    }
    throw ConfigError("no subcommand selected");
  } catch (const Flagged& e) {
    write_error(err, e.kind(), e.what(), e.code());
    return e.code();
  } catch (const ConfigError& e) {
    write_error(err, "config_error", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    write_error(err, "invalid_parameter", e.what(), kExitConfig);
    return kExitConfig;
  } catch (const AssumptionViolation& e) {
    write_error(err, "assumption_violation", e.what(), kExitAssumption);
    return kExitAssumption;
  } catch (const SolverFailure& e) {
    write_error(err, "solver_failure", e.what(), kExitSolver);
    return kExitSolver;
  } catch (const std::exception& e) {
    write_error(err, "internal_error", e.what(), kExitSolver);
    return kExitSolver;
  }
}

}  // namespace windcournot::cli
