#include "ins/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ins/rates.hpp"

namespace ins {

void RunConfig::validate(const Potential& p) const {
  if (potential_kind != "franz" && potential_kind != "file")
    throw std::invalid_argument("potential_kind: must be 'franz' or 'file'");
  if (potential_kind == "franz" && (theta < 0 || theta > 1))
    throw std::invalid_argument("theta: must be in [0,1]");
  if (ladder_rule != "explicit" && ladder_rule != "geometric" &&
      ladder_rule != "optimal")
    throw std::invalid_argument(
        "ladder_rule: must be 'explicit', 'geometric' or 'optimal'");
  if (K < 1 || K > kMaxEnsemble)
    throw std::invalid_argument("K: must be between 1 and 8");
  if (ladder_rule == "explicit") {
    try {
      TemperatureLadder check(alphas);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("alphas: ") + e.what());
    }
  }
  if (!(target_hi > target_lo))
    throw std::invalid_argument("target: hi must exceed lo");
  if (target_lo < p.lower() || target_hi > p.upper())
    throw std::invalid_argument("target: interval outside the domain");
  if (method != "mcmc" && method != "pt" && method != "ins")
    throw std::invalid_argument("method: must be 'mcmc', 'pt' or 'ins'");
  if (eps_grid.empty())
    throw std::invalid_argument("eps_grid: must be nonempty");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (eps_grid[i] <= 0)
      throw std::invalid_argument("eps_grid: temperatures must be positive");
    if (i > 0 && eps_grid[i] >= eps_grid[i - 1])
      throw std::invalid_argument("eps_grid: must be strictly decreasing");
  }
  if (replications < 2)
    throw std::invalid_argument("replications: must be at least 2");
  if (dt < 0) throw std::invalid_argument("dt: must be nonnegative");
  if (swap_rate < 0) throw std::invalid_argument("swap_rate: must be nonnegative");
  if (max_steps < 1) throw std::invalid_argument("max_steps: must be positive");
}

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["potential_kind"] = c.potential_kind;
  j["theta"] = c.theta;
  j["potential_file"] = c.potential_file;
  j["ladder_rule"] = c.ladder_rule;
  j["alphas"] = c.alphas;
  j["K"] = c.K;
  j["target_lo"] = c.target_lo;
  j["target_hi"] = c.target_hi;
  j["method"] = c.method;
  j["eps_grid"] = c.eps_grid;
  j["replications"] = c.replications;
  if (c.has_seed) j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["dt"] = c.dt;
  j["swap_rate"] = c.swap_rate;
  j["horizon_c"] = c.horizon_c;
  j["max_steps"] = c.max_steps;
  j["tolerance"] = c.tolerance;
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  auto get = [&j](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("potential_kind", c.potential_kind);
  get("theta", c.theta);
  get("potential_file", c.potential_file);
  get("ladder_rule", c.ladder_rule);
  get("alphas", c.alphas);
  get("K", c.K);
  get("target_lo", c.target_lo);
  get("target_hi", c.target_hi);
  get("method", c.method);
  get("eps_grid", c.eps_grid);
  get("replications", c.replications);
  if (j.contains("seed")) {
    c.has_seed = true;
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  get("out_dir", c.out_dir);
  get("dt", c.dt);
  get("swap_rate", c.swap_rate);
  get("horizon_c", c.horizon_c);
  get("max_steps", c.max_steps);
  get("tolerance", c.tolerance);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

Potential make_potential(const RunConfig& c) {
  if (c.potential_kind == "franz") return franz_potential(c.theta);
  if (c.potential_kind == "file") return load_potential_file(c.potential_file);
  throw std::invalid_argument("potential_kind: must be 'franz' or 'file'");
}

TemperatureLadder resolve_ladder(const RunConfig& c, const Potential& p) {
  if (c.method == "mcmc") return TemperatureLadder(std::vector<double>{1.0});
  if (c.ladder_rule == "explicit") return TemperatureLadder(c.alphas);
  const int K = c.method == "pt" ? 2 : c.K;
  if (c.ladder_rule == "geometric") return TemperatureLadder::geometric(K);
  // optimal: requires a classifiable two-well landscape
  auto lg = extract_landscape(p, 8192);
  auto cls = classify_two_well(lg);
  if (!cls.spec)
    throw std::invalid_argument(
        "ladder_rule 'optimal' needs a two-well potential (" + cls.rejection +
        "); use 'geometric' or 'explicit'");
  auto target = make_target(p, c.target_lo, c.target_hi, cls.spec->barrier_x);
  return optimal_two_well(*cls.spec, target, K).optimal_ladder;
}

double choose_dt(const RunConfig& c, const Potential& p) {
  if (c.dt > 0) return c.dt;
  double dt = std::min(1e-3, 0.1 / std::max(1.0, p.max_curvature()));
  if (c.method == "pt" && c.swap_rate > 0)
    dt = std::min(dt, 0.1 / c.swap_rate);
  return dt;
}

}  // namespace ins
