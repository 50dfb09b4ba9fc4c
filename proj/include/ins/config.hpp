#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ins/ensemble.hpp"
#include "ins/potential.hpp"

namespace ins {

// Run configuration shared by all subcommands.  Unset numeric fields keep
// their defaults; validation happens in validate(), not during parsing, so
// error messages can name the offending field.
struct RunConfig {
  std::string potential_kind = "franz";  // "franz" | "file"
  double theta = 0.85;
  std::string potential_file;

  std::string ladder_rule = "optimal";  // "explicit" | "geometric" | "optimal"
  std::vector<double> alphas;           // used when ladder_rule == "explicit"
  int K = 2;

  double target_lo = 1.2;
  double target_hi = 1.5;

  std::string method = "ins";  // "mcmc" | "pt" | "ins"
  std::vector<double> eps_grid{0.40, 0.30, 0.22};
  int replications = 100;
  bool has_seed = false;
  std::uint64_t seed = 0;
  std::string out_dir = ".";

  double dt = 0;            // 0: derived from the potential's curvature
  double swap_rate = 0;     // pt only
  double horizon_c = 0;     // 0: 1.2x the minimal admissible exponent
  long long max_steps = 100000000;
  double tolerance = 0.15;

  void validate(const Potential& p) const;  // throws naming the bad field
};

nlohmann::json config_to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

Potential make_potential(const RunConfig& c);
TemperatureLadder resolve_ladder(const RunConfig& c, const Potential& p);

// Step size: small enough for the stiffest part of the potential and for
// swap-clock thinning.
double choose_dt(const RunConfig& c, const Potential& p);

}  // namespace ins
