#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ins/potential.hpp"
#include "ins/rates.hpp"
#include "ins/sampler.hpp"

namespace ins {

enum class Method { mcmc, pt, ins_method };

std::string method_name(Method m);
Method method_from_name(const std::string& s);

struct ExperimentPlan {
  std::vector<double> eps_grid;  // strictly decreasing
  int replications = 100;
  Method method = Method::ins_method;
  TemperatureLadder ladder{std::vector<double>{1.0}};
  double target_lo = 0, target_hi = 0;
  double horizon_exponent = 0;  // c in T^eps = e^{c/eps}
  double dt = 1e-3;
  double swap_rate = 0;  // pt only
  std::uint64_t master_seed = 0;
  long long max_steps = 100000000;  // horizon cap per replicate
  int threads = 0;                  // 0: hardware concurrency
};

struct EpsStats {
  double eps = 0;
  double horizon = 0;
  bool horizon_truncated = false;
  double mean = 0;
  double variance = 0;
  double std_error = 0;
  double truth = 0;      // quadrature mu^eps(A)
  double rel_error = 0;  // |mean - truth| / truth
  double var_times_T = 0;
  bool bias_ok = false;  // |mean - truth| <= 3 std errors
};

struct ReplicateRow {
  double eps = 0;
  int replicate = 0;
  std::uint64_t seed = 0;
  double theta = 0;
  double var_contrib = 0;  // (theta - mean)^2 / (n - 1)
};

struct ExperimentRecord {
  int schema_version = 1;
  ExperimentPlan plan;
  std::vector<EpsStats> stats;
  std::vector<ReplicateRow> rows;
  double fitted_rate = 0;
  double fitted_rate_stderr = 0;
  double fitted_rate_ci_low = 0;   // 95% interval
  double fitted_rate_ci_high = 0;
  double predicted_bound = 0;
  bool verdict = false;  // fitted_rate >= predicted_bound - tolerance
  double tolerance = 0;
};

// mu^eps(A) for A = [lo, hi]: ratio of e^{-V/eps} integrals by adaptive
// Simpson with the minimum of V subtracted inside the exponent (underflow
// guard), relative accuracy 1e-8.
double gibbs_quadrature(const Potential& p, double eps, double lo, double hi);

// Slope fit of log(Var * T) against 1/eps; returns (rate, stderr) with
// rate = -slope.
std::pair<double, double> fit_decay_rate(const std::vector<double>& eps,
                                         const std::vector<double>& var_times_T);

ExperimentRecord run_experiment(const ExperimentPlan& plan, const Potential& p,
                                double predicted_bound, double tolerance);

nlohmann::json record_to_json(const ExperimentRecord& rec);
ExperimentRecord record_from_json(const nlohmann::json& j);

// JSON record plus a flat CSV (columns eps, replicate, seed, theta,
// var_contrib) next to it; writes are atomic (temp file + rename).
void save_record(const ExperimentRecord& rec, const std::string& json_path,
                 const std::string& csv_path);
ExperimentRecord load_record(const std::string& json_path);

}  // namespace ins
