#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ins/config.hpp"
#include "ins/graphcalc.hpp"
#include "ins/harness.hpp"
#include "ins/rates.hpp"
#include "ins/verify.hpp"

namespace {

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

struct Overrides {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<double> eps_grid;
  int K = 0;
  double theta = -1;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON config file");
  cmd->add_option("--out", ov.out_dir, "output directory");
  cmd->add_option("--seed", ov.seed, "master seed")->each([&ov](const std::string&) {
    ov.has_seed = true;
  });
  cmd->add_option("--eps-grid", ov.eps_grid, "temperatures, decreasing")
      ->delimiter(',');
  cmd->add_option("--K", ov.K, "ensemble size");
  cmd->add_option("--theta", ov.theta, "well-depth parameter of the built-in potential");
}

ins::RunConfig resolve_config(const Overrides& ov) {
  ins::RunConfig c;
  if (!ov.config_path.empty()) c = ins::load_config(ov.config_path);
  if (!ov.out_dir.empty()) c.out_dir = ov.out_dir;
  if (ov.has_seed) {
    c.seed = ov.seed;
    c.has_seed = true;
  }
  if (!ov.eps_grid.empty()) c.eps_grid = ov.eps_grid;
  if (ov.K > 0) c.K = ov.K;
  if (ov.theta >= 0) c.theta = ov.theta;
  return c;
}

struct Analysis {
  ins::Potential potential;
  ins::LandscapeGraph landscape;
  ins::TwoWellClassification two_well;
  ins::TargetSet target;
  ins::TemperatureLadder ladder;
  ins::GraphRateData graph;
};

Analysis analyze_config(const ins::RunConfig& c) {
  ins::Potential p = ins::make_potential(c);
  c.validate(p);
  auto lg = ins::extract_landscape(p, 8192);
  auto cls = ins::classify_two_well(lg);
  const double barrier = cls.spec
                             ? cls.spec->barrier_x
                             : std::numeric_limits<double>::quiet_NaN();
  auto target = ins::make_target(p, c.target_lo, c.target_hi, barrier);
  auto ladder = ins::resolve_ladder(c, p);
  auto graph = ins::graph_rate_data(lg, ladder);
  return {std::move(p), std::move(lg), std::move(cls), target, ladder, graph};
}

// minimal horizon exponent at this ladder: h v w exactly when available,
// otherwise the landscape-level bound
double minimal_exponent(const Analysis& a, int K) {
  if (a.graph.exact_mode) return std::max(a.graph.h, a.graph.w);
  return ins::compute_B(a.landscape, K) * a.ladder.back();
}

double predicted_bound(const ins::RunConfig& c, const Analysis& a) {
  if (c.method == "mcmc")
    return ins::r_of_alpha(a.target.v_of_A,
                           ins::TemperatureLadder(std::vector<double>{1.0}));
  if (a.two_well.spec && a.target.side != ins::TargetSide::general)
    return ins::two_well_rates(*a.two_well.spec, a.target, a.ladder).lower_bound;
  return ins::multiwell_bound(a.landscape, a.ladder.K(), a.target)
      .predicted_rate;
}

int cmd_analyze(const Overrides& ov) {
  auto c = resolve_config(ov);
  auto a = analyze_config(c);
  nlohmann::json out;
  out["target"] = {{"lo", a.target.lo},
                   {"hi", a.target.hi},
                   {"v_of_A", a.target.v_of_A}};
  if (a.two_well.spec && a.target.side != ins::TargetSide::general) {
    out["two_well"] =
        ins::report_to_json(ins::optimal_two_well(*a.two_well.spec, a.target,
                                                  a.ladder.K()));
  } else if (!a.two_well.spec) {
    out["two_well_rejection"] = a.two_well.rejection;
  }
  out["multiwell"] = ins::report_to_json(
      ins::multiwell_bound(a.landscape, a.ladder.K(), a.target));
  out["graph"] = {{"h", a.graph.h},
                  {"w", a.graph.w},
                  {"b1", a.graph.b1},
                  {"B", a.graph.B},
                  {"w_upper_bound", a.graph.w_upper_bound},
                  {"exact", a.graph.exact_mode}};
  out["min_horizon_exponent"] = minimal_exponent(a, a.ladder.K());
  out["ladder"] = a.ladder.alphas;
  std::filesystem::create_directories(c.out_dir);
  atomic_write(c.out_dir + "/analysis.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_optimize(const Overrides& ov) {
  auto c = resolve_config(ov);
  ins::Potential p = ins::make_potential(c);
  c.validate(p);
  auto lg = ins::extract_landscape(p, 8192);
  auto cls = ins::classify_two_well(lg);
  nlohmann::json out;
  if (cls.spec) {
    auto target = ins::make_target(p, c.target_lo, c.target_hi,
                                   cls.spec->barrier_x);
    auto rep = ins::optimal_two_well(*cls.spec, target, c.K);
    out["alphas"] = rep.optimal_ladder.alphas;
    out["boundary_substitution"] = rep.boundary_substitution;
    out["predicted_rate"] = rep.predicted_rate;
    out["provenance"] = ins::provenance_name(rep.formula_provenance);
  } else {
    out["alphas"] = ins::TemperatureLadder::geometric(c.K).alphas;
    out["boundary_substitution"] = false;
    out["note"] = "not a two-well landscape (" + cls.rejection +
                  "); geometric ladder emitted";
  }
  std::filesystem::create_directories(c.out_dir);
  atomic_write(c.out_dir + "/ladder.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const Overrides& ov, bool self_test) {
  if (self_test) {
    // regression sanity on synthetic exact-exponential data
    std::vector<double> eps{0.4, 0.3, 0.2}, vt;
    for (double e : eps) vt.push_back(std::exp(-2.0 / e));
    auto [rate, se] = ins::fit_decay_rate(eps, vt);
    (void)se;
    return std::fabs(rate - 2.0) < 1e-9 ? 0 : 2;
  }
  auto c = resolve_config(ov);
  if (!c.has_seed)
    throw std::invalid_argument("simulate requires --seed (or a seed in the config)");
  auto a = analyze_config(c);

  ins::ExperimentPlan plan;
  plan.eps_grid = c.eps_grid;
  plan.replications = c.replications;
  plan.method = ins::method_from_name(c.method);
  plan.ladder = a.ladder;
  plan.target_lo = c.target_lo;
  plan.target_hi = c.target_hi;
  plan.horizon_exponent = c.horizon_c > 0
                              ? c.horizon_c
                              : 1.2 * std::max(minimal_exponent(a, a.ladder.K()),
                                               0.05);
  plan.dt = ins::choose_dt(c, a.potential);
  plan.swap_rate = c.swap_rate;
  plan.master_seed = c.seed;
  plan.max_steps = c.max_steps;

  auto rec = ins::run_experiment(plan, a.potential, predicted_bound(c, a),
                                 c.tolerance);
  std::filesystem::create_directories(c.out_dir);
  ins::save_record(rec, c.out_dir + "/record.json", c.out_dir + "/record.csv");
  std::cout << "fitted_rate " << rec.fitted_rate << " predicted_bound "
            << rec.predicted_bound << " verdict "
            << (rec.verdict ? "pass" : "fail") << "\n";
  return rec.verdict ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temperature-ladder analysis and sampling for multi-well potentials"};
  app.require_subcommand(1);

  Overrides ov;
  auto* analyze = app.add_subcommand("analyze", "predicted decay rates and graph constants");
  add_common(analyze, ov);
  auto* optimize = app.add_subcommand("optimize", "emit the optimal temperature ladder");
  add_common(optimize, ov);
  auto* simulate = app.add_subcommand("simulate", "run the variance-decay experiment");
  add_common(simulate, ov);
  bool self_test = false;
  simulate->add_flag("--self-test", self_test,
                     "regression check on synthetic variances; no simulation");
  auto* verify = app.add_subcommand("verify", "fast invariant suite");
  bool inject = false;
  std::string suite = "all";
  verify->add_flag("--inject-corruption", inject)->group("");  // hidden
  verify->add_option("--suite", suite, "suite selection (only 'all' exists)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (analyze->parsed()) return cmd_analyze(ov);
    if (optimize->parsed()) return cmd_optimize(ov);
    if (simulate->parsed()) return cmd_simulate(ov, self_test);
    if (verify->parsed()) {
      if (suite.empty() || suite != "all") {
        std::cerr << "usage error: unknown suite '" << suite << "'\n";
        return 1;
      }
      return ins::run_verification(std::cout, inject) == 0 ? 0 : 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
