#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ins/ensemble.hpp"
#include "ins/potential.hpp"

namespace ins {

struct SimulationConfig {
  double eps = 0.25;
  double dt = 1e-3;
  double T = 100.0;  // explicit horizon; see horizon_from_exponent
  TemperatureLadder ladder{std::vector<double>{1.0}};
  std::uint64_t seed = 0;
  std::vector<double> initial_positions;  // defaults to the potential argmin
  double swap_rate = 0;                   // PT only
  double target_lo = 0, target_hi = 0;
  int histogram_bins = 200;
  std::string dump_path;  // empty: no trajectory dump
  int dump_stride = 1000;
};

// T^eps = e^{c/eps}
double horizon_from_exponent(double c, double eps);

struct WeightedHistogram {
  double lo = 0, hi = 0;
  std::vector<double> mass;

  void accumulate(double x, double weight);
  void normalize();
  // Total-variation distance between two normalized histograms.
  static double tv_distance(const WeightedHistogram& a,
                            const WeightedHistogram& b);
};

struct EstimatorOutput {
  double theta = 0;
  std::vector<WeightedHistogram> occupation_histogram;  // one per slot
  long long wall_steps = 0;
  std::uint64_t seed = 0;
};

// Overdamped Langevin at temperature eps, single particle.
EstimatorOutput run_mcmc(const SimulationConfig& cfg, const Potential& p);

// Two particles at eps and eps/alpha_2 with exponential-clock swaps thinned
// per step; requires swap_rate * dt <= 0.1.
EstimatorOutput run_pt(const SimulationConfig& cfg, const Potential& p);

// K-particle symmetrized dynamics with per-step rho-dependent diffusion and
// the rho-weighted occupation estimator.
EstimatorOutput run_ins(const SimulationConfig& cfg, const Potential& p);

}  // namespace ins
