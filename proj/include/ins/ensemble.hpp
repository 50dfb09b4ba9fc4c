#pragma once

#include <cstdint>
#include <vector>

#include "ins/potential.hpp"

namespace ins {

inline constexpr int kMaxEnsemble = 8;  // K! enumeration cap

// Temperature multipliers 1 = a_1 >= a_2 >= ... >= a_K > 0.  Particle l runs
// at effective temperature eps / a_l.
struct TemperatureLadder {
  std::vector<double> alphas;

  explicit TemperatureLadder(std::vector<double> a);
  static TemperatureLadder geometric(int K);  // (1, 1/2, ..., (1/2)^{K-1})

  int K() const { return static_cast<int>(alphas.size()); }
  double back() const { return alphas.back(); }
};

struct EnsembleState {
  std::vector<double> positions;
  std::vector<double> v_values;  // V at each position
};

// Permutation weights of one ensemble state.  Permutation sigma assigns
// particle sigma(l) to temperature slot l; its weight is
//   w(x_sigma) = exp(-sum_l a_l V(x_sigma(l)) / eps) / normalizer.
// rho[i][j] = sum over sigma with sigma(j)=i of w(x_sigma): the probability
// particle i occupies slot j.  u_value is the symmetrized potential.
struct WeightTable {
  std::vector<std::vector<int>> permutations;  // sigma as slot -> particle
  std::vector<double> weights;                 // aligned with permutations
  std::vector<double> log_weights;
  std::vector<std::vector<double>> rho;  // K x K, doubly stochastic
  double u_value = 0;
};

// min over sigma of sum_l a_l V_sigma(l): pair the largest alpha with the
// smallest value (rearrangement inequality).  Equals exhaustive enumeration.
double symmetrized_potential(const std::vector<double>& values,
                             const TemperatureLadder& ladder);

WeightTable compute_weights(const EnsembleState& state,
                            const TemperatureLadder& ladder, double eps);

struct InsCoefficients {
  std::vector<double> drift;      // -grad V(x_i)
  std::vector<double> diffusion;  // sqrt(2 eps sum_j rho_ij / a_j)
};

InsCoefficients ins_coefficients(const EnsembleState& state,
                                 const TemperatureLadder& ladder, double eps,
                                 const Potential& potential);

}  // namespace ins
