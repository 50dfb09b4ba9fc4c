#include "ins/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ins {

TemperatureLadder::TemperatureLadder(std::vector<double> a)
    : alphas(std::move(a)) {
  if (alphas.empty()) throw std::invalid_argument("ladder: empty");
  if (std::fabs(alphas.front() - 1.0) > 1e-12)
    throw std::invalid_argument("ladder: alpha_1 must equal 1");
  for (std::size_t i = 1; i < alphas.size(); ++i)
    if (alphas[i] > alphas[i - 1] + 1e-15)
      throw std::invalid_argument("ladder: alphas must be nonincreasing");
  if (alphas.back() <= 0)
    throw std::invalid_argument("ladder: alpha_K must be positive");
}

TemperatureLadder TemperatureLadder::geometric(int K) {
  std::vector<double> a(K);
  double v = 1.0;
  for (int i = 0; i < K; ++i, v *= 0.5) a[i] = v;
  return TemperatureLadder(std::move(a));
}

double symmetrized_potential(const std::vector<double>& values,
                             const TemperatureLadder& ladder) {
  if (values.size() != static_cast<std::size_t>(ladder.K()))
    throw std::invalid_argument("symmetrized_potential: size mismatch");
  std::vector<double> v = values;
  std::sort(v.begin(), v.end());  // ascending, against descending alphas
  double u = 0;
  for (int l = 0; l < ladder.K(); ++l) u += ladder.alphas[l] * v[l];
  return u;
}

WeightTable compute_weights(const EnsembleState& state,
                            const TemperatureLadder& ladder, double eps) {
  const int K = ladder.K();
  if (eps <= 0) throw std::domain_error("compute_weights: eps must be positive");
  if (static_cast<int>(state.v_values.size()) != K)
    throw std::invalid_argument("compute_weights: state/ladder size mismatch");
  if (K > kMaxEnsemble)
    throw std::length_error("compute_weights: K exceeds enumeration cap");

  WeightTable wt;
  wt.u_value = symmetrized_potential(state.v_values, ladder);

  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  double min_expo = std::numeric_limits<double>::infinity();
  do {
    double e = 0;  // sum_l alpha_l V(particle in slot l)
    for (int l = 0; l < K; ++l) e += ladder.alphas[l] * state.v_values[perm[l]];
    wt.permutations.push_back(perm);
    wt.log_weights.push_back(-e / eps);
    min_expo = std::min(min_expo, e);
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Shift by the smallest exponent before exponentiating.
  double z = 0;
  wt.weights.resize(wt.log_weights.size());
  for (std::size_t s = 0; s < wt.log_weights.size(); ++s) {
    wt.weights[s] = std::exp(wt.log_weights[s] + min_expo / eps);
    z += wt.weights[s];
  }
  const double logz = std::log(z) - min_expo / eps;
  for (std::size_t s = 0; s < wt.weights.size(); ++s) {
    wt.weights[s] /= z;
    wt.log_weights[s] -= logz;
  }

  wt.rho.assign(K, std::vector<double>(K, 0.0));
  for (std::size_t s = 0; s < wt.permutations.size(); ++s)
    for (int l = 0; l < K; ++l)
      wt.rho[wt.permutations[s][l]][l] += wt.weights[s];
  return wt;
}

InsCoefficients ins_coefficients(const EnsembleState& state,
                                 const TemperatureLadder& ladder, double eps,
                                 const Potential& potential) {
  const int K = ladder.K();
  WeightTable wt = compute_weights(state, ladder, eps);
  InsCoefficients out;
  out.drift.resize(K);
  out.diffusion.resize(K);
  for (int i = 0; i < K; ++i) {
    out.drift[i] = -potential.gradient(state.positions[i]);
    double s = 0;
    for (int j = 0; j < K; ++j) s += wt.rho[i][j] / ladder.alphas[j];
    out.diffusion[i] = std::sqrt(2 * eps * s);
  }
  return out;
}

}  // namespace ins
