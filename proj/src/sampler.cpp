#include "ins/sampler.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ins/rng.hpp"

namespace ins {

double horizon_from_exponent(double c, double eps) {
  return std::exp(c / eps);
}

void WeightedHistogram::accumulate(double x, double weight) {
  if (mass.empty()) return;
  const int n = static_cast<int>(mass.size());
  int b = static_cast<int>((x - lo) / (hi - lo) * n);
  if (b < 0) b = 0;
  if (b >= n) b = n - 1;
  mass[b] += weight;
}

void WeightedHistogram::normalize() {
  double total = 0;
  for (double m : mass) total += m;
  if (total > 0)
    for (double& m : mass) m /= total;
}

double WeightedHistogram::tv_distance(const WeightedHistogram& a,
                                      const WeightedHistogram& b) {
  if (a.mass.size() != b.mass.size())
    throw std::invalid_argument("tv_distance: bin count mismatch");
  double d = 0;
  for (std::size_t i = 0; i < a.mass.size(); ++i)
    d += std::fabs(a.mass[i] - b.mass[i]);
  return d / 2;
}

namespace {

constexpr std::uint64_t kClockStream = 1u << 20;  // PT swap clock

struct Kahan {
  double sum = 0, carry = 0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct Dump {
  std::ofstream out;
  int stride = 1;
  long long step = 0;

  void open(const SimulationConfig& cfg, int K) {
    if (cfg.dump_path.empty()) return;
    out.open(cfg.dump_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open dump file: " + cfg.dump_path);
    stride = cfg.dump_stride;
    const double header[3] = {static_cast<double>(K), cfg.dt, cfg.eps};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
  }
  void record(const std::vector<double>& x) {
    if (!out.is_open()) return;
    if (step++ % stride == 0)
      out.write(reinterpret_cast<const char*>(x.data()),
                static_cast<std::streamsize>(x.size() * sizeof(double)));
  }
};

std::vector<double> initial_positions(const SimulationConfig& cfg,
                                      const Potential& p, int K) {
  if (!cfg.initial_positions.empty()) {
    if (static_cast<int>(cfg.initial_positions.size()) != K)
      throw std::invalid_argument("initial_positions: wrong particle count");
    return cfg.initial_positions;
  }
  return std::vector<double>(K, p.argmin());
}

long long step_count(const SimulationConfig& cfg) {
  if (cfg.dt <= 0) throw std::invalid_argument("dt must be positive");
  if (cfg.T < cfg.dt) throw std::invalid_argument("horizon shorter than dt");
  return std::llround(cfg.T / cfg.dt);
}

bool in_target(const SimulationConfig& cfg, double x) {
  return x >= cfg.target_lo && x <= cfg.target_hi;
}

double euler_step(double x, double g, double diff, double z, double dt,
                  const Potential& p) {
  const double move = -g * dt + diff * std::sqrt(dt) * z;
  if (std::fabs(move) > p.period() / 2)
    throw std::runtime_error(
        "integrator step exceeded half a period; reduce dt");
  return p.wrap(x + move);
}

}  // namespace

EstimatorOutput run_mcmc(const SimulationConfig& cfg, const Potential& p) {
  const long long n = step_count(cfg);
  auto pos = initial_positions(cfg, p, 1);
  auto rng = make_stream(cfg.seed, 0);
  std::normal_distribution<double> normal;
  const double diff = std::sqrt(2 * cfg.eps);

  EstimatorOutput out;
  out.seed = cfg.seed;
  out.occupation_histogram.assign(
      1, WeightedHistogram{p.lower(), p.upper(),
                           std::vector<double>(cfg.histogram_bins, 0.0)});
  Kahan acc;
  Dump dump;
  dump.open(cfg, 1);
  double x = p.wrap(pos[0]);
  for (long long s = 0; s < n; ++s) {
    acc.add(in_target(cfg, x) ? 1.0 : 0.0);
    out.occupation_histogram[0].accumulate(x, 1.0);
    dump.record({x});
    x = euler_step(x, p.gradient(x), diff, normal(rng), cfg.dt, p);
  }
  out.theta = acc.sum / static_cast<double>(n);
  out.wall_steps = n;
  for (auto& h : out.occupation_histogram) h.normalize();
  return out;
}

EstimatorOutput run_pt(const SimulationConfig& cfg, const Potential& p) {
  if (cfg.ladder.K() != 2)
    throw std::invalid_argument("run_pt: exactly two temperatures required");
  if (cfg.swap_rate < 0)
    throw std::invalid_argument("run_pt: swap_rate must be nonnegative");
  if (cfg.swap_rate * cfg.dt > 0.1)
    throw std::invalid_argument(
        "run_pt: swap_rate * dt exceeds 0.1; thinning would be inaccurate");
  const long long n = step_count(cfg);
  const double a2 = cfg.ladder.alphas[1];
  auto x = initial_positions(cfg, p, 2);
  for (double& xi : x) xi = p.wrap(xi);
  std::mt19937_64 rng[2] = {make_stream(cfg.seed, 0), make_stream(cfg.seed, 1)};
  auto clock_rng = make_stream(cfg.seed, kClockStream);
  std::normal_distribution<double> normal[2];
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double diff[2] = {std::sqrt(2 * cfg.eps),
                          std::sqrt(2 * cfg.eps / a2)};

  EstimatorOutput out;
  out.seed = cfg.seed;
  out.occupation_histogram.assign(
      2, WeightedHistogram{p.lower(), p.upper(),
                           std::vector<double>(cfg.histogram_bins, 0.0)});
  Kahan acc;
  Dump dump;
  dump.open(cfg, 2);
  for (long long s = 0; s < n; ++s) {
    acc.add(in_target(cfg, x[0]) ? 1.0 : 0.0);
    out.occupation_histogram[0].accumulate(x[0], 1.0);
    out.occupation_histogram[1].accumulate(x[1], 1.0);
    dump.record(x);
    for (int i = 0; i < 2; ++i)
      x[i] = euler_step(x[i], p.gradient(x[i]), diff[i], normal[i](rng[i]),
                        cfg.dt, p);
    if (cfg.swap_rate > 0) {
      // psi(x2,x1)/psi(x1,x2) = exp(-(1-a2)(V(x2)-V(x1))/eps)
      const double ratio =
          std::exp(-(1 - a2) * (p.value(x[1]) - p.value(x[0])) / cfg.eps);
      const double intensity = cfg.swap_rate * std::min(1.0, ratio);
      if (unif(clock_rng) < intensity * cfg.dt) std::swap(x[0], x[1]);
    }
  }
  out.theta = acc.sum / static_cast<double>(n);
  out.wall_steps = n;
  for (auto& h : out.occupation_histogram) h.normalize();
  return out;
}

EstimatorOutput run_ins(const SimulationConfig& cfg, const Potential& p) {
  const int K = cfg.ladder.K();
  if (K > kMaxEnsemble)
    throw std::length_error("run_ins: K exceeds the ensemble cap");
  const long long n = step_count(cfg);
  EnsembleState state;
  state.positions = initial_positions(cfg, p, K);
  for (double& xi : state.positions) xi = p.wrap(xi);
  state.v_values.resize(K);
  std::vector<std::mt19937_64> rng;
  for (int i = 0; i < K; ++i) rng.push_back(make_stream(cfg.seed, i));
  std::vector<std::normal_distribution<double>> normal(K);

  EstimatorOutput out;
  out.seed = cfg.seed;
  out.occupation_histogram.assign(
      K, WeightedHistogram{p.lower(), p.upper(),
                           std::vector<double>(cfg.histogram_bins, 0.0)});
  Kahan acc;
  Dump dump;
  dump.open(cfg, K);
  for (long long s = 0; s < n; ++s) {
    for (int i = 0; i < K; ++i) state.v_values[i] = p.value(state.positions[i]);
    const WeightTable wt = compute_weights(state, cfg.ladder, cfg.eps);
    double occ = 0;  // sum_i rho_i1 1_A(x_i): slot-1 weighted occupation
    for (int i = 0; i < K; ++i) {
      if (in_target(cfg, state.positions[i])) occ += wt.rho[i][0];
      for (int l = 0; l < K; ++l)
        out.occupation_histogram[l].accumulate(state.positions[i], wt.rho[i][l]);
    }
    acc.add(occ);
    dump.record(state.positions);
    for (int i = 0; i < K; ++i) {
      double sum = 0;
      for (int j = 0; j < K; ++j) sum += wt.rho[i][j] / cfg.ladder.alphas[j];
      const double diff = std::sqrt(2 * cfg.eps * sum);
      state.positions[i] =
          euler_step(state.positions[i], p.gradient(state.positions[i]), diff,
                     normal[i](rng[i]), cfg.dt, p);
    }
  }
  out.theta = acc.sum / static_cast<double>(n);
  out.wall_steps = n;
  for (auto& h : out.occupation_histogram) h.normalize();
  return out;
}

}  // namespace ins
