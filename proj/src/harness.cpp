#include "ins/harness.hpp"

#include <algorithm>
#include <limits>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ins/rng.hpp"

namespace ins {

std::string method_name(Method m) {
  switch (m) {
    case Method::mcmc: return "mcmc";
    case Method::pt: return "pt";
    case Method::ins_method: return "ins";
  }
  return "unknown";
}

Method method_from_name(const std::string& s) {
  if (s == "mcmc") return Method::mcmc;
  if (s == "pt") return Method::pt;
  if (s == "ins") return Method::ins_method;
  throw std::invalid_argument("unknown method: " + s);
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0)
    throw std::runtime_error(
        "quadrature did not converge; achieved |error| ~ " +
        std::to_string(std::fabs(delta)));
  if (std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

// integral over [a,b] of exp(-(V - shift)/eps), with shift = min V on [a,b]
double shifted_integral(const Potential& p, double eps, double a, double b,
                        double* shift_out) {
  const int n = 4096;
  double vmin = p.value(a);
  for (int i = 1; i <= n; ++i)
    vmin = std::min(vmin, p.value(a + (b - a) * i / n));
  auto f = [&p, eps, vmin](double x) {
    return std::exp(-(p.value(x) - vmin) / eps);
  };
  // Split into panels so narrow wells are not missed by the first parabola.
  const int panels = 64;
  double total = 0;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + (b - a) * k / panels;
    const double hi = a + (b - a) * (k + 1) / panels;
    const double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6 * (fa + 4 * fm + fb);
    total += adaptive_simpson(f, lo, hi, fa, fm, fb, whole,
                              1e-8 * std::max(whole, 1e-300) + 1e-14, 48);
  }
  *shift_out = vmin;
  return total;
}

}  // namespace

double gibbs_quadrature(const Potential& p, double eps, double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("gibbs_quadrature: empty set");
  double shift_a = 0, shift_d = 0;
  const double num = shifted_integral(p, eps, lo, hi, &shift_a);
  const double den =
      shifted_integral(p, eps, p.lower(), p.upper(), &shift_d);
  return std::exp(-(shift_a - shift_d) / eps) * num / den;
}

std::pair<double, double> fit_decay_rate(
    const std::vector<double>& eps, const std::vector<double>& var_times_T) {
  const int n = static_cast<int>(eps.size());
  if (n < 2 || var_times_T.size() != eps.size())
    throw std::invalid_argument("fit_decay_rate: need >= 2 grid points");
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    if (var_times_T[i] <= 0)
      throw std::invalid_argument("fit_decay_rate: nonpositive variance");
    x[i] = 1.0 / eps[i];
    y[i] = std::log(var_times_T[i]);
  }
  double xm = 0, ym = 0;
  for (int i = 0; i < n; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  const double slope = sxy / sxx;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - ym - slope * (x[i] - xm);
    rss += r * r;
  }
  const double se = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return {-slope, se};
}

namespace {

EstimatorOutput run_one(const ExperimentPlan& plan, const Potential& p,
                        const SimulationConfig& cfg) {
  switch (plan.method) {
    case Method::mcmc: return run_mcmc(cfg, p);
    case Method::pt: return run_pt(cfg, p);
    case Method::ins_method: return run_ins(cfg, p);
  }
  throw std::logic_error("unreachable");
}

constexpr std::uint64_t kInitStream = 1u << 21;  // initial-position draws

// Tabulated inverse CDF of e^{-V/eps} for stationary initialization.  The
// time average from a stationary start is unbiased, so the bias check tests
// the estimator rather than the relaxation from an arbitrary start.
class GibbsSampler {
 public:
  GibbsSampler(const Potential& p, double eps) : lo_(p.lower()) {
    const int n = 8192;
    width_ = (p.upper() - p.lower()) / n;
    double vmin = std::numeric_limits<double>::infinity();
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
      v[i] = p.value(lo_ + (i + 0.5) * width_);
      vmin = std::min(vmin, v[i]);
    }
    cum_.resize(n);
    double total = 0;
    for (int i = 0; i < n; ++i) {
      total += std::exp(-(v[i] - vmin) / eps);
      cum_[i] = total;
    }
  }

  double draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u(0.0, cum_.back());
    const double target = u(rng);
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
    const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
    const double prev = i == 0 ? 0.0 : cum_[i - 1];
    const double frac = (target - prev) / (cum_[i] - prev);
    return lo_ + (static_cast<double>(i) + frac) * width_;
  }

 private:
  double lo_;
  double width_;
  std::vector<double> cum_;
};

}  // namespace

ExperimentRecord run_experiment(const ExperimentPlan& plan, const Potential& p,
                                double predicted_bound, double tolerance) {
  if (plan.eps_grid.empty())
    throw std::invalid_argument("run_experiment: empty eps grid");
  for (std::size_t i = 1; i < plan.eps_grid.size(); ++i)
    if (plan.eps_grid[i] >= plan.eps_grid[i - 1])
      throw std::invalid_argument(
          "run_experiment: eps grid must be strictly decreasing");
  if (plan.replications < 2)
    throw std::invalid_argument("run_experiment: need >= 2 replications");

  ExperimentRecord rec;
  rec.plan = plan;
  rec.predicted_bound = predicted_bound;
  rec.tolerance = tolerance;

  int nthreads = plan.threads > 0
                     ? plan.threads
                     : static_cast<int>(std::thread::hardware_concurrency());
  if (nthreads < 1) nthreads = 1;

  std::vector<double> grid_eps, grid_varT;
  for (std::size_t e = 0; e < plan.eps_grid.size(); ++e) {
    const double eps = plan.eps_grid[e];
    EpsStats st;
    st.eps = eps;
    st.horizon = horizon_from_exponent(plan.horizon_exponent, eps);
    const double cap = static_cast<double>(plan.max_steps) * plan.dt;
    if (st.horizon > cap) {
      st.horizon = cap;
      st.horizon_truncated = true;
    }
    if (st.horizon < plan.dt) st.horizon = plan.dt;

    // One equilibrium sampler per temperature slot; the K-particle stationary
    // law is the symmetrized product, and the estimator is permutation
    // invariant, so independent per-slot draws start it at stationarity.
    std::vector<GibbsSampler> init;
    for (double a : plan.ladder.alphas) init.emplace_back(p, eps / a);

    const int R = plan.replications;
    std::vector<double> thetas(R);
    std::vector<std::uint64_t> seeds(R);
    std::exception_ptr failure;
    std::uint64_t failed_seed = 0;
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    std::mutex mu;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back([&]() {
        for (int r; (r = next.fetch_add(1)) < R;) {
          SimulationConfig cfg;
          cfg.eps = eps;
          cfg.dt = plan.dt;
          cfg.T = st.horizon;
          cfg.ladder = plan.ladder;
          cfg.seed = derive_seed(plan.master_seed,
                                 (static_cast<std::uint64_t>(e) << 32) |
                                     static_cast<std::uint64_t>(r));
          cfg.swap_rate = plan.swap_rate;
          cfg.target_lo = plan.target_lo;
          cfg.target_hi = plan.target_hi;
          cfg.histogram_bins = 50;  // keep replicate outputs light
          auto init_rng = make_stream(cfg.seed, kInitStream);
          for (const auto& g : init)
            cfg.initial_positions.push_back(g.draw(init_rng));
          seeds[r] = cfg.seed;
          try {
            thetas[r] = run_one(plan, p, cfg).theta;
          } catch (...) {
            std::lock_guard<std::mutex> lk(mu);
            if (!failure) {
              failure = std::current_exception();
              failed_seed = cfg.seed;
            }
            return;
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (failure) {
      try {
        std::rethrow_exception(failure);
      } catch (const std::exception& ex) {
        throw std::runtime_error("replicate with seed " +
                                 std::to_string(failed_seed) +
                                 " failed: " + ex.what());
      }
    }

    double mean = 0;
    for (double th : thetas) mean += th;
    mean /= R;
    double var = 0;
    for (double th : thetas) var += (th - mean) * (th - mean);
    var /= (R - 1);
    st.mean = mean;
    st.variance = var;
    st.std_error = std::sqrt(var / R);
    st.truth = gibbs_quadrature(p, eps, plan.target_lo, plan.target_hi);
    st.rel_error = st.truth > 0 ? std::fabs(mean - st.truth) / st.truth : 0;
    st.var_times_T = var * st.horizon;
    st.bias_ok = std::fabs(mean - st.truth) <= 3 * st.std_error;
    rec.stats.push_back(st);
    grid_eps.push_back(eps);
    grid_varT.push_back(st.var_times_T);

    for (int r = 0; r < R; ++r) {
      ReplicateRow row;
      row.eps = eps;
      row.replicate = r;
      row.seed = seeds[r];
      row.theta = thetas[r];
      row.var_contrib = (thetas[r] - mean) * (thetas[r] - mean) / (R - 1);
      rec.rows.push_back(row);
    }
  }

  auto [rate, se] = fit_decay_rate(grid_eps, grid_varT);
  rec.fitted_rate = rate;
  rec.fitted_rate_stderr = se;
  rec.fitted_rate_ci_low = rate - 1.96 * se;
  rec.fitted_rate_ci_high = rate + 1.96 * se;
  rec.verdict = rate >= predicted_bound - tolerance;
  return rec;
}

nlohmann::json record_to_json(const ExperimentRecord& rec) {
  nlohmann::json j;
  j["schema_version"] = rec.schema_version;
  nlohmann::json p;
  p["eps_grid"] = rec.plan.eps_grid;
  p["replications"] = rec.plan.replications;
  p["method"] = method_name(rec.plan.method);
  p["ladder"] = rec.plan.ladder.alphas;
  p["target_lo"] = rec.plan.target_lo;
  p["target_hi"] = rec.plan.target_hi;
  p["horizon_exponent"] = rec.plan.horizon_exponent;
  p["dt"] = rec.plan.dt;
  p["swap_rate"] = rec.plan.swap_rate;
  p["master_seed"] = rec.plan.master_seed;
  p["max_steps"] = rec.plan.max_steps;
  j["plan"] = p;
  j["stats"] = nlohmann::json::array();
  for (const auto& s : rec.stats) {
    j["stats"].push_back({{"eps", s.eps},
                          {"horizon", s.horizon},
                          {"horizon_truncated", s.horizon_truncated},
                          {"mean", s.mean},
                          {"variance", s.variance},
                          {"std_error", s.std_error},
                          {"truth", s.truth},
                          {"rel_error", s.rel_error},
                          {"var_times_T", s.var_times_T},
                          {"bias_ok", s.bias_ok}});
  }
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rec.rows) {
    j["rows"].push_back({{"eps", r.eps},
                         {"replicate", r.replicate},
                         {"seed", r.seed},
                         {"theta", r.theta},
                         {"var_contrib", r.var_contrib}});
  }
  j["fitted_rate"] = rec.fitted_rate;
  j["fitted_rate_stderr"] = rec.fitted_rate_stderr;
  j["fitted_rate_ci_low"] = rec.fitted_rate_ci_low;
  j["fitted_rate_ci_high"] = rec.fitted_rate_ci_high;
  j["predicted_bound"] = rec.predicted_bound;
  j["verdict"] = rec.verdict;
  j["tolerance"] = rec.tolerance;
  return j;
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord rec;
  rec.schema_version = j.at("schema_version").get<int>();
  if (rec.schema_version != 1)
    throw std::runtime_error("record schema version mismatch: expected 1, got " +
                             std::to_string(rec.schema_version));
  const auto& p = j.at("plan");
  rec.plan.eps_grid = p.at("eps_grid").get<std::vector<double>>();
  rec.plan.replications = p.at("replications").get<int>();
  rec.plan.method = method_from_name(p.at("method").get<std::string>());
  rec.plan.ladder = TemperatureLadder(p.at("ladder").get<std::vector<double>>());
  rec.plan.target_lo = p.at("target_lo").get<double>();
  rec.plan.target_hi = p.at("target_hi").get<double>();
  rec.plan.horizon_exponent = p.at("horizon_exponent").get<double>();
  rec.plan.dt = p.at("dt").get<double>();
  rec.plan.swap_rate = p.at("swap_rate").get<double>();
  rec.plan.master_seed = p.at("master_seed").get<std::uint64_t>();
  rec.plan.max_steps = p.at("max_steps").get<long long>();
  for (const auto& s : j.at("stats")) {
    EpsStats st;
    st.eps = s.at("eps").get<double>();
    st.horizon = s.at("horizon").get<double>();
    st.horizon_truncated = s.at("horizon_truncated").get<bool>();
    st.mean = s.at("mean").get<double>();
    st.variance = s.at("variance").get<double>();
    st.std_error = s.at("std_error").get<double>();
    st.truth = s.at("truth").get<double>();
    st.rel_error = s.at("rel_error").get<double>();
    st.var_times_T = s.at("var_times_T").get<double>();
    st.bias_ok = s.at("bias_ok").get<bool>();
    rec.stats.push_back(st);
  }
  for (const auto& r : j.at("rows")) {
    ReplicateRow row;
    row.eps = r.at("eps").get<double>();
    row.replicate = r.at("replicate").get<int>();
    row.seed = r.at("seed").get<std::uint64_t>();
    row.theta = r.at("theta").get<double>();
    row.var_contrib = r.at("var_contrib").get<double>();
    rec.rows.push_back(row);
  }
  rec.fitted_rate = j.at("fitted_rate").get<double>();
  rec.fitted_rate_stderr = j.at("fitted_rate_stderr").get<double>();
  rec.fitted_rate_ci_low = j.at("fitted_rate_ci_low").get<double>();
  rec.fitted_rate_ci_high = j.at("fitted_rate_ci_high").get<double>();
  rec.predicted_bound = j.at("predicted_bound").get<double>();
  rec.verdict = j.at("verdict").get<bool>();
  rec.tolerance = j.at("tolerance").get<double>();
  return rec;
}

namespace {

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace

void save_record(const ExperimentRecord& rec, const std::string& json_path,
                 const std::string& csv_path) {
  atomic_write(json_path, record_to_json(rec).dump(2) + "\n");
  std::ostringstream csv;
  csv << "eps,replicate,seed,theta,var_contrib\n";
  csv.precision(17);
  for (const auto& r : rec.rows)
    csv << r.eps << ',' << r.replicate << ',' << r.seed << ',' << r.theta
        << ',' << r.var_contrib << '\n';
  atomic_write(csv_path, csv.str());
}

ExperimentRecord load_record(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::runtime_error("cannot open " + json_path);
  nlohmann::json j;
  in >> j;
  return record_from_json(j);
}

}  // namespace ins
