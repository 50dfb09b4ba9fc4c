#include "ins/verify.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <random>
#include <vector>

#include "ins/graphcalc.hpp"
#include "ins/rates.hpp"
#include "ins/rng.hpp"

namespace ins {

namespace {

LandscapeGraph three_well() {
  return landscape_from_critical_points({{-2.0, 0.0, true},
                                         {-1.0, 4.0, false},
                                         {0.0, 2.0, true},
                                         {1.0, 6.0, false},
                                         {2.0, 1.0, true},
                                         {3.0, 20.0, false}});
}

}  // namespace

int run_verification(std::ostream& out, bool inject_corruption) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    out << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  {  // permutation weights: sum to one, rho doubly stochastic
    auto rng = make_stream(7, 0);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    bool ok = true;
    for (int trial = 0; trial < 500 && ok; ++trial) {
      const int K = 1 + trial % 5;
      std::vector<double> alphas(K);
      alphas[0] = 1;
      for (int l = 1; l < K; ++l) alphas[l] = alphas[l - 1] * (0.3 + 0.7 * u(rng) / 3);
      TemperatureLadder lad(alphas);
      EnsembleState st;
      for (int i = 0; i < K; ++i) {
        st.positions.push_back(u(rng));
        st.v_values.push_back(u(rng));
      }
      auto wt = compute_weights(st, lad, 0.1 + u(rng));
      double sum = 0;
      for (double w : wt.weights) sum += w;
      ok = ok && std::fabs(sum - 1) < 1e-12;
      for (int i = 0; i < K; ++i) {
        double row = 0, col = 0;
        for (int j = 0; j < K; ++j) {
          row += wt.rho[i][j];
          col += wt.rho[j][i];
        }
        ok = ok && std::fabs(row - 1) < 1e-12 && std::fabs(col - 1) < 1e-12;
      }
    }
    check("weights: normalization and doubly stochastic rho", ok);
  }

  {  // W-value differences equal U-value differences
    auto lg = three_well();
    TemperatureLadder lad(std::vector<double>{1.0, 0.5});
    auto gd = graph_rate_data(lg, lad);
    ProductSystem ps(lg, lad);
    bool ok = gd.exact_mode;
    for (int i = 0; ok && i < ps.size(); ++i)
      for (int j = 0; ok && j < ps.size(); ++j) {
        const double lhs = gd.W_values[i] - gd.W_values[j];
        const double rhs = ps.node(i).u_value - ps.node(j).u_value;
        ok = std::fabs(lhs - rhs) < 1e-10;
      }
    check("W-graph values shift with the symmetrized potential", ok);
  }

  {  // basin-exit closed form
    auto lg = three_well();
    bool ok = true;
    for (double aK : {1.0, 0.5, 0.25}) {
      TemperatureLadder lad(std::vector<double>{1.0, aK});
      ok = ok && std::fabs(compute_h(lg, lad) - aK * 4.0) < 1e-12;
    }
    check("exit cost h equals alpha_K times the lowest barrier", ok);
  }

  {  // ladder supremum vs coarse grid, K = 2
    const double vA = 1.3;
    auto [rate, lad] = sup_r(vA, 2);
    (void)lad;
    double best = 0;
    for (int i = 1; i <= 64; ++i) {
      TemperatureLadder cand(std::vector<double>{1.0, i / 64.0});
      best = std::max(best, r_of_alpha(vA, cand));
    }
    check("ladder supremum formula beats a grid search",
          rate >= best - 1e-12 && rate - best < 2e-2 * vA + 1e-12);
  }

  {  // W-graph counts on small node sets
    bool ok = enumerate_wgraphs(2, {0}).size() == 1 &&
              enumerate_wgraphs(3, {0}).size() == 3 &&
              enumerate_wgraphs(3, {0, 1}).size() == 2 &&
              enumerate_wgraphs(4, {0}).size() == 16;  // 4^(4-2)
    check("in-forest counts on small node sets", ok);
  }

  {  // least-cost in-forest value via arborescence vs exhaustive enumeration
    auto lg = landscape_from_critical_points({{-1.0, 0.0, true},
                                              {0.0, 1.0, false},
                                              {0.85, 0.35, true},
                                              {1.9, 1.6, false}});
    TemperatureLadder lad(std::vector<double>{1.0, 0.5});
    ProductSystem ps(lg, lad);
    std::vector<std::vector<double>> cost(ps.size(),
                                          std::vector<double>(ps.size()));
    for (int i = 0; i < ps.size(); ++i)
      for (int j = 0; j < ps.size(); ++j) cost[i][j] = ps.arrow_cost(i, j);
    if (inject_corruption) cost[1][0] += 3.5;
    bool ok = true;
    for (int target = 0; target < 3 && ok; ++target) {
      double brute = std::numeric_limits<double>::infinity();
      for (const auto& g : enumerate_wgraphs(ps.size(), {target})) {
        double s = 0;
        for (auto [from, to] : g.arrows) s += ps.arrow_cost(from, to);
        brute = std::min(brute, s);
      }
      ok = std::fabs(w_of({target}, cost) - brute) < 1e-10;
    }
    check("arborescence minimum matches exhaustive in-forest search", ok);
  }

  return failures;
}

}  // namespace ins
