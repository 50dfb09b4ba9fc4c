#include <cmath>
#include <stdexcept>
#include <random>

#include "doctest.h"
#include "ins/rates.hpp"
#include "ins/rng.hpp"

using namespace ins;

namespace {

// dense-grid evaluation of the defining infimum:
//   inf over (V(A), v_2..v_K) of 2 sum_l a_l v_l - U(v)
double brute_rate(double vA, const TemperatureLadder& lad, double vmax,
                  int steps) {
  const int K = lad.K();
  std::vector<double> v(K);
  v[0] = vA;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(K - 1, 0);
  while (true) {
    for (int k = 0; k < K - 1; ++k) v[k + 1] = vmax * idx[k] / steps;
    double lin = 0;
    for (int l = 0; l < K; ++l) lin += lad.alphas[l] * v[l];
    best = std::min(best, 2 * lin - symmetrized_potential(v, lad));
    int k = 0;
    while (k < K - 1 && ++idx[k] == steps + 1) idx[k++] = 0;
    if (K == 1 || k == K - 1) break;
  }
  return best;
}

TwoWellSpec spec_of(double hl, double hr) {
  return {hl, hr, -1.0, 0.85, 0.0};
}

TargetSet target_of(double vA, TargetSide side) {
  TargetSet t;
  t.lo = side == TargetSide::left_of_barrier ? -2.0 : 0.9;
  t.hi = t.lo + 0.2;
  t.v_of_A = vA;
  t.side = side;
  return t;
}

TemperatureLadder random_ladder(std::mt19937_64& rng, int K) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> a(K);
  a[0] = 1;
  for (int l = 1; l < K; ++l) a[l] = a[l - 1] * u(rng);
  return TemperatureLadder(a);
}

}  // namespace

TEST_CASE("decay rate closed form") {
  CHECK(r_of_alpha(1.0, TemperatureLadder({1.0, 0.5})) == doctest::Approx(1.5));
  CHECK(r_of_alpha(0.7, TemperatureLadder({1.0})) == doctest::Approx(0.7));
  CHECK(r_of_alpha(1.0, TemperatureLadder({1.0, 1.0})) == doctest::Approx(1.0));
}

TEST_CASE("closed form equals dense-grid brute force") {
  auto rng = make_stream(41, 0);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int K = 1 + trial % 3;
    const double vA = u(rng);
    auto lad = random_ladder(rng, K);
    const double closed = r_of_alpha(vA, lad);
    const double brute = brute_rate(vA, lad, vA, 200);
    CHECK(std::fabs(closed - brute) < 1e-3);
    // values above V(A) never help
    CHECK(brute_rate(vA, lad, 1.5 * vA, 300) >= closed - 1e-3);
  }
}

TEST_CASE("ladder supremum") {
  {
    auto [rate, lad] = sup_r(2.0, 3);
    CHECK(rate == doctest::Approx(3.5));
    CHECK(lad.alphas == std::vector<double>{1.0, 0.5, 0.25});
  }
  {
    auto [rate, lad] = sup_r(0.9, 1);
    CHECK(rate == doctest::Approx(0.9));
    CHECK(lad.alphas == std::vector<double>{1.0});
  }
  {
    auto [rate, lad] = sup_r(1.0, 7);
    (void)lad;
    CHECK(2.0 - rate == doctest::Approx(1.0 / 64));
  }
}

TEST_CASE("two-well bound components") {
  auto spec = spec_of(1.0, 0.6);
  SUBCASE("left-side deep-target value") {
    auto r = two_well_rates(spec, target_of(1.0, TargetSide::left_of_barrier),
                            TemperatureLadder({1.0, 0.5}));
    CHECK(r.r3 == doctest::Approx(1.5));
    CHECK(r.lower_bound == doctest::Approx(std::min(r.r1, r.r3)));
  }
  SUBCASE("vanishing alpha_K recovers the benchmark in the third term") {
    auto r = two_well_rates(spec, target_of(0.8, TargetSide::left_of_barrier),
                            TemperatureLadder({1.0, 1e-9}));
    CHECK(r.r3 == doctest::Approx(1.6).epsilon(1e-6));
  }
  SUBCASE("second term enumerates its index set") {
    const double d = 0.25, vA = 0.8, hl = 1.0, hr = 0.6;
    auto r = two_well_rates(spec, target_of(vA, TargetSide::right_of_barrier),
                            TemperatureLadder({1.0, d}));
    // K=2: i=2 gives 2V(A) - a2(hL-hR); i=3 gives 2V(A) + (a2-1)(hL-hR)
    const double i2 = 2 * vA - d * (hl - hr);
    const double i3 = 2 * vA + (d - 1) * (hl - hr);
    CHECK(r.r2 == doctest::Approx(std::min(i2, i3) - d * hr));
  }
  SUBCASE("straddling targets are refused") {
    CHECK_THROWS_AS(two_well_rates(spec, target_of(0.5, TargetSide::general),
                                   TemperatureLadder({1.0, 0.5})),
                    std::invalid_argument);
  }
}

TEST_CASE("closed-form optima") {
  SUBCASE("left, deep target") {
    auto rep = optimal_two_well(spec_of(1.0, 0.6),
                                target_of(2.0, TargetSide::left_of_barrier), 3);
    CHECK(rep.predicted_rate == doctest::Approx(3.5));
    CHECK(rep.optimal_ladder.alphas == std::vector<double>{1.0, 0.5, 0.25});
  }
  SUBCASE("left, shallow target") {
    auto rep = optimal_two_well(spec_of(1.0, 0.6),
                                target_of(0.5, TargetSide::left_of_barrier), 2);
    CHECK(rep.predicted_rate == doctest::Approx(2.0 / 3));
    CHECK(rep.optimal_ladder.alphas[1] == doctest::Approx(1.0 / 3));
  }
  SUBCASE("right, franz-like geometry") {
    auto rep = optimal_two_well(spec_of(1.0, 0.6482),
                                target_of(0.8, TargetSide::right_of_barrier), 2);
    CHECK(rep.predicted_rate == doctest::Approx(1.127).epsilon(1e-3));
    CHECK(rep.optimal_ladder.alphas[1] == doctest::Approx(0.4088).epsilon(1e-3));
  }
  SUBCASE("grid search over ladders never beats the closed form") {
    for (auto side : {TargetSide::left_of_barrier, TargetSide::right_of_barrier}) {
      auto spec = spec_of(1.0, 0.6482);
      auto tgt = target_of(0.8, side);
      auto rep = optimal_two_well(spec, tgt, 2);
      double best = 0;
      for (int i = 1; i <= 256; ++i) {
        auto r = two_well_rates(spec, tgt, TemperatureLadder({1.0, i / 256.0}));
        best = std::max(best, r.lower_bound);
      }
      CHECK(rep.predicted_rate >= best - 1e-6);
    }
  }
  SUBCASE("degenerate boundary is substituted and flagged") {
    auto rep = optimal_two_well(spec_of(1.0, 0.6),
                                target_of(0.4, TargetSide::right_of_barrier), 2);
    CHECK(rep.boundary_substitution);
    CHECK(rep.optimal_ladder.alphas[1] == doctest::Approx(0.1));
    CHECK(rep.predicted_rate <= rep.benchmark);
    // roundoff on either side of the boundary must not change the outcome
    for (double nudge : {1e-12, -1e-12}) {
      auto near = optimal_two_well(
          spec_of(1.0, 0.6),
          target_of(0.4 + nudge, TargetSide::right_of_barrier), 2);
      CHECK(near.boundary_substitution);
      CHECK(near.optimal_ladder.alphas[1] == doctest::Approx(0.1));
    }
  }
  SUBCASE("hypothesis violations are reported") {
    CHECK_THROWS_AS(
        optimal_two_well(spec_of(1.0, 0.6),
                         target_of(0.3, TargetSide::right_of_barrier), 2),
        std::domain_error);
  }
}

TEST_CASE("variational terms over product equilibria") {
  auto lg = landscape_from_critical_points({{-1.0, 0.0, true},
                                            {0.0, 1.0, false},
                                            {0.85, 0.35, true},
                                            {1.9, 1.6, false}});
  TargetSet tgt = target_of(0.8, TargetSide::right_of_barrier);
  for (double a2 : {0.5, 0.3, 0.8}) {
    TemperatureLadder lad({1.0, a2});
    auto gd = graph_rate_data(lg, lad);
    auto rep = assemble_R_terms(lg, lad, tgt, gd);
    const double r = r_of_alpha(tgt.v_of_A, lad);
    CHECK(rep.components.at("min_R1") == doctest::Approx(r).epsilon(1e-10));
    CHECK(rep.components.at("min_R2") >=
          r - std::max(gd.h, gd.w) - 1e-10);
    CHECK(rep.predicted_rate <= rep.benchmark + 1e-12);
  }
  SUBCASE("single-well single-particle case collapses to plain MC") {
    LandscapeGraph well;
    well.minima.push_back({0, 0.0, 0.0});
    well.saddles.push_back({0, 1.0, 2.0});
    well.edges.push_back({0, 0, 0});
    well.global_min_id = 0;
    TemperatureLadder one({1.0});
    auto gd = graph_rate_data(well, one);
    TargetSet t;
    t.lo = 0.2;
    t.hi = 0.4;
    t.v_of_A = 0.9;
    t.side = TargetSide::general;
    auto rep = assemble_R_terms(well, one, t, gd);
    CHECK(rep.components.at("min_R1") == doctest::Approx(0.9));
  }
}

TEST_CASE("geometric-ladder landscape bound") {
  auto lg = landscape_from_critical_points({{-1.0, 0.0, true},
                                            {0.0, 1.0, false},
                                            {0.85, 0.5, true},
                                            {1.9, 2.0, false}});
  TargetSet t;
  t.lo = 0.2;
  t.hi = 0.4;
  t.v_of_A = 1.0;
  t.side = TargetSide::general;
  auto rep = multiwell_bound(lg, 4, t);
  CHECK(rep.components.at("B") == doctest::Approx(2.0));
  CHECK(rep.predicted_rate == doctest::Approx(1.625));
  CHECK(rep.components.at("c_min") == doctest::Approx(2.0 / 8));

  SUBCASE("rate is nondecreasing in K and approaches the benchmark") {
    double prev = -1e9;
    for (int K = 1; K <= 8; ++K) {
      auto r = multiwell_bound(lg, K, t);
      CHECK(r.predicted_rate >= prev - 1e-12);
      prev = r.predicted_rate;
      CHECK(r.predicted_rate <= r.benchmark);
    }
    CHECK(std::fabs(multiwell_bound(lg, 8, t).predicted_rate - 2.0) < 0.05);
  }
  SUBCASE("gap halves exactly while the landscape constant is pinned") {
    // deep two-well: b1 dominates K * climb for all tested K
    auto deep = landscape_from_critical_points({{-1.0, 0.0, true},
                                                {0.0, 4.0, false},
                                                {0.85, 3.5, true},
                                                {1.9, 5.0, false}});
    for (int K = 2; K <= 5; ++K) {
      const double g1 = multiwell_bound(deep, K, t).gap;
      const double g2 = multiwell_bound(deep, K + 1, t).gap;
      CHECK(g2 / g1 == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

TEST_CASE("rate report serialization round trip") {
  auto rep = optimal_two_well(spec_of(1.0, 0.6482),
                              target_of(0.8, TargetSide::right_of_barrier), 3);
  auto j = report_to_json(rep);
  auto back = report_from_json(j);
  CHECK(back.predicted_rate == rep.predicted_rate);
  CHECK(back.optimal_ladder.alphas == rep.optimal_ladder.alphas);
  CHECK(back.components == rep.components);
  CHECK(report_to_json(back) == j);
}
