#include <cmath>
#include <stdexcept>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ins/potential.hpp"
#include "ins/rng.hpp"

using namespace ins;

TEST_CASE("franz potential pins the stated critical values") {
  auto p = franz_potential(0.85);
  CHECK(p.value(-1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.value(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  const double th = 0.85;
  const double right = 1.0 - th * th * th * (th + 2) / (2 * th + 1);
  CHECK(p.value(0.85) == doctest::Approx(right).epsilon(1e-12));
  CHECK_THROWS_AS(franz_potential(1.2), std::domain_error);
  CHECK_THROWS_AS(franz_potential(-0.1), std::domain_error);
}

TEST_CASE("potentials are periodic and gradients match finite differences") {
  auto rng = make_stream(11, 0);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (const auto& p :
       {franz_potential(0.85), franz_potential(0.3),
        hermite_potential(-2.0, 2.0, {{-1.0, 0.0, true},
                                      {0.0, 2.0, false},
                                      {1.0, 0.5, true},
                                      {1.8, 3.0, false}})}) {
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      CHECK(p.value(x) ==
            doctest::Approx(p.value(x + p.period())).epsilon(1e-9));
      const double h = 1e-6;
      const double fd = (p.value(x + h) - p.value(x - h)) / (2 * h);
      const double g = p.gradient(x);
      CHECK(std::fabs(fd - g) <=
            1e-6 * std::max({1.0, std::fabs(fd), std::fabs(g)}));
    }
  }
}

TEST_CASE("landscape extraction on the franz potential") {
  auto p = franz_potential(0.85);
  auto lg = extract_landscape(p, 4096);
  REQUIRE(lg.minima.size() == 2);
  REQUIRE(lg.saddles.size() == 2);
  std::vector<double> mins{lg.minima[0].value, lg.minima[1].value};
  std::sort(mins.begin(), mins.end());
  CHECK(mins[0] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(mins[1] == doctest::Approx(0.35176).epsilon(1e-4));
  std::vector<double> sads{lg.saddles[0].value, lg.saddles[1].value};
  std::sort(sads.begin(), sads.end());
  CHECK(sads[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sads[1] > 1.0);  // periodic-seam barrier dominates

  // refinement changes no critical value beyond 1e-8
  auto lg2 = extract_landscape(p, 8192);
  REQUIRE(lg2.minima.size() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::fabs(lg.minima[i].value - lg2.minima[i].value) < 1e-8);
    CHECK(std::fabs(lg.saddles[i].value - lg2.saddles[i].value) < 1e-8);
  }
}

TEST_CASE("single quadratic well yields one minimum and the seam saddle") {
  Potential p(
      -1.0, 1.0, [](double x) { return x * x; }, [](double x) { return 2 * x; },
      "quadratic");
  auto lg = extract_landscape(p, 4096);
  CHECK(lg.minima.size() == 1);
  CHECK(lg.saddles.size() == 1);
}

TEST_CASE("three-well interpolant round-trips its critical data") {
  std::vector<CriticalPoint> pts{{-2.0, 0.1, true}, {-1.2, 1.4, false},
                                 {-0.3, 0.6, true}, {0.5, 2.2, false},
                                 {1.4, 0.9, true},  {2.2, 3.1, false}};
  auto p = hermite_potential(-2.5, 2.5, pts);
  auto lg = extract_landscape(p, 8192);
  REQUIRE(lg.minima.size() == 3);
  REQUIRE(lg.saddles.size() == 3);
  const double vmin = 0.1;  // values are normalized to the global minimum
  std::vector<double> want_min{0.1, 0.6, 0.9}, got_min;
  for (const auto& m : lg.minima) got_min.push_back(m.value + vmin);
  std::sort(got_min.begin(), got_min.end());
  for (int i = 0; i < 3; ++i)
    CHECK(got_min[i] == doctest::Approx(want_min[i]).epsilon(1e-6));
  std::vector<double> want_sad{1.4, 2.2, 3.1}, got_sad;
  for (const auto& s : lg.saddles) got_sad.push_back(s.value + vmin);
  std::sort(got_sad.begin(), got_sad.end());
  for (int i = 0; i < 3; ++i)
    CHECK(got_sad[i] == doctest::Approx(want_sad[i]).epsilon(1e-6));
}

TEST_CASE("degenerate critical point is reported, not resolved") {
  Potential p(
      -1.0, 1.0, [](double x) { return x * x * x * x; },
      [](double x) { return 4 * x * x * x; }, "quartic-degenerate");
  CHECK_THROWS_WITH_AS(extract_landscape(p, 4096),
                       doctest::Contains("degenerate"), std::runtime_error);
}

TEST_CASE("two-well classification") {
  SUBCASE("franz landscape") {
    auto lg = extract_landscape(franz_potential(0.85), 8192);
    auto cls = classify_two_well(lg);
    REQUIRE(cls.spec.has_value());
    CHECK(cls.spec->h_left == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(cls.spec->h_right == doctest::Approx(0.64824).epsilon(1e-4));
    CHECK(cls.spec->x_left == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(cls.spec->x_right == doctest::Approx(0.85).epsilon(1e-6));
  }
  SUBCASE("single well is rejected") {
    Potential p(
        -1.0, 1.0, [](double x) { return x * x; },
        [](double x) { return 2 * x; }, "quadratic");
    auto cls = classify_two_well(extract_landscape(p, 4096));
    CHECK_FALSE(cls.spec.has_value());
    CHECK(cls.rejection.find("two local minima") != std::string::npos);
  }
  SUBCASE("symmetric wells are rejected") {
    auto lg = landscape_from_critical_points({{-1.0, 0.0, true},
                                              {0.0, 1.0, false},
                                              {1.0, 0.0, true},
                                              {1.9, 2.0, false}});
    auto cls = classify_two_well(lg);
    CHECK_FALSE(cls.spec.has_value());
  }
}

TEST_CASE("critical-point text format") {
  std::istringstream in(
      "# two wells\n"
      "period -2.0 2.0\n"
      "min(-1.0, 0.0)\n"
      "saddle(0.0, 1.0)\n"
      "min(0.8, 0.4)\n"
      "saddle(1.7, 2.0)\n");
  auto p = load_potential(in);
  CHECK(p.value(-1.0) == doctest::Approx(0.0));
  CHECK(p.value(0.8) == doctest::Approx(0.4));
  CHECK(p.gradient(0.0) == doctest::Approx(0.0).epsilon(1e-12));

  std::istringstream no_period("min(0.0, 1.0)\n");
  CHECK_THROWS_WITH_AS(load_potential(no_period),
                       doctest::Contains("period"), std::runtime_error);
  std::istringstream bad_kind("period 0 1\nmax(0.5, 1.0)\n");
  CHECK_THROWS_AS(load_potential(bad_kind), std::runtime_error);
}

TEST_CASE("landscape invariants") {
  auto lg = extract_landscape(franz_potential(0.5), 8192);
  int zero_minima = 0;
  for (const auto& m : lg.minima)
    if (std::fabs(m.value) < 1e-12) ++zero_minima;
  CHECK(zero_minima == 1);
  CHECK(lg.minima[lg.global_min_id].value == doctest::Approx(0.0));
  for (const auto& e : lg.edges) {
    CHECK(lg.saddles[e.saddle].value > lg.minima[e.min_a].value);
    CHECK(lg.saddles[e.saddle].value > lg.minima[e.min_b].value);
  }
}
