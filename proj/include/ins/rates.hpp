#pragma once

#include <limits>
#include <map>
#include <string>

#include "json.hpp"

#include "ins/ensemble.hpp"
#include "ins/graphcalc.hpp"
#include "ins/potential.hpp"

namespace ins {

enum class Provenance {
  thm21_left,   // two-well lower bound, target left of the barrier
  thm21_right,  // two-well lower bound, target right of the barrier
  thm22,        // closed-form optimum, left target
  thm23,        // closed-form optimum, right target
  multiwell_bound,
  brute_force,
};

std::string provenance_name(Provenance p);

struct RateReport {
  double predicted_rate = 0;
  double benchmark = 0;  // 2 V(A)
  double gap = 0;        // benchmark - predicted_rate
  TemperatureLadder optimal_ladder{std::vector<double>{1.0}};
  Provenance formula_provenance = Provenance::brute_force;
  std::map<std::string, double> components;
  bool boundary_substitution = false;  // alpha_K = 0 case patched with delta
  std::string notes;
};

nlohmann::json report_to_json(const RateReport& r);
RateReport report_from_json(const nlohmann::json& j);

enum class TargetSide { left_of_barrier, right_of_barrier, general };

struct TargetSet {
  double lo = 0, hi = 0;
  double v_of_A = 0;  // inf over A of V
  TargetSide side = TargetSide::general;
};

// Fine-grid infimum of V over [lo, hi]; side set relative to barrier_x when
// one is supplied.
TargetSet make_target(const Potential& p, double lo, double hi,
                      double barrier_x = std::numeric_limits<double>::quiet_NaN());

// Variance decay rate of the K-ensemble estimator at ladder alpha:
//   inf over (V_1 = V(A), 0 <= V_2 <= ... <= V_K <= V_1) of
//   (2a_1 - a_K) V_1 + sum_l (2a_l - a_{l-1}) V_l,
// evaluated in closed form at the chain vertices.  potential_max is unused by
// the closed form; the brute-force test oracle takes it as the grid cap.
double r_of_alpha(double v_of_A, const TemperatureLadder& ladder,
                  double potential_max = 0);

// (sup over ladders of r, optimizer): ((2 - (1/2)^{K-1}) V(A), geometric).
std::pair<double, TemperatureLadder> sup_r(double v_of_A, int K);

struct TwoWellRates {
  double r1 = 0, r2 = 0, r3 = 0;
  double lower_bound = 0;  // r1 ^ r3 left of the barrier, r1 ^ r2 right
};

TwoWellRates two_well_rates(const TwoWellSpec& spec, const TargetSet& target,
                            const TemperatureLadder& ladder);

// Closed-form optimal ladder and rate for a two-well landscape; delta patches
// the degenerate V(A) = h_L - h_R boundary where the stated alpha*_K is 0.
RateReport optimal_two_well(const TwoWellSpec& spec, const TargetSet& target,
                            int K, double delta = 0.1);

// Variational lower-bound terms over the product equilibria; their combined
// minimum matches the closed forms on two-well instances.
RateReport assemble_R_terms(const LandscapeGraph& lg,
                            const TemperatureLadder& ladder,
                            const TargetSet& target,
                            const GraphRateData& graph_data);

// Geometric-ladder guarantee for arbitrary landscapes:
//   rate >= (2 - (1/2)^{K-1}) V(A) - B (1/2)^{K-1},
// with the minimal admissible horizon exponent c > B (1/2)^{K-1} recorded in
// components["c_min"].
RateReport multiwell_bound(const LandscapeGraph& lg, int K,
                           const TargetSet& target);

}  // namespace ins
