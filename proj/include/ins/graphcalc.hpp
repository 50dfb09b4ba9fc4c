#pragma once

#include <map>
#include <set>
#include <vector>

#include "ins/ensemble.hpp"
#include "ins/potential.hpp"

namespace ins {

// A product state: one well id per particle.  u_value is the symmetrized
// potential of the wells' V-values.
struct ProductEquilibrium {
  std::vector<int> well_ids;
  double u_value = 0;
};

// Directed forest with every in-tree rooted in target_set: each node outside
// the target has exactly one outgoing arrow, no cycles, everything reaches the
// target.
struct WGraph {
  std::map<int, int> arrows;
  std::set<int> target_set;
};

struct GraphRateData {
  double h = 0;              // alpha_K * b1
  double w = 0;              // W(O_1) - min_{i!=1} W(O_1 u O_i); NaN above cap
  double w_upper_bound = 0;  // K * alpha_K * min over exit graphs of max climb
  double b1 = 0;             // lowest saddle out of the global-minimum well
  double B = 0;              // b1 v (K * min-max climb), ladder-independent
  std::vector<double> W_values;  // W(O_j) per product node; empty above cap
  bool exact_mode = false;       // W_values / w populated
};

inline constexpr int kMaxExactNodes = 9;  // H^K cap for W-graph enumeration

// All product equilibria (tuples of well ids) with node 0 = (g,...,g) for the
// global-minimum well g, plus the pairwise least-cost arrow table obtained by
// chaining single-coordinate moves between adjacent wells.
class ProductSystem {
 public:
  ProductSystem(const LandscapeGraph& lg, const TemperatureLadder& ladder);

  int size() const { return static_cast<int>(nodes_.size()); }
  const ProductEquilibrium& node(int i) const { return nodes_[i]; }
  int index_of(const std::vector<int>& wells) const;
  // Least cost of reaching node n from node m by single-coordinate moves.
  double arrow_cost(int m, int n) const { return sp_cost_[m][n]; }

 private:
  std::vector<ProductEquilibrium> nodes_;
  std::vector<std::vector<double>> sp_cost_;
};

// Cost of moving one coordinate between adjacent wells: positive part of the
// symmetrized-potential rise when the moving coordinate sits at the connecting
// saddle.  Throws unless exactly one coordinate differs, between adjacent wells.
double one_step_cost(const ProductEquilibrium& from,
                     const ProductEquilibrium& to, const LandscapeGraph& lg,
                     const TemperatureLadder& ladder);

// Exhaustive generation; used as the small-case oracle for w_of.
std::vector<WGraph> enumerate_wgraphs(int L_size,
                                      const std::set<int>& target);

// Least total arrow cost over W-graphs with the given target, for nodes
// 0..L-1 and the given pairwise cost table.  Computed as a minimum-cost
// in-arborescence toward the (contracted) target.
double w_of(const std::set<int>& target,
            const std::vector<std::vector<double>>& cost);

double compute_b1(const LandscapeGraph& lg);
double compute_h(const LandscapeGraph& lg, const TemperatureLadder& ladder);

// min over exit graphs of the worst start-vertex climb; equals the largest
// over wells k != global of the least uphill-cost path from k to the global
// well (edge cost (saddle - V(from))+, saddles exit downhill for free).
double min_max_climb(const LandscapeGraph& lg);

// Least total cost over in-trees on the original wells rooted at the global
// minimum (single-particle analogue of W(O_1)).
double w_hat_global(const LandscapeGraph& lg);

// (w, K*alpha_K*min_max_climb); throws if the exact w exceeds the bound.
std::pair<double, double> compute_w_and_bound(const LandscapeGraph& lg,
                                              const TemperatureLadder& ladder);

double compute_B(const LandscapeGraph& lg, int K);

GraphRateData graph_rate_data(const LandscapeGraph& lg,
                              const TemperatureLadder& ladder);

}  // namespace ins
