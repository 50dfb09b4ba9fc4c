#include "ins/graphcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace ins {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> well_values(const LandscapeGraph& lg,
                                const std::vector<int>& wells) {
  std::vector<double> v(wells.size());
  for (std::size_t i = 0; i < wells.size(); ++i)
    v[i] = lg.minima[wells[i]].value;
  return v;
}

}  // namespace

double one_step_cost(const ProductEquilibrium& from,
                     const ProductEquilibrium& to, const LandscapeGraph& lg,
                     const TemperatureLadder& ladder) {
  if (from.well_ids.size() != to.well_ids.size())
    throw std::invalid_argument("one_step_cost: dimension mismatch");
  int moving = -1;
  for (std::size_t i = 0; i < from.well_ids.size(); ++i) {
    if (from.well_ids[i] != to.well_ids[i]) {
      if (moving >= 0)
        throw std::invalid_argument(
            "one_step_cost: states differ in more than one coordinate");
      moving = static_cast<int>(i);
    }
  }
  if (moving < 0)
    throw std::invalid_argument("one_step_cost: states are identical");
  const int a = from.well_ids[moving], b = to.well_ids[moving];
  if (!lg.adjacent(a, b))
    throw std::invalid_argument("one_step_cost: wells not adjacent");
  std::vector<double> vals = well_values(lg, from.well_ids);
  vals[moving] = lg.barrier_between(a, b);
  const double u_saddle = symmetrized_potential(vals, ladder);
  return std::max(0.0, u_saddle - from.u_value);
}

ProductSystem::ProductSystem(const LandscapeGraph& lg,
                             const TemperatureLadder& ladder) {
  const int H = static_cast<int>(lg.minima.size());
  const int K = ladder.K();
  long long total = 1;
  for (int k = 0; k < K; ++k) total *= H;

  // Node 0 must be the all-global tuple; generate it first, then the rest in
  // lexicographic order.
  std::vector<int> tuple(K, 0);
  std::vector<std::vector<int>> tuples;
  tuples.push_back(std::vector<int>(K, lg.global_min_id));
  for (long long t = 0; t < total; ++t) {
    long long r = t;
    for (int k = 0; k < K; ++k) {
      tuple[k] = static_cast<int>(r % H);
      r /= H;
    }
    if (tuple == tuples[0]) continue;
    tuples.push_back(tuple);
  }
  for (auto& tp : tuples) {
    ProductEquilibrium pe;
    pe.well_ids = tp;
    pe.u_value = symmetrized_potential(well_values(lg, tp), ladder);
    nodes_.push_back(std::move(pe));
  }

  const int n = size();
  sp_cost_.assign(n, std::vector<double>(n, kInf));
  for (int i = 0; i < n; ++i) sp_cost_[i][i] = 0;
  for (int m = 0; m < n; ++m) {
    for (int t = 0; t < n; ++t) {
      if (m == t) continue;
      int diff = 0;
      for (int k = 0; k < K; ++k)
        if (nodes_[m].well_ids[k] != nodes_[t].well_ids[k]) ++diff;
      if (diff != 1) continue;
      int k = 0;
      while (nodes_[m].well_ids[k] == nodes_[t].well_ids[k]) ++k;
      if (!lg.adjacent(nodes_[m].well_ids[k], nodes_[t].well_ids[k])) continue;
      sp_cost_[m][t] =
          std::min(sp_cost_[m][t], one_step_cost(nodes_[m], nodes_[t], lg, ladder));
    }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        sp_cost_[i][j] = std::min(sp_cost_[i][j], sp_cost_[i][k] + sp_cost_[k][j]);
}

int ProductSystem::index_of(const std::vector<int>& wells) const {
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].well_ids == wells) return i;
  throw std::invalid_argument("ProductSystem: no such node");
}

namespace {

bool valid_wgraph(const std::vector<int>& arrow, const std::set<int>& target,
                  int n) {
  // every node must reach the target without revisiting
  for (int s = 0; s < n; ++s) {
    int cur = s, steps = 0;
    while (!target.count(cur)) {
      cur = arrow[cur];
      if (++steps > n) return false;  // cycle
    }
  }
  return true;
}

void gen_wgraphs(int node, int n, const std::set<int>& target,
                 std::vector<int>& arrow, std::vector<WGraph>& out) {
  while (node < n && target.count(node)) ++node;
  if (node == n) {
    if (valid_wgraph(arrow, target, n)) {
      WGraph g;
      g.target_set = target;
      for (int v = 0; v < n; ++v)
        if (!target.count(v)) g.arrows[v] = arrow[v];
      out.push_back(std::move(g));
    }
    return;
  }
  for (int to = 0; to < n; ++to) {
    if (to == node) continue;
    arrow[node] = to;
    gen_wgraphs(node + 1, n, target, arrow, out);
  }
  arrow[node] = -1;
}

}  // namespace

std::vector<WGraph> enumerate_wgraphs(int L_size, const std::set<int>& target) {
  if (L_size > kMaxExactNodes)
    throw std::length_error("enumerate_wgraphs: node count exceeds cap");
  if (target.empty() || L_size < 1)
    throw std::invalid_argument("enumerate_wgraphs: empty target or node set");
  std::vector<WGraph> out;
  std::vector<int> arrow(L_size, -1);
  gen_wgraphs(0, L_size, target, arrow, out);
  return out;
}

namespace {

// Minimum-cost arborescence rooted at `root` on a directed graph where every
// non-root node needs one incoming edge (Chu-Liu/Edmonds).
struct DirEdge {
  int from, to;
  double w;
};

double min_arborescence(int n, int root, std::vector<DirEdge> edges) {
  double total = 0;
  while (true) {
    std::vector<double> in_w(n, kInf);
    std::vector<int> pre(n, -1);
    for (const auto& e : edges) {
      if (e.from != e.to && e.w < in_w[e.to]) {
        in_w[e.to] = e.w;
        pre[e.to] = e.from;
      }
    }
    for (int v = 0; v < n; ++v)
      if (v != root && !std::isfinite(in_w[v]))
        throw std::runtime_error("w_of: cost table is disconnected");
    std::vector<int> comp(n, -1), mark(n, -1);
    int nc = 0;
    for (int v = 0; v < n; ++v) {
      if (v != root) total += in_w[v];
    }
    for (int v = 0; v < n; ++v) {
      if (comp[v] >= 0) continue;
      int u = v;
      while (u != root && comp[u] < 0 && mark[u] != v) {
        mark[u] = v;
        u = pre[u];
      }
      if (u != root && comp[u] < 0) {
        // found a new cycle through u
        int c = nc++;
        int x = u;
        do {
          comp[x] = c;
          x = pre[x];
        } while (x != u);
      }
      // path nodes get fresh singleton components
      int x = v;
      while (comp[x] < 0) {
        comp[x] = nc++;
        if (x == root) break;
        x = pre[x];
      }
    }
    bool has_cycle = false;
    {
      std::vector<int> count(nc, 0);
      for (int v = 0; v < n; ++v) ++count[comp[v]];
      for (int c = 0; c < nc; ++c)
        if (count[c] > 1) has_cycle = true;
    }
    if (!has_cycle) return total;
    std::vector<DirEdge> next;
    for (const auto& e : edges) {
      if (comp[e.from] == comp[e.to]) continue;
      next.push_back({comp[e.from], comp[e.to], e.w - in_w[e.to]});
    }
    edges = std::move(next);
    root = comp[root];
    n = nc;
  }
}

}  // namespace

double w_of(const std::set<int>& target,
            const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  // Contract the target into one root; every arrow into any target member
  // becomes an arrow into the root.  W-graphs are exactly in-arborescences
  // toward the root, so flip edge direction and run Edmonds.
  std::vector<int> remap(n, -1);
  int m = 0;
  for (int v = 0; v < n; ++v)
    if (!target.count(v)) remap[v] = ++m;  // root is node 0
  std::vector<DirEdge> edges;
  for (int u = 0; u < n; ++u) {
    if (target.count(u)) continue;
    for (int v = 0; v < n; ++v) {
      if (v == u || !std::isfinite(cost[u][v])) continue;
      const int to = target.count(v) ? 0 : remap[v];
      edges.push_back({to, remap[u], cost[u][v]});  // reversed for Edmonds
    }
  }
  return min_arborescence(m + 1, 0, std::move(edges));
}

double compute_b1(const LandscapeGraph& lg) {
  double b = kInf;
  for (int s : lg.saddles_of(lg.global_min_id))
    b = std::min(b, lg.saddles[s].value);
  if (!std::isfinite(b))
    throw std::invalid_argument("compute_b1: global well has no exit saddle");
  return b - lg.minima[lg.global_min_id].value;
}

double compute_h(const LandscapeGraph& lg, const TemperatureLadder& ladder) {
  const double closed = ladder.back() * compute_b1(lg);
  // Cross-check: cheapest single-coordinate exit from the all-global state.
  ProductEquilibrium from;
  from.well_ids.assign(ladder.K(), lg.global_min_id);
  from.u_value = symmetrized_potential(well_values(lg, from.well_ids), ladder);
  double exit = kInf;
  for (const auto& mn : lg.minima) {
    if (mn.id == lg.global_min_id || !lg.adjacent(lg.global_min_id, mn.id))
      continue;
    for (int k = 0; k < ladder.K(); ++k) {
      ProductEquilibrium to = from;
      to.well_ids[k] = mn.id;
      to.u_value = symmetrized_potential(well_values(lg, to.well_ids), ladder);
      exit = std::min(exit, one_step_cost(from, to, lg, ladder));
    }
  }
  if (std::isfinite(exit) && std::fabs(exit - closed) > 1e-12)
    throw std::logic_error("compute_h: closed form disagrees with basin exit");
  return closed;
}

namespace {

// Least uphill cost from every well to the global well (edge cost
// (saddle - V(from))+), by Dijkstra on the reversed graph.
std::vector<double> climb_distances(const LandscapeGraph& lg) {
  const int H = static_cast<int>(lg.minima.size());
  std::vector<double> dist(H, kInf);
  dist[lg.global_min_id] = 0;
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  pq.push({0, lg.global_min_id});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const auto& e : lg.edges) {
      // relax the reversed edge u->v for each landscape edge {u,v}
      for (int dir = 0; dir < 2; ++dir) {
        const int u = dir ? e.min_b : e.min_a;
        const int vv = dir ? e.min_a : e.min_b;
        if (vv != v) continue;
        const double c = std::max(
            0.0, lg.saddles[e.saddle].value - lg.minima[u].value);
        if (d + c < dist[u]) {
          dist[u] = d + c;
          pq.push({dist[u], u});
        }
      }
    }
  }
  return dist;
}

}  // namespace

double min_max_climb(const LandscapeGraph& lg) {
  auto dist = climb_distances(lg);
  double worst = 0;
  for (int k = 0; k < static_cast<int>(dist.size()); ++k) {
    if (k == lg.global_min_id) continue;
    if (!std::isfinite(dist[k]))
      throw std::invalid_argument("min_max_climb: landscape disconnected");
    worst = std::max(worst, dist[k]);
  }
  return worst;
}

double w_hat_global(const LandscapeGraph& lg) {
  const int H = static_cast<int>(lg.minima.size());
  if (H == 1) return 0;
  std::vector<std::vector<double>> cost(H, std::vector<double>(H, kInf));
  for (int i = 0; i < H; ++i) cost[i][i] = 0;
  for (const auto& e : lg.edges) {
    const double s = lg.saddles[e.saddle].value;
    cost[e.min_a][e.min_b] = std::min(
        cost[e.min_a][e.min_b], std::max(0.0, s - lg.minima[e.min_a].value));
    cost[e.min_b][e.min_a] = std::min(
        cost[e.min_b][e.min_a], std::max(0.0, s - lg.minima[e.min_b].value));
  }
  for (int k = 0; k < H; ++k)
    for (int i = 0; i < H; ++i)
      for (int j = 0; j < H; ++j)
        cost[i][j] = std::min(cost[i][j], cost[i][k] + cost[k][j]);
  return w_of({lg.global_min_id}, cost);
}

std::pair<double, double> compute_w_and_bound(const LandscapeGraph& lg,
                                              const TemperatureLadder& ladder) {
  const double bound = ladder.K() * ladder.back() * min_max_climb(lg);
  ProductSystem ps(lg, ladder);
  std::vector<std::vector<double>> cost(ps.size(),
                                        std::vector<double>(ps.size()));
  for (int i = 0; i < ps.size(); ++i)
    for (int j = 0; j < ps.size(); ++j) cost[i][j] = ps.arrow_cost(i, j);
  double w = 0;
  if (ps.size() > 1) {
    const double w1 = w_of({0}, cost);
    double best = kInf;
    for (int i = 1; i < ps.size(); ++i)
      best = std::min(best, w_of({0, i}, cost));
    w = w1 - best;
  }
  if (w > bound + 1e-9)
    throw std::logic_error("compute_w_and_bound: w exceeds its upper bound");
  return {w, bound};
}

double compute_B(const LandscapeGraph& lg, int K) {
  return std::max(compute_b1(lg), K * min_max_climb(lg));
}

GraphRateData graph_rate_data(const LandscapeGraph& lg,
                              const TemperatureLadder& ladder) {
  GraphRateData out;
  out.b1 = compute_b1(lg);
  out.h = compute_h(lg, ladder);
  out.B = compute_B(lg, ladder.K());
  out.w_upper_bound = ladder.K() * ladder.back() * min_max_climb(lg);
  long long nodes = 1;
  for (int k = 0; k < ladder.K(); ++k) {
    nodes *= static_cast<long long>(lg.minima.size());
    if (nodes > 100) break;
  }
  if (nodes <= 100) {
    auto [w, bound] = compute_w_and_bound(lg, ladder);
    (void)bound;
    out.w = w;
    out.exact_mode = true;
    ProductSystem ps(lg, ladder);
    std::vector<std::vector<double>> cost(ps.size(),
                                          std::vector<double>(ps.size()));
    for (int i = 0; i < ps.size(); ++i)
      for (int j = 0; j < ps.size(); ++j) cost[i][j] = ps.arrow_cost(i, j);
    out.W_values.resize(ps.size());
    for (int j = 0; j < ps.size(); ++j) out.W_values[j] = w_of({j}, cost);
  } else {
    out.w = std::numeric_limits<double>::quiet_NaN();
    out.exact_mode = false;
  }
  return out;
}

}  // namespace ins
