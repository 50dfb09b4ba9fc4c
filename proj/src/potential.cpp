#include "ins/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ins {

Potential::Potential(double lower, double upper, Fn value, Fn gradient,
                     std::string description)
    : lower_(lower),
      upper_(upper),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      description_(std::move(description)) {
  if (!(upper_ > lower_)) throw std::invalid_argument("potential: empty domain");
}

double Potential::wrap(double x) const {
  const double p = period();
  double y = std::fmod(x - lower_, p);
  if (y < 0) y += p;
  return lower_ + y;
}

double Potential::max_curvature(int grid_n) const {
  const double h = period() / grid_n;
  double worst = 0;
  for (int i = 0; i < grid_n; ++i) {
    const double x = lower_ + i * h;
    const double d2 = (gradient(x + h) - gradient(x - h)) / (2 * h);
    worst = std::max(worst, std::fabs(d2));
  }
  return worst;
}

double Potential::argmin(int grid_n) const {
  const double h = period() / grid_n;
  double best_x = lower_, best_v = value(lower_);
  for (int i = 1; i < grid_n; ++i) {
    const double x = lower_ + i * h;
    const double v = value(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

namespace {

// Quintic through (x0,f0,d0,s0) and (x1,f1,d1,s1): value, slope, curvature.
struct Quintic {
  double x0, scale;
  std::array<double, 6> c;  // coefficients in t = (x - x0)/scale, t in [0,1]

  static Quintic fit(double x0, double x1, double f0, double d0, double s0,
                     double f1, double d1, double s1) {
    Quintic q;
    q.x0 = x0;
    q.scale = x1 - x0;
    const double D0 = d0 * q.scale;
    const double D1 = d1 * q.scale;
    const double S0 = s0 * q.scale * q.scale;
    const double S1 = s1 * q.scale * q.scale;
    // Hermite quintic basis in t.
    q.c[0] = f0;
    q.c[1] = D0;
    q.c[2] = S0 / 2;
    q.c[3] = -10 * f0 - 6 * D0 - 1.5 * S0 + 10 * f1 - 4 * D1 + 0.5 * S1;
    q.c[4] = 15 * f0 + 8 * D0 + 1.5 * S0 - 15 * f1 + 7 * D1 - S1;
    q.c[5] = -6 * f0 - 3 * D0 - 0.5 * S0 + 6 * f1 - 3 * D1 + 0.5 * S1;
    return q;
  }

  double value(double x) const {
    const double t = (x - x0) / scale;
    double v = 0;
    for (int k = 5; k >= 0; --k) v = v * t + c[k];
    return v;
  }
  double deriv(double x) const {
    const double t = (x - x0) / scale;
    double v = 0;
    for (int k = 5; k >= 1; --k) v = v * t + k * c[k];
    return v / scale;
  }
};

}  // namespace

Potential franz_potential(double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::domain_error("franz_potential: theta must be in [0,1]");
  const double den = 2 * theta + 1;
  auto quartic = [theta, den](double x) {
    return (3 * x * x * x * x - 4 * (theta - 1) * x * x * x -
            6 * theta * x * x) /
               den +
           1.0;
  };
  auto dquartic = [theta, den](double x) {
    return (12 * x * x * x - 12 * (theta - 1) * x * x - 12 * theta * x) / den;
  };
  auto d2quartic = [theta, den](double x) {
    return (36 * x * x - 24 * (theta - 1) * x - 12 * theta) / den;
  };

  const double lo = -2.5, hi = 2.0;
  const double a = 1.75, b = 2.25;  // bridge band, unwrapped; b wraps to -2.25
  Quintic bridge = Quintic::fit(a, b, quartic(a), dquartic(a), d2quartic(a),
                                quartic(b - (hi - lo)), dquartic(b - (hi - lo)),
                                d2quartic(b - (hi - lo)));

  auto value = [quartic, bridge, lo, hi, a, b](double x) {
    if (x >= a) return bridge.value(x);
    if (x < b - (hi - lo)) return bridge.value(x + (hi - lo));
    return quartic(x);
  };
  auto gradient = [dquartic, bridge, lo, hi, a, b](double x) {
    if (x >= a) return bridge.deriv(x);
    if (x < b - (hi - lo)) return bridge.deriv(x + (hi - lo));
    return dquartic(x);
  };
  std::ostringstream desc;
  desc << "franz(theta=" << theta << ") on [" << lo << "," << hi << "]";
  return Potential(lo, hi, value, gradient, desc.str());
}

namespace {

std::vector<CriticalPoint> sorted_alternating(std::vector<CriticalPoint> pts,
                                              double lower, double upper) {
  if (pts.size() < 2 || pts.size() % 2 != 0)
    throw std::invalid_argument(
        "critical points must alternate min/saddle (even count >= 2)");
  for (auto& p : pts) {
    if (p.location < lower || p.location >= upper)
      throw std::invalid_argument("critical point outside domain");
  }
  std::sort(pts.begin(), pts.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) {
              return x.location < y.location;
            });
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].is_minimum == pts[(i + 1) % pts.size()].is_minimum)
      throw std::invalid_argument(
          "critical points must alternate min/saddle around the period");
  }
  return pts;
}

}  // namespace

Potential hermite_potential(double lower, double upper,
                            std::vector<CriticalPoint> points) {
  auto pts = sorted_alternating(std::move(points), lower, upper);
  const double period = upper - lower;
  const std::size_t n = pts.size();

  // Piece between consecutive critical points: cubic with zero slope at ends.
  auto locate = [pts, n, period](double x) {
    // last point with location <= x, cyclically
    std::size_t i = 0;
    while (i + 1 < n && pts[i + 1].location <= x) ++i;
    if (x < pts[0].location) i = n - 1;
    return i;
  };
  auto value = [pts, n, period, locate](double x) {
    const std::size_t i = locate(x);
    const auto& p0 = pts[i];
    const auto& p1 = pts[(i + 1) % n];
    double x0 = p0.location;
    double x1 = p1.location;
    if (x1 <= x0) x1 += period;
    double xx = x;
    if (xx < x0) xx += period;
    const double t = (xx - x0) / (x1 - x0);
    return p0.value + (p1.value - p0.value) * t * t * (3 - 2 * t);
  };
  auto gradient = [pts, n, period, locate](double x) {
    const std::size_t i = locate(x);
    const auto& p0 = pts[i];
    const auto& p1 = pts[(i + 1) % n];
    double x0 = p0.location;
    double x1 = p1.location;
    if (x1 <= x0) x1 += period;
    double xx = x;
    if (xx < x0) xx += period;
    const double t = (xx - x0) / (x1 - x0);
    return (p1.value - p0.value) * 6 * t * (1 - t) / (x1 - x0);
  };
  return Potential(lower, upper, value, gradient, "hermite");
}

Potential load_potential(std::istream& in) {
  std::string line;
  double lower = 0, upper = 0;
  bool have_period = false;
  std::vector<CriticalPoint> pts;
  while (std::getline(in, line)) {
    std::size_t h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "period") {
      if (!(ls >> lower >> upper))
        throw std::runtime_error("potential file: bad period line");
      have_period = true;
      continue;
    }
    // kind(location, value)
    std::size_t open = head.find('(');
    std::string kind = open == std::string::npos ? head : head.substr(0, open);
    std::string rest = open == std::string::npos ? "" : head.substr(open + 1);
    std::string tail;
    std::getline(ls, tail);
    rest += tail;
    for (char& c : rest)
      if (c == ',' || c == ')') c = ' ';
    std::istringstream args(rest);
    double loc, val;
    if (!(args >> loc >> val))
      throw std::runtime_error("potential file: bad critical point line: " + line);
    if (kind == "min")
      pts.push_back({loc, val, true});
    else if (kind == "saddle")
      pts.push_back({loc, val, false});
    else
      throw std::runtime_error("potential file: unknown kind '" + kind + "'");
  }
  if (!have_period) throw std::runtime_error("potential file: missing period header");
  return hermite_potential(lower, upper, std::move(pts));
}

Potential load_potential_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential file: " + path);
  return load_potential(in);
}

std::vector<int> LandscapeGraph::saddles_of(int min_id) const {
  std::vector<int> out;
  for (const auto& e : edges)
    if (e.min_a == min_id || e.min_b == min_id) out.push_back(e.saddle);
  return out;
}

bool LandscapeGraph::adjacent(int min_a, int min_b) const {
  for (const auto& e : edges)
    if ((e.min_a == min_a && e.min_b == min_b) ||
        (e.min_a == min_b && e.min_b == min_a))
      return true;
  return false;
}

double LandscapeGraph::barrier_between(int min_a, int min_b) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : edges)
    if ((e.min_a == min_a && e.min_b == min_b) ||
        (e.min_a == min_b && e.min_b == min_a))
      best = std::min(best, saddles[e.saddle].value);
  if (!std::isfinite(best))
    throw std::invalid_argument("barrier_between: wells not adjacent");
  return best;
}

double LandscapeGraph::max_value() const {
  double m = 0;
  for (const auto& s : saddles) m = std::max(m, s.value);
  for (const auto& mn : minima) m = std::max(m, mn.value);
  return m;
}

LandscapeGraph landscape_from_critical_points(
    const std::vector<CriticalPoint>& points) {
  auto pts = points;
  std::sort(pts.begin(), pts.end(),
            [](const CriticalPoint& x, const CriticalPoint& y) {
              return x.location < y.location;
            });
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (pts[i].is_minimum == pts[(i + 1) % pts.size()].is_minimum)
      throw std::invalid_argument(
          "landscape: critical points must alternate min/saddle");

  LandscapeGraph lg;
  double vmin = std::numeric_limits<double>::infinity();
  for (const auto& p : pts)
    if (p.is_minimum) vmin = std::min(vmin, p.value);

  std::vector<int> min_index_of(pts.size(), -1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].is_minimum) {
      min_index_of[i] = static_cast<int>(lg.minima.size());
      lg.minima.push_back({min_index_of[i], pts[i].location, pts[i].value - vmin});
    }
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts[i].is_minimum) {
      int sid = static_cast<int>(lg.saddles.size());
      lg.saddles.push_back({sid, pts[i].location, pts[i].value - vmin});
      // neighbors in cyclic order are minima
      const std::size_t n = pts.size();
      int left = min_index_of[(i + n - 1) % n];
      int right = min_index_of[(i + 1) % n];
      lg.edges.push_back({left, sid, right});
    }
  }
  lg.global_min_id = 0;
  for (const auto& m : lg.minima)
    if (m.value < lg.minima[lg.global_min_id].value) lg.global_min_id = m.id;

  for (const auto& e : lg.edges) {
    if (!(lg.saddles[e.saddle].value > lg.minima[e.min_a].value &&
          lg.saddles[e.saddle].value > lg.minima[e.min_b].value))
      throw std::invalid_argument(
          "landscape: saddle value must exceed both adjacent minima");
  }
  return lg;
}

LandscapeGraph extract_landscape(const Potential& p, int grid_n) {
  if (grid_n < 1000)
    throw std::invalid_argument("extract_landscape: grid_n must be >= 1000");
  const double lo = p.lower();
  const double h = p.period() / grid_n;

  std::vector<double> g(grid_n);
  for (int i = 0; i < grid_n; ++i) g[i] = p.gradient(lo + i * h);

  std::vector<CriticalPoint> pts;
  for (int i = 0; i < grid_n; ++i) {
    const int j = (i + 1) % grid_n;
    double ga = g[i], gb = g[j];
    if (ga == 0.0) ga = 1e-300;  // count exact zeros with the left interval
    if ((ga < 0) == (gb < 0)) continue;
    // bisection on the gradient
    double xa = lo + i * h, xb = lo + (i + 1) * h;
    double fa = ga;
    while (xb - xa > 1e-10) {
      const double xm = 0.5 * (xa + xb);
      const double fm = p.gradient(xm);
      if ((fm < 0) == (fa < 0)) {
        xa = xm;
        fa = fm;
      } else {
        xb = xm;
      }
    }
    const double r = 0.5 * (xa + xb);
    const double sd = p.value(r + h) - 2 * p.value(r) + p.value(r - h);
    if (std::fabs(sd) < 1e-8 * h) {
      std::ostringstream msg;
      msg << "extract_landscape: degenerate critical point near x=" << r;
      throw std::runtime_error(msg.str());
    }
    pts.push_back({p.wrap(r), p.value(r), sd > 0});
  }
  if (pts.size() < 2)
    throw std::runtime_error("extract_landscape: no critical structure found");
  return landscape_from_critical_points(pts);
}

TwoWellClassification classify_two_well(const LandscapeGraph& lg) {
  TwoWellClassification out;
  if (lg.minima.size() != 2) {
    out.rejection = "Condition 2.1: two local minima required";
    return out;
  }
  if (lg.saddles.size() != 2) {
    out.rejection = "Condition 2.1: exactly one interior local maximum required";
    return out;
  }
  const int g = lg.global_min_id;
  const int other = 1 - g;
  const double v_right = lg.minima[other].value;
  if (!(v_right > 0)) {
    out.rejection =
        "Condition 2.1: V(x_L) < V(x_R) violated (symmetric or degenerate wells)";
    return out;
  }
  // Interior barrier is the lower saddle; the higher one plays the role of the
  // domain boundary and must clear h_L.
  int interior = lg.saddles[0].value <= lg.saddles[1].value ? 0 : 1;
  int seam = 1 - interior;
  const double h_l = lg.saddles[interior].value;
  if (!(lg.saddles[seam].value > h_l)) {
    out.rejection = "Condition 2.1: boundary values must exceed h_L";
    return out;
  }
  const double h_r = h_l - v_right;
  if (!(h_r > 0)) {
    out.rejection = "Condition 2.1: V(x_R) = h_L - h_R must be positive";
    return out;
  }
  out.spec = TwoWellSpec{h_l, h_r, lg.minima[g].location,
                         lg.minima[other].location,
                         lg.saddles[interior].location};
  return out;
}

}  // namespace ins
