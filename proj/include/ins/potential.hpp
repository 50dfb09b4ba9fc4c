#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ins {

// A 1-D potential on a compact interval [lower, upper], extended periodically.
// Evaluation wraps the argument into the base interval, so V(x) = V(x + P)
// holds exactly for any x.
class Potential {
 public:
  using Fn = std::function<double(double)>;

  Potential(double lower, double upper, Fn value, Fn gradient,
            std::string description);

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double period() const { return upper_ - lower_; }
  const std::string& description() const { return description_; }

  // Maps x into [lower, upper).
  double wrap(double x) const;

  double value(double x) const { return value_(wrap(x)); }
  double gradient(double x) const { return gradient_(wrap(x)); }

  // Coarse-grid maximum of |V''| (finite differences), used for step-size
  // selection by the samplers.
  double max_curvature(int grid_n = 4096) const;
  // Coarse-grid location of the global minimum.
  double argmin(int grid_n = 4096) const;

 private:
  double lower_, upper_;
  Fn value_, gradient_;
  std::string description_;
};

// V(x; theta) = (3x^4 - 4(theta-1)x^3 - 6 theta x^2)/(2 theta + 1) + 1 on the
// periodic domain D = [-2.5, 2.0].  The quartic is used on [-2.25, 1.75]; a
// quintic bridge matching value, slope and curvature at both ends closes the
// seam so the extension is C^2.  Boundary values exceed the barrier height 1
// for all theta in [0, 1].
Potential franz_potential(double theta);

struct CriticalPoint {
  double location;
  double value;
  bool is_minimum;  // false: saddle (local maximum in 1-D)
};

// Piecewise cubic Hermite interpolant through the given critical points with
// zero derivative at each; points must alternate min/saddle around the period.
Potential hermite_potential(double lower, double upper,
                            std::vector<CriticalPoint> points);

// Text format:
//   period <lower> <upper>
//   min(<location>, <value>)
//   saddle(<location>, <value>)
//   ...
Potential load_potential(std::istream& in);
Potential load_potential_file(const std::string& path);

struct Minimum {
  int id;
  double location;
  double value;
};
struct Saddle {
  int id;
  double location;
  double value;
};
// Two wells separated by one saddle.
struct WellEdge {
  int min_a;
  int saddle;
  int min_b;
};

// Critical-point structure of a potential: minima as nodes, saddles as edges.
// Values are normalized so the global minimum sits at 0.
struct LandscapeGraph {
  std::vector<Minimum> minima;
  std::vector<Saddle> saddles;
  std::vector<WellEdge> edges;
  int global_min_id = 0;

  // Saddles adjacent to a given well.
  std::vector<int> saddles_of(int min_id) const;
  // Lowest saddle value separating two adjacent wells; throws if not adjacent.
  double barrier_between(int min_a, int min_b) const;
  bool adjacent(int min_a, int min_b) const;
  double max_value() const;
};

// Builds a LandscapeGraph directly from exact critical data (cyclic order by
// location).  Used by tests and by constructions where extraction noise is
// unwanted.
LandscapeGraph landscape_from_critical_points(
    const std::vector<CriticalPoint>& points);

// Grid scan for gradient sign changes, bisection refinement to 1e-10 in
// position, classification by curvature sign.  Throws on degenerate critical
// points.
LandscapeGraph extract_landscape(const Potential& p, int grid_n);

struct TwoWellSpec {
  double h_left;    // barrier height above the global minimum
  double h_right;   // barrier height above the secondary minimum
  double x_left;    // global minimum location
  double x_right;   // secondary minimum location
  double barrier_x; // interior saddle location
};

struct TwoWellClassification {
  std::optional<TwoWellSpec> spec;
  std::string rejection;  // non-empty iff spec is empty; names the violated bullet
};

TwoWellClassification classify_two_well(const LandscapeGraph& lg);

}  // namespace ins
