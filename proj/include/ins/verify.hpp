#pragma once

#include <iosfwd>

namespace ins {

// Fast self-check suite: weight stochasticity, the W-value/U-value shift
// identity, the basin-exit closed form, the ladder-supremum formula, and
// W-graph counts.  Prints one line per check; returns the number of failures.
// inject_corruption perturbs a cost table first so the failure path is
// testable.
int run_verification(std::ostream& out, bool inject_corruption = false);

}  // namespace ins
