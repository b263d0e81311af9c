#pragma once

namespace lbound {

// Probability generating functions E[s^T] of the passage times that make up
// the hitting time of 0, and the closed-form bound B(y, s, b) they combine
// into.
//
// With log_s = log s:
//   c     = sqrt(2 log s)            Brownian exit frequency
//   alpha = b - sqrt(b^2 - 2 log s)  drifted passage exponent
//   ratio = exp(alpha) / cos(c)      argument of the Geometric(1/2) pgf
//
// s is feasible when 1 < s < exp(b^2/2), cos(c) > 0 and 1 < ratio < 2.

struct PgfComponents {
  double s = 1.0;
  double b = 0.0;
  double log_s = 0.0;
  double c = 0.0;
  double cos_c = 1.0;
  double alpha = 0.0;
  double ratio = 1.0;
};

// Throws OutOfDomain (s <= 1), AlphaComplex, CosineDomain or A2Ratio naming
// the first violated condition.
PgfComponents components(double s, double b);

// exp(alpha)/cos(c), or NaN where it is undefined. Does not throw.
double feasibility_ratio(double s, double b) noexcept;

// Brownian exit time from (-1, 1) started at x: cos(x c) / cos(c).
double pgf_bm_exit(double x, const PgfComponents& comp);

// Geometric(1/2) on {0, 1, ...}: 1 / (2 - r). Throws DivergentPgf for r >= 2.
double pgf_geometric_half(double r);

// Passage over distance a >= 0 of Brownian motion with drift -b:
// exp(a alpha).
double pgf_drift_passage(double a, const PgfComponents& comp);

// B(y, s, b) = exp((y - 1) alpha) / cos(c) / (2 - ratio), for y >= 1.
double bound_B(double y, const PgfComponents& comp);

// The same bound assembled factor by factor from the passage decomposition
// (drift to 1, a Geometric(1/2) number of 1 -> 2 -> 1 excursions, final exit
// to 0). Agrees with bound_B to rounding.
double assemble_B(double y, const PgfComponents& comp);

enum class BindingConstraint { RatioEqualsTwo, SEqualsExpHalfBSq, CosVanishes };

struct FeasibleSRange {
  double s_lo = 1.0;  // open
  double s_hi = 1.0;  // open
  BindingConstraint binding = BindingConstraint::RatioEqualsTwo;

  bool contains(double s) const noexcept { return s > s_lo && s < s_hi; }
};

// Upper end of the feasible s interval for drift floor b > 0, bracketed by
// bisection to 1e-12 relative width.
FeasibleSRange feasible_s_range(double b);

const char* to_string(BindingConstraint c) noexcept;

}  // namespace lbound
