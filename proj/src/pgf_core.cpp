#include "langevin_bounds/pgf_core.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "langevin_bounds/error.hpp"

namespace lbound {

namespace {

constexpr double kBracketRelTol = 1e-12;

std::string fmt_s_b(double s, double b) {
  return "s=" + std::to_string(s) + ", b=" + std::to_string(b);
}

}  // namespace

double feasibility_ratio(double s, double b) noexcept {
  const double log_s = std::log(s);
  const double disc = b * b - 2.0 * log_s;
  const double c = std::sqrt(2.0 * log_s);
  const double cos_c = std::cos(c);
  if (!(s > 1.0) || !(disc > 0.0) || !(c < std::numbers::pi / 2) || !(cos_c > 0.0)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return std::exp(b - std::sqrt(disc)) / cos_c;
}

PgfComponents components(double s, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidParameter, "drift floor b must be > 0");
  }
  if (!(s > 1.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::OutOfDomain, "pgf argument must satisfy s > 1 (" +
                                            fmt_s_b(s, b) + ")");
  }
  PgfComponents comp;
  comp.s = s;
  comp.b = b;
  comp.log_s = std::log(s);
  const double disc = b * b - 2.0 * comp.log_s;
  if (!(disc > 0.0)) {
    throw Error(ErrorKind::AlphaComplex,
                "s must be below exp(b^2/2) (" + fmt_s_b(s, b) + ")");
  }
  comp.c = std::sqrt(2.0 * comp.log_s);
  comp.cos_c = std::cos(comp.c);
  if (!(comp.c < std::numbers::pi / 2) || !(comp.cos_c > 0.0)) {
    throw Error(ErrorKind::CosineDomain,
                "cos(sqrt(2 log s)) must be positive (" + fmt_s_b(s, b) + ")");
  }
  comp.alpha = b - std::sqrt(disc);
  comp.ratio = std::exp(comp.alpha) / comp.cos_c;
  if (!(comp.ratio > 1.0 && comp.ratio < 2.0)) {
    throw Error(ErrorKind::A2Ratio,
                "exp(alpha)/cos(c) = " + std::to_string(comp.ratio) +
                    " is outside (1, 2) (" + fmt_s_b(s, b) + ")");
  }
  return comp;
}

double pgf_bm_exit(double x, const PgfComponents& comp) {
  if (!(std::abs(x) <= 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "Brownian exit pgf needs |x| <= 1");
  }
  if (std::abs(x) == 1.0) {
    return 1.0;
  }
  return std::cos(x * comp.c) / comp.cos_c;
}

double pgf_geometric_half(double r) {
  if (!(r < 2.0)) {
    throw Error(ErrorKind::DivergentPgf,
                "Geometric(1/2) pgf diverges for r >= 2 (r=" +
                    std::to_string(r) + ")");
  }
  return 1.0 / (2.0 - r);
}

double pgf_drift_passage(double a, const PgfComponents& comp) {
  if (!(a >= 0.0)) {
    throw Error(ErrorKind::OutOfDomain, "passage distance must be >= 0");
  }
  return std::exp(a * comp.alpha);
}

double bound_B(double y, const PgfComponents& comp) {
  if (!(y >= 1.0)) {
    throw Error(ErrorKind::OutOfDomain,
                "bound_B needs y >= 1; clamp with max(1, |y|) first");
  }
  return std::exp((y - 1.0) * comp.alpha) / comp.cos_c / (2.0 - comp.ratio);
}

double assemble_B(double y, const PgfComponents& comp) {
  if (!(y >= 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "assemble_B needs y >= 1");
  }
  const double to_one = pgf_drift_passage(y - 1.0, comp);
  const double exit_from_middle = pgf_bm_exit(0.0, comp);
  const double back_from_two = pgf_drift_passage(1.0, comp);
  return to_one * pgf_geometric_half(exit_from_middle * back_from_two) *
         exit_from_middle;
}

FeasibleSRange feasible_s_range(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidParameter, "drift floor b must be > 0");
  }
  const double alpha_edge = std::exp(b * b / 2.0);
  const double cos_edge = std::exp(std::numbers::pi * std::numbers::pi / 8.0);
  const bool cos_first = cos_edge < alpha_edge;
  const double domain_hi = cos_first ? cos_edge : alpha_edge;

  double lo = 1.0 + kBracketRelTol;
  double hi = domain_hi * (1.0 - kBracketRelTol);

  FeasibleSRange range;
  const double ratio_at_hi = feasibility_ratio(hi, b);
  if (ratio_at_hi < 2.0) {
    // The ratio stays below 2 up to the edge of its domain.
    range.s_hi = domain_hi;
    range.binding = cos_first ? BindingConstraint::CosVanishes
                              : BindingConstraint::SEqualsExpHalfBSq;
    return range;
  }
  // ratio(s) increases from 1 at s = 1+; find where it reaches 2.
  while ((hi - lo) > kBracketRelTol * hi) {
    const double mid = 0.5 * (lo + hi);
    const double r = feasibility_ratio(mid, b);
    if (r < 2.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  range.s_hi = lo;
  range.binding = BindingConstraint::RatioEqualsTwo;
  return range;
}

const char* to_string(BindingConstraint c) noexcept {
  switch (c) {
    case BindingConstraint::RatioEqualsTwo: return "ratio_equals_two";
    case BindingConstraint::SEqualsExpHalfBSq: return "s_equals_exp_half_b_sq";
    case BindingConstraint::CosVanishes: return "cos_vanishes";
  }
  return "unknown";
}

}  // namespace lbound
