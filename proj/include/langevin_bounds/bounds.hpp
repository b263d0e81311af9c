#pragma once

#include "langevin_bounds/pgf_core.hpp"
#include "langevin_bounds/target_model.hpp"

namespace lbound {

/// Tail bound P(H_y >= t) <= s^{-t} B(max(1, |y|), s, b) on the hitting
/// time of 0 by the Langevin diffusion started at y.
struct HittingBoundResult {
  double y_input = 0.0;
  double y_eff = 1.0;
  double s = 1.0;
  double b = 0.0;
  double t = 0.0;
  double raw = 0.0;    // uncapped s^{-t} B
  double bound = 0.0;  // min(1, raw)
  bool capped = false;
};

enum class Process { Reflected, Unreflected };

/// Total-variation bound for the diffusion started at y >= 1:
///   2 pi[0, y] s^{-t} B(y) + 2 int_y^inf pi(z) s^{-t} B(z) dz.
struct TvBoundResult {
  double y = 1.0;
  double s = 1.0;
  double b = 0.0;
  double t = 0.0;
  double head_term = 0.0;
  double tail_term = 0.0;
  double quad_abs_err = 0.0;
  double raw_total = 0.0;
  double total = 0.0;
  bool capped = false;
  Process process = Process::Reflected;
};

/// The t = 0 coefficients of the TV bound; every term scales with s^{-t}.
struct TvCoefficient {
  double head = 0.0;
  double tail = 0.0;
  double quad_abs_err = 0.0;

  double total() const noexcept { return head + tail; }
};

HittingBoundResult hitting_tail_bound(const TargetDensity& d, double y,
                                      double s, double t);

TvCoefficient tv_coefficient(const TargetDensity& d, double y,
                             const PgfComponents& comp);

TvBoundResult tv_bound(const TargetDensity& d, double y, double s, double t);

/// Same numbers as tv_bound; the result is tagged as the unreflected
/// process.
TvBoundResult tv_bound_unreflected(const TargetDensity& d, double y, double s,
                                   double t);

}  // namespace lbound
