#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "langevin_bounds/pgf_core.hpp"
#include "langevin_bounds/target_model.hpp"

namespace lbound {

enum class BoundMode { HittingTail, TotalVariation };

struct PlanRequest {
  TargetDensity density;
  double y = 1.0;
  double epsilon = 0.01;
  BoundMode mode = BoundMode::HittingTail;
  std::optional<double> fixed_s;  // empty: optimize over the feasible range
};

struct MinimalT {
  double t_real = 0.0;
  std::int64_t t_int = 0;
};

struct PlanResult {
  double s_star = 1.0;
  double t_min_real = 0.0;
  std::int64_t t_min_int = 0;
  double bound_at_t_min_int = 1.0;
  FeasibleSRange feasible_range;
};

enum class SweepAxis { Y, Beta, Epsilon, T };

struct SweepRow {
  SweepAxis axis = SweepAxis::Y;
  double value = 0.0;
  double s_star = 0.0;
  double t_real = 0.0;
  std::int64_t t_int = 0;
  double bound = 0.0;
  std::string status = "ok";
};

// Uncapped bound at t = 0, so that bound(t) = C(s) s^{-t}.
double bound_coefficient(const TargetDensity& d, double y, double s,
                         BoundMode mode);

// Bound at time t, capped at 1.
double bound_at(const TargetDensity& d, double y, double s, double t,
                BoundMode mode);

// Closed-form inverse of C(s) s^{-t} = epsilon; t_real is clamped at 0 and
// t_int = ceil(t_real).
MinimalT minimal_t(const PlanRequest& req, double s);

// Minimizes t_real(s) over the feasible range.
PlanResult optimize_s(const PlanRequest& req);

// Fixed s when the request carries one, optimize_s otherwise.
PlanResult plan(const PlanRequest& req);

// One row per grid value, in grid order. Row failures are recorded in the
// row status.
std::vector<SweepRow> sweep(const PlanRequest& req, SweepAxis axis,
                            std::span<const double> grid);

const char* to_string(BoundMode mode) noexcept;
const char* to_string(SweepAxis axis) noexcept;

}  // namespace lbound
