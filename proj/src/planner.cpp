#include "langevin_bounds/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "langevin_bounds/bounds.hpp"
#include "langevin_bounds/error.hpp"

namespace lbound {

namespace {

constexpr double kEndpointClip = 1e-9;
constexpr int kCoarseGrid = 64;
constexpr int kDenseGrid = 2048;
constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const PlanRequest& req) {
  if (!(req.epsilon > 0.0 && req.epsilon <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "epsilon must lie in (0, 1]");
  }
  if (!std::isfinite(req.y)) {
    throw Error(ErrorKind::InvalidParameter, "start y must be finite");
  }
  if (req.mode == BoundMode::TotalVariation && !(req.y >= 1.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "total-variation planning needs y >= 1");
  }
}

double t_real_for(const PlanRequest& req, double s) {
  const double coef = bound_coefficient(req.density, req.y, s, req.mode);
  return std::max(0.0, std::log(coef / req.epsilon) / std::log(s));
}

PlanResult finish(const PlanRequest& req, double s, FeasibleSRange range) {
  const MinimalT mt = minimal_t(req, s);
  PlanResult out;
  out.s_star = s;
  out.t_min_real = mt.t_real;
  out.t_min_int = mt.t_int;
  out.bound_at_t_min_int =
      bound_at(req.density, req.y, s, static_cast<double>(mt.t_int), req.mode);
  out.feasible_range = range;
  return out;
}

// Objective over u = log(log s), which spreads the region near s = 1.
struct LogLogObjective {
  const PlanRequest* req;

  static double to_s(double u) { return std::exp(std::exp(u)); }

  double operator()(double u) const {
    try {
      return t_real_for(*req, to_s(u));
    } catch (const Error&) {
      return kInf;
    }
  }
};

bool unimodal(const std::vector<double>& f, std::size_t argmin) {
  for (std::size_t i = 1; i <= argmin; ++i) {
    if (f[i] > f[i - 1]) {
      return false;
    }
  }
  for (std::size_t i = argmin + 1; i < f.size(); ++i) {
    if (f[i] < f[i - 1]) {
      return false;
    }
  }
  return true;
}

struct GridMin {
  double u;
  double f;
  double u_lo;
  double u_hi;
};

GridMin grid_search(const LogLogObjective& obj, double u_lo, double u_hi,
                    int n, bool* is_unimodal) {
  std::vector<double> us(n);
  std::vector<double> fs(n);
  for (int i = 0; i < n; ++i) {
    us[i] = u_lo + (u_hi - u_lo) * i / (n - 1);
    fs[i] = obj(us[i]);
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(fs.begin(), fs.end()) - fs.begin());
  if (is_unimodal != nullptr) {
    *is_unimodal = unimodal(fs, best);
  }
  return {us[best], fs[best], us[best == 0 ? 0 : best - 1],
          us[std::min<std::size_t>(best + 1, n - 1)]};
}

}  // namespace

double bound_coefficient(const TargetDensity& d, double y, double s,
                         BoundMode mode) {
  if (mode == BoundMode::HittingTail) {
    return hitting_tail_bound(d, y, s, 0.0).raw;
  }
  return tv_coefficient(d, y, components(s, d.b())).total();
}

double bound_at(const TargetDensity& d, double y, double s, double t,
                BoundMode mode) {
  if (mode == BoundMode::HittingTail) {
    return hitting_tail_bound(d, y, s, t).bound;
  }
  return tv_bound(d, y, s, t).total;
}

MinimalT minimal_t(const PlanRequest& req, double s) {
  validate(req);
  MinimalT out;
  out.t_real = t_real_for(req, s);
  out.t_int = static_cast<std::int64_t>(std::ceil(out.t_real));
  return out;
}

PlanResult optimize_s(const PlanRequest& req) {
  validate(req);
  const FeasibleSRange range = feasible_s_range(req.density.b());
  const double s_lo = range.s_lo + kEndpointClip;
  const double s_hi = range.s_hi - kEndpointClip;
  const double u_lo = std::log(std::log(s_lo));
  const double u_hi = std::log(std::log(s_hi));
  const LogLogObjective obj{&req};

  bool is_unimodal = false;
  GridMin coarse = grid_search(obj, u_lo, u_hi, kCoarseGrid, &is_unimodal);
  if (!is_unimodal) {
    coarse = grid_search(obj, u_lo, u_hi, kDenseGrid, nullptr);
  }
  double best_u = coarse.u;
  double best_f = coarse.f;
  if (coarse.u_hi > coarse.u_lo) {
    std::uintmax_t max_iter = 200;
    const auto [u, f] = boost::math::tools::brent_find_minima(
        obj, coarse.u_lo, coarse.u_hi, std::numeric_limits<double>::digits / 2,
        max_iter);
    if (f <= best_f) {
      best_u = u;
      best_f = f;
    }
  }
  if (!std::isfinite(best_f)) {
    throw Error(ErrorKind::NumericDomain,
                "no feasible s produced a finite planning objective");
  }
  return finish(req, LogLogObjective::to_s(best_u), range);
}

PlanResult plan(const PlanRequest& req) {
  validate(req);
  if (!req.fixed_s) {
    return optimize_s(req);
  }
  const FeasibleSRange range = feasible_s_range(req.density.b());
  // components() names the violated feasibility clause.
  components(*req.fixed_s, req.density.b());
  return finish(req, *req.fixed_s, range);
}

std::vector<SweepRow> sweep(const PlanRequest& req, SweepAxis axis,
                            std::span<const double> grid) {
  if (grid.empty()) {
    throw Error(ErrorKind::InvalidParameter, "sweep grid is empty");
  }
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  std::optional<PlanResult> base;
  for (double value : grid) {
    SweepRow row;
    row.axis = axis;
    row.value = value;
    try {
      PlanRequest r = req;
      switch (axis) {
        case SweepAxis::Y: r.y = value; break;
        case SweepAxis::Beta: r.density = make_exponential_power(value); break;
        case SweepAxis::Epsilon: r.epsilon = value; break;
        case SweepAxis::T: break;
      }
      PlanResult p;
      if (axis == SweepAxis::T) {
        if (!base) {
          base = plan(req);
        }
        p = *base;
      } else {
        p = plan(r);
      }
      row.s_star = p.s_star;
      row.t_real = p.t_min_real;
      row.t_int = p.t_min_int;
      row.bound = axis == SweepAxis::T
                      ? bound_at(r.density, r.y, p.s_star, value, r.mode)
                      : p.bound_at_t_min_int;
    } catch (const Error& e) {
      row.status = std::string("error:") + std::string(to_string(e.kind())) +
                   ": " + e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* to_string(BoundMode mode) noexcept {
  return mode == BoundMode::HittingTail ? "hitting" : "tv";
}

const char* to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::Y: return "y";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::Epsilon: return "epsilon";
    case SweepAxis::T: return "t";
  }
  return "unknown";
}

}  // namespace lbound
