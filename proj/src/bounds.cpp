#include "langevin_bounds/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "langevin_bounds/error.hpp"
#include "langevin_bounds/quadrature.hpp"

namespace lbound {

namespace {

constexpr double kTailRelTol = 1e-10;
constexpr double kTailCutoff = 1e-18;

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorKind::InvalidParameter, "time t must be finite and >= 0");
  }
}

// log pi(z) + alpha z must fall by at least one nat between successive
// probes, otherwise the tail integral of pi(z) B(z) is not trusted.
void guard_tail_decay(const TargetDensity& d, double y, double alpha) {
  constexpr std::array<double, 3> offsets{10.0, 20.0, 40.0};
  double prev = 0.0;
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    const double z = y + offsets[i];
    const double g = d.log_density_unnorm(z) + alpha * z;
    if (!std::isfinite(g) && g != -std::numeric_limits<double>::infinity()) {
      throw Error(ErrorKind::TailDivergence,
                  "tail integrand is not finite at z = " + std::to_string(z));
    }
    if (i > 0 && !(g <= prev - 1.0)) {
      throw Error(ErrorKind::TailDivergence,
                  "log pi(z) + alpha z does not decay between z = " +
                      std::to_string(y + offsets[i - 1]) + " and z = " +
                      std::to_string(z));
    }
    prev = g;
  }
}

}  // namespace

HittingBoundResult hitting_tail_bound(const TargetDensity& d, double y,
                                      double s, double t) {
  require_time(t);
  const PgfComponents comp = components(s, d.b());
  HittingBoundResult r;
  r.y_input = y;
  r.y_eff = std::max(1.0, std::abs(y));
  r.s = s;
  r.b = d.b();
  r.t = t;
  r.raw = std::pow(s, -t) * bound_B(r.y_eff, comp);
  r.capped = r.raw > 1.0;
  r.bound = std::min(1.0, r.raw);
  return r;
}

TvCoefficient tv_coefficient(const TargetDensity& d, double y,
                             const PgfComponents& comp) {
  if (!(y >= 1.0) || !std::isfinite(y)) {
    throw Error(ErrorKind::InvalidParameter,
                "total-variation bound needs a start y >= 1");
  }
  guard_tail_decay(d, y, comp.alpha);

  TvCoefficient coef;
  coef.head = 2.0 * mass_interval(d, 0.0, y) * bound_B(y, comp);

  // B(z) = exp((z - 1) alpha) * B(1); integrate the z-dependent part only.
  const double log_z = std::log(d.z_const());
  const double alpha = comp.alpha;
  const auto integrand = [&d, alpha, log_z](double z) {
    return std::exp(d.log_density_unnorm(z) - log_z + (z - 1.0) * alpha);
  };
  const quad::QuadResult tail =
      quad::integrate_to_infinity(integrand, y, kTailRelTol, kTailCutoff);
  const double b_at_one = bound_B(1.0, comp);
  coef.tail = 2.0 * b_at_one * tail.value;
  coef.quad_abs_err = 2.0 * b_at_one * tail.abs_err;
  return coef;
}

TvBoundResult tv_bound(const TargetDensity& d, double y, double s, double t) {
  require_time(t);
  const PgfComponents comp = components(s, d.b());
  const TvCoefficient coef = tv_coefficient(d, y, comp);
  const double decay = std::pow(s, -t);

  TvBoundResult r;
  r.y = y;
  r.s = s;
  r.b = d.b();
  r.t = t;
  r.head_term = coef.head * decay;
  r.tail_term = coef.tail * decay;
  r.quad_abs_err = coef.quad_abs_err * decay;
  r.raw_total = r.head_term + r.tail_term;
  r.capped = r.raw_total > 1.0;
  r.total = std::min(1.0, r.raw_total);
  return r;
}

TvBoundResult tv_bound_unreflected(const TargetDensity& d, double y, double s,
                                   double t) {
  TvBoundResult r = tv_bound(d, y, s, t);
  r.process = Process::Unreflected;
  return r;
}

}  // namespace lbound
