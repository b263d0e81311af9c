#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "langevin_bounds/target_model.hpp"

namespace lbound::sim {

struct SimConfig {
  double dt = 1e-3;
  double horizon = 50.0;
  std::size_t n_paths = 100000;
  std::uint64_t seed = 42;
  bool bridge_correction = true;
  // 0 picks std::thread::hardware_concurrency(). Results do not depend on it.
  unsigned workers = 0;
  // Recorded in addition to 1, 2, ..., floor(horizon).
  std::vector<double> extra_times;
};

void validate(const SimConfig& cfg);

/// Monte Carlo estimate of P(T >= t) for a first-passage time T.
struct EmpiricalSurvival {
  std::vector<double> times;
  std::vector<double> survival;
  std::vector<double> std_err;
  std::size_t n_censored = 0;  // still running at the horizon
  std::size_t n_paths = 0;     // paths entering the estimate
  std::size_t n_flagged = 0;   // excluded: non-finite or runaway paths
};

struct PgfEstimate {
  double estimate = 0.0;
  double std_err = 0.0;
  std::size_t n_paths = 0;
};

struct CouplingRunStats {
  EmpiricalSurvival coupling_times;
  // Steps where the |X| vs |X-hat| ordering fixed at t = 0 was breached by
  // more than 3 sqrt(dt).
  std::uint64_t ordering_violations = 0;
  double max_violation_magnitude = 0.0;
  std::uint64_t checked_steps = 0;
  // Stationary start of the partner path, per path index.
  std::vector<double> partner_starts;
};

/// Outcome of one anti-coupled pair. meet_step is the Euler step at which
/// the pair met, or empty if it had not met by the horizon.
struct AnticoupledPath {
  std::optional<std::int64_t> meet_step;
  bool flagged = false;
  std::uint64_t ordering_violations = 0;
  double max_violation_magnitude = 0.0;
  std::uint64_t checked_steps = 0;
};

/// Inverse-CDF sampler for a target density: the CDF is tabulated by
/// quadrature on a uniform grid over the region outside of which the mass
/// is below 1e-15, and inverted through cubic Hermite interpolation (nodes
/// carry the exact density as slope).
class StationarySampler {
 public:
  explicit StationarySampler(const TargetDensity& d, std::size_t grid_n = 16384);

  double quantile(double u) const;
  double support_edge() const noexcept { return edge_; }

 private:
  std::vector<double> x_;
  std::vector<double> cdf_;
  std::vector<double> pdf_;
  double edge_ = 0.0;
};

/// Smallest L with pi(|x| > L) < 1e-15, to 1e-6 absolute.
double support_edge(const TargetDensity& d);

/// Euler-Maruyama for dX = 1/2 grad log pi(X) dt + dB from X_0 = y, stopped
/// at the first passage through 0. A step that stays on one side of 0 still
/// counts as a hit with the Brownian-bridge crossing probability
/// exp(-2 x_k x_{k+1} / dt) when bridge correction is on.
EmpiricalSurvival simulate_hitting(const TargetDensity& d, double y,
                                   const SimConfig& cfg);

/// The same first-passage experiment run on R = |X|. Paths started at
/// y > 0 reproduce simulate_hitting exactly.
EmpiricalSurvival simulate_hitting_reflected(const TargetDensity& d, double y,
                                             const SimConfig& cfg);

/// E[s^T] for the exit time of standard Brownian motion from (-1, 1).
/// Raises IncreaseHorizon if a path has not exited by the horizon.
PgfEstimate simulate_bm_exit_pgf(double s, double x0, const SimConfig& cfg);

/// E[s^T] for the time Brownian motion with drift -b needs to fall a
/// distance a.
PgfEstimate simulate_drift_passage_pgf(double s, double a, double b,
                                       const SimConfig& cfg);

/// X from y and X~ from the stationary law, driven by +dB and -dB until
/// they meet; afterwards X-hat follows X. Records the meeting time and
/// checks the absolute-value ordering along the way.
CouplingRunStats simulate_anticoupled_pair(const TargetDensity& d, double y,
                                           const SimConfig& cfg);

/// A single anti-coupled pair with a given partner start, using the noise
/// stream of `path_index`.
AnticoupledPath anticoupled_path(const TargetDensity& d, double y,
                                 double partner_start, const SimConfig& cfg,
                                 std::uint64_t path_index, double clamp);

/// Average over partner starts z of min(1, s^{-t} B(max(1, |y|, |z|))).
std::vector<double> pathwise_hitting_bound(const TargetDensity& d, double y,
                                           double s,
                                           std::span<const double> partner_starts,
                                           std::span<const double> times);

struct DominationCheck {
  std::vector<double> times;
  std::vector<double> empirical;
  std::vector<double> std_err;
  std::vector<double> bound;
  std::vector<bool> pass;
  bool all_pass = true;
  std::optional<double> first_failure;
};

/// Checks empirical - n_sigma * std_err <= bound at every recorded time.
DominationCheck check_domination(const EmpiricalSurvival& emp,
                                 std::span<const double> bound,
                                 double n_sigma = 3.0);

}  // namespace lbound::sim
