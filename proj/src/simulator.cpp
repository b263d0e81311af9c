#include "langevin_bounds/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include "langevin_bounds/error.hpp"
#include "langevin_bounds/pgf_core.hpp"
#include "langevin_bounds/quadrature.hpp"

namespace lbound::sim {

namespace {

constexpr double kSupportMass = 1e-15;
constexpr double kMaxFlaggedFraction = 0.01;
// Bridge crossing probabilities below exp(-40) are not sampled.
constexpr double kBridgeExponentCut = 40.0;

using Rng = std::mt19937_64;

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Each path owns a stream keyed by (seed, path index), so results do not
// depend on how paths are split across workers.
Rng path_rng(std::uint64_t seed, std::uint64_t path_index) {
  return Rng(mix64(mix64(seed) + 0x9e3779b97f4a7c15ULL * (path_index + 1)));
}

std::int64_t step_count(const SimConfig& cfg) {
  return static_cast<std::int64_t>(std::ceil(cfg.horizon / cfg.dt - 1e-9));
}

// First step index whose time k*dt is >= t.
std::int64_t step_at_or_after(double t, double dt) {
  return static_cast<std::int64_t>(std::ceil(t / dt - 1e-9));
}

unsigned resolve_workers(unsigned requested) {
  if (requested != 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs fn(i) for i in [0, n) over contiguous blocks, one per worker.
template <class Fn>
void for_each_path(std::size_t n, unsigned workers, Fn&& fn) {
  workers = static_cast<unsigned>(
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, w, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) {
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::vector<double> recorded_times(const SimConfig& cfg) {
  std::vector<double> times;
  const auto whole = static_cast<int>(std::floor(cfg.horizon));
  for (int t = 1; t <= whole; ++t) {
    times.push_back(t);
  }
  times.insert(times.end(), cfg.extra_times.begin(), cfg.extra_times.end());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  return times;
}

struct PassageOutcome {
  std::optional<std::int64_t> step;  // empty: censored
  bool flagged = false;
};

EmpiricalSurvival summarize(const std::vector<PassageOutcome>& outcomes,
                            const SimConfig& cfg) {
  EmpiricalSurvival out;
  out.times = recorded_times(cfg);
  std::vector<std::int64_t> hits;
  hits.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.flagged) {
      ++out.n_flagged;
    } else if (o.step) {
      hits.push_back(*o.step);
    } else {
      ++out.n_censored;
    }
  }
  out.n_paths = outcomes.size() - out.n_flagged;
  if (static_cast<double>(out.n_flagged) >
      kMaxFlaggedFraction * static_cast<double>(outcomes.size())) {
    throw Error(ErrorKind::SimulationFailure,
                std::to_string(out.n_flagged) + " of " +
                    std::to_string(outcomes.size()) +
                    " paths were flagged (non-finite or runaway)");
  }
  std::sort(hits.begin(), hits.end());
  const double n = static_cast<double>(out.n_paths);
  for (double t : out.times) {
    const std::int64_t k = step_at_or_after(t, cfg.dt);
    const auto later = static_cast<std::size_t>(
        hits.end() - std::lower_bound(hits.begin(), hits.end(), k));
    const double p = n > 0 ? static_cast<double>(later + out.n_censored) / n : 0.0;
    out.survival.push_back(p);
    out.std_err.push_back(n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0);
  }
  return out;
}

PassageOutcome hitting_path(const TargetDensity& d, double y,
                            const SimConfig& cfg, std::int64_t n_steps,
                            double clamp, std::uint64_t path_index,
                            bool fold) {
  if (y == 0.0) {
    return {0, false};
  }
  Rng rng = path_rng(cfg.seed, path_index);
  boost::random::normal_distribution<double> normal;
  boost::random::uniform_01<double> uniform;
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  double x = fold ? std::abs(y) : y;
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    const double next = x + d.drift(x) * dt + sqrt_dt * normal(rng);
    if (!std::isfinite(next) || std::abs(next) > clamp) {
      return {std::nullopt, true};
    }
    if (next == 0.0 || (next > 0.0) != (x > 0.0)) {
      return {k, false};
    }
    if (cfg.bridge_correction) {
      const double exponent = 2.0 * x * next / dt;
      if (exponent < kBridgeExponentCut && uniform(rng) < std::exp(-exponent)) {
        return {k, false};
      }
    }
    x = fold ? std::abs(next) : next;
  }
  return {};
}

EmpiricalSurvival run_hitting(const TargetDensity& d, double y,
                              const SimConfig& cfg, bool fold) {
  validate(cfg);
  if (!std::isfinite(y)) {
    throw Error(ErrorKind::InvalidParameter, "start y must be finite");
  }
  const double clamp = 10.0 * std::max(std::abs(y), support_edge(d));
  const std::int64_t n_steps = step_count(cfg);
  std::vector<PassageOutcome> outcomes(cfg.n_paths);
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    outcomes[i] = hitting_path(d, y, cfg, n_steps, clamp, i, fold);
  });
  return summarize(outcomes, cfg);
}

PgfEstimate pgf_from_times(const std::vector<double>& times, double s) {
  const double log_s = std::log(s);
  const double n = static_cast<double>(times.size());
  double sum = 0.0;
  for (double t : times) {
    sum += std::exp(t * log_s);
  }
  const double mean = sum / n;
  double ss = 0.0;
  for (double t : times) {
    const double dev = std::exp(t * log_s) - mean;
    ss += dev * dev;
  }
  PgfEstimate est;
  est.estimate = mean;
  est.std_err = times.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  est.n_paths = times.size();
  return est;
}

void require_all_exited(const std::vector<double>& times) {
  const auto missing = std::count_if(times.begin(), times.end(),
                                     [](double t) { return std::isnan(t); });
  if (missing > 0) {
    throw Error(ErrorKind::IncreaseHorizon,
                std::to_string(missing) +
                    " paths had not exited by the horizon; increase it");
  }
}

}  // namespace

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) {
    throw Error(ErrorKind::InvalidParameter, "dt must be > 0");
  }
  if (!(cfg.horizon >= cfg.dt) || !std::isfinite(cfg.horizon)) {
    throw Error(ErrorKind::InvalidParameter, "horizon must be >= dt");
  }
  if (cfg.n_paths < 1) {
    throw Error(ErrorKind::InvalidParameter, "n_paths must be >= 1");
  }
  for (double t : cfg.extra_times) {
    if (!(t >= 0.0 && t <= cfg.horizon)) {
      throw Error(ErrorKind::InvalidParameter,
                  "recorded times must lie in [0, horizon]");
    }
  }
}

double support_edge(const TargetDensity& d) {
  const auto tail = [&d](double edge) {
    return mass_interval(d, edge, std::numeric_limits<double>::infinity()) +
           mass_interval(d, -std::numeric_limits<double>::infinity(), -edge);
  };
  double hi = 1.0;
  for (int i = 0; tail(hi) >= kSupportMass; ++i) {
    if (i > 60) {
      throw Error(ErrorKind::NumericDomain, "density tail does not vanish");
    }
    hi *= 2.0;
  }
  double lo = 0.0;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) >= kSupportMass ? lo : hi) = mid;
  }
  return hi;
}

StationarySampler::StationarySampler(const TargetDensity& d, std::size_t grid_n) {
  if (grid_n < 2) {
    throw Error(ErrorKind::InvalidParameter, "sampler grid needs >= 2 points");
  }
  edge_ = sim::support_edge(d);
  x_.resize(grid_n);
  cdf_.resize(grid_n);
  pdf_.resize(grid_n);
  const double h = 2.0 * edge_ / static_cast<double>(grid_n - 1);
  const auto f = [&d](double x) { return d.density(x); };
  for (std::size_t i = 0; i < grid_n; ++i) {
    x_[i] = -edge_ + h * static_cast<double>(i);
    pdf_[i] = f(x_[i]);
    if (i > 0) {
      cdf_[i] = cdf_[i - 1] + quad::integrate(f, x_[i - 1], x_[i], 1e-10).value;
    }
  }
  const double total = cdf_.back();
  for (std::size_t i = 0; i < grid_n; ++i) {
    cdf_[i] /= total;
    pdf_[i] /= total;
  }
}

double StationarySampler::quantile(double u) const {
  if (u <= 0.0) {
    return x_.front();
  }
  if (u >= 1.0) {
    return x_.back();
  }
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
  i = std::clamp<std::size_t>(i, 1, cdf_.size() - 1) - 1;
  const double x0 = x_[i];
  const double h = x_[i + 1] - x0;
  const double c0 = cdf_[i];
  const double c1 = cdf_[i + 1];
  const double m0 = pdf_[i] * h;
  const double m1 = pdf_[i + 1] * h;
  if (!(c1 > c0)) {
    return x0 + 0.5 * h;
  }
  // Cubic Hermite CDF on the cell in the local coordinate q in [0, 1].
  const auto hermite = [&](double q) {
    const double q2 = q * q;
    const double q3 = q2 * q;
    return (2 * q3 - 3 * q2 + 1) * c0 + (q3 - 2 * q2 + q) * m0 +
           (-2 * q3 + 3 * q2) * c1 + (q3 - q2) * m1;
  };
  const auto hermite_prime = [&](double q) {
    const double q2 = q * q;
    return (6 * q2 - 6 * q) * c0 + (3 * q2 - 4 * q + 1) * m0 +
           (-6 * q2 + 6 * q) * c1 + (3 * q2 - 2 * q) * m1;
  };
  double lo = 0.0;
  double hi = 1.0;
  double q = (u - c0) / (c1 - c0);
  for (int iter = 0; iter < 60; ++iter) {
    const double r = hermite(q) - u;
    if (r > 0.0) {
      hi = q;
    } else {
      lo = q;
    }
    if (std::abs(r) <= 1e-16 || hi - lo < 1e-15) {
      break;
    }
    const double slope = hermite_prime(q);
    double next = slope > 0.0 ? q - r / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) {
      next = 0.5 * (lo + hi);
    }
    q = next;
  }
  return x0 + q * h;
}

EmpiricalSurvival simulate_hitting(const TargetDensity& d, double y,
                                   const SimConfig& cfg) {
  return run_hitting(d, y, cfg, false);
}

EmpiricalSurvival simulate_hitting_reflected(const TargetDensity& d, double y,
                                             const SimConfig& cfg) {
  return run_hitting(d, y, cfg, true);
}

PgfEstimate simulate_bm_exit_pgf(double s, double x0, const SimConfig& cfg) {
  validate(cfg);
  if (!(std::abs(x0) < 1.0)) {
    throw Error(ErrorKind::OutOfDomain, "Brownian exit start needs |x0| < 1");
  }
  if (!(s > 1.0) || !(2.0 * std::log(s) < std::pow(std::numbers::pi / 2, 2))) {
    throw Error(ErrorKind::CosineDomain,
                "Brownian exit pgf needs 1 < s < exp(pi^2 / 8)");
  }
  const std::int64_t n_steps = step_count(cfg);
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> times(cfg.n_paths, std::numeric_limits<double>::quiet_NaN());
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Rng rng = path_rng(cfg.seed, i);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;
    double x = x0;
    for (std::int64_t k = 1; k <= n_steps; ++k) {
      const double next = x + sqrt_dt * normal(rng);
      if (next >= 1.0 || next <= -1.0) {
        times[i] = static_cast<double>(k) * dt;
        return;
      }
      if (cfg.bridge_correction) {
        const double up = 2.0 * (1.0 - x) * (1.0 - next) / dt;
        const double down = 2.0 * (1.0 + x) * (1.0 + next) / dt;
        if (up < kBridgeExponentCut || down < kBridgeExponentCut) {
          const double p = (up < kBridgeExponentCut ? std::exp(-up) : 0.0) +
                           (down < kBridgeExponentCut ? std::exp(-down) : 0.0);
          if (uniform(rng) < p) {
            times[i] = static_cast<double>(k) * dt;
            return;
          }
        }
      }
      x = next;
    }
  });
  require_all_exited(times);
  return pgf_from_times(times, s);
}

PgfEstimate simulate_drift_passage_pgf(double s, double a, double b,
                                       const SimConfig& cfg) {
  validate(cfg);
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::OutOfDomain, "passage distance must be >= 0");
  }
  if (!(b > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "drift b must be > 0");
  }
  if (!(s > 1.0) || !(2.0 * std::log(s) < b * b)) {
    throw Error(ErrorKind::AlphaComplex, "drift passage pgf needs 1 < s < exp(b^2/2)");
  }
  const std::int64_t n_steps = step_count(cfg);
  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> times(cfg.n_paths, std::numeric_limits<double>::quiet_NaN());
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    if (a == 0.0) {
      times[i] = 0.0;
      return;
    }
    Rng rng = path_rng(cfg.seed, i);
    boost::random::normal_distribution<double> normal;
    boost::random::uniform_01<double> uniform;
    double x = a;
    for (std::int64_t k = 1; k <= n_steps; ++k) {
      const double next = x - b * dt + sqrt_dt * normal(rng);
      if (next <= 0.0) {
        times[i] = static_cast<double>(k) * dt;
        return;
      }
      if (cfg.bridge_correction) {
        // Exact for constant drift: the bridge law does not see the drift.
        const double exponent = 2.0 * x * next / dt;
        if (exponent < kBridgeExponentCut && uniform(rng) < std::exp(-exponent)) {
          times[i] = static_cast<double>(k) * dt;
          return;
        }
      }
      x = next;
    }
  });
  require_all_exited(times);
  return pgf_from_times(times, s);
}

AnticoupledPath anticoupled_path(const TargetDensity& d, double y,
                                 double partner_start, const SimConfig& cfg,
                                 std::uint64_t path_index, double clamp) {
  AnticoupledPath out;
  if (y == partner_start) {
    out.meet_step = 0;
    return out;
  }
  Rng rng = path_rng(cfg.seed, path_index);
  // The first uniform of the stream is reserved for the partner start.
  boost::random::uniform_01<double> uniform;
  (void)uniform(rng);
  boost::random::normal_distribution<double> normal;

  const double dt = cfg.dt;
  const double sqrt_dt = std::sqrt(dt);
  const double tol = 3.0 * sqrt_dt;
  const std::int64_t n_steps = step_count(cfg);
  const double initial_gap = std::abs(y) - std::abs(partner_start);
  const int order = initial_gap > 0.0 ? 1 : (initial_gap < 0.0 ? -1 : 0);

  double x = y;
  double partner = partner_start;
  for (std::int64_t k = 1; k <= n_steps; ++k) {
    const double dw = sqrt_dt * normal(rng);
    const double x_next = x + d.drift(x) * dt + dw;
    const double p_next = partner + d.drift(partner) * dt - dw;
    if (!std::isfinite(x_next) || !std::isfinite(p_next) ||
        std::abs(x_next) > clamp || std::abs(p_next) > clamp) {
      out.flagged = true;
      return out;
    }
    const double diff = x - partner;
    const double diff_next = x_next - p_next;
    bool met = diff_next == 0.0 || (diff_next > 0.0) != (diff > 0.0);
    if (!met && cfg.bridge_correction) {
      // The difference diffuses with variance 4 dt per step.
      const double exponent = diff * diff_next / (2.0 * dt);
      met = exponent < kBridgeExponentCut && uniform(rng) < std::exp(-exponent);
    }
    if (met) {
      out.meet_step = k;
      return out;
    }
    const double gap = std::abs(x_next) - std::abs(p_next);
    double breach = 0.0;
    if (order > 0) {
      breach = -gap;
    } else if (order < 0) {
      breach = gap;
    } else {
      breach = std::abs(gap);
    }
    ++out.checked_steps;
    if (breach > tol) {
      ++out.ordering_violations;
      out.max_violation_magnitude = std::max(out.max_violation_magnitude, breach);
    }
    x = x_next;
    partner = p_next;
  }
  return out;
}

CouplingRunStats simulate_anticoupled_pair(const TargetDensity& d, double y,
                                           const SimConfig& cfg) {
  validate(cfg);
  if (!std::isfinite(y)) {
    throw Error(ErrorKind::InvalidParameter, "start y must be finite");
  }
  const StationarySampler sampler(d);
  const double clamp = 10.0 * std::max(std::abs(y), sampler.support_edge());

  CouplingRunStats stats;
  stats.partner_starts.resize(cfg.n_paths);
  std::vector<AnticoupledPath> paths(cfg.n_paths);
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Rng rng = path_rng(cfg.seed, i);
    boost::random::uniform_01<double> uniform;
    const double start = sampler.quantile(uniform(rng));
    stats.partner_starts[i] = start;
    paths[i] = anticoupled_path(d, y, start, cfg, i, clamp);
  });

  std::vector<PassageOutcome> outcomes(cfg.n_paths);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    outcomes[i] = {paths[i].meet_step, paths[i].flagged};
    stats.ordering_violations += paths[i].ordering_violations;
    stats.checked_steps += paths[i].checked_steps;
    stats.max_violation_magnitude =
        std::max(stats.max_violation_magnitude, paths[i].max_violation_magnitude);
  }
  stats.coupling_times = summarize(outcomes, cfg);
  return stats;
}

std::vector<double> pathwise_hitting_bound(const TargetDensity& d, double y,
                                           double s,
                                           std::span<const double> partner_starts,
                                           std::span<const double> times) {
  if (partner_starts.empty()) {
    throw Error(ErrorKind::InvalidParameter, "no partner starts given");
  }
  const PgfComponents comp = components(s, d.b());
  std::vector<double> coef;
  coef.reserve(partner_starts.size());
  const double y_abs = std::abs(y);
  for (double z : partner_starts) {
    coef.push_back(bound_B(std::max({1.0, y_abs, std::abs(z)}), comp));
  }
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    const double decay = std::pow(s, -t);
    double sum = 0.0;
    for (double c : coef) {
      sum += std::min(1.0, c * decay);
    }
    out.push_back(sum / static_cast<double>(coef.size()));
  }
  return out;
}

DominationCheck check_domination(const EmpiricalSurvival& emp,
                                 std::span<const double> bound,
                                 double n_sigma) {
  if (bound.size() != emp.times.size()) {
    throw Error(ErrorKind::InvalidParameter,
                "bound curve and survival curve differ in length");
  }
  DominationCheck check;
  check.times = emp.times;
  check.empirical = emp.survival;
  check.std_err = emp.std_err;
  check.bound.assign(bound.begin(), bound.end());
  for (std::size_t i = 0; i < emp.times.size(); ++i) {
    const bool ok = emp.survival[i] - n_sigma * emp.std_err[i] <= bound[i];
    check.pass.push_back(ok);
    if (!ok && check.all_pass) {
      check.all_pass = false;
      check.first_failure = emp.times[i];
    }
  }
  return check;
}

}  // namespace lbound::sim
