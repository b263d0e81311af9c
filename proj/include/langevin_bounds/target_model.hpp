#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace lbound {

enum class DensityKind { ExponentialPower, CustomLogDensity };

using ScalarFn = std::function<double(double)>;

/// A symmetric target density on the real line, carried as an unnormalized
/// log density, its gradient, the declared drift floor b, and the
/// normalizing constant.
///
/// Immutable after construction; copies share state and are safe to use
/// from any number of threads.
class TargetDensity {
 public:
  DensityKind kind() const noexcept { return state_->kind; }

  /// Exponent of the exponential-power family; empty for custom densities.
  std::optional<double> beta() const noexcept { return state_->beta; }

  double b() const noexcept { return state_->b; }
  double z_const() const noexcept { return state_->z_const; }

  double log_density_unnorm(double x) const { return state_->log_unnorm(x); }
  double grad_log_density(double x) const { return state_->grad_log(x); }

  /// Langevin drift, half the gradient of the log density.
  double drift(double x) const { return 0.5 * state_->grad_log(x); }

  /// Normalized density value.
  double density(double x) const;

  std::string describe() const;

 private:
  struct State {
    DensityKind kind;
    std::optional<double> beta;
    double b;
    double z_const;
    ScalarFn log_unnorm;
    ScalarFn grad_log;
  };

  explicit TargetDensity(std::shared_ptr<const State> state)
      : state_(std::move(state)) {}

  std::shared_ptr<const State> state_;

  friend TargetDensity make_exponential_power(double beta);
  friend TargetDensity make_custom_density(ScalarFn, ScalarFn, double);
};

/// pi(x) proportional to exp(-|x|^beta). Requires beta > 1; then b = beta and
/// Z = 2 Gamma(1 + 1/beta).
TargetDensity make_exponential_power(double beta);

/// A user-supplied symmetric density with a declared drift floor `b`. The
/// normalizer is computed by quadrature. Nothing about symmetry or the drift
/// floor is verified here; use check_a1.
TargetDensity make_custom_density(ScalarFn log_density_unnorm,
                                  ScalarFn grad_log_density, double b);

/// Loads a two-column CSV of (x, log unnormalized density). The log density
/// is interpolated with a monotone cubic (PCHIP) through the samples and the
/// drift is a central finite difference of the interpolant. If every sample
/// has x >= 0 the density is mirrored to negative x. Outside the sampled
/// range the log density is extended linearly with the end slope.
TargetDensity load_custom_density_csv(const std::filesystem::path& path,
                                      double b);

struct ConditionResult {
  std::string name;
  bool pass = true;
  // Point of largest violation, when the condition fails.
  std::optional<double> worst_x;
  // Most negative margin found; 0 when passing.
  double worst_margin = 0.0;
};

struct CheckReport {
  bool analytic = false;
  ConditionResult symmetry;
  ConditionResult sign;
  ConditionResult floor;

  bool all_pass() const noexcept {
    return symmetry.pass && sign.pass && floor.pass;
  }
};

/// Checks symmetry, the sign condition on [0, inf) and the drift floor on
/// [1, inf) over a uniform grid of [0, grid_max] plus x = 1. The
/// exponential-power family passes analytically.
CheckReport check_a1(const TargetDensity& d, double grid_max = 50.0,
                     int grid_n = 5001);

/// Probability mass of [lo, hi]. Either limit may be infinite.
double mass_interval(const TargetDensity& d, double lo, double hi);

}  // namespace lbound
