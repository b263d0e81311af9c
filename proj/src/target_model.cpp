#include "langevin_bounds/target_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

// Boost 1.74's pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "langevin_bounds/error.hpp"
#include "langevin_bounds/quadrature.hpp"

namespace lbound {

namespace {

constexpr double kMassRelTol = 1e-10;
constexpr double kNormalizerIncrement = 1e-14;
constexpr double kFiniteDiffStep = 1e-6;

double normalizer_by_quadrature(const ScalarFn& log_unnorm) {
  const auto f = [&log_unnorm](double x) { return std::exp(log_unnorm(x)); };
  double half = 1.0;
  double total = quad::integrate(f, -half, half, 1e-12).value;
  for (int i = 0; i < 64; ++i) {
    const double increment = quad::integrate(f, -2.0 * half, -half, 1e-12).value +
                             quad::integrate(f, half, 2.0 * half, 1e-12).value;
    total += increment;
    half *= 2.0;
    if (increment < kNormalizerIncrement * total) {
      if (!(total > 0.0) || !std::isfinite(total)) {
        break;
      }
      return total;
    }
  }
  throw Error(ErrorKind::NumericDomain,
              "custom density is not normalizable");
}

std::vector<std::pair<double, double>> read_two_column_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open density samples: " + path.string());
  }
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0.0;
    double lp = 0.0;
    if (!(fields >> x >> lp)) {
      if (rows.empty()) {
        continue;  // header
      }
      throw Error(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) +
                                     ": expected two numeric columns");
    }
    if (!std::isfinite(x) || !std::isfinite(lp)) {
      throw Error(ErrorKind::NumericDomain,
                  path.string() + ":" + std::to_string(line_no) +
                      ": non-finite sample");
    }
    rows.emplace_back(x, lp);
  }
  return rows;
}

}  // namespace

double TargetDensity::density(double x) const {
  return std::exp(state_->log_unnorm(x)) / state_->z_const;
}

std::string TargetDensity::describe() const {
  std::ostringstream os;
  if (state_->kind == DensityKind::ExponentialPower) {
    os << "exp_power(beta=" << *state_->beta << ")";
  } else {
    os << "custom(b=" << state_->b << ")";
  }
  return os.str();
}

TargetDensity make_exponential_power(double beta) {
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw Error(ErrorKind::A1Violation,
                "exponential-power density requires beta > 1, got " +
                    std::to_string(beta));
  }
  auto state = std::make_shared<TargetDensity::State>();
  state->kind = DensityKind::ExponentialPower;
  state->beta = beta;
  state->b = beta;
  state->z_const = 2.0 * std::tgamma(1.0 + 1.0 / beta);
  state->log_unnorm = [beta](double x) { return -std::pow(std::abs(x), beta); };
  state->grad_log = [beta](double x) {
    if (x == 0.0) {
      return 0.0;
    }
    const double mag = beta * std::pow(std::abs(x), beta - 1.0);
    return x > 0.0 ? -mag : mag;
  };
  return TargetDensity(std::move(state));
}

TargetDensity make_custom_density(ScalarFn log_density_unnorm,
                                  ScalarFn grad_log_density, double b) {
  if (!(b > 0.0) || !std::isfinite(b)) {
    throw Error(ErrorKind::InvalidParameter, "drift floor b must be > 0");
  }
  if (!log_density_unnorm || !grad_log_density) {
    throw Error(ErrorKind::InvalidParameter, "custom density needs both functions");
  }
  // Anchor the log density at zero for x = 0 so exp() stays in range.
  const double shift = log_density_unnorm(0.0);
  if (!std::isfinite(shift)) {
    throw Error(ErrorKind::NumericDomain, "log density at 0 is not finite");
  }
  auto state = std::make_shared<TargetDensity::State>();
  state->kind = DensityKind::CustomLogDensity;
  state->b = b;
  state->log_unnorm = [f = std::move(log_density_unnorm), shift](double x) {
    return f(x) - shift;
  };
  state->grad_log = std::move(grad_log_density);
  state->z_const = normalizer_by_quadrature(state->log_unnorm);
  return TargetDensity(std::move(state));
}

TargetDensity load_custom_density_csv(const std::filesystem::path& path,
                                      double b) {
  auto rows = read_two_column_csv(path);
  std::sort(rows.begin(), rows.end());
  const bool half_line = !rows.empty() && rows.front().first >= 0.0;
  if (half_line) {
    std::vector<std::pair<double, double>> mirrored;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      if (it->first > 0.0) {
        mirrored.emplace_back(-it->first, it->second);
      }
    }
    mirrored.insert(mirrored.end(), rows.begin(), rows.end());
    rows = std::move(mirrored);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [x, lp] : rows) {
    if (!xs.empty() && x <= xs.back()) {
      throw Error(ErrorKind::Io, "density samples must have distinct x values");
    }
    xs.push_back(x);
    ys.push_back(lp);
  }
  if (xs.size() < 4) {
    throw Error(ErrorKind::Io, "need at least four density samples");
  }
  const double x_lo = xs.front();
  const double x_hi = xs.back();
  const double y_lo = ys.front();
  const double y_hi = ys.back();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(xs), std::move(ys));
  const double slope_lo = spline->prime(x_lo);
  const double slope_hi = spline->prime(x_hi);

  auto log_unnorm = [spline, x_lo, x_hi, y_lo, y_hi, slope_lo,
                     slope_hi](double x) {
    if (x < x_lo) {
      return y_lo + slope_lo * (x - x_lo);
    }
    if (x > x_hi) {
      return y_hi + slope_hi * (x - x_hi);
    }
    return (*spline)(x);
  };
  auto grad_log = [log_unnorm](double x) {
    const double h = kFiniteDiffStep * std::max(1.0, std::abs(x));
    return (log_unnorm(x + h) - log_unnorm(x - h)) / (2.0 * h);
  };
  return make_custom_density(std::move(log_unnorm), std::move(grad_log), b);
}

CheckReport check_a1(const TargetDensity& d, double grid_max, int grid_n) {
  if (!(grid_max >= 1.0) || grid_n < 2) {
    throw Error(ErrorKind::InvalidParameter,
                "check_a1 needs grid_max >= 1 and grid_n >= 2");
  }
  CheckReport report;
  report.symmetry.name = "symmetry";
  report.sign.name = "sign";
  report.floor.name = "floor";
  if (d.kind() == DensityKind::ExponentialPower) {
    report.analytic = true;
    return report;
  }

  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(grid_n) + 1);
  for (int i = 0; i < grid_n; ++i) {
    grid.push_back(grid_max * static_cast<double>(i) / (grid_n - 1));
  }
  grid.push_back(1.0);

  const auto record = [](ConditionResult& c, double x, double margin) {
    if (margin < c.worst_margin) {
      c.worst_margin = margin;
      c.worst_x = x;
      c.pass = false;
    }
  };

  const double floor_tol = 1e-9 * std::max(1.0, d.b());
  for (double x : grid) {
    const double lp = d.log_density_unnorm(x);
    const double lm = d.log_density_unnorm(-x);
    const double sym_tol = 1e-9 * std::max(1.0, std::abs(lp));
    record(report.symmetry, x, sym_tol - std::abs(lp - lm));

    const double neg_grad = -d.grad_log_density(x);
    record(report.sign, x, neg_grad + 1e-12);
    if (x >= 1.0) {
      record(report.floor, x, neg_grad - d.b() + floor_tol);
    }
  }
  return report;
}

double mass_interval(const TargetDensity& d, double lo, double hi) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi) {
    throw Error(ErrorKind::InvalidParameter, "mass_interval needs lo <= hi");
  }
  if (lo == hi) {
    return 0.0;
  }
  const auto f = [&d](double x) { return std::exp(d.log_density_unnorm(x)); };
  const auto f_mirror = [&d](double x) {
    return std::exp(d.log_density_unnorm(-x));
  };
  constexpr double inf = std::numeric_limits<double>::infinity();

  double raw = 0.0;
  if (lo == -inf && hi == inf) {
    raw = quad::integrate_to_infinity(f, 0.0, kMassRelTol).value +
          quad::integrate_to_infinity(f_mirror, 0.0, kMassRelTol).value;
  } else if (hi == inf) {
    raw = quad::integrate_to_infinity(f, lo, kMassRelTol).value;
  } else if (lo == -inf) {
    raw = quad::integrate_to_infinity(f_mirror, -hi, kMassRelTol).value;
  } else {
    raw = quad::integrate(f, lo, hi, kMassRelTol).value;
  }
  return std::clamp(raw / d.z_const(), 0.0, 1.0);
}

}  // namespace lbound
