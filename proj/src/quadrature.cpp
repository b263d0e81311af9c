#include "langevin_bounds/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "langevin_bounds/error.hpp"

namespace lbound::quad {

namespace {

constexpr unsigned kMaxDepth = 20;
constexpr int kMaxPanels = 128;

double checked(const Integrand& f, double x) {
  const double v = f(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::NumericDomain,
                "non-finite integrand value at x = " + std::to_string(x));
  }
  return v;
}

}  // namespace

QuadResult integrate(const Integrand& f, double lo, double hi,
                     double rel_tol) {
  if (!(lo <= hi)) {
    throw Error(ErrorKind::InvalidParameter,
                "integration bounds must satisfy lo <= hi");
  }
  if (lo == hi) {
    return {};
  }
  auto g = [&f](double x) { return checked(f, x); };
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          g, lo, hi, kMaxDepth, rel_tol, &err);
  return {value, err};
}

QuadResult integrate_to_infinity(const Integrand& f, double lo,
                                 double rel_tol, double cutoff,
                                 double first_width) {
  QuadResult total;
  double scale = std::abs(checked(f, lo));
  if (scale == 0.0) {
    return total;
  }
  double left = lo;
  double width = first_width;
  for (int panel = 0; panel < kMaxPanels; ++panel) {
    const double right = left + width;
    const QuadResult piece = integrate(f, left, right, rel_tol);
    total.value += piece.value;
    total.abs_err += piece.abs_err;
    const double edge = std::abs(checked(f, right));
    scale = std::max(scale, edge);
    if (edge <= cutoff * scale) {
      return total;
    }
    left = right;
    width *= 2.0;
  }
  throw Error(ErrorKind::NumericDomain,
              "integrand did not decay below the truncation threshold");
}

}  // namespace lbound::quad
