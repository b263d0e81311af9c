#pragma once

#include <functional>

namespace lbound::quad {

struct QuadResult {
  double value = 0.0;
  double abs_err = 0.0;
};

using Integrand = std::function<double(double)>;

// Adaptive Gauss-Kronrod (15/31) over the finite interval [lo, hi].
// A non-finite integrand sample raises ErrorKind::NumericDomain.
QuadResult integrate(const Integrand& f, double lo, double hi,
                     double rel_tol = 1e-10);

// Integral over [lo, +inf) for a tail-decaying, non-negative integrand.
//
// Panels of doubling width are integrated until the integrand at a panel's
// right edge drops below `cutoff` times the largest value seen so far at
// the panel edges (the truncation point). Raises NumericDomain when that
// does not happen within the panel budget.
QuadResult integrate_to_infinity(const Integrand& f, double lo,
                                 double rel_tol = 1e-10,
                                 double cutoff = 1e-18,
                                 double first_width = 1.0);

}  // namespace lbound::quad
