#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "langevin_bounds/error.hpp"
#include "langevin_bounds/planner.hpp"
#include "oracle_values.hpp"

using namespace lbound;

namespace {

PlanRequest request(double beta, double y, double eps, BoundMode mode,
                    std::optional<double> s) {
  return PlanRequest{.density = make_exponential_power(beta),
                     .y = y,
                     .epsilon = eps,
                     .mode = mode,
                     .fixed_s = s};
}

// Bisection on the capped bound curve; independent of the closed form.
double bisect_t(const PlanRequest& req, double s) {
  double lo = 0.0, hi = 1.0;
  while (bound_at(req.density, req.y, s, hi, req.mode) > req.epsilon) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    double mid = 0.5 * (lo + hi);
    if (bound_at(req.density, req.y, s, mid, req.mode) > req.epsilon)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("minimal t at the worked examples") {
  for (auto mode : {BoundMode::HittingTail, BoundMode::TotalVariation}) {
    auto a = plan(request(2.0, 2.0, 0.01, mode, 1.4));
    CHECK(a.t_min_int == 20);
    CHECK(a.s_star == 1.4);
    CHECK(a.bound_at_t_min_int < 0.01);
    CHECK(bound_at(make_exponential_power(2.0), 2.0, 1.4, 19.0, mode) > 0.01);

    auto b = plan(request(1.1, 10.0, 0.01, mode, 1.3));
    CHECK(b.t_min_int == 34);
    CHECK(b.bound_at_t_min_int < 0.01);
    CHECK(bound_at(make_exponential_power(1.1), 10.0, 1.3, 33.0, mode) >= 0.01);
  }
  auto h = plan(request(2.0, 2.0, 0.01, BoundMode::HittingTail, 1.4));
  CHECK(h.bound_at_t_min_int == doctest::Approx(oracle::kHit_b2_t20).epsilon(1e-12));
  auto tv = plan(request(1.1, 10.0, 0.01, BoundMode::TotalVariation, 1.3));
  CHECK(tv.bound_at_t_min_int == doctest::Approx(oracle::kTv_b11_t34).epsilon(1e-10));
}

TEST_CASE("bound at t_real equals epsilon") {
  for (auto mode : {BoundMode::HittingTail, BoundMode::TotalVariation}) {
    auto req = request(2.0, 2.0, 0.01, mode, 1.4);
    auto r = plan(req);
    CHECK(std::abs(bound_at(req.density, 2.0, 1.4, r.t_min_real, mode) - 0.01) <
          1e-9);
  }
}

TEST_CASE("large epsilon still gives t_real >= 0") {
  auto req = request(2.0, 2.0, 1.0, BoundMode::HittingTail, 1.4);
  auto m = minimal_t(req, 1.4);
  CHECK(m.t_real > 0.0);
  CHECK(std::isfinite(m.t_real));
  CHECK(m.t_int == static_cast<std::int64_t>(std::ceil(m.t_real)));
}

TEST_CASE("closed form agrees with bisection on random tuples") {
  std::mt19937_64 rng(20261017);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    double beta = 1.1 + 2.9 * u(rng);
    double y = 1.0 + 9.0 * u(rng);
    double eps = std::pow(10.0, -1.0 - 4.0 * u(rng));
    auto mode = (i % 2 == 0) ? BoundMode::HittingTail : BoundMode::TotalVariation;
    double s_hi = feasible_s_range(beta).s_hi;
    double s = 1.0 + (0.05 + 0.9 * u(rng)) * (s_hi - 1.0);
    auto req = request(beta, y, eps, mode, s);
    auto m = minimal_t(req, s);
    CHECK(std::abs(m.t_real - bisect_t(req, s)) < 1e-9);
  }
}

TEST_CASE("optimized s is never worse than a probed s") {
  for (auto mode : {BoundMode::HittingTail, BoundMode::TotalVariation}) {
    auto req = request(2.0, 2.0, 0.01, mode, std::nullopt);
    auto best = optimize_s(req);
    CHECK(best.t_min_int <= 20);
    CHECK(best.feasible_range.contains(best.s_star));
    CHECK(best.t_min_real <= minimal_t(req, 1.4).t_real + 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
    double s_hi = best.feasible_range.s_hi;
    for (int i = 0; i < 32; ++i) {
      double s = 1.0 + u(rng) * (s_hi - 1.0);
      CHECK(best.t_min_real <= minimal_t(req, s).t_real + 1e-9);
    }
  }
  auto req = request(1.1, 10.0, 0.01, BoundMode::HittingTail, std::nullopt);
  CHECK(optimize_s(req).t_min_int <= 34);
}

TEST_CASE("minimal t is monotone in epsilon and y") {
  std::vector<double> eps_grid{0.5, 0.1, 0.05, 0.01, 0.001, 1e-6};
  auto req = request(2.0, 2.0, 0.01, BoundMode::HittingTail, 1.4);
  auto rows = sweep(req, SweepAxis::Epsilon, eps_grid);
  REQUIRE(rows.size() == eps_grid.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].t_int >= rows[i - 1].t_int);
    CHECK(rows[i].t_real > rows[i - 1].t_real);
  }

  std::vector<double> y_grid{1, 2, 4, 8};
  for (auto mode : {BoundMode::HittingTail, BoundMode::TotalVariation}) {
    auto yr = sweep(request(2.0, 2.0, 0.01, mode, std::nullopt), SweepAxis::Y, y_grid);
    for (std::size_t i = 1; i < yr.size(); ++i) {
      CHECK(yr[i].status == "ok");
      CHECK(yr[i].t_real >= yr[i - 1].t_real);
    }
  }
}

TEST_CASE("sweep rows") {
  std::vector<double> g{2.0};
  auto rows = sweep(request(2.0, 2.0, 0.01, BoundMode::HittingTail, 1.4), SweepAxis::Y, g);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].t_int == 20);
  CHECK(rows[0].s_star == 1.4);
  CHECK(rows[0].axis == SweepAxis::Y);

  std::vector<double> betas{0.5, 1.1, 2.0};
  auto br = sweep(request(2.0, 10.0, 0.01, BoundMode::HittingTail, std::nullopt),
                  SweepAxis::Beta, betas);
  REQUIRE(br.size() == 3);
  CHECK(br[0].status.rfind("error:a1-violation", 0) == 0);
  CHECK(br[1].status == "ok");
  CHECK(br[2].status == "ok");
  CHECK(br[2].t_real < br[1].t_real);

  std::vector<double> ts{0.0, 10.0, 20.0, 30.0};
  auto tr = sweep(request(2.0, 2.0, 0.01, BoundMode::HittingTail, 1.4), SweepAxis::T, ts);
  CHECK(tr[0].bound == 1.0);
  CHECK(tr[2].bound == doctest::Approx(oracle::kHit_b2_t20).epsilon(1e-12));
  CHECK(tr[3].bound < tr[2].bound);

  std::vector<double> bad_y{0.5};
  auto er = sweep(request(2.0, 2.0, 0.01, BoundMode::TotalVariation, 1.4), SweepAxis::Y, bad_y);
  CHECK(er[0].status.rfind("error:", 0) == 0);
}

TEST_CASE("planner is deterministic") {
  auto req = request(1.7, 3.0, 0.003, BoundMode::TotalVariation, std::nullopt);
  auto a = optimize_s(req);
  auto b = optimize_s(req);
  CHECK(a.s_star == b.s_star);
  CHECK(a.t_min_real == b.t_min_real);
  CHECK(a.bound_at_t_min_int == b.bound_at_t_min_int);
}

TEST_CASE("planner request validation") {
  auto kind_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  CHECK(kind_of([] { plan(request(2.0, 2.0, 0.0, BoundMode::HittingTail, 1.4)); }) ==
        ErrorKind::InvalidParameter);
  CHECK(kind_of([] { plan(request(2.0, 2.0, 1.5, BoundMode::HittingTail, 1.4)); }) ==
        ErrorKind::InvalidParameter);
  CHECK(kind_of([] { plan(request(2.0, 2.0, 0.01, BoundMode::HittingTail, 1.7)); }) ==
        ErrorKind::A2Ratio);
  CHECK(kind_of([] { plan(request(2.0, 0.5, 0.01, BoundMode::TotalVariation, 1.4)); }) ==
        ErrorKind::InvalidParameter);
}
